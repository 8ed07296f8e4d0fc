//! Rate-limited render-API client with bounded retries.

use std::thread::sleep;
use std::time::{Duration, Instant};

use anyhow::{bail, Result};

/// Paces requests at a fixed rate: each acquire returns no earlier than
/// `1/rate` after the previous one.
pub struct RateLimiter {
    interval: Duration,
    next_slot: Option<Instant>,
}

impl RateLimiter {
    pub fn new(rate: f64) -> Result<Self> {
        if !rate.is_finite() || rate <= 0.0 {
            bail!("rate must be positive, got {rate}");
        }
        Ok(RateLimiter {
            interval: Duration::from_secs_f64(1.0 / rate),
            next_slot: None,
        })
    }

    pub fn acquire(&mut self) {
        let now = Instant::now();
        match self.next_slot {
            None => self.next_slot = Some(now + self.interval),
            Some(slot) => {
                if slot > now {
                    sleep(slot - now);
                }
                self.next_slot = Some(self.next_slot.unwrap().max(now) + self.interval);
            }
        }
    }
}

/// Blocking fetch client. Every attempt (including retries) goes through
/// the rate limiter; transient failures are retried up to three times with
/// exponential backoff, 404 and other client errors fail immediately.
pub struct Fetcher {
    agent: ureq::Agent,
    endpoint: String,
    limiter: RateLimiter,
    max_retries: u32,
    backoff_base: Duration,
}

impl Fetcher {
    pub fn new(endpoint: &str, rate: f64) -> Result<Self> {
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_secs(30)))
            .build()
            .new_agent();
        Ok(Fetcher {
            agent,
            endpoint: endpoint.to_string(),
            limiter: RateLimiter::new(rate)?,
            max_retries: 3,
            backoff_base: Duration::from_millis(100),
        })
    }

    fn url_for(&self, title: &str) -> String {
        if self.endpoint.contains("{title}") {
            self.endpoint.replace("{title}", title)
        } else {
            format!("{}/{}", self.endpoint.trim_end_matches('/'), title)
        }
    }

    pub fn fetch(&mut self, title: &str) -> Result<String> {
        let url = self.url_for(title);
        let mut attempt = 0u32;
        loop {
            self.limiter.acquire();
            match self.agent.get(&url).call() {
                Ok(mut response) => {
                    return Ok(response.body_mut().read_to_string()?);
                }
                Err(ureq::Error::StatusCode(code)) if transient(code) => {
                    if attempt >= self.max_retries {
                        bail!("{url}: http status {code} after {attempt} retries");
                    }
                    sleep(self.backoff_base * 2u32.pow(attempt));
                    attempt += 1;
                }
                Err(ureq::Error::StatusCode(code)) => {
                    bail!("{url}: http status {code}");
                }
                Err(err) => {
                    if attempt >= self.max_retries {
                        bail!("{url}: {err} after {attempt} retries");
                    }
                    sleep(self.backoff_base * 2u32.pow(attempt));
                    attempt += 1;
                }
            }
        }
    }
}

fn transient(code: u16) -> bool {
    code == 429 || (500..=599).contains(&code)
}
