//! Corpus reporting quantities: per-language article/paragraph/link counts,
//! mean and median links per article, enrichment percentages, and Fleiss'
//! kappa for inter-annotator agreement.

use std::io::BufRead;

use crate::error::{Error, Result};
use crate::model::NifDocument;

/// Aggregate counts over a corpus partition.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusSummary {
    pub articles: u64,
    pub paragraphs: u64,
    pub links: u64,
    /// links / articles; 0 for an empty corpus.
    pub mean_links_per_article: f64,
    /// Exact median of the per-article link-count multiset; the mean of the
    /// two central values for an even count; 0 for an empty corpus.
    pub median_links_per_article: f64,
}

/// Single-pass accumulator. Partial accumulators may be built in parallel
/// and merged; merging is associative.
#[derive(Debug, Clone, Default)]
pub struct StatsAccumulator {
    articles: u64,
    paragraphs: u64,
    links: u64,
    per_article_links: Vec<u64>,
}

impl StatsAccumulator {
    pub fn new() -> Self {
        StatsAccumulator::default()
    }

    pub fn observe(&mut self, doc: &NifDocument) {
        let links = doc.link_count() as u64;
        self.articles += 1;
        self.paragraphs += doc.paragraph_count() as u64;
        self.links += links;
        self.per_article_links.push(links);
    }

    pub fn merge(mut self, other: StatsAccumulator) -> StatsAccumulator {
        self.articles += other.articles;
        self.paragraphs += other.paragraphs;
        self.links += other.links;
        self.per_article_links.extend(other.per_article_links);
        self
    }

    pub fn finish(mut self) -> CorpusSummary {
        let mean = if self.articles == 0 {
            0.0
        } else {
            self.links as f64 / self.articles as f64
        };
        self.per_article_links.sort_unstable();
        let median = median_of_sorted(&self.per_article_links);
        CorpusSummary {
            articles: self.articles,
            paragraphs: self.paragraphs,
            links: self.links,
            mean_links_per_article: mean,
            median_links_per_article: median,
        }
    }
}

fn median_of_sorted(sorted: &[u64]) -> f64 {
    let n = sorted.len();
    if n == 0 {
        return 0.0;
    }
    if n % 2 == 1 {
        sorted[n / 2] as f64
    } else {
        (sorted[n / 2 - 1] as f64 + sorted[n / 2] as f64) / 2.0
    }
}

/// Summarize a stream of documents in one pass.
pub fn summarize<'a>(docs: impl IntoIterator<Item = &'a NifDocument>) -> CorpusSummary {
    let mut acc = StatsAccumulator::new();
    for doc in docs {
        acc.observe(doc);
    }
    acc.finish()
}

/// Percentage of new annotations: `100 × (after − before) / before`, rounded
/// half-up to two decimals; 0 when `before` is zero. `after < before` is an
/// error.
pub fn percent_new(before: u64, after: u64) -> Result<f64> {
    if after < before {
        return Err(Error::CountRegression { before, after });
    }
    if before == 0 {
        return Ok(0.0);
    }
    let raw = 100.0 * (after - before) as f64 / before as f64;
    Ok(round2(raw))
}

/// Round half-up to two decimals (for non-negative inputs `f64::round` is
/// half-up).
pub fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

/// Item-by-category judgment counts with a fixed number of raters per item.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JudgmentMatrix {
    rows: Vec<Vec<u64>>,
    raters_per_item: u64,
}

impl JudgmentMatrix {
    /// Validate and build: at least 2 items, at least 2 categories, every
    /// row summing to the same rater count n >= 2.
    pub fn new(rows: Vec<Vec<u64>>) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::InvalidMatrix("need at least 2 items".into()));
        }
        let categories = rows[0].len();
        if categories < 2 {
            return Err(Error::InvalidMatrix("need at least 2 categories".into()));
        }
        if rows.iter().any(|r| r.len() != categories) {
            return Err(Error::InvalidMatrix("ragged rows".into()));
        }
        let n: u64 = rows[0].iter().sum();
        if n < 2 {
            return Err(Error::InvalidMatrix(
                "need at least 2 raters per item".into(),
            ));
        }
        if rows.iter().any(|r| r.iter().sum::<u64>() != n) {
            return Err(Error::InvalidMatrix(
                "rows must all sum to the same rater count".into(),
            ));
        }
        Ok(JudgmentMatrix {
            rows,
            raters_per_item: n,
        })
    }

    /// Read a matrix from CSV lines of the form `item,cat1,...,catK`. A
    /// header line is skipped when its count columns do not parse as
    /// integers.
    pub fn from_csv<R: BufRead>(reader: R) -> Result<Self> {
        let mut rows: Vec<Vec<u64>> = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() < 3 {
                return Err(Error::InvalidMatrix(format!(
                    "line {}: expected item,cat1,...,catK with at least 2 categories",
                    i + 1
                )));
            }
            let counts: std::result::Result<Vec<u64>, _> = fields[1..]
                .iter()
                .map(|f| f.trim().parse::<u64>())
                .collect();
            match counts {
                Ok(c) => rows.push(c),
                Err(_) if i == 0 => continue, // header
                Err(_) => {
                    return Err(Error::InvalidMatrix(format!(
                        "line {}: count columns must be non-negative integers",
                        i + 1
                    )))
                }
            }
        }
        JudgmentMatrix::new(rows)
    }

    pub fn raters_per_item(&self) -> u64 {
        self.raters_per_item
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }
}

/// Fleiss' kappa: chance-corrected agreement for a fixed number of raters
/// categorizing items, `κ = (P̄ − P̄e) / (1 − P̄e)`.
///
/// By convention the degenerate case where every rating falls in one single
/// category (P̄e == 1, which forces P̄ == 1) returns 1.0.
pub fn fleiss_kappa(matrix: &JudgmentMatrix) -> f64 {
    let n = matrix.raters_per_item as f64;
    let items = matrix.rows.len() as f64;
    let categories = matrix.rows[0].len();

    // Per-item observed agreement.
    let p_bar: f64 = matrix
        .rows
        .iter()
        .map(|row| {
            let sum_sq: f64 = row.iter().map(|&c| (c * c) as f64).sum();
            (sum_sq - n) / (n * (n - 1.0))
        })
        .sum::<f64>()
        / items;

    // Expected agreement from category proportions.
    let total = items * n;
    let p_e: f64 = (0..categories)
        .map(|j| {
            let col: f64 = matrix.rows.iter().map(|r| r[j] as f64).sum();
            let p = col / total;
            p * p
        })
        .sum();

    if (1.0 - p_e).abs() < 1e-12 {
        // All ratings in one category: unanimity by definition.
        return 1.0;
    }
    (p_bar - p_e) / (1.0 - p_e)
}

/// Table header for corpus summaries (tab-separated).
pub const SUMMARY_TSV_HEADER: &str =
    "Language\tArticles\tParagraphs\tLinks\tMean per article\tMedian per article";

pub fn summary_tsv_row(language: &str, s: &CorpusSummary) -> String {
    format!(
        "{}\t{}\t{}\t{}\t{:.2}\t{}",
        language,
        s.articles,
        s.paragraphs,
        s.links,
        round2(s.mean_links_per_article),
        format_median(s.median_links_per_article),
    )
}

fn format_median(m: f64) -> String {
    if m.fract() == 0.0 {
        format!("{}", m as u64)
    } else {
        format!("{m:.1}")
    }
}

/// Table header for enrichment reports (tab-separated).
pub const ENRICHMENT_TSV_HEADER: &str = "Language\tAnnotations before enrichment\tUnique annotations\tAnnotations after enrichment\t% of new annotations";

pub fn enrichment_tsv_row(language: &str, r: &crate::enricher::EnrichmentReport) -> String {
    format!(
        "{}\t{}\t{}\t{}\t{:.2} %",
        language, r.links_before, r.unique_anchors, r.links_after, r.percent_new
    )
}
