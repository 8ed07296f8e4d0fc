//! RDF serialization and parsing for the emitted NIF subset.

pub mod parser;
pub mod triple;
pub mod vocab;
pub mod writer;

pub use parser::{parse, parse_line, CorpusEvent, CorpusEvents};
pub use triple::{Object, Triple};
pub use writer::{serialize, serialize_corpus, RdfFormat, SerializeOptions};
