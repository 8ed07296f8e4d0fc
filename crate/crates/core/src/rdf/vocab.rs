//! Vocabulary constants for the emitted RDF subset.

pub const RDF_NS: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const XSD_NS: &str = "http://www.w3.org/2001/XMLSchema#";
pub const ITSRDF_NS: &str = "http://www.w3.org/2005/11/its/rdf#";
/// NIF-Core 2.1 namespace.
pub const NIF_NS: &str = "http://persistence.uni-leipzig.org/nlp2rdf/ontologies/nif-core#";
/// Tool namespace for the enrichment provenance side channel.
pub const NFF_NS: &str = "http://nif-forge.org/ns#";

pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

pub const NIF_CONTEXT: &str =
    "http://persistence.uni-leipzig.org/nlp2rdf/ontologies/nif-core#Context";
pub const NIF_SECTION: &str =
    "http://persistence.uni-leipzig.org/nlp2rdf/ontologies/nif-core#Section";
pub const NIF_PARAGRAPH: &str =
    "http://persistence.uni-leipzig.org/nlp2rdf/ontologies/nif-core#Paragraph";
pub const NIF_TITLE: &str = "http://persistence.uni-leipzig.org/nlp2rdf/ontologies/nif-core#Title";
pub const NIF_WORD: &str = "http://persistence.uni-leipzig.org/nlp2rdf/ontologies/nif-core#Word";
pub const NIF_PHRASE: &str =
    "http://persistence.uni-leipzig.org/nlp2rdf/ontologies/nif-core#Phrase";

pub const NIF_BEGIN_INDEX: &str =
    "http://persistence.uni-leipzig.org/nlp2rdf/ontologies/nif-core#beginIndex";
pub const NIF_END_INDEX: &str =
    "http://persistence.uni-leipzig.org/nlp2rdf/ontologies/nif-core#endIndex";
pub const NIF_IS_STRING: &str =
    "http://persistence.uni-leipzig.org/nlp2rdf/ontologies/nif-core#isString";
pub const NIF_ANCHOR_OF: &str =
    "http://persistence.uni-leipzig.org/nlp2rdf/ontologies/nif-core#anchorOf";
pub const NIF_REFERENCE_CONTEXT: &str =
    "http://persistence.uni-leipzig.org/nlp2rdf/ontologies/nif-core#referenceContext";
pub const NIF_SOURCE_URL: &str =
    "http://persistence.uni-leipzig.org/nlp2rdf/ontologies/nif-core#sourceUrl";
pub const NIF_PRED_LANG: &str =
    "http://persistence.uni-leipzig.org/nlp2rdf/ontologies/nif-core#predLang";
pub const NIF_FIRST_SECTION: &str =
    "http://persistence.uni-leipzig.org/nlp2rdf/ontologies/nif-core#firstSection";
pub const NIF_LAST_SECTION: &str =
    "http://persistence.uni-leipzig.org/nlp2rdf/ontologies/nif-core#lastSection";
pub const NIF_HAS_SECTION: &str =
    "http://persistence.uni-leipzig.org/nlp2rdf/ontologies/nif-core#hasSection";
pub const NIF_NEXT_SECTION: &str =
    "http://persistence.uni-leipzig.org/nlp2rdf/ontologies/nif-core#nextSection";
pub const NIF_FIRST_PARAGRAPH: &str =
    "http://persistence.uni-leipzig.org/nlp2rdf/ontologies/nif-core#firstParagraph";
pub const NIF_LAST_PARAGRAPH: &str =
    "http://persistence.uni-leipzig.org/nlp2rdf/ontologies/nif-core#lastParagraph";
pub const NIF_HAS_PARAGRAPH: &str =
    "http://persistence.uni-leipzig.org/nlp2rdf/ontologies/nif-core#hasParagraph";
pub const NIF_NEXT_PARAGRAPH: &str =
    "http://persistence.uni-leipzig.org/nlp2rdf/ontologies/nif-core#nextParagraph";
pub const NIF_SUPER_STRING: &str =
    "http://persistence.uni-leipzig.org/nlp2rdf/ontologies/nif-core#superString";

pub const ITSRDF_TA_IDENT_REF: &str = "http://www.w3.org/2005/11/its/rdf#taIdentRef";

pub const XSD_NON_NEGATIVE_INTEGER: &str = "http://www.w3.org/2001/XMLSchema#nonNegativeInteger";
pub const XSD_BOOLEAN: &str = "http://www.w3.org/2001/XMLSchema#boolean";

/// Marks a link annotation added by enrichment (object `"true"^^xsd:boolean`).
pub const NFF_ENRICHED: &str = "http://nif-forge.org/ns#enriched";
