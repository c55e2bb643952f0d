use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("vocabulary error: {0}")]
    Vocabulary(String),

    #[error("stopword list error: {0}")]
    Stopwords(String),

    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("table stub line {line}: {message}")]
    TableParse { line: usize, message: String },

    #[error("table stub has no entry for sentence {key} position {position}")]
    MissingTableEntry { key: String, position: usize },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("language model backend: {0}")]
    Backend(String),

    #[error("cover text exhausted after embedding {bits_embedded} of {required} bits")]
    CapacityExhausted { bits_embedded: usize, required: usize },

    #[error("stego token {token:?} at sentence {sentence} position {position} is not a candidate")]
    DecodeMismatch {
        sentence: usize,
        position: usize,
        token: String,
    },

    #[error("header declares {declared} message bits but only {recovered} were recovered")]
    HeaderUnderflow { declared: usize, recovered: usize },

    #[error("text ended after {recovered} bits, before the {width}-bit length header was complete")]
    TruncatedHeader { width: usize, recovered: usize },

    #[error("expected {expected} message bits but only {recovered} were recovered")]
    MessageUnderflow { expected: usize, recovered: usize },

    #[error("message has {actual} bits but framing expects {expected}")]
    MessageLength { expected: usize, actual: usize },

    #[error("invalid bit string: {0}")]
    BitString(String),

    #[error("protocol descriptor: {0}")]
    Descriptor(String),

    #[error("protocol mismatch on {field}: expected {expected}, found {actual}")]
    ProtocolMismatch {
        field: String,
        expected: String,
        actual: String,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Short stable identifier, used for machine-readable error lines.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidConfig(_) => "invalid-config",
            Error::Vocabulary(_) => "vocabulary",
            Error::Stopwords(_) => "stopwords",
            Error::Io { .. } => "io",
            Error::TableParse { .. } => "table-parse",
            Error::MissingTableEntry { .. } => "missing-table-entry",
            Error::InvalidDistribution(_) => "invalid-distribution",
            Error::Backend(_) => "backend",
            Error::CapacityExhausted { .. } => "capacity-exhausted",
            Error::DecodeMismatch { .. } => "decode-mismatch",
            Error::HeaderUnderflow { .. } => "header-underflow",
            Error::TruncatedHeader { .. } => "truncated-header",
            Error::MessageUnderflow { .. } => "message-underflow",
            Error::MessageLength { .. } => "message-length",
            Error::BitString(_) => "bit-string",
            Error::Descriptor(_) => "descriptor",
            Error::ProtocolMismatch { .. } => "protocol-mismatch",
        }
    }
}
