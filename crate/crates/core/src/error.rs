use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed record {record}: {message}")]
    Parse { record: String, message: String },

    #[error("corpus has no documents")]
    EmptyCorpus,

    #[error("authorship references unknown document `{0}`")]
    DanglingDocument(String),

    #[error("document `{0}` has no author")]
    OrphanDocument(String),

    #[error("duplicate document id `{0}`")]
    DuplicateDocument(String),

    #[error("pretagged input line {line}: {message}")]
    Pretagged { line: usize, message: String },

    #[error("no pretagged tokens supplied for document `{0}`")]
    MissingPretagged(String),

    #[error("invalid POS pattern `{pattern}`: {message}")]
    Pattern { pattern: String, message: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("token `{0}` is not in the token vocabulary")]
    UnindexedToken(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("unknown topic `{0}`")]
    UnknownTopic(String),

    #[error("unknown expert `{0}`")]
    UnknownExpert(String),

    #[error("non-finite value while reinforcing topic `{topic}` at iteration {iteration}")]
    NonFinite { topic: String, iteration: usize },

    #[error("query `{0}` normalizes to no usable terms")]
    EmptyQuery(String),

    #[error("index file `{0}` is missing")]
    MissingFile(String),

    #[error("checksum mismatch for index file `{0}`")]
    Checksum(String),

    #[error("unsupported index format version {found} (expected {expected})")]
    Version { found: u32, expected: u32 },

    #[error("index has no reinforced matrix; run `reinforce` first")]
    NotReinforced,

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Stable short code used as the `ERROR <code>:` prefix on the command line.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Io { .. } => "io",
            Error::Parse { .. } => "parse",
            Error::EmptyCorpus => "empty-corpus",
            Error::DanglingDocument(_) => "dangling-reference",
            Error::OrphanDocument(_) => "orphan",
            Error::DuplicateDocument(_) => "duplicate",
            Error::Pretagged { .. } | Error::MissingPretagged(_) => "pretagged",
            Error::Pattern { .. } => "pattern",
            Error::Config(_) => "config",
            Error::UnindexedToken(_) => "unindexed-token",
            Error::Dimension(_) => "dimension",
            Error::UnknownTopic(_) => "unknown-topic",
            Error::UnknownExpert(_) => "unknown-expert",
            Error::NonFinite { .. } => "non-finite",
            Error::EmptyQuery(_) => "empty-query",
            Error::MissingFile(_) => "missing-file",
            Error::Checksum(_) => "checksum",
            Error::Version { .. } => "version",
            Error::NotReinforced => "not-reinforced",
            Error::Json(_) => "json",
        }
    }
}
