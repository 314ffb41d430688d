//! Crate-wide error type.

use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}:{line}: {message}")]
    MalformedLine {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("incompatible signatures: {0}")]
    IncompatibleSignature(String),

    #[error("key {0} already present in index")]
    DuplicateKey(u64),

    #[error("key {0} not present in index")]
    MissingKey(u64),

    #[error("no band/row factorization for {num_perm} permutations")]
    NoBandFactorization { num_perm: usize },

    #[error("unknown {kind} id: {id}")]
    UnknownEntity { kind: &'static str, id: String },

    #[error("model variant mismatch: expected {expected}, got {got}")]
    VariantMismatch { expected: String, got: String },

    #[error("coverage constraint unsatisfiable: {kind} {id} occurs in no triplet")]
    CoverageUnsatisfiable { kind: &'static str, id: String },

    #[error("non-finite parameter during training: {0}")]
    NonFinite(String),

    #[error("empty test split")]
    EmptyTestSplit,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn malformed(
        path: impl Into<PathBuf>,
        line: usize,
        message: impl Into<String>,
    ) -> Self {
        Error::MalformedLine {
            path: path.into(),
            line,
            message: message.into(),
        }
    }
}
