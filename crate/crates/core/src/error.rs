use std::path::PathBuf;

use thiserror::Error;

/// Broad failure category, used by the CLI to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed or inconsistent input data.
    Input,
    /// A numerical routine could not produce a defined result.
    Numerical,
    /// Reading or writing a file failed.
    Io,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read or write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("empty input: {0}")]
    Empty(String),

    #[error("duplicate respondent id {0:?}")]
    DuplicateRespondent(String),

    #[error("duplicate attribute name {0:?}")]
    DuplicateAttribute(String),

    #[error("row {row} ({respondent}), column {column:?}: {message}")]
    InvalidCell {
        row: usize,
        respondent: String,
        column: String,
        message: String,
    },

    #[error("row {row} ({respondent}), column {column:?}: value {value} outside [{lo}, {hi}]")]
    OutOfRange {
        row: usize,
        respondent: String,
        column: String,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("column {0:?} has no observed values; cannot impute")]
    ImputationImpossible(String),

    #[error("column {0:?} still has missing values")]
    MissingValues(String),

    #[error("unknown column {0:?}")]
    UnknownColumn(String),

    #[error("invalid schema: {0}")]
    Schema(String),

    #[error("invalid value bounds: {0}")]
    Bounds(String),

    #[error("need at least {needed} values, got {got}")]
    TooShort { needed: usize, got: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid labeled data: {0}")]
    LabeledData(String),

    #[error("invalid priors: {0}")]
    Priors(String),

    #[error("pooled within-class covariance is singular at feature {feature:?}")]
    SingularCovariance { feature: String },

    #[error("expected {expected} features, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite coefficient for {0:?}")]
    NonFiniteCoefficient(String),

    #[error("unknown class {0:?}")]
    UnknownClass(String),

    #[error("invalid graph: {0}")]
    Graph(String),

    #[error("unknown element {0}")]
    UnknownElement(usize),

    #[error("edge {u:?} -- {v:?} is not in the graph")]
    EdgeNotInGraph { u: String, v: String },

    #[error("graph has {nodes} nodes; exhaustive enumeration is limited to {limit}")]
    GraphTooLarge { nodes: usize, limit: usize },

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Io { .. } => ErrorKind::Io,
            Error::SingularCovariance { .. } => ErrorKind::Numerical,
            _ => ErrorKind::Input,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
