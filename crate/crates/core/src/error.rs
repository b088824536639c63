use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit index {qubit} out of range for a {n}-qubit register")]
    QubitOutOfRange { qubit: usize, n: usize },
    #[error("gate acts twice on qubit {0}")]
    RepeatedQubit(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("qubit count {n} outside supported range {min}..={max}")]
    QubitCountOutOfRange { n: usize, min: usize, max: usize },
    #[error("shot count must be at least 1")]
    ZeroShots,
    #[error("probability {name}={value} is outside [0, 1]")]
    InvalidProbability { name: &'static str, value: f64 },
    #[error("not a probability distribution: {0}")]
    InvalidDistribution(String),
    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),
    #[error("average requested over an empty set of inputs")]
    EmptyAverage,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("circuit of length {len} exceeds the maximum length {max}")]
    CircuitTooLong { len: usize, max: usize },
    #[error("gate {0} is not part of the action space")]
    NotInActionSpace(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("malformed checkpoint: {0}")]
    Checkpoint(String),
    #[error("no circuit reached the reward threshold within {episodes} episodes")]
    NoCircuitFound { episodes: usize },
    #[error("failed to parse circuit file: {0}")]
    CircuitFormat(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
