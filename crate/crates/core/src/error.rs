use std::path::PathBuf;

use crate::circuit::GateKind;

/// Errors raised while building, validating, or simulating circuits.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("qubit {qubit} is out of range for a {width}-qubit circuit")]
    IndexOutOfRange { qubit: usize, width: usize },

    #[error("qubit {qubit} appears more than once in a {kind:?} gate")]
    DuplicateQubit { kind: GateKind, qubit: usize },

    #[error("{kind:?} acts on {expected} qubit(s), got {got}")]
    ArityMismatch {
        kind: GateKind,
        expected: usize,
        got: usize,
    },

    #[error("{kind:?} requires an angle")]
    MissingAngle { kind: GateKind },

    #[error("{kind:?} does not take an angle")]
    UnexpectedAngle { kind: GateKind },

    #[error("non-finite angle in {0}")]
    NonFiniteAngle(&'static str),

    #[error("invalid width {got}: {reason}")]
    InvalidWidth { got: usize, reason: &'static str },

    #[error("width mismatch: expected {expected} qubits, got {got}")]
    WidthMismatch { expected: usize, got: usize },

    #[error("{n} qubits exceeds the dense-matrix limit of {limit}")]
    WidthTooLarge { n: usize, limit: usize },

    #[error("circuit is not diagonal: column {column} has off-diagonal weight {weight:e}")]
    NotDiagonal { column: usize, weight: f64 },

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("amplitude count {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("shot count must be positive")]
    ZeroShots,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("profile has length {got}, expected {expected}")]
    ProfileLength { expected: usize, got: usize },

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("infeasible window: {0}")]
    InfeasibleWindow(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization failed: {0}")]
    Serialization(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
