use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("qubit {qubit} out of range for a {n}-qubit register")]
    QubitOutOfRange { qubit: usize, n: usize },

    #[error("gate is not unitary (deviation {deviation:.3e})")]
    NonUnitary { deviation: f64 },

    #[error("measurement branch has probability {prob:.3e}; cannot renormalize")]
    MeasureZero { prob: f64 },

    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },

    #[error("invalid tableau: {0}")]
    InvalidTableau(String),

    #[error("degenerate: {0}")]
    Degenerate(String),

    #[error("out of domain: {0}")]
    OutOfDomain(String),

    #[error("{what} with {n} qubits exceeds the cap of {cap}")]
    CapExceeded { what: &'static str, n: usize, cap: usize },

    #[error("need at least 2 samples, got {0}")]
    TooFewSamples(usize),
}
