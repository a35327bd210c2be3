use thiserror::Error;

/// Errors raised anywhere in the invariant machinery.
#[derive(Debug, Error)]
pub enum Error {
    #[error("expected {expected} amplitudes, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("qubit {qubit} out of range for a {n_qubits}-qubit system")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },

    #[error("state norm {norm} deviates from 1 by more than {tolerance:e}")]
    NotNormalized { norm: f64, tolerance: f64 },

    #[error("invalid state request: {0}")]
    InvalidState(String),

    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("polynomials over {left} and {right} qubits cannot be combined")]
    MixedQubitCount { left: usize, right: usize },

    #[error("product exceeds the term cap of {cap} monomials")]
    TermLimit { cap: usize },

    #[error("polynomial is not homogeneous")]
    NotHomogeneous,

    #[error("malformed font: {0}")]
    MalformedFont(String),

    #[error("family of degree {degree} needs {} members, found {found}", degree + 1)]
    IncompleteFamily { degree: usize, found: usize },

    #[error("interpolation system is ill-conditioned (condition number {condition:e})")]
    IllConditioned { condition: f64 },

    #[error("level {0} is not supported (expected 3, 4 or 5)")]
    UnsupportedLevel(usize),

    #[error("transvectant order {order} exceeds form degrees {left} and {right}")]
    TransvectantOrder { order: usize, left: usize, right: usize },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("consistency violation: {0}")]
    Consistency(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
