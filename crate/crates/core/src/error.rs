use thiserror::Error;

/// Errors raised by the library. One enum serves every module so callers can
/// propagate with `?` across layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NonHermitian { deviation: f64 },
    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("invalid subsystem partition: {0}")]
    BadPartition(String),
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("invalid dimension: {0}")]
    BadDim(String),
    #[error("invalid probabilities: {0}")]
    BadProbabilities(String),
    #[error("fidelity parameter {0} outside [0, 1]")]
    BadFidelity(f64),
    #[error("angular momentum eigenvalue clusters have sizes {found:?}, expected {expected:?}")]
    ClusterMismatch {
        found: Vec<usize>,
        expected: Vec<usize>,
    },
    #[error("polynomial order k={k} outside 1..={n}")]
    BadK { k: usize, n: usize },
    #[error("map is not a quantum channel: {0}")]
    NotAChannel(String),
    #[error("matrix is not unitary (deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },
    #[error("matrix is not an antisymmetric unitary")]
    NotAntisymmetricUnitary,
    #[error("dimension {0} is odd; an even dimension is required")]
    OddDim(usize),
    #[error("canonical decomposition check failed: {0}")]
    DecompositionFailed(String),
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("witness scale denominator {0:.3e} is too small")]
    DegenerateScale(f64),
    #[error("operation requires all local dimensions to be 2")]
    NotQubits,
    #[error("reduced state is not maximally mixed (deviation {deviation:.3e})")]
    NotMaxMixedMarginal { deviation: f64 },
    #[error("reference state has zero concurrence")]
    ZeroConcurrence,
    #[error("grid step {0} must lie in (0, 0.1] and divide 1")]
    BadStep(f64),
    #[error("output failed: {0}")]
    Io(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
}

pub type Result<T> = std::result::Result<T, Error>;
