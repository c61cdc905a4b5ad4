use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |M[i][j] - conj(M[j][i])| = {max_violation:e} (tolerance {tolerance:e})")]
    NonHermitian { max_violation: f64, tolerance: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-physical density matrix: {0}")]
    NonPhysicalState(String),

    #[error("Hilbert-space dimension {dim} exceeds cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("two-photon resonance expected (delta = 0), got delta = {0}")]
    ExpectedResonance(f64),

    #[error("degenerate scale: {0}")]
    DegenerateScale(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("need at least {needed} distinct points for the fit, got {got}")]
    InsufficientPoints { needed: usize, got: usize },

    #[error("unknown metric `{0}`")]
    UnknownMetric(String),

    #[error("ambiguous root-to-branch assignment: {0}")]
    AmbiguousBranch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
