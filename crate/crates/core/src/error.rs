use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("dimension must be at least {min}, got {actual}")]
    DimensionTooSmall { min: usize, actual: usize },

    #[error("non-finite entry at index {index}")]
    NonFinite { index: usize },

    #[error("matrix is not Hermitian (residual {residual:.3e} exceeds {tolerance:.3e})")]
    NotHermitian { residual: f64, tolerance: f64 },

    #[error("state is not normalized (|norm - 1| = {residual:.3e})")]
    NotNormalized { residual: f64 },

    #[error("zero vector cannot be normalized")]
    ZeroVector,

    #[error("Jacobi eigensolver did not converge in {sweeps} sweeps (off-diagonal norm {off_norm:.3e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("expectation value has imaginary residue {residue:.3e} (limit {limit:.3e})")]
    ImaginaryResidue { residue: f64, limit: f64 },

    #[error("{quantity}: routes disagree by {divergence:.3e} (limit {limit:.3e})")]
    RouteDivergence {
        quantity: &'static str,
        divergence: f64,
        limit: f64,
    },

    #[error("unknown relation id `{0}`")]
    UnknownRelation(String),

    #[error("relation {id} cannot be used here: {reason}")]
    InvalidRelation { id: String, reason: &'static str },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("problem file, `{label}`: {reason}")]
    Problem { label: String, reason: String },

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
