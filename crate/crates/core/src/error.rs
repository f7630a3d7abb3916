use thiserror::Error;

/// Errors produced by the simulator library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown level `{label}` (basis has: {available})")]
    UnknownLevel { label: String, available: String },

    #[error("duplicate level label `{0}`")]
    DuplicateLevel(String),

    #[error("a level basis needs at least one level")]
    EmptyBasis,

    #[error("basis mismatch: {0}")]
    BasisMismatch(String),

    #[error("state is not normalized (norm = {0})")]
    NotNormalized(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("step size underflow at t = {t} µs (h = {h:e} µs)")]
    StepUnderflow { t: f64, h: f64 },

    #[error("integrator did not converge: {0}")]
    NonConvergence(String),

    #[error("Hilbert space too large: {0}")]
    DimensionOverflow(String),

    #[error("duration optimizer failed: {0}")]
    Optimizer(String),
}

impl Error {
    /// True for failures of the numerical machinery rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::StepUnderflow { .. } | Error::NonConvergence(_) | Error::Optimizer(_)
        )
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
