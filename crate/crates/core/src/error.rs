use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("atom index {index} out of range for {n_atoms} atoms")]
    AtomOutOfRange { index: usize, n_atoms: usize },

    #[error("invalid level scheme: {0}")]
    InvalidLevels(String),

    #[error("level {0:?} is not present in the level scheme")]
    MissingLevel(crate::algebra::Level),

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("density matrix invalid: {0}")]
    InvalidDensity(String),

    #[error("operator is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("step size underflow at t = {t:e}")]
    StepUnderflow { t: f64 },

    #[error("integration did not meet tolerance within {steps} steps (stopped at t = {t:e})")]
    ToleranceNotMet { t: f64, steps: usize },

    #[error("phase undefined: amplitude magnitude {0:e} below threshold")]
    UndefinedPhase(f64),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }

    /// True for errors raised by the numerical integrators.
    pub fn is_integrator_failure(&self) -> bool {
        matches!(self, Error::StepUnderflow { .. } | Error::ToleranceNotMet { .. })
    }
}
