use thiserror::Error;

/// Errors raised by the simulation engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum WalkError {
    #[error("{field} = {value} is outside [0, 1]")]
    ProbabilityOutOfRange { field: String, value: f64 },

    #[error("coin operator is not unitary (max deviation from identity {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("unknown waveplate kind `{0}` (expected `half` or `quarter`)")]
    UnknownWaveplate(String),

    #[error("amplitude at position {position} would leave the window [{min}, {max}]")]
    WindowOverflow { position: i64, min: i64, max: i64 },

    #[error("step {step}: pure-state evolution cannot represent dephasing q = {q}")]
    DephasingInPureMode { step: usize, q: f64 },

    #[error("distribution has zero mass")]
    ZeroMass,

    #[error("distribution is not normalized (mass {mass})")]
    NotNormalized { mass: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),
}

impl WalkError {
    /// True for failures of the engine itself rather than of its inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            WalkError::WindowOverflow { .. } | WalkError::NonFinite(_)
        )
    }

    pub(crate) fn check_probability(field: impl Into<String>, value: f64) -> Result<f64> {
        if (0.0..=1.0).contains(&value) {
            Ok(value)
        } else {
            Err(WalkError::ProbabilityOutOfRange {
                field: field.into(),
                value,
            })
        }
    }
}

pub type Result<T> = std::result::Result<T, WalkError>;
