use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// The SINR constraint cannot be met; `rho_max` is the largest attainable
    /// minimum SINR for the given power budget.
    #[error("infeasible: {reason} (rho_max = {rho_max:.6}, {:.3} dB)", 10.0 * rho_max.log10())]
    Infeasible { rho_max: f64, reason: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Two independent computations of the same quantity disagree.
    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),

    #[error("invalid scenario field `{field}`: {message}")]
    Validation { field: &'static str, message: String },

    #[error("config error: {0}")]
    Config(String),
}

impl Error {
    pub fn validation(field: &'static str, message: impl Into<String>) -> Self {
        Error::Validation { field, message: message.into() }
    }
}
