use thiserror::Error;

/// Error type shared by every module in the crate.
///
/// Variants map onto the CLI exit codes: configuration/parameter problems
/// are caught before any compute, validation/data problems mean the inputs
/// are inconsistent, and the numerical variants carry diagnostics from a
/// failed solve or time step.
#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("solvability error: {0}")]
    Solvability(String),

    #[error("consistency error: {0}")]
    Consistency(String),

    #[error("data error: {0}")]
    Data(String),

    #[error("capacity error: requested {requested}, maximum {max}")]
    Capacity { requested: usize, max: usize },

    #[error("solver did not converge: {iterations} iterations, residual {residual:e}")]
    Convergence { iterations: usize, residual: f64 },

    #[error("blow-up detected at t = {t}: norm grew from {from:e} to {to:e} in one step")]
    BlowUp { t: f64, from: f64, to: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI: 2 config, 3 validation, 4 numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Parameter(_) => 2,
            Error::Shape(_)
            | Error::Domain(_)
            | Error::Validation(_)
            | Error::Solvability(_)
            | Error::Consistency(_)
            | Error::Data(_)
            | Error::Parse(_)
            | Error::Io(_) => 3,
            Error::Capacity { .. } | Error::Convergence { .. } | Error::BlowUp { .. } => 4,
        }
    }
}
