use thiserror::Error;

/// Crate-wide error type. Variants map to the distinct failure classes the
/// analysis pipeline can hit; the CLI keys its exit codes off `is_numerical`.
#[derive(Debug, Error)]
pub enum Error {
    /// Matrix shape disagrees with what the operation requires.
    #[error("dimension error: {0}")]
    Dimension(String),

    /// Input violates a structural requirement (unitarity, hermiticity, block pattern).
    #[error("validation error: {0}")]
    Validation(String),

    /// Argument outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Requested certificate cannot exist for this input.
    #[error("infeasibility error: {0}")]
    Infeasible(String),

    /// Two internal computation routes disagreed; indicates an implementation bug.
    #[error("consistency error: {0}")]
    Consistency(String),

    /// Model-level misconfiguration (empty sample set, cap exceeded, bad settings).
    #[error("invalid model: {0}")]
    InvalidModel(String),

    /// Backend linear algebra failed or produced unusable output.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// Expression evaluation failure with source position.
    #[error("evaluation error at {line}:{col}: {message}")]
    Eval { line: u32, col: u32, message: String },

    /// Model instantiation failure (component evaluation, cascade, grid).
    #[error("instantiation error: {0}")]
    Instantiate(String),
}

impl Error {
    /// True for failures of the numerics themselves, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Numerical(_) | Error::Consistency(_))
    }
}

impl From<ndarray_linalg::error::LinalgError> for Error {
    fn from(e: ndarray_linalg::error::LinalgError) -> Self {
        Error::Numerical(format!("linear algebra backend: {e}"))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
