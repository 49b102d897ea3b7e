use thiserror::Error;

/// Failure modes shared by the numerical crates.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Malformed input such as an empty or unsorted grid.
    #[error("invalid input: {0}")]
    Input(String),
    /// The observation has zero likelihood under the model.
    #[error("inference error: {0}")]
    Inference(String),
    /// Quadrature or another numerical routine did not converge.
    #[error("numeric error: {message} ({diagnostics})")]
    Numeric { message: String, diagnostics: String },
    /// A Monte-Carlo estimator could not be formed.
    #[error("statistical error: {0}")]
    Statistical(String),
    /// A hypothesis required by the formula is violated.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// Invalid model or run configuration.
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
