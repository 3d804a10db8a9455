//! Error taxonomy shared by every module in the crate.

use thiserror::Error;

/// Errors raised by the numerical toolkit.
///
/// The variants mirror how callers are expected to react: `Config` and
/// `Domain` mean the request itself was malformed, `Precondition` means the
/// requested method is mathematically inapplicable to the given inputs (a
/// result in its own right, not a bug), and `Accuracy` means a built-in
/// self-check on the numerics failed.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid configuration (bad parameter ordering, unknown kind, gauge
    /// outside the supported polynomial family, ...).
    #[error("configuration error: {0}")]
    Config(String),

    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A method's precondition does not hold for these inputs.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An internal accuracy check (step-halving, close approach, ...) failed.
    #[error("accuracy check failed: {0}")]
    Accuracy(String),
}

pub type Result<T> = std::result::Result<T, Error>;
