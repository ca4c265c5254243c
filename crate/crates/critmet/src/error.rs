use thiserror::Error;

/// Failure modes shared by the numerical kernels and the model modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A structural precondition on an input failed: wrong shape, broken
    /// symmetry, invalid size or step, malformed grid.
    #[error("validation: {0}")]
    Validation(String),
    /// An iterative routine failed to converge or an internal consistency
    /// check was violated.
    #[error("numerical: {0}")]
    Numerical(String),
    /// Parameters left the domain on which the requested quantity exists.
    #[error("domain: {0}")]
    Domain(String),
    /// The requested figure of merit is undefined because the probe or the
    /// readout carries no information at this point (zero variance together
    /// with zero slope, or a distribution pinned to a single outcome).
    #[error("degenerate: {0}")]
    Degenerate(String),
    /// The quantity needs a precondition the caller must establish first;
    /// the message names the operation that diagnoses the situation.
    #[error("precondition: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
