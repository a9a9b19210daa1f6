use thiserror::Error;

/// Errors surfaced by the spline kernel, the geometry layer and the solvers.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter value fell outside the parametric domain of a space.
    #[error("parameter {value} outside domain [{min}, {max}]")]
    OutOfDomain { value: f64, min: f64, max: f64 },

    /// A precondition on the arguments was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The geometry degenerated (non-positive Jacobian, fold-over, ...).
    #[error("geometry error: {0}")]
    Geometry(String),

    /// Problem data violated a requirement (e.g. the Neumann datum lost its sign).
    #[error("data error: {0}")]
    Data(String),

    /// A linear solve failed or a matrix was numerically singular.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// A collocation point strategy is not available for the requested setup.
    #[error("unsupported strategy: {0}")]
    UnsupportedStrategy(String),

    /// Internal bookkeeping mismatch; indicates a bug rather than bad input.
    #[error("internal error: {0}")]
    Internal(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
