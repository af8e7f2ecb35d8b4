use thiserror::Error;

/// Errors produced by the solver and the study harness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("fractional order must lie in (0, 2), got {0}")]
    InvalidOrder(f64),
    #[error("requested {requested} weights, limit is {limit}")]
    TooManyWeights { requested: usize, limit: usize },
    #[error("length mismatch: expected {expected}, got {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("step size must be positive and finite, got {0}")]
    InvalidStep(f64),
    #[error("mesh needs at least 2 elements, got {0}")]
    InvalidMesh(usize),
    #[error("meshes are not nested: coarse {coarse} elements, fine {fine} elements")]
    NonNested { coarse: usize, fine: usize },
    #[error("pivot {pivot:e} at row {row} is below the breakdown threshold")]
    SingularPivot { row: usize, pivot: f64 },
    #[error("coarsening factor {factor} does not divide {steps} steps")]
    NonDivisible { factor: usize, steps: usize },
    #[error("all {0} steps have already been taken")]
    Finished(usize),
    #[error("error values must be positive, got {0}")]
    NonPositiveError(f64),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("non-finite value encountered: {0}")]
    NonFinite(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error("malformed noise file: {0}")]
    Format(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected, found })
    }
}

pub(crate) fn check_step(tau: f64) -> Result<()> {
    if tau > 0.0 && tau.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidStep(tau))
    }
}
