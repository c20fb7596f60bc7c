use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square with even dimension ({rows}x{cols})")]
    BadShape { rows: usize, cols: usize },
    #[error("covariance matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },
    #[error("uncertainty principle violated: min symplectic eigenvalue {min_nu} < 1/2")]
    UncertaintyViolation { min_nu: f64 },
    #[error("Gibbs matrix diverges: modes {modes:?} are pure")]
    SingularSpectrum { modes: Vec<usize> },
    #[error("invalid covariance matrix: {0}")]
    InvalidCm(String),
    #[error("invalid density matrix: {0}")]
    InvalidState(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("{0} is not a Gaussian channel family")]
    NotGaussianFamily(&'static str),
    #[error("{0} is not a discrete-variable channel family")]
    NotDvFamily(&'static str),
    #[error("{op} is not defined for the {family} family")]
    Unsupported { op: &'static str, family: &'static str },
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("eta = 0 is a divergence point; the limit is log2(3*pi*e)")]
    DivergentAtZero,
    #[error("member {index} has divergent flux")]
    DivergentMember { index: usize },
    #[error("index ({a}, {b}) out of range for dimension {d}")]
    IndexOutOfRange { d: usize, a: usize, b: usize },
    #[error("dimension {0} too large for the covariance search (max 4)")]
    DimensionTooLarge(usize),
    #[error("channel is not teleportation-covariant")]
    NotCovariant,
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse { position, message: message.into() }
    }

    pub(crate) fn range(message: impl Into<String>) -> Self {
        Error::OutOfRange(message.into())
    }
}
