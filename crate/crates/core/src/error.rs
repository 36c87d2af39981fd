use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// The BAS-2010 comparator matrix could not be loaded.
    #[error("BAS-2010 comparator unavailable: {0}")]
    ComparatorUnavailable(String),

    #[error("transform `{0}` is not orthogonal; its transpose is not its inverse")]
    NotInvertibleAsTranspose(String),

    #[error("integer overflow in {0}")]
    ArithmeticOverflow(&'static str),

    #[error("factorization is inconsistent: {0}")]
    FactorizationInconsistent(String),

    #[error("row mismatch: approximation row {approx} compared against reference row {reference}")]
    RowMismatch { approx: usize, reference: usize },

    #[error(
        "quadrature did not converge: estimated error {estimate:e} after {intervals} intervals"
    )]
    QuadratureFailure { estimate: f64, intervals: usize },

    #[error("bad geometry: {0}")]
    BadGeometry(String),

    #[error("retention count {0} outside 1..=256")]
    InvalidRetention(usize),

    #[error("bad image format: {0}")]
    BadFormat(String),

    #[error("unsupported maxval {0}; only 8-bit (maxval 255) images are accepted")]
    UnsupportedDepth(u32),

    #[error("unknown transform `{0}` (expected proposed, dct, wht or bas2010)")]
    UnknownTransform(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
