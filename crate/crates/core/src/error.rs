use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vector has zero norm")]
    ZeroVector,

    #[error("vector must have unit norm (got {norm:.3e})")]
    NotUnitNorm { norm: f64 },

    #[error("unsupported dimension {d}: {reason}")]
    BadDimension { d: usize, reason: &'static str },

    #[error("non-finite component at index {index}")]
    NonFiniteEntry { index: usize },

    #[error("gauge violated: v(0) = {re}+{im}i, expected exactly 1")]
    GaugeViolation { re: f64, im: f64 },

    #[error("Gabor frame is not biangular (max spread {spread:.3e} > tol {tol:.3e})")]
    NotBiangular { spread: f64, tol: f64 },

    #[error("bracket endpoints do not straddle delta = 0 ({lo:.3e}, {hi:.3e})")]
    InvalidBracket { lo: f64, hi: f64 },

    #[error("re-projection drifted off the variety (residual {residual:.3e})")]
    ProjectionLost { residual: f64 },

    #[error("seed did not project onto the variety (residual {residual:.3e})")]
    SeedOffVariety { residual: f64 },

    #[error(
        "bisection did not reach the tolerance after {bisections} steps (|delta| = {delta:.3e})"
    )]
    RefineExhausted { bisections: usize, delta: f64 },

    #[error("invalid configuration: {0}")]
    BadConfig(&'static str),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{path}: line {line}, field `{field}`: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        field: String,
        message: String,
    },

    #[error("{path}: {source}")]
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

    pub(crate) fn parse(
        path: impl Into<PathBuf>,
        line: usize,
        field: impl Into<String>,
        message: impl Into<String>,
    ) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            field: field.into(),
            message: message.into(),
        }
    }
}
