use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot parse {input:?} as a decimal number: {reason}")]
    Parse { input: String, reason: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precision of {0} digits is outside the supported range 30..=256")]
    Precision(usize),

    #[error("unsupported order {order}; built-in orders are 14 and 16")]
    UnsupportedOrder { order: usize },

    #[error("coefficient file field `{field}`: {reason}")]
    Schema { field: String, reason: String },

    #[error("coefficient set failed validation: {0}")]
    Validation(String),

    #[error("evaluation point lies within {distance:e} of pole {index}")]
    PoleProximity { index: usize, distance: f64 },

    #[error("polynomial consistency: {0}")]
    Consistency(String),

    #[error("root finding did not converge after {iterations} iterations (max relative step {last_step:e})")]
    NoConvergence {
        iterations: usize,
        last_step: f64,
        best: Vec<crate::xprec::XComplex>,
        residuals: Vec<crate::xprec::XReal>,
    },

    #[error("near-multiple pole at index {index}: |q'(pole)| is {magnitude:e}")]
    NearMultiplePole { index: usize, magnitude: f64 },

    #[error("cannot match computed root to pole {index}: {reason}")]
    RootMatching { index: usize, reason: String },

    #[error("singular matrix: zero pivot in column {column}")]
    Singular { column: usize },

    #[error("shifted system for pole {pole} is singular")]
    SingularShift { pole: usize },

    #[error("least-squares problem is ill-posed: condition estimate {condition:e} exceeds {threshold:e}")]
    IllPosed { condition: f64, threshold: f64 },

    #[error("grid too coarse: extrema at indices {left} and {right} are fewer than 3 points apart")]
    Resolution { left: usize, right: usize },

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("decay chain is degenerate: {0}")]
    DegenerateChain(String),

    #[error("matrix is not symmetric: |a[{row}][{col}] - a[{col}][{row}]| too large")]
    NotSymmetric { row: usize, col: usize },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub(crate) fn schema(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Schema { field: field.into(), reason: reason.into() }
    }
}
