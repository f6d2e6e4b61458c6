use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("degree l = {l} out of range [1, {max}]")]
    DegreeOutOfRange { l: usize, max: usize },
    #[error("polynomial degree r = {0} must be at least 1")]
    InvalidDegree(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },
    #[error("eigensolver did not converge after {iterations} iterations (eigenvalue {index})")]
    ConvergenceFailure { iterations: usize, index: usize },
    #[error("matrix is not positive definite (pivot {0})")]
    NotPositiveDefinite(usize),
    #[error("null space is trivial (rank = n = {0})")]
    TrivialNullSpace(usize),
    #[error("matrix is not left-regular")]
    NotLeftRegular,
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("sparsity order k = {k} too large (must be below {limit})")]
    OrderTooLarge { k: usize, limit: f64 },
    #[error("theta = floor(n/k) = {0} is below 2")]
    DegenerateTheta(usize),
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("simplex exceeded {0} pivots")]
    CyclingGuardExceeded(usize),
    #[error("true signal is zero")]
    ZeroTruth,
    #[error("missing inputs: {0}")]
    MissingInputs(String),
    #[error("crossing at level {level} not bracketed for m = {m}")]
    CrossingNotBracketed { m: usize, level: f64 },
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
