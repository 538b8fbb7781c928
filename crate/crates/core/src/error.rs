use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension too large: {qubits} qubits requested, limit is {max}")]
    DimensionTooLarge { qubits: usize, max: usize },

    #[error("matrix is not Hermitian (max |M - M^†| = {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not real symmetric")]
    NotRealSymmetric,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("eigensolver failure: {0}")]
    EigensolverFailure(String),

    #[error("eigenvalue {eigenvalue} lies outside the function interval [{lo}, {hi}]")]
    SpectrumOutsideInterval { eigenvalue: f64, lo: f64, hi: f64 },

    #[error("spectrum out of range: |A| = {norm} exceeds the phase-estimation limit {limit}")]
    SpectrumOutOfRange { norm: f64, limit: f64 },

    #[error("function values exceed [-1, 1] (f_max = {f_max})")]
    FunctionOutOfRange { f_max: f64 },

    #[error("work budget exceeded: {work} operations requested, budget is {budget}")]
    WorkBudgetExceeded { work: u128, budget: u128 },

    #[error("condition number is infinite (smallest |eigenvalue| is zero)")]
    ConditionInfinite,

    #[error("phase-estimation budget infeasible: {0}")]
    BudgetInfeasible(String),

    #[error("invalid degree model: {0}")]
    InvalidModel(String),

    #[error("infeasible power-law parameters: {0}")]
    InfeasibleParameters(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
