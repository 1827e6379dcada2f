use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: expected {expected}, found {found}")]
    DimensionMismatch {
        op: &'static str,
        expected: String,
        found: String,
    },
    #[error("modules or maps live over different algebras ({0})")]
    AlgebraMismatch(&'static str),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("invalid bimodule: {0}")]
    InvalidBimodule(String),
    #[error("map is not R-linear: {0}")]
    NotLinear(String),
    #[error("not a morphism of T-modules: {0}")]
    NotTMorphism(String),
    #[error("nilpotency certificate failed: tensor power {power} has dimension {dim}")]
    NotNilpotent { power: usize, dim: usize },
    #[error("index {index} out of range 0..={max}")]
    OutOfRange { index: usize, max: usize },
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("enumeration needs {required} candidates, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("enumeration needs a finite field")]
    InfiniteField,
    #[error("input complex is not a complete projective resolution: {0}")]
    NotComplete(String),
    #[error("bimodule fails the compatibility conditions at i = {i} ({kind})")]
    NotCompatible { i: usize, kind: String },
    #[error("{0}")]
    Parse(String),
    #[error("field `{path}`: {message}")]
    Format { path: String, message: String },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn format_error(path: impl Into<String>, message: impl ToString) -> Error {
    Error::Format {
        path: path.into(),
        message: message.to_string(),
    }
}

pub(crate) fn dim_mismatch(op: &'static str, expected: impl ToString, found: impl ToString) -> Error {
    Error::DimensionMismatch {
        op,
        expected: expected.to_string(),
        found: found.to_string(),
    }
}
