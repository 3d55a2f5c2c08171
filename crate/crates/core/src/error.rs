use chrono::NaiveDate;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    MalformedRow { line: u64, message: String },

    #[error("duplicate date {0}")]
    DuplicateDate(NaiveDate),

    #[error("line {line}: non-finite value")]
    NonFiniteValue { line: u64 },

    #[error("series too short: need at least {needed} observations, got {got}")]
    SeriesTooShort { needed: usize, got: usize },

    #[error("denominator at observation {index} is {value}, not above the positivity threshold {threshold}")]
    DenominatorTooSmall { index: usize, value: f64, threshold: f64 },

    #[error("local volatility is non-positive at x = {x}{}", .index.map(|i| format!(" (observation {i})")).unwrap_or_default())]
    NonpositiveVolatility { x: f64, index: Option<usize> },

    #[error("base level equals the previous level; implied interpolation weight is undefined")]
    DegenerateBase,

    #[error("division by zero in interpolation function at x = {0}")]
    DivisionByZero(f64),

    #[error("parameter constraint violated: {0}")]
    ConstraintViolation(String),

    #[error("numerical failure: {message} at parameters {params:?}")]
    NumericalFailure { message: String, params: Vec<f64> },

    #[error("zero variance: all values are equal")]
    ZeroVariance,

    #[error("insufficient length: need more than {needed} values, got {got}")]
    InsufficientLength { needed: usize, got: usize },

    #[error("scenario set is empty")]
    EmptyScenarios,

    #[error("window {from}..={to} holds {got} observations, need at least 2")]
    WindowTooShort { from: NaiveDate, to: NaiveDate, got: usize },

    #[error("inputs are not aligned: {0}")]
    Misaligned(String),

    #[error("invalid model configuration: {0}")]
    InvalidConfig(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable name of the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::MalformedRow { .. } => "MalformedRow",
            Error::DuplicateDate(_) => "DuplicateDate",
            Error::NonFiniteValue { .. } => "NonFiniteValue",
            Error::SeriesTooShort { .. } => "SeriesTooShort",
            Error::DenominatorTooSmall { .. } => "DenominatorTooSmall",
            Error::NonpositiveVolatility { .. } => "NonpositiveVolatility",
            Error::DegenerateBase => "DegenerateBase",
            Error::DivisionByZero(_) => "DivisionByZero",
            Error::ConstraintViolation(_) => "ConstraintViolation",
            Error::NumericalFailure { .. } => "NumericalFailure",
            Error::ZeroVariance => "ZeroVariance",
            Error::InsufficientLength { .. } => "InsufficientLength",
            Error::EmptyScenarios => "EmptyScenarios",
            Error::WindowTooShort { .. } => "WindowTooShort",
            Error::Misaligned(_) => "Misaligned",
            Error::InvalidConfig(_) => "InvalidConfig",
            Error::Io(_) => "Io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
