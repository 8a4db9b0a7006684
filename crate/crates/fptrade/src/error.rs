//! Crate-wide error type. Library APIs return `Result<T>`; nothing panics on
//! malformed external input.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv line {line}: {msg}")]
    MalformedCsv { line: u64, msg: String },

    #[error("csv line {line}: non-positive price {price} for {ticker} on {date}")]
    NonPositivePrice {
        line: u64,
        ticker: String,
        date: String,
        price: f64,
    },

    #[error("universe has {got} common trading days, need at least {need} (tau + 1)")]
    CalendarTooShort { got: usize, need: usize },

    #[error("invalid universe: {0}")]
    InvalidUniverse(String),

    #[error("invalid synthetic spec: {0}")]
    InvalidSpec(String),

    #[error("correlation structure not constructible: {0}")]
    InfeasibleCorrelation(String),

    #[error("day index {t} needs {need} prior observations, series has {len}")]
    InsufficientHistory { t: usize, need: usize, len: usize },

    #[error("window has zero variance")]
    ZeroVariance,

    #[error("market return window has zero variance")]
    ZeroMarketVariance,

    #[error("denominator leg has zero beta")]
    ZeroBeta,

    #[error("invalid thresholds: {0}")]
    InvalidThresholds(String),

    #[error("invalid filter parameters: {0}")]
    InvalidFilters(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid sweep configuration: {0}")]
    InvalidConfig(String),

    #[error("evaluation day {day} outside window (universe has {len} evaluation days)")]
    DayOutOfRange { day: usize, len: usize },
}
