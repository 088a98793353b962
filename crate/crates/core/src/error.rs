use thiserror::Error;

/// Everything that can go wrong in the toolkit.
///
/// Variants fall into two classes that callers (notably the CLI) keep apart:
/// malformed or unsupported input, and refusals where the input is fine but
/// an exponential cap or memory budget would be exceeded.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("unsupported dimension: {rows} rows (only 1 or 2 rows are supported)")]
    UnsupportedDimension { rows: usize },

    #[error("refused: {what} is {requested}, cap is {cap}{}", suggestion_suffix(.suggestion))]
    Refusal {
        what: String,
        requested: u128,
        cap: u128,
        suggestion: Option<String>,
    },
}

fn suggestion_suffix(s: &Option<String>) -> String {
    match s {
        Some(s) => format!(" ({s})"),
        None => String::new(),
    }
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    pub(crate) fn refusal(what: impl Into<String>, requested: u128, cap: u128) -> Self {
        Error::Refusal {
            what: what.into(),
            requested,
            cap,
            suggestion: None,
        }
    }

    /// True for budget/cap refusals, false for bad input.
    pub fn is_refusal(&self) -> bool {
        matches!(self, Error::Refusal { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
