use thiserror::Error;

/// Every fallible operation in the crate returns this error.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("precision exceeded: {0}")]
    Precision(String),

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("enumeration bound {bound} does not certify coverage of the query region; use at least {suggested}")]
    Coverage { bound: u64, suggested: u64 },

    #[error("budget exceeded in {what}: needs at least {required}, limit is {limit}")]
    Budget { what: String, required: usize, limit: usize },

    #[error("declared property does not hold: {0}")]
    Property(String),

    #[error("no closed form available: {0}")]
    NoClosedForm(String),
}

impl Error {
    /// Stable machine-readable code, used on stderr by the command-line tool.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "invalid-input",
            Error::Unsupported(_) => "unsupported",
            Error::Precision(_) => "precision",
            Error::Overflow(_) => "overflow",
            Error::Coverage { .. } => "coverage",
            Error::Budget { .. } => "budget",
            Error::Property(_) => "property",
            Error::NoClosedForm(_) => "no-closed-form",
        }
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. } | Error::Coverage { .. })
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
