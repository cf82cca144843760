use std::fmt;

use crate::formula::Var;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Location of a syntax error inside a text input, both 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Location {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("syntax error at {location}: {message}")]
    Syntax { location: Location, message: String },

    #[error("variable {0} is not bound by the assignment")]
    UnboundVariable(Var),

    #[error("{what} is {size}, which exceeds the cap of {cap}")]
    CapExceeded {
        what: &'static str,
        size: String,
        cap: String,
    },

    #[error("map is not admissible: {0}")]
    Inadmissible(String),

    #[error("strategy does not match the prefix: {0}")]
    ShapeMismatch(String),

    #[error("invalid input: {0}")]
    Validation(String),

    #[error("breaker was built for a different prefix")]
    PrefixMismatch,

    #[error("generator maps variable {0} to a non-literal")]
    NonLiteralImage(Var),

    #[error("infeasible parameters: {0}")]
    Infeasible(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn cap(what: &'static str, size: impl fmt::Display, cap: impl fmt::Display) -> Self {
        Error::CapExceeded {
            what,
            size: size.to_string(),
            cap: cap.to_string(),
        }
    }

    pub(crate) fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            location: Location { line, column },
            message: message.into(),
        }
    }

    /// True for the "size error" family, which callers usually report
    /// differently from malformed input.
    pub fn is_cap_exceeded(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }
}
