use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}, column {column}: unknown symbol `{name}`")]
    UnknownSymbol {
        name: String,
        line: usize,
        column: usize,
    },
    #[error("line {line}, column {column}: `{name}` takes {expected} argument(s) but was given {found}")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
        line: usize,
        column: usize,
    },
    #[error("signature violation: {0}")]
    Signature(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("instance exceeds the size cap: {0}")]
    CapExceeded(String),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl Error {
    /// Shifts a position reported against a term fragment to file coordinates.
    pub(crate) fn relocate(self, line: usize, column_offset: usize) -> Error {
        match self {
            Error::Syntax {
                column, message, ..
            } => Error::Syntax {
                line,
                column: column + column_offset,
                message,
            },
            Error::UnknownSymbol { name, column, .. } => Error::UnknownSymbol {
                name,
                line,
                column: column + column_offset,
            },
            Error::Arity {
                name,
                expected,
                found,
                column,
                ..
            } => Error::Arity {
                name,
                expected,
                found,
                line,
                column: column + column_offset,
            },
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
