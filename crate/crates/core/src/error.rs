use thiserror::Error;

/// Errors raised by the library. Every variant belongs to one of the
/// coarse classes reported by [`Error::class`], which the CLI maps onto
/// exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("line {line}: {source}")]
    Line {
        line: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("unknown node id {0}")]
    UnknownNode(usize),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("constraint violated: {0}")]
    Constraint(String),

    #[error("size guard: {0}")]
    SizeGuard(String),

    #[error("closure undefined: pattern has empty support")]
    ClosureUndefined,

    #[error("pattern is a root of the search forest and has no parent")]
    NoParent,

    #[error("i/o error: {0}")]
    Io(String),
}

/// Coarse error classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Input,
    Constraint,
    SizeGuard,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Line { source, .. } => source.class(),
            Error::Constraint(_) | Error::ClosureUndefined | Error::NoParent => {
                ErrorClass::Constraint
            }
            Error::SizeGuard(_) => ErrorClass::SizeGuard,
            Error::Parse { .. } | Error::UnknownNode(_) | Error::Argument(_) | Error::Io(_) => {
                ErrorClass::Input
            }
        }
    }

    pub(crate) fn at_line(self, line: usize) -> Error {
        Error::Line {
            line,
            source: Box::new(self),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
