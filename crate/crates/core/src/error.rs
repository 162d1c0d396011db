use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Operands or builders were given incompatible widths or settings.
    #[error("configuration error: {0}")]
    Config(String),

    /// An input lies outside the domain of the requested function.
    #[error("{value} is outside the domain {domain}")]
    Domain { value: String, domain: String },

    /// A checked arithmetic operation left the representable range.
    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("division by zero")]
    DivisionByZero,

    /// Malformed text input; `line` is 1-based.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Basis-state simulation was asked to run a gate it cannot apply.
    #[error("simulation mode error: {0}")]
    Mode(String),

    /// A sparse simulation grew beyond its configured term cap.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn domain(value: impl ToString, domain: impl Into<String>) -> Self {
        Error::Domain {
            value: value.to_string(),
            domain: domain.into(),
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
