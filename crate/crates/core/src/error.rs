use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("element {elem} is not in the carrier of {semiring}")]
    Domain { elem: String, semiring: String },

    #[error("semiring mismatch: {left} vs {right}")]
    SemiringMismatch { left: String, right: String },

    #[error("index mismatch: {0}")]
    IndexMismatch(String),

    #[error("label `{0}` is not in the index set")]
    UnknownLabel(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("finite product {0} overflows the real carrier")]
    Overflow(String),

    #[error("meet of the empty set is undefined")]
    EmptyMeet,

    #[error("invalid semiring table: {0}")]
    InvalidTable(String),

    #[error("invalid semimodule: {0}")]
    InvalidModule(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
