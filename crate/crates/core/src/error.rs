use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("unknown model tag `{0}`")]
    UnknownModel(String),
    #[error("unknown heuristic `{0}`")]
    UnknownHeuristic(String),
    #[error("model tag `{tag}` cannot be used for {context}")]
    WrongModelKind { tag: String, context: &'static str },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("enumeration of {size} assignments exceeds the limit of {limit}")]
    EnumerationTooLarge { size: u128, limit: u128 },
    #[error("value {0} does not fit in a domain")]
    ValueOutOfRange(u32),
}
