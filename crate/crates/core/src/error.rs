use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid level r = {0}: r must be a positive multiple of 4")]
    InvalidLevel(i64),

    #[error("invalid color: {0}")]
    InvalidColor(String),

    #[error("parse error at event {index}: {message}")]
    Parse { index: usize, message: String },

    #[error("malformed diagram at event {index}: {message}")]
    Malformed { index: usize, message: String },

    #[error("not renormalizable: {0}")]
    NotRenormalizable(String),

    #[error("cannot open component {0}: {1}")]
    InvalidOpening(usize, String),

    #[error("not a scalar: {0}")]
    NotScalar(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("no spin structure: obstruction in row {row}")]
    NoSolution { row: usize },

    #[error("presentation is not computable: {0}")]
    NotComputable(String),

    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    #[error("move precondition failed: {0}")]
    Move(String),

    #[error("disc boundary has integral spin value; birth move needs a non-integral disc")]
    InadmissibleDisc,

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
