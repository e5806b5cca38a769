use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("malformed interval ({lo}, {hi}): lower end must be below upper end")]
    MalformedInterval { lo: String, hi: String },
    #[error("scaling by zero does not produce an open set")]
    ZeroScale,
    #[error("unbounded window rejected")]
    UnboundedWindow,
    #[error("unsupported presentation: {0}")]
    Unsupported(String),
    #[error("words `{0}` and `{1}` are prefix-comparable")]
    ComparableWords(String, String),
    #[error("invalid horizons: {0}")]
    Horizons(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("inconclusive at horizon: {0}")]
    Inconclusive(String),
    #[error("certificate replay failed: {0}")]
    Replay(String),
    #[error("set is not clopen")]
    NotClopen,
}

pub type Result<T> = std::result::Result<T, Error>;
