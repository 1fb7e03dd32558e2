use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("parity error: Gamma({p}/2)/Gamma({q}/2) is irrational")]
    Parity { p: u64, q: u64 },

    #[error("pole: hypergeometric lower parameter hits a nonpositive integer (m={m}, k={k})")]
    Pole { m: u64, k: u64 },

    #[error("size error: {0}")]
    Size(String),

    #[error("input error: {0}")]
    Input(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
