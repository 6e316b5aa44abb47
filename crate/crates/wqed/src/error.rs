use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate pair label k = p = {0}; the interacting-continuum state is undefined there")]
    DegenerateLabel(f64),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("packet is not yet asymptotic: {0}")]
    NotYetAsymptotic(String),

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
