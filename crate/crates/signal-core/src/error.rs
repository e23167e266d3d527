use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SignalError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid code shape: {0}")]
    CodeShape(String),
}

impl SignalError {
    pub fn domain(msg: impl Into<String>) -> Self {
        SignalError::Domain(msg.into())
    }
}
