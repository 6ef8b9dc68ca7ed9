use thiserror::Error;

use crate::pdl::PdlError;

/// Errors raised by the game models and solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GameError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("payoffs must be finite")]
    NonFinite,
    #[error("invalid mixed strategy: {0}")]
    InvalidStrategy(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("parameter `{name}` out of range: {reason}")]
    OutOfRange { name: &'static str, reason: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Pdl(#[from] PdlError),
}
