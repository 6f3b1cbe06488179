use mq_core::CoreError;
use mq_sd::SdError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum KbError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Sd(#[from] SdError),
    #[error("initialization rejected: {0}")]
    Initialization(String),
    #[error("propagation diverged at t = {last_stable_time}: {message}")]
    Propagation { last_stable_time: f64, message: String },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed checkpoint: {0}")]
    Checkpoint(String),
}
