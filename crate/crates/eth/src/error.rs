use mq_core::CoreError;
use mq_sd::SdError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EthError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Sd(#[from] SdError),
    #[error("thermo table rejected: {0}")]
    TableRejected(String),
    #[error("requested point outside table range: {0}")]
    Range(String),
    #[error("grid too coarse: {0}")]
    Resolution(String),
    #[error("domain error: {0}")]
    Domain(String),
}
