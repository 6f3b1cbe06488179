use mq_core::CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SdError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("only q = 4 is supported by the SD kernels, got q = {0}")]
    UnsupportedModel(u32),
    #[error("no convergence after {iterations} iterations (last residual {last_residual:.3e})")]
    Convergence {
        iterations: usize,
        last_residual: f64,
        residual_history: Vec<f64>,
    },
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("root bracketing failed: {0}")]
    RootFind(String),
    #[error("decay window too short: {0}")]
    Window(String),
}
