//! Engine error type.

use semloc_core::CoreError;
use semloc_spd::SpdError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("staleness window must be positive and finite, got {0}")]
    InvalidStaleness(f64),
    #[error("debounce must be non-negative and finite, got {0}")]
    InvalidDebounce(f64),
    #[error("bus endpoint `{0}` is not understood")]
    BadBusUrl(String),
    #[error("bus error: {0}")]
    Bus(String),
    #[error("bus subscription closed")]
    BusClosed,
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Spd(#[from] SpdError),
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
