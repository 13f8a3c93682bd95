//! Event-driven localisation engine.
//!
//! Ranging producers publish pairwise distance messages on a bus; this
//! crate maintains the latest estimate per object pair, re-runs the
//! description estimators for affected objects, and publishes a semantic
//! position description whenever an object's rendered description changes.
//!
//! The engine core is transport-agnostic: it speaks to a tiny
//! publish/subscribe [`Bus`] trait. An in-process [`LoopbackBus`] backs
//! tests and offline replays; an MQTT adapter (feature `mqtt`, enabled by
//! default) binds the same engine to a real broker.

pub mod bus;
pub mod cache;
pub mod config;
pub mod engine;
pub mod error;
#[cfg(feature = "mqtt")]
pub mod mqtt;
pub mod serve;

pub use bus::{
    ranging_topic, spd_topic, topic_matches, Bus, BusMessage, LoopbackBus, CONFIG_TOPIC,
    RANGING_PATTERN,
};
pub use cache::{DistanceCache, PairKey};
pub use config::EngineConfig;
pub use engine::{Engine, IngestOutcome, RangingMessage};
pub use error::EngineError;
#[cfg(feature = "mqtt")]
pub use mqtt::{parse_bus_url, MqttBus};
pub use serve::{ReplayStats, Server};
