//! Minimal publish/subscribe abstraction with an in-process loopback.
//!
//! The engine only ever talks to this trait; transports (the loopback here,
//! MQTT in the optional adapter) stay interchangeable. Subscriptions hand
//! messages over through an ordered queue, so the consuming loop sees them
//! serially no matter how many transport threads deliver.

use std::sync::mpsc::{Receiver, Sender};
use std::sync::{Arc, Mutex};

use semloc_core::ObjectId;

use crate::error::EngineError;

/// Topic carrying ranging payloads; ids appear as levels for routing only,
/// the payload is authoritative.
pub fn ranging_topic(a: &ObjectId, b: &ObjectId) -> String {
    format!("ranging/{a}/{b}")
}

/// Topic an object's descriptions are published on.
pub fn spd_topic(id: &ObjectId) -> String {
    format!("spd/{id}")
}

/// Wildcard matching every ranging message.
pub const RANGING_PATTERN: &str = "ranging/#";

/// Topic carrying engine configuration updates.
pub const CONFIG_TOPIC: &str = "engine/config";

/// One delivered message.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BusMessage {
    pub topic: String,
    pub payload: Vec<u8>,
}

/// Publish/subscribe endpoint. `subscribe` returns a queue that yields every
/// message matching any of the patterns; a closed queue signals that the
/// transport dropped the subscription and the caller should resubscribe.
pub trait Bus: Send {
    fn publish(&mut self, topic: &str, payload: &[u8]) -> Result<(), EngineError>;
    fn subscribe(&mut self, patterns: &[&str]) -> Result<Receiver<BusMessage>, EngineError>;
}

/// Standard topic-filter matching: `+` matches one level, a trailing `#`
/// matches any remainder (including none).
pub fn topic_matches(pattern: &str, topic: &str) -> bool {
    let mut pattern_levels = pattern.split('/');
    let mut topic_levels = topic.split('/');
    loop {
        match (pattern_levels.next(), topic_levels.next()) {
            (Some("#"), _) => return true,
            (Some("+"), Some(_)) => {}
            (Some(p), Some(t)) if p == t => {}
            (None, None) => return true,
            _ => return false,
        }
    }
}

struct Subscription {
    patterns: Vec<String>,
    tx: Sender<BusMessage>,
}

#[derive(Default)]
struct LoopbackState {
    subs: Vec<Subscription>,
}

/// In-process bus: every clone is a handle onto the same broker state.
#[derive(Clone, Default)]
pub struct LoopbackBus {
    state: Arc<Mutex<LoopbackState>>,
}

impl LoopbackBus {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn subscription_count(&self) -> usize {
        self.state.lock().expect("loopback lock").subs.len()
    }

    /// Drops every live subscription, as a broker restart would.
    pub fn drop_subscriptions(&self) {
        self.state.lock().expect("loopback lock").subs.clear();
    }
}

impl Bus for LoopbackBus {
    fn publish(&mut self, topic: &str, payload: &[u8]) -> Result<(), EngineError> {
        let mut state = self.state.lock().expect("loopback lock");
        // Deliver to matching subscriptions; prune any whose receiver died.
        state.subs.retain(|sub| {
            if !sub.patterns.iter().any(|p| topic_matches(p, topic)) {
                return true;
            }
            sub.tx
                .send(BusMessage {
                    topic: topic.to_owned(),
                    payload: payload.to_vec(),
                })
                .is_ok()
        });
        Ok(())
    }

    fn subscribe(&mut self, patterns: &[&str]) -> Result<Receiver<BusMessage>, EngineError> {
        let (tx, rx) = std::sync::mpsc::channel();
        let mut state = self.state.lock().expect("loopback lock");
        state.subs.push(Subscription {
            patterns: patterns.iter().map(|p| (*p).to_owned()).collect(),
            tx,
        });
        Ok(rx)
    }
}
