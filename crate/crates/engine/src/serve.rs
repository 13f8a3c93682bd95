//! Long-running service: bus in, deduplicated SPD publications out.

use std::collections::{BTreeMap, HashMap};
use std::io::BufRead;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::mpsc::{Receiver, RecvTimeoutError};
use std::time::{Duration, Instant};

use semloc_core::ObjectId;

use crate::bus::{spd_topic, Bus, BusMessage, CONFIG_TOPIC, RANGING_PATTERN};
use crate::config::EngineConfig;
use crate::engine::{Engine, IngestOutcome};
use crate::error::EngineError;

/// Poll granularity of the event loop; bounds shutdown latency.
const TICK: Duration = Duration::from_millis(25);

/// Reconnect backoff bounds.
const BACKOFF_MIN: Duration = Duration::from_millis(100);
const BACKOFF_MAX: Duration = Duration::from_secs(5);

/// Counters from a replayed session file.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct ReplayStats {
    pub ingested: u64,
    pub rejected: u64,
    pub published: u64,
}

/// Drives an [`Engine`] from a bus: ingests ranging messages, re-evaluates
/// affected targets after a debounce window, and publishes to `spd/<id>`
/// only when the rendered description changed.
pub struct Server<B: Bus> {
    engine: Engine,
    bus: B,
    /// Dirty targets with their evaluation deadline. A burst of messages
    /// for one target keeps its first deadline, so bursts cannot starve
    /// evaluation forever.
    dirty: BTreeMap<ObjectId, Instant>,
    last_rendered: HashMap<ObjectId, String>,
    published: u64,
}

impl<B: Bus> Server<B> {
    pub fn new(engine: Engine, bus: B) -> Self {
        Self {
            engine,
            bus,
            dirty: BTreeMap::new(),
            last_rendered: HashMap::new(),
            published: 0,
        }
    }

    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    pub fn published_count(&self) -> u64 {
        self.published
    }

    fn debounce(&self) -> Duration {
        Duration::from_secs_f64(self.engine.config().debounce_s)
    }

    fn mark_dirty(&mut self, id: ObjectId, now: Instant) {
        let deadline = now + self.debounce();
        self.dirty.entry(id).or_insert(deadline);
    }

    /// Routes one bus message: ranging payloads feed the cache, config
    /// messages swap the engine configuration.
    pub fn handle_message(&mut self, message: &BusMessage, now: Instant) {
        if message.topic == CONFIG_TOPIC {
            match EngineConfig::from_json_str(&String::from_utf8_lossy(&message.payload)) {
                Ok(config) => {
                    if let Err(err) = self.engine.set_config(config) {
                        log::warn!("rejected config update: {err}");
                        return;
                    }
                    log::info!("configuration reloaded from bus");
                    // Everything may render differently now.
                    let ids: Vec<ObjectId> =
                        self.engine.sod().objects().map(|o| o.id.clone()).collect();
                    for id in ids {
                        self.mark_dirty(id, now);
                    }
                }
                Err(err) => log::warn!("rejected config update: {err}"),
            }
            return;
        }
        if let IngestOutcome::Stored { a, b } = self.engine.ingest_payload(&message.payload) {
            self.mark_dirty(a, now);
            self.mark_dirty(b, now);
        }
    }

    fn publish_target(&mut self, id: &ObjectId) -> Result<(), EngineError> {
        let spd = self.engine.evaluate(id)?;
        let previous = self.last_rendered.get(id).map(String::as_str).unwrap_or("");
        if spd.rendered == previous {
            return Ok(());
        }
        self.bus
            .publish(&spd_topic(id), &serde_json::to_vec(&spd)?)?;
        self.last_rendered.insert(id.clone(), spd.rendered);
        self.published += 1;
        Ok(())
    }

    /// Evaluates and publishes every dirty target whose deadline passed.
    pub fn flush_ready(&mut self, now: Instant) -> Result<(), EngineError> {
        let due: Vec<ObjectId> = self
            .dirty
            .iter()
            .filter(|(_, deadline)| **deadline <= now)
            .map(|(id, _)| id.clone())
            .collect();
        for id in due {
            self.dirty.remove(&id);
            self.publish_target(&id)?;
        }
        Ok(())
    }

    /// Evaluates and publishes every dirty target immediately.
    pub fn flush_all(&mut self) -> Result<(), EngineError> {
        let due: Vec<ObjectId> = self.dirty.keys().cloned().collect();
        self.dirty.clear();
        for id in due {
            self.publish_target(&id)?;
        }
        Ok(())
    }

    /// Next wait: time to the earliest deadline, capped at the tick.
    fn wait_for(&self, now: Instant) -> Duration {
        self.dirty
            .values()
            .min()
            .map(|deadline| deadline.saturating_duration_since(now))
            .map_or(TICK, |until| until.min(TICK))
    }

    /// Feeds a recorded session (one ranging payload per line) through the
    /// normal ingest path, then flushes so the final state is published.
    /// Blank lines are skipped; bad lines count as rejected, matching the
    /// live contract that malformed input never stops the engine.
    pub fn replay_session(
        &mut self,
        reader: impl std::io::Read,
    ) -> Result<ReplayStats, EngineError> {
        let rejected_before = self.engine.rejected_count();
        let published_before = self.published;
        let mut ingested = 0;
        for line in std::io::BufReader::new(reader).lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let now = Instant::now();
            self.handle_message(
                &BusMessage {
                    topic: RANGING_PATTERN.to_owned(),
                    payload: line.into_bytes(),
                },
                now,
            );
            ingested += 1;
            self.flush_ready(now)?;
        }
        self.flush_all()?;
        let rejected = self.engine.rejected_count() - rejected_before;
        Ok(ReplayStats {
            ingested: ingested - rejected,
            rejected,
            published: self.published - published_before,
        })
    }

    fn subscribe(&mut self) -> Result<Receiver<BusMessage>, EngineError> {
        self.bus.subscribe(&[RANGING_PATTERN, CONFIG_TOPIC])
    }

    /// Blocking event loop. Returns cleanly once `stop` is set, after
    /// flushing pending evaluations so acknowledged inputs are not lost.
    /// A dropped subscription triggers resubscription with bounded
    /// exponential backoff.
    pub fn run(&mut self, stop: &AtomicBool) -> Result<(), EngineError> {
        let mut rx = self.subscribe()?;
        let mut backoff = BACKOFF_MIN;
        while !stop.load(Ordering::SeqCst) {
            let now = Instant::now();
            match rx.recv_timeout(self.wait_for(now)) {
                Ok(message) => {
                    let now = Instant::now();
                    self.handle_message(&message, now);
                    // A long-running server outlives transient publish
                    // trouble; the next change re-publishes anyway.
                    if let Err(err) = self.flush_ready(now) {
                        log::warn!("flush failed: {err}");
                    }
                    backoff = BACKOFF_MIN;
                }
                Err(RecvTimeoutError::Timeout) => {
                    if let Err(err) = self.flush_ready(Instant::now()) {
                        log::warn!("flush failed: {err}");
                    }
                }
                Err(RecvTimeoutError::Disconnected) => {
                    log::warn!("bus subscription lost; reconnecting in {backoff:?}");
                    std::thread::sleep(backoff);
                    backoff = (backoff * 2).min(BACKOFF_MAX);
                    if let Ok(new_rx) = self.subscribe() {
                        rx = new_rx;
                        log::info!("bus subscription re-established");
                    }
                }
            }
        }
        self.flush_all()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bus::LoopbackBus;
    use semloc_core::{ObjectDescriptor, Point3, Role, Sod};

    fn sod() -> Sod {
        Sod::from_objects(vec![
            ObjectDescriptor {
                id: "kettle".into(),
                label: "kettle".to_owned(),
                room: "kitchen".to_owned(),
                role: Role::FixedReference,
                centre: Some(Point3::new(2.0, 0.0, 0.9)),
                bounding_radius: 0.10,
            },
            ObjectDescriptor {
                id: "keys".into(),
                label: "keys".to_owned(),
                room: "kitchen".to_owned(),
                role: Role::Mobile,
                centre: None,
                bounding_radius: 0.04,
            },
        ])
        .unwrap()
    }

    fn no_debounce_config() -> EngineConfig {
        EngineConfig {
            debounce_s: 0.0,
            ..EngineConfig::default()
        }
    }

    fn ranging_line(d: f64, t: f64) -> String {
        format!(r#"{{"a": "keys", "b": "kettle", "distance_m": {d}, "timestamp": {t}}}"#)
    }

    fn server(bus: &LoopbackBus, config: EngineConfig) -> Server<LoopbackBus> {
        Server::new(Engine::new(sod(), config).unwrap(), bus.clone())
    }

    #[test]
    fn repeated_messages_publish_once() {
        let bus = LoopbackBus::new();
        let spd_rx = bus.clone().subscribe(&["spd/#"]).unwrap();
        let mut server = server(&bus, no_debounce_config());

        let now = Instant::now();
        for t in 1..=3 {
            server.handle_message(
                &BusMessage {
                    topic: "ranging/keys/kettle".to_owned(),
                    payload: ranging_line(0.16, t as f64).into_bytes(),
                },
                now,
            );
            server.flush_ready(now).unwrap();
        }

        // Dirty targets flush in id order, and identical renderings after
        // the first evaluation are suppressed: one message per endpoint.
        let first = spd_rx.try_recv().unwrap();
        assert_eq!(first.topic, "spd/kettle");
        let second = spd_rx.try_recv().unwrap();
        assert_eq!(second.topic, "spd/keys");
        let spd: semloc_core::Spd = serde_json::from_slice(&second.payload).unwrap();
        assert_eq!(spd.rendered, "in the kitchen, very close to the kettle");
        assert!(spd_rx.try_recv().is_err());
        assert_eq!(server.published_count(), 2);
    }

    #[test]
    fn changed_rendering_publishes_again() {
        let bus = LoopbackBus::new();
        let spd_rx = bus.clone().subscribe(&["spd/keys"]).unwrap();
        let mut server = server(&bus, no_debounce_config());

        let now = Instant::now();
        for (d, t) in [(0.16, 1.0), (0.45, 2.0)] {
            server.handle_message(
                &BusMessage {
                    topic: "ranging/keys/kettle".to_owned(),
                    payload: ranging_line(d, t).into_bytes(),
                },
                now,
            );
            server.flush_ready(now).unwrap();
        }

        let renderings: Vec<String> = spd_rx
            .try_iter()
            .map(|m| {
                serde_json::from_slice::<semloc_core::Spd>(&m.payload)
                    .unwrap()
                    .rendered
            })
            .collect();
        assert_eq!(
            renderings,
            [
                "in the kitchen, very close to the kettle",
                "in the kitchen, near the kettle"
            ]
        );
    }

    #[test]
    fn debounce_collapses_bursts() {
        let bus = LoopbackBus::new();
        let mut server = server(&bus, EngineConfig::default());

        let now = Instant::now();
        for t in 1..=5 {
            server.handle_message(
                &BusMessage {
                    topic: "ranging/keys/kettle".to_owned(),
                    payload: ranging_line(0.16, t as f64).into_bytes(),
                },
                now,
            );
            server.flush_ready(now).unwrap();
        }
        // Deadline (200 ms) not reached: nothing published yet.
        assert_eq!(server.published_count(), 0);
        server
            .flush_ready(now + Duration::from_millis(201))
            .unwrap();
        assert_eq!(server.published_count(), 2);
    }

    #[test]
    fn config_message_reshapes_output() {
        let bus = LoopbackBus::new();
        let spd_rx = bus.clone().subscribe(&["spd/keys"]).unwrap();
        let mut server = server(&bus, no_debounce_config());

        let now = Instant::now();
        server.handle_message(
            &BusMessage {
                topic: "ranging/keys/kettle".to_owned(),
                payload: ranging_line(0.16, 1.0).into_bytes(),
            },
            now,
        );
        server.flush_ready(now).unwrap();

        // Tighten very_close so 0.16 m now reads as plain near.
        let update = r#"{
            "debounce_s": 0.0,
            "thresholds": {"very_close_max_m": 0.1, "near_max_m": 0.6, "vicinity_max_m": 1.2}
        }"#;
        server.handle_message(
            &BusMessage {
                topic: CONFIG_TOPIC.to_owned(),
                payload: update.as_bytes().to_vec(),
            },
            now,
        );
        server.flush_ready(now).unwrap();

        let renderings: Vec<String> = spd_rx
            .try_iter()
            .map(|m| {
                serde_json::from_slice::<semloc_core::Spd>(&m.payload)
                    .unwrap()
                    .rendered
            })
            .collect();
        assert_eq!(
            renderings,
            [
                "in the kitchen, very close to the kettle",
                "in the kitchen, near the kettle"
            ]
        );
    }

    #[test]
    fn invalid_config_update_is_ignored() {
        let bus = LoopbackBus::new();
        let mut server = server(&bus, no_debounce_config());
        let before = server.engine().config().clone();
        server.handle_message(
            &BusMessage {
                topic: CONFIG_TOPIC.to_owned(),
                payload: br#"{"staleness_s": -3}"#.to_vec(),
            },
            Instant::now(),
        );
        assert_eq!(server.engine().config(), &before);
    }

    #[test]
    fn replay_publishes_final_state_matching_offline_evaluate() {
        let bus = LoopbackBus::new();
        let spd_rx = bus.clone().subscribe(&["spd/keys"]).unwrap();
        let mut server = server(&bus, EngineConfig::default());

        let session = [
            ranging_line(0.90, 1.0),
            "not a message".to_owned(),
            ranging_line(0.45, 2.0),
            ranging_line(0.16, 3.0),
        ]
        .join("\n");
        let stats = server.replay_session(session.as_bytes()).unwrap();
        assert_eq!(stats.ingested, 3);
        assert_eq!(stats.rejected, 1);

        let last = spd_rx.try_iter().last().unwrap();
        let published: semloc_core::Spd = serde_json::from_slice(&last.payload).unwrap();
        let offline = server.engine().evaluate(&"keys".into()).unwrap();
        assert_eq!(published, offline);
        assert_eq!(
            published.rendered,
            "in the kitchen, very close to the kettle"
        );
    }

    #[test]
    fn run_loop_reconnects_after_subscription_loss() {
        let bus = LoopbackBus::new();
        let spd_rx = bus.clone().subscribe(&["spd/keys"]).unwrap();
        let mut server = server(&bus, no_debounce_config());

        let stop = std::sync::Arc::new(AtomicBool::new(false));
        let stop_for_loop = stop.clone();
        let mut publisher = bus.clone();
        let handle = std::thread::spawn(move || server.run(&stop_for_loop));

        // The server's subscription plus the test's spd subscription.
        wait_until(|| bus.subscription_count() == 2);
        publisher
            .publish("ranging/keys/kettle", ranging_line(0.16, 1.0).as_bytes())
            .unwrap();
        let first = spd_rx.recv_timeout(Duration::from_secs(2)).unwrap();
        assert_eq!(first.topic, "spd/keys");

        // Simulate a broker restart; the test's own receiver dies too.
        bus.drop_subscriptions();
        wait_until(|| bus.subscription_count() == 1);
        let spd_rx = bus.clone().subscribe(&["spd/keys"]).unwrap();
        publisher
            .publish("ranging/keys/kettle", ranging_line(0.45, 2.0).as_bytes())
            .unwrap();
        let second = spd_rx.recv_timeout(Duration::from_secs(2)).unwrap();
        let spd: semloc_core::Spd = serde_json::from_slice(&second.payload).unwrap();
        assert_eq!(spd.rendered, "in the kitchen, near the kettle");

        stop.store(true, Ordering::SeqCst);
        handle.join().unwrap().unwrap();
    }

    fn wait_until(mut condition: impl FnMut() -> bool) {
        let deadline = Instant::now() + Duration::from_secs(2);
        while !condition() {
            assert!(Instant::now() < deadline, "condition not reached in time");
            std::thread::sleep(Duration::from_millis(5));
        }
    }
}
