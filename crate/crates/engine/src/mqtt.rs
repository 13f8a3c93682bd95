//! Thin MQTT 3.1.1 binding for the [`Bus`] trait (QoS 0).
//!
//! A pump thread drives the rumqttc event loop: incoming publishes are
//! forwarded into the subscriber queue, connection acknowledgements replay
//! the subscription set (so broker restarts restore routing), and transport
//! errors back off exponentially up to a bound.

use std::sync::mpsc::{Receiver, Sender};
use std::sync::{Arc, Mutex};
use std::time::Duration;

use rumqttc::{Client, Event, Incoming, MqttOptions, QoS};

use crate::bus::{Bus, BusMessage};
use crate::error::EngineError;

const PUMP_CAPACITY: usize = 256;
const BACKOFF_MIN: Duration = Duration::from_millis(250);
const BACKOFF_MAX: Duration = Duration::from_secs(8);

/// Splits `mqtt://host:port`, `host:port` or bare `host` (port 1883).
pub fn parse_bus_url(url: &str) -> Result<(String, u16), EngineError> {
    let trimmed = url.strip_prefix("mqtt://").unwrap_or(url);
    if trimmed.is_empty() || trimmed.contains('/') {
        return Err(EngineError::BadBusUrl(url.to_owned()));
    }
    match trimmed.rsplit_once(':') {
        None => Ok((trimmed.to_owned(), 1883)),
        Some((host, port)) => {
            if host.is_empty() {
                return Err(EngineError::BadBusUrl(url.to_owned()));
            }
            let port: u16 = port
                .parse()
                .map_err(|_| EngineError::BadBusUrl(url.to_owned()))?;
            Ok((host.to_owned(), port))
        }
    }
}

#[derive(Default)]
struct Shared {
    /// Live subscriber queue, if any; replaced on resubscribe.
    outbox: Option<Sender<BusMessage>>,
    /// Patterns to (re)establish on every connection acknowledgement.
    patterns: Vec<String>,
}

/// MQTT-backed bus endpoint.
pub struct MqttBus {
    client: Client,
    shared: Arc<Mutex<Shared>>,
}

impl MqttBus {
    /// Connects and starts the pump thread. The thread runs for the life
    /// of the process; it reconnects on its own and parks cheaply when the
    /// subscriber side is gone.
    pub fn connect(url: &str, client_id: &str) -> Result<Self, EngineError> {
        let (host, port) = parse_bus_url(url)?;
        let mut options = MqttOptions::new(client_id, host, port);
        options.set_keep_alive(Duration::from_secs(5));
        let (client, mut connection) = Client::new(options, PUMP_CAPACITY);
        let shared = Arc::new(Mutex::new(Shared::default()));

        let pump_shared = shared.clone();
        let pump_client = client.clone();
        std::thread::Builder::new()
            .name("mqtt-pump".to_owned())
            .spawn(move || {
                let mut backoff = BACKOFF_MIN;
                for event in connection.iter() {
                    match event {
                        Ok(Event::Incoming(Incoming::Publish(publish))) => {
                            let mut shared = pump_shared.lock().expect("mqtt lock");
                            let dead = shared.outbox.as_ref().is_some_and(|tx| {
                                tx.send(BusMessage {
                                    topic: publish.topic.clone(),
                                    payload: publish.payload.to_vec(),
                                })
                                .is_err()
                            });
                            if dead {
                                shared.outbox = None;
                            }
                        }
                        Ok(Event::Incoming(Incoming::ConnAck(_))) => {
                            backoff = BACKOFF_MIN;
                            let patterns = pump_shared.lock().expect("mqtt lock").patterns.clone();
                            for pattern in patterns {
                                if let Err(err) = pump_client.subscribe(&pattern, QoS::AtMostOnce) {
                                    log::warn!("resubscribe to {pattern} failed: {err}");
                                }
                            }
                        }
                        Ok(_) => {}
                        Err(err) => {
                            log::warn!("mqtt connection error: {err}; retrying in {backoff:?}");
                            std::thread::sleep(backoff);
                            backoff = (backoff * 2).min(BACKOFF_MAX);
                        }
                    }
                }
            })?;

        Ok(Self { client, shared })
    }
}

impl Bus for MqttBus {
    fn publish(&mut self, topic: &str, payload: &[u8]) -> Result<(), EngineError> {
        self.client
            .publish(topic, QoS::AtMostOnce, false, payload)
            .map_err(|err| EngineError::Bus(err.to_string()))
    }

    fn subscribe(&mut self, patterns: &[&str]) -> Result<Receiver<BusMessage>, EngineError> {
        let (tx, rx) = std::sync::mpsc::channel();
        {
            let mut shared = self.shared.lock().expect("mqtt lock");
            shared.outbox = Some(tx);
            for pattern in patterns {
                let pattern = (*pattern).to_owned();
                if !shared.patterns.contains(&pattern) {
                    shared.patterns.push(pattern);
                }
            }
        }
        for pattern in patterns {
            self.client
                .subscribe(*pattern, QoS::AtMostOnce)
                .map_err(|err| EngineError::Bus(err.to_string()))?;
        }
        Ok(rx)
    }
}
