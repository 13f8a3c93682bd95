//! Replaying the recorded kitchen session through the full server stack.

use std::fs::File;
use std::io::Cursor;
use std::path::{Path, PathBuf};

use semloc_core::{FragmentKind, Sod, Spd};
use semloc_engine::{Bus, Engine, EngineConfig, LoopbackBus, Server};

const KITCHEN_KEYS: &str =
    "in the kitchen, very close to the kettle, between the coffee maker and the kettle";

fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures/kitchen")
        .join(rel)
}

fn kitchen_server(bus: LoopbackBus) -> Server<LoopbackBus> {
    let sod = Sod::from_json_file(fixture("kitchen_sod.json")).unwrap();
    let engine = Engine::new(sod, EngineConfig::default()).unwrap();
    Server::new(engine, bus)
}

#[test]
fn kitchen_session_publishes_the_final_description() {
    let bus = LoopbackBus::new();
    let inbox = bus.clone().subscribe(&["spd/#"]).unwrap();
    let mut server = kitchen_server(bus);

    let session = File::open(fixture("session_kitchen_keys.jsonl")).unwrap();
    let stats = server.replay_session(session).unwrap();
    assert_eq!(stats.ingested, 6);
    assert_eq!(stats.rejected, 0);
    assert!(stats.published >= 1);

    // Every message wears an spd topic; the ones for the mobile target
    // matter here. Fixed objects publish too as their surroundings change.
    let mut last = None;
    while let Ok(message) = inbox.try_recv() {
        assert!(message.topic.starts_with("spd/"), "{}", message.topic);
        if message.topic == "spd/keys" {
            last = Some(serde_json::from_slice::<Spd>(&message.payload).unwrap());
        }
    }
    let spd = last.unwrap();
    assert_eq!(spd.rendered, KITCHEN_KEYS);
    let kinds: Vec<FragmentKind> = spd.fragments.iter().map(|f| f.kind).collect();
    assert_eq!(
        kinds,
        [
            FragmentKind::Room,
            FragmentKind::Proximity,
            FragmentKind::Alignment
        ]
    );
}

#[test]
fn replaying_the_same_session_again_publishes_nothing() {
    let bus = LoopbackBus::new();
    let mut server = kitchen_server(bus);

    let first = server
        .replay_session(File::open(fixture("session_kitchen_keys.jsonl")).unwrap())
        .unwrap();
    assert!(first.published >= 1);

    // Identical estimates render identically, and only changes publish.
    let second = server
        .replay_session(File::open(fixture("session_kitchen_keys.jsonl")).unwrap())
        .unwrap();
    assert_eq!(second.ingested, 6);
    assert_eq!(second.published, 0);
}

#[test]
fn malformed_lines_are_rejected_without_stopping_the_replay() {
    let bus = LoopbackBus::new();
    let mut server = kitchen_server(bus);

    let mut session = std::fs::read_to_string(fixture("session_kitchen_keys.jsonl")).unwrap();
    session.insert_str(0, "not json\n\n");
    session
        .push_str("{\"a\": \"keys\", \"b\": \"keys\", \"distance_m\": 1.0, \"timestamp\": 7.0}\n");

    let stats = server.replay_session(Cursor::new(session)).unwrap();
    assert_eq!(stats.ingested, 6, "the six good lines still land");
    assert_eq!(stats.rejected, 2, "garbage and self-ranging are dropped");
    assert!(stats.published >= 1);
}

#[test]
fn replay_matches_a_bare_engine_evaluation() {
    let bus = LoopbackBus::new();
    let inbox = bus.clone().subscribe(&["spd/keys"]).unwrap();
    let mut server = kitchen_server(bus);
    server
        .replay_session(File::open(fixture("session_kitchen_keys.jsonl")).unwrap())
        .unwrap();
    let published: Spd = serde_json::from_slice(&inbox.try_iter().last().unwrap().payload).unwrap();

    let sod = Sod::from_json_file(fixture("kitchen_sod.json")).unwrap();
    let mut engine = Engine::new(sod, EngineConfig::default()).unwrap();
    let session = std::fs::read_to_string(fixture("session_kitchen_keys.jsonl")).unwrap();
    for line in session.lines() {
        engine.ingest_payload(line.as_bytes());
    }
    assert_eq!(engine.rejected_count(), 0);
    let offline = engine.evaluate(&"keys".into()).unwrap();
    assert_eq!(offline, published);
}
