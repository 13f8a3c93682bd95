//! End-to-end behaviour of the `semloc` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(rel)
}

fn semloc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semloc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    assert!(
        output.status.success(),
        "exit {:?}, stderr: {}",
        output.status.code(),
        String::from_utf8_lossy(&output.stderr)
    );
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn path(rel: &str) -> String {
    fixture(rel).to_str().unwrap().to_owned()
}

#[test]
fn eval_study_single_combination_prints_counts_and_rate() {
    let out = semloc(&[
        "eval",
        "study",
        "--data",
        &path("study"),
        "--semantics",
        "edge",
        "--r2",
        "--include-nr",
    ]);
    let stdout = stdout_of(&out);
    assert!(stdout.contains("45/50"), "{stdout}");
    assert!(stdout.contains("90.0%"), "{stdout}");
}

#[test]
fn eval_study_lists_all_eight_combinations_by_default() {
    let out = semloc(&["eval", "study", "--data", &path("study")]);
    let stdout = stdout_of(&out);
    assert_eq!(stdout.lines().count(), 8, "{stdout}");
    assert!(stdout.contains("69/155"), "{stdout}");
    assert!(stdout.contains("45/49"), "{stdout}");
}

#[test]
fn eval_study_json_has_stable_field_names() {
    let out = semloc(&[
        "--format",
        "json",
        "eval",
        "study",
        "--data",
        &path("study"),
        "--semantics",
        "edge",
        "--r2",
        "--include-nr",
    ]);
    let value: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    let line = &value.as_array().unwrap()[0];
    assert_eq!(line["semantics"], "edge_to_edge");
    assert_eq!(line["nearest_only"], true);
    assert_eq!(line["include_nr"], true);
    assert_eq!(line["matches"], 45);
    assert_eq!(line["comparisons"], 50);
    assert_eq!(line["rate_pct"], 90.0);
}

#[test]
fn r2_flag_requires_semantics() {
    let out = semloc(&["eval", "study", "--data", &path("study"), "--r2"]);
    assert!(!out.status.success());
}

#[test]
fn locate_describes_keys_from_the_kitchen_matrix() {
    let out = semloc(&[
        "locate",
        "keys",
        "--distances",
        &path("study/kitchen_distances.json"),
        "--sod",
        &path("kitchen/kitchen_sod.json"),
    ]);
    assert_eq!(
        stdout_of(&out).trim(),
        "in the kitchen, very close to the kettle, between the coffee maker and the kettle"
    );
}

#[test]
fn locate_json_output_is_structured() {
    let out = semloc(&[
        "--format",
        "json",
        "locate",
        "keys",
        "--distances",
        &path("study/kitchen_distances.json"),
        "--sod",
        &path("kitchen/kitchen_sod.json"),
    ]);
    let value: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(value["subject"], "keys");
    assert!(value["fragments"].as_array().unwrap().len() >= 2);
}

#[test]
fn locate_unknown_target_exits_two() {
    let out = semloc(&[
        "locate",
        "toaster",
        "--distances",
        &path("study/kitchen_distances.json"),
        "--sod",
        &path("kitchen/kitchen_sod.json"),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error:"));
}

#[test]
fn missing_fixture_file_exits_two() {
    let out = semloc(&["eval", "study", "--data", "/nonexistent/study"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("error:"), "{stderr}");
    assert!(stderr.contains("nonexistent"), "{stderr}");
}

#[test]
fn simulate_zero_steps_emits_single_entry_trace() {
    let out = semloc(&[
        "simulate",
        "rail",
        "--scenario",
        &path("sim/scenario_rail.json"),
        "--seed",
        "1",
        "--steps",
        "0",
    ]);
    let stdout = stdout_of(&out);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines.len(), 2, "header plus one entry: {stdout}");
    let header: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
    assert_eq!(header["record"], "header");
    assert_eq!(header["seed"], 1);
    let entry: serde_json::Value = serde_json::from_str(lines[1]).unwrap();
    assert_eq!(entry["record"], "entry");
    assert_eq!(entry["index"], 0);
}

#[test]
fn simulate_is_deterministic_per_seed() {
    let run = |seed: &str| {
        stdout_of(&semloc(&[
            "simulate",
            "rail",
            "--scenario",
            &path("sim/scenario_rail.json"),
            "--seed",
            seed,
            "--steps",
            "2",
        ]))
    };
    assert_eq!(run("9"), run("9"));
    assert_ne!(run("9"), run("10"));
}

#[test]
fn simulate_then_eval_alignment_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.jsonl");
    let out = semloc(&[
        "simulate",
        "rail",
        "--scenario",
        &path("sim/scenario_alignment.json"),
        "--noise",
        &path("sim/noise_zero.json"),
        "--seed",
        "4",
        "--out",
        trace.to_str().unwrap(),
    ]);
    stdout_of(&out);

    let report = semloc(&[
        "eval",
        "alignment",
        "--trace",
        trace.to_str().unwrap(),
        "--scenario",
        &path("sim/scenario_alignment.json"),
    ]);
    let stdout = stdout_of(&report);
    assert!(stdout.contains("pair anchor_b-anchor_c"), "{stdout}");
    assert!(stdout.contains("positions=29"), "{stdout}");
    // Noise-free collinear geometry: everything lands in the small-angle
    // bucket and both variants call every sample aligned.
    assert!(
        stdout.contains("below  original  samples=29000 aligned=29000"),
        "{stdout}"
    );
    assert!(
        stdout.contains("below  revised   samples=29000 aligned=29000"),
        "{stdout}"
    );
}

#[test]
fn serve_replay_prints_published_descriptions() {
    let out = semloc(&[
        "serve",
        "--sod",
        &path("kitchen/kitchen_sod.json"),
        "--replay",
        &path("kitchen/session_kitchen_keys.jsonl"),
    ]);
    let stdout = stdout_of(&out);
    assert!(
        stdout.contains(
            "spd/keys  in the kitchen, very close to the kettle, \
             between the coffee maker and the kettle"
        ),
        "{stdout}"
    );
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("6 ingested, 0 rejected"), "{stderr}");
}

#[test]
fn config_show_prints_defaults_and_accepts_a_file() {
    let defaults: serde_json::Value =
        serde_json::from_str(&stdout_of(&semloc(&["config", "show"]))).unwrap();
    assert_eq!(defaults["thresholds"]["very_close_max_m"], 0.3);
    assert_eq!(defaults["staleness_s"], 60.0);

    let from_file: serde_json::Value = serde_json::from_str(&stdout_of(&semloc(&[
        "config",
        "show",
        "--config",
        &path("engine/engine_config.json"),
    ])))
    .unwrap();
    assert_eq!(from_file, defaults, "fixture spells out the defaults");
}
