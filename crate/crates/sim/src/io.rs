//! Loading scenario/noise files and streaming traces as JSON Lines.
//!
//! A trace file starts with a header record naming the scenario and seed,
//! followed by one record per rail stop. Line-oriented records keep long
//! traces appendable and diffable.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::SimError;
use crate::noise::NoiseModel;
use crate::rail::{RailScenario, RailTrace, TraceEntry};

/// Reads and validates a scenario description.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<RailScenario, SimError> {
    let text = std::fs::read_to_string(path)?;
    let scenario: RailScenario = serde_json::from_str(&text)?;
    scenario.validate()?;
    Ok(scenario)
}

/// Reads and validates a noise model description.
pub fn load_noise_model(path: impl AsRef<Path>) -> Result<NoiseModel, SimError> {
    let text = std::fs::read_to_string(path)?;
    let model: NoiseModel = serde_json::from_str(&text)?;
    model.validate()?;
    Ok(model)
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "snake_case")]
enum TraceRecord {
    Header { scenario: String, seed: u64 },
    Entry(TraceEntry),
}

/// Writes a trace as JSON Lines: a header record, then one entry per line.
pub fn write_trace(trace: &RailTrace, writer: impl Write) -> Result<(), SimError> {
    let mut out = BufWriter::new(writer);
    let header = TraceRecord::Header {
        scenario: trace.scenario.clone(),
        seed: trace.seed,
    };
    serde_json::to_writer(&mut out, &header)?;
    out.write_all(b"\n")?;
    for entry in &trace.entries {
        serde_json::to_writer(&mut out, &TraceRecord::Entry(entry.clone()))?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

/// Writes a trace to a file, replacing any existing content.
pub fn write_trace_file(trace: &RailTrace, path: impl AsRef<Path>) -> Result<(), SimError> {
    write_trace(trace, File::create(path)?)
}

/// Reads a trace previously produced by [`write_trace`].
pub fn read_trace(reader: impl std::io::Read) -> Result<RailTrace, SimError> {
    let mut lines = BufReader::new(reader).lines();
    let header_line = loop {
        match lines.next() {
            Some(line) => {
                let line = line?;
                if !line.trim().is_empty() {
                    break line;
                }
            }
            None => return Err(SimError::MissingTraceHeader),
        }
    };
    let (scenario, seed) = match serde_json::from_str(&header_line) {
        Ok(TraceRecord::Header { scenario, seed }) => (scenario, seed),
        _ => return Err(SimError::MissingTraceHeader),
    };
    let mut entries = Vec::new();
    for (offset, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        // Line 1 is the header, so records start at line 2.
        match serde_json::from_str(&line) {
            Ok(TraceRecord::Entry(entry)) => entries.push(entry),
            _ => return Err(SimError::BadTraceRecord(offset + 2)),
        }
    }
    Ok(RailTrace {
        scenario,
        seed,
        entries,
    })
}

/// Reads a trace file written by [`write_trace_file`].
pub fn read_trace_file(path: impl AsRef<Path>) -> Result<RailTrace, SimError> {
    read_trace(File::open(path)?)
}
