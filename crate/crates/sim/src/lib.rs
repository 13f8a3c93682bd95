//! Ranging simulation and sample hygiene.
//!
//! Real two-way-ranging hardware underestimates short distances, jitters,
//! and occasionally returns kilometre-scale garbage. This crate models all
//! three effects behind a seeded random source, replays the rail scenario
//! used to characterise them (a mobile node stepping along a straight rail
//! past fixed nodes, taking a burst of measurements at each stop), and
//! provides the outlier filter and median aggregation the rest of the
//! system applies before trusting a distance.
//!
//! Scenario runs are pure functions of `(scenario, noise model, seed)`:
//! the same inputs always produce the same trace.

pub mod clean;
pub mod error;
pub mod io;
pub mod noise;
pub mod rail;

pub use clean::{
    aggregate, filter_outlier_values, filter_outliers, median_value, DEFAULT_MAX_PLAUSIBLE_M,
};
pub use error::SimError;
pub use io::{
    load_noise_model, load_scenario, read_trace, read_trace_file, write_trace, write_trace_file,
};
pub use noise::{sample_ranging, BiasModel, NoiseModel};
pub use rail::{run_rail_scenario, NodeTrace, RailScenario, RailTrace, TraceEntry};
