//! The rail scenario: a mobile node stepping past fixed nodes.

use indexmap::IndexMap;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use semloc_core::{ObjectDescriptor, ObjectId, Point3};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

use crate::clean::{filter_outlier_values, median_value, DEFAULT_MAX_PLAUSIBLE_M};
use crate::error::SimError;
use crate::noise::{sample_ranging, NoiseModel};

fn default_step_length() -> f64 {
    0.25
}

fn default_samples_per_position() -> usize {
    1000
}

fn default_rail_length() -> f64 {
    7.0
}

/// A mobile node moving in fixed steps along a straight rail, taking a
/// burst of ranging measurements to every fixed node at each stop.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RailScenario {
    pub name: String,
    pub fixed_nodes: Vec<ObjectDescriptor>,
    pub mobile_id: ObjectId,
    pub mobile_start: Point3,
    #[serde(default = "default_step_length")]
    pub step_length_m: f64,
    pub step_count: usize,
    #[serde(default = "default_samples_per_position")]
    pub samples_per_position: usize,
    pub axis: Point3,
    #[serde(default = "default_rail_length")]
    pub rail_length_m: f64,
}

impl RailScenario {
    pub fn validate(&self) -> Result<(), SimError> {
        if !(self.step_length_m.is_finite() && self.step_length_m > 0.0) {
            return Err(SimError::InvalidStepLength(self.step_length_m));
        }
        if self.samples_per_position < 1 {
            return Err(SimError::InvalidSampleCount);
        }
        let span = self.step_length_m * self.step_count as f64;
        if span > self.rail_length_m + 1e-9 {
            return Err(SimError::SpanExceedsRail {
                span_m: span,
                rail_m: self.rail_length_m,
            });
        }
        let norm = self.axis.norm();
        if (norm - 1.0).abs() > 1e-6 {
            return Err(SimError::AxisNotUnit(norm));
        }
        if self.fixed_nodes.is_empty() {
            return Err(SimError::NoFixedNodes);
        }
        let mut seen: HashSet<&ObjectId> = HashSet::new();
        for node in &self.fixed_nodes {
            node.validate()?;
            if node.centre.is_none() {
                return Err(SimError::NodeWithoutCentre(node.id.clone()));
            }
            if !seen.insert(&node.id) {
                return Err(SimError::DuplicateNodeId(node.id.clone()));
            }
        }
        if seen.contains(&self.mobile_id) {
            return Err(SimError::DuplicateNodeId(self.mobile_id.clone()));
        }
        Ok(())
    }

    /// Mobile position at a step index.
    pub fn position_at(&self, index: usize) -> Point3 {
        let offset = self.step_length_m * index as f64;
        Point3::new(
            self.mobile_start.x() + offset * self.axis.x(),
            self.mobile_start.y() + offset * self.axis.y(),
            self.mobile_start.z() + offset * self.axis.z(),
        )
    }
}

/// Measurements between the mobile and one fixed node at one position.
///
/// `samples_m` holds every raw draw; `estimate_m` is the median of the
/// plausible ones and `sample_count` how many survived the outlier cut.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeTrace {
    pub true_distance_m: f64,
    pub estimate_m: f64,
    pub sample_count: usize,
    pub samples_m: Vec<f64>,
}

/// One rail stop: the mobile position and per-node measurements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub index: usize,
    pub position: Point3,
    pub nodes: IndexMap<ObjectId, NodeTrace>,
}

/// Full scenario output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RailTrace {
    pub scenario: String,
    pub seed: u64,
    pub entries: Vec<TraceEntry>,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Seed for one (position, node) burst. Mixing the coordinates through
/// splitmix64 decorrelates bursts while keeping them reproducible, and
/// makes per-position parallelisation legal.
fn burst_seed(seed: u64, position_index: usize, node_index: usize) -> u64 {
    splitmix64(seed ^ splitmix64(((position_index as u64) << 32) | node_index as u64))
}

/// Runs the scenario: `step_count + 1` stops, one burst per fixed node per
/// stop. Identical `(scenario, model, seed)` always yield the identical
/// trace.
pub fn run_rail_scenario(
    scenario: &RailScenario,
    model: &NoiseModel,
    seed: u64,
) -> Result<RailTrace, SimError> {
    scenario.validate()?;
    model.validate()?;
    let mut entries = Vec::with_capacity(scenario.step_count + 1);
    for index in 0..=scenario.step_count {
        let position = scenario.position_at(index);
        let mut nodes = IndexMap::with_capacity(scenario.fixed_nodes.len());
        for (node_index, node) in scenario.fixed_nodes.iter().enumerate() {
            let centre = node.centre.as_ref().expect("validated");
            let true_distance_m = position.distance_to(centre);
            let mut rng = ChaCha8Rng::seed_from_u64(burst_seed(seed, index, node_index));
            let samples_m: Vec<f64> = (0..scenario.samples_per_position)
                .map(|_| sample_ranging(true_distance_m, model, &mut rng))
                .collect();
            let kept = filter_outlier_values(&samples_m, DEFAULT_MAX_PLAUSIBLE_M)?;
            let estimate_m = median_value(&kept)
                .ok_or_else(|| SimError::AllSamplesImplausible(node.id.clone()))?;
            nodes.insert(
                node.id.clone(),
                NodeTrace {
                    true_distance_m,
                    estimate_m,
                    sample_count: kept.len(),
                    samples_m,
                },
            );
        }
        entries.push(TraceEntry {
            index,
            position,
            nodes,
        });
    }
    Ok(RailTrace {
        scenario: scenario.name.clone(),
        seed,
        entries,
    })
}
