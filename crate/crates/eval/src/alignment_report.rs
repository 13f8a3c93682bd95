//! Per-sample alignment scoring of a simulator trace against ground truth.
//!
//! A rail trace records, at every stop, a burst of noisy distance samples
//! to each fixed node. For a chosen node pair (B, C) the true geometry is
//! known exactly, so each stop lands in one of three buckets by its true
//! base angles, and every sample pair is scored against what a correct
//! decision would be for that bucket: not aligned when a real angle is
//! over the threshold, aligned when the true angles sit at or below 90%
//! of it. The narrow band in between is reported but counted as neither
//! right nor wrong by callers that only care about the outer buckets.

use semloc_core::ObjectId;
use semloc_sim::{RailScenario, RailTrace};
use semloc_spd::{
    alignment_original, alignment_revised, triangle_angles, AlignmentConfig, AlignmentVerdict,
    AngleOutcome,
};
use serde::Serialize;

use crate::error::EvalError;

/// Where a stop's true geometry falls relative to the angle threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Bucket {
    /// Max true angle above the threshold: the pair is genuinely not
    /// aligned and any aligned verdict is a false positive.
    Above,
    /// Max true angle within 10% under the threshold: too close to call.
    Near,
    /// Max true angle at or below 90% of the threshold: genuinely aligned.
    Below,
}

impl Bucket {
    pub fn of(max_angle_deg: f64, threshold_deg: f64) -> Bucket {
        if max_angle_deg > threshold_deg {
            Bucket::Above
        } else if max_angle_deg > 0.9 * threshold_deg {
            Bucket::Near
        } else {
            Bucket::Below
        }
    }
}

/// Verdict tallies for one variant within one bucket.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct VerdictCounts {
    pub aligned: usize,
    pub not_aligned: usize,
    pub undecidable: usize,
}

impl VerdictCounts {
    fn add(&mut self, verdict: AlignmentVerdict) {
        match verdict {
            AlignmentVerdict::Aligned => self.aligned += 1,
            AlignmentVerdict::NotAligned => self.not_aligned += 1,
            AlignmentVerdict::Undecidable => self.undecidable += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.aligned + self.not_aligned + self.undecidable
    }

    /// Fraction of verdicts that were correct for the bucket, where
    /// `Above` wants not-aligned and the other buckets want aligned.
    pub fn success_rate(&self, bucket: Bucket) -> f64 {
        let good = match bucket {
            Bucket::Above => self.not_aligned,
            Bucket::Near | Bucket::Below => self.aligned,
        };
        good as f64 / self.total() as f64
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct BucketStats {
    pub samples: usize,
    pub original: VerdictCounts,
    pub revised: VerdictCounts,
}

#[derive(Debug, Clone, Serialize)]
pub struct AlignmentReport {
    pub pair: (ObjectId, ObjectId),
    pub separation_m: f64,
    pub threshold_deg: f64,
    pub positions: usize,
    /// Sample pairs dropped before scoring: either stream implausibly
    /// long, or non-positive.
    pub removed: usize,
    pub above: BucketStats,
    pub near: BucketStats,
    pub below: BucketStats,
}

impl AlignmentReport {
    pub fn bucket(&self, bucket: Bucket) -> &BucketStats {
        match bucket {
            Bucket::Above => &self.above,
            Bucket::Near => &self.near,
            Bucket::Below => &self.below,
        }
    }

    fn bucket_mut(&mut self, bucket: Bucket) -> &mut BucketStats {
        match bucket {
            Bucket::Above => &mut self.above,
            Bucket::Near => &mut self.near,
            Bucket::Below => &mut self.below,
        }
    }

    pub fn scored_samples(&self) -> usize {
        self.above.samples + self.near.samples + self.below.samples
    }
}

/// Scores every sample pair of `trace` for the node pair `(b, c)`.
///
/// The scenario provides the exact node positions, so the base length and
/// the true angles at every stop come from geometry, not from samples.
pub fn alignment_report(
    trace: &RailTrace,
    scenario: &RailScenario,
    b: &ObjectId,
    c: &ObjectId,
    config: &AlignmentConfig,
    max_plausible_m: f64,
) -> Result<AlignmentReport, EvalError> {
    scenario.validate()?;
    config.validate()?;
    let centre_of = |id: &ObjectId| {
        scenario
            .fixed_nodes
            .iter()
            .find(|n| &n.id == id)
            .ok_or_else(|| EvalError::MissingGroundTruth(id.clone()))?
            .centre
            .ok_or_else(|| EvalError::NodeWithoutCentre(id.clone()))
    };
    let separation_m = centre_of(b)?.distance_to(&centre_of(c)?);

    let mut report = AlignmentReport {
        pair: (b.clone(), c.clone()),
        separation_m,
        threshold_deg: config.angle_threshold_deg,
        positions: trace.entries.len(),
        removed: 0,
        above: BucketStats::default(),
        near: BucketStats::default(),
        below: BucketStats::default(),
    };

    for entry in &trace.entries {
        let node_b = entry
            .nodes
            .get(b)
            .ok_or_else(|| EvalError::MissingGroundTruth(b.clone()))?;
        let node_c = entry
            .nodes
            .get(c)
            .ok_or_else(|| EvalError::MissingGroundTruth(c.clone()))?;
        if node_b.samples_m.len() != node_c.samples_m.len() {
            return Err(EvalError::RaggedSamples {
                index: entry.index,
                a: node_b.samples_m.len(),
                b: node_c.samples_m.len(),
            });
        }

        // True base angles from exact distances; collinear stops recover
        // angles of exactly zero through the clamped boundary.
        let bucket =
            match triangle_angles(separation_m, node_b.true_distance_m, node_c.true_distance_m)? {
                AngleOutcome::Valid(angles) => Bucket::of(
                    angles.at_b_deg.max(angles.at_c_deg),
                    config.angle_threshold_deg,
                ),
                AngleOutcome::InequalityViolation => {
                    return Err(EvalError::InconsistentGroundTruth { index: entry.index });
                }
            };

        let plausible = |v: f64| v > 0.0 && v <= max_plausible_m;
        for (&sample_b, &sample_c) in node_b.samples_m.iter().zip(&node_c.samples_m) {
            if !plausible(sample_b) || !plausible(sample_c) {
                report.removed += 1;
                continue;
            }
            let stats = report.bucket_mut(bucket);
            stats.samples += 1;
            stats.original.add(alignment_original(
                separation_m,
                sample_b,
                sample_c,
                config,
            )?);
            stats
                .revised
                .add(alignment_revised(separation_m, sample_b, sample_c, config)?);
        }
    }
    Ok(report)
}
