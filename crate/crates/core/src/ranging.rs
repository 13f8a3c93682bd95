//! Pairwise distance samples and aggregated estimates.

use serde::{Deserialize, Serialize};

use crate::error::CoreError;
use crate::object::ObjectId;

/// Which extent convention a distance value refers to.
///
/// Radio ranging approximates the distance between object centres; the
/// edge-to-edge convention subtracts the bounding radii so that a value of
/// zero means "the hulls touch".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceSemantics {
    InterCentre,
    EdgeToEdge,
}

/// One raw distance measurement between two objects.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RangingSample {
    pub a: ObjectId,
    pub b: ObjectId,
    /// Metres; must be positive and finite.
    pub distance_m: f64,
    /// Seconds on the producer's clock.
    pub timestamp: f64,
}

impl RangingSample {
    pub fn validate(&self) -> Result<(), CoreError> {
        if self.a == self.b {
            return Err(CoreError::SelfRanging(self.a.clone()));
        }
        if !self.distance_m.is_finite() {
            return Err(CoreError::NonFiniteDistance);
        }
        if self.distance_m <= 0.0 {
            return Err(CoreError::NegativeDistance(self.distance_m));
        }
        Ok(())
    }

    /// True when both samples measure the same unordered pair.
    pub fn same_pair(&self, other: &RangingSample) -> bool {
        (self.a == other.a && self.b == other.b) || (self.a == other.b && self.b == other.a)
    }
}

/// A distance between two objects aggregated from one or more samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RangingEstimate {
    pub a: ObjectId,
    pub b: ObjectId,
    pub distance_m: f64,
    pub sample_count: usize,
    pub semantics: DistanceSemantics,
}

impl RangingEstimate {
    pub fn validate(&self) -> Result<(), CoreError> {
        if self.a == self.b {
            return Err(CoreError::SelfRanging(self.a.clone()));
        }
        if !self.distance_m.is_finite() {
            return Err(CoreError::NonFiniteDistance);
        }
        if self.distance_m < 0.0 {
            return Err(CoreError::NegativeDistance(self.distance_m));
        }
        if self.sample_count == 0 {
            return Err(CoreError::NoSamples);
        }
        Ok(())
    }

    /// The endpoint that is not `id`, if `id` is one of the two.
    pub fn other(&self, id: &ObjectId) -> Option<&ObjectId> {
        if &self.a == id {
            Some(&self.b)
        } else if &self.b == id {
            Some(&self.a)
        } else {
            None
        }
    }
}

/// Converts an inter-centre distance to the edge-to-edge convention:
/// the centre distance minus both bounding radii, floored at zero for
/// overlapping hulls.
pub fn edge_to_edge(
    inter_centre_m: f64,
    radius_a_m: f64,
    radius_b_m: f64,
) -> Result<f64, CoreError> {
    for v in [inter_centre_m, radius_a_m, radius_b_m] {
        if !v.is_finite() {
            return Err(CoreError::NonFiniteDistance);
        }
        if v < 0.0 {
            return Err(CoreError::NegativeDistance(v));
        }
    }
    Ok((inter_centre_m - radius_a_m - radius_b_m).max(0.0))
}
