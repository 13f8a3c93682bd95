//! Estimator configuration with compiled-in defaults.
//!
//! Every field has a default, so a config document may specify any subset.

use std::path::Path;

use semloc_core::ProximityClass;
use serde::{Deserialize, Serialize};

use crate::error::SpdError;

/// Upper bounds (exclusive) of the three proximity intervals, in metres.
/// Distances at or beyond `vicinity_max_m` classify as no relation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ProximityThresholds {
    pub very_close_max_m: f64,
    pub near_max_m: f64,
    pub vicinity_max_m: f64,
}

impl Default for ProximityThresholds {
    fn default() -> Self {
        Self {
            very_close_max_m: 0.3,
            near_max_m: 0.6,
            vicinity_max_m: 1.2,
        }
    }
}

impl ProximityThresholds {
    pub fn validate(&self) -> Result<(), SpdError> {
        let ok = self.very_close_max_m > 0.0
            && self.very_close_max_m < self.near_max_m
            && self.near_max_m < self.vicinity_max_m
            && self.vicinity_max_m.is_finite();
        if ok {
            Ok(())
        } else {
            Err(SpdError::InvalidThresholds {
                very_close_max_m: self.very_close_max_m,
                near_max_m: self.near_max_m,
                vicinity_max_m: self.vicinity_max_m,
            })
        }
    }
}

/// Which alignment decision procedure to run.
///
/// `Original` answers with the two-angle test alone and cannot decide when
/// measured distances violate the triangle inequality. `Revised` adds a
/// bounding guard and a sum rule so it always decides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlignmentVariant {
    Original,
    Revised,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AlignmentConfig {
    pub angle_threshold_deg: f64,
    pub variant: AlignmentVariant,
}

impl Default for AlignmentConfig {
    fn default() -> Self {
        Self {
            angle_threshold_deg: 30.0,
            variant: AlignmentVariant::Revised,
        }
    }
}

impl AlignmentConfig {
    pub fn validate(&self) -> Result<(), SpdError> {
        if self.angle_threshold_deg > 0.0 && self.angle_threshold_deg < 90.0 {
            Ok(())
        } else {
            Err(SpdError::InvalidAngleThreshold(self.angle_threshold_deg))
        }
    }
}

/// Majority-vote room determination parameters: vote among the `k` closest
/// neighbours, ignoring anything farther than `max_neighbour_range_m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RoomVoteConfig {
    pub k: usize,
    pub max_neighbour_range_m: f64,
}

impl Default for RoomVoteConfig {
    fn default() -> Self {
        Self {
            k: 3,
            max_neighbour_range_m: 5.0,
        }
    }
}

impl RoomVoteConfig {
    pub fn validate(&self) -> Result<(), SpdError> {
        if self.k < 1 {
            return Err(SpdError::InvalidVoteCount(self.k));
        }
        if !(self.max_neighbour_range_m.is_finite() && self.max_neighbour_range_m > 0.0) {
            return Err(SpdError::InvalidNeighbourRange(self.max_neighbour_range_m));
        }
        Ok(())
    }
}

/// Phrase templates for rendered fragments. `<label>`, `<room>`, `<a>` and
/// `<b>` are replaced literally.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct PhraseTemplates {
    pub very_close: String,
    pub near: String,
    pub in_vicinity: String,
    pub room: String,
    pub between: String,
}

impl Default for PhraseTemplates {
    fn default() -> Self {
        Self {
            very_close: "very close to the <label>".to_owned(),
            near: "near the <label>".to_owned(),
            in_vicinity: "in the vicinity of the <label>".to_owned(),
            room: "in the <room>".to_owned(),
            between: "between the <a> and the <b>".to_owned(),
        }
    }
}

impl PhraseTemplates {
    pub fn render_proximity(&self, class: ProximityClass, label: &str) -> String {
        let template = match class {
            ProximityClass::VeryClose => &self.very_close,
            ProximityClass::Near => &self.near,
            ProximityClass::InVicinity => &self.in_vicinity,
        };
        template.replace("<label>", label)
    }

    pub fn render_room(&self, room: &str) -> String {
        self.room.replace("<room>", room)
    }

    pub fn render_between(&self, label_a: &str, label_b: &str) -> String {
        self.between.replace("<a>", label_a).replace("<b>", label_b)
    }
}

/// Full estimator configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SpdConfig {
    pub thresholds: ProximityThresholds,
    pub alignment: AlignmentConfig,
    pub room_vote: RoomVoteConfig,
    /// Keep only the closest reference's proximity fragment.
    pub nearest_only: bool,
    pub templates: PhraseTemplates,
}

impl Default for SpdConfig {
    fn default() -> Self {
        Self {
            thresholds: ProximityThresholds::default(),
            alignment: AlignmentConfig::default(),
            room_vote: RoomVoteConfig::default(),
            nearest_only: true,
            templates: PhraseTemplates::default(),
        }
    }
}

impl SpdConfig {
    pub fn validate(&self) -> Result<(), SpdError> {
        self.thresholds.validate()?;
        self.alignment.validate()?;
        self.room_vote.validate()
    }

    pub fn from_json_str(json: &str) -> Result<Self, SpdError> {
        let config: Self = serde_json::from_str(json).map_err(semloc_core::CoreError::from)?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self, SpdError> {
        let json = std::fs::read_to_string(path).map_err(semloc_core::CoreError::from)?;
        Self::from_json_str(&json)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        SpdConfig::default().validate().unwrap();
        let defaults = SpdConfig::default();
        assert_eq!(defaults.thresholds.very_close_max_m, 0.3);
        assert_eq!(defaults.thresholds.near_max_m, 0.6);
        assert_eq!(defaults.thresholds.vicinity_max_m, 1.2);
        assert_eq!(defaults.alignment.angle_threshold_deg, 30.0);
        assert_eq!(defaults.alignment.variant, AlignmentVariant::Revised);
        assert_eq!(defaults.room_vote.k, 3);
        assert_eq!(defaults.room_vote.max_neighbour_range_m, 5.0);
        assert!(defaults.nearest_only);
    }

    #[test]
    fn partial_document_fills_defaults() {
        let config = SpdConfig::from_json_str(r#"{"nearest_only": false}"#).unwrap();
        assert!(!config.nearest_only);
        assert_eq!(config.thresholds, ProximityThresholds::default());
    }

    #[test]
    fn unordered_thresholds_rejected() {
        let err = SpdConfig::from_json_str(
            r#"{"thresholds": {"very_close_max_m": 0.6, "near_max_m": 0.3}}"#,
        );
        assert!(matches!(err, Err(SpdError::InvalidThresholds { .. })));
    }

    #[test]
    fn angle_threshold_bounds() {
        for bad in [0.0, -5.0, 90.0, 120.0] {
            let config = AlignmentConfig {
                angle_threshold_deg: bad,
                variant: AlignmentVariant::Revised,
            };
            assert!(config.validate().is_err(), "threshold {bad} accepted");
        }
    }

    #[test]
    fn templates_substitute() {
        let t = PhraseTemplates::default();
        assert_eq!(
            t.render_proximity(ProximityClass::Near, "television"),
            "near the television"
        );
        assert_eq!(
            t.render_proximity(ProximityClass::VeryClose, "kettle"),
            "very close to the kettle"
        );
        assert_eq!(
            t.render_proximity(ProximityClass::InVicinity, "television"),
            "in the vicinity of the television"
        );
        assert_eq!(t.render_room("livingroom"), "in the livingroom");
        assert_eq!(
            t.render_between("coffee maker", "sink"),
            "between the coffee maker and the sink"
        );
    }

    #[test]
    fn config_round_trips_through_json() {
        let config = SpdConfig::default();
        let json = serde_json::to_string(&config).unwrap();
        let back = SpdConfig::from_json_str(&json).unwrap();
        assert_eq!(back, config);
    }
}
