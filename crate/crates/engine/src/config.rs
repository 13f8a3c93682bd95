//! Engine configuration: estimator settings plus runtime policy.

use std::path::Path;

use semloc_core::DistanceSemantics;
use semloc_spd::SpdConfig;
use serde::{Deserialize, Serialize};

use crate::error::EngineError;

fn default_semantics() -> DistanceSemantics {
    DistanceSemantics::EdgeToEdge
}

fn default_staleness() -> f64 {
    60.0
}

fn default_debounce() -> f64 {
    0.2
}

/// Complete engine configuration. The estimator settings are flattened so a
/// config file can set `thresholds`, `templates` etc. at the top level next
/// to the runtime fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EngineConfig {
    #[serde(flatten)]
    pub spd: SpdConfig,
    /// Convention incoming distance measurements follow.
    #[serde(default = "default_semantics")]
    pub semantics: DistanceSemantics,
    /// Cache entries older than this many seconds are ignored.
    #[serde(default = "default_staleness")]
    pub staleness_s: f64,
    /// Wait this long after a target turns dirty before re-evaluating, so
    /// measurement bursts collapse into one evaluation.
    #[serde(default = "default_debounce")]
    pub debounce_s: f64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            spd: SpdConfig::default(),
            semantics: default_semantics(),
            staleness_s: default_staleness(),
            debounce_s: default_debounce(),
        }
    }
}

impl EngineConfig {
    pub fn validate(&self) -> Result<(), EngineError> {
        self.spd.validate()?;
        if !(self.staleness_s.is_finite() && self.staleness_s > 0.0) {
            return Err(EngineError::InvalidStaleness(self.staleness_s));
        }
        if !(self.debounce_s.is_finite() && self.debounce_s >= 0.0) {
            return Err(EngineError::InvalidDebounce(self.debounce_s));
        }
        Ok(())
    }

    pub fn from_json_str(json: &str) -> Result<Self, EngineError> {
        let config: Self = serde_json::from_str(json)?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self, EngineError> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let config = EngineConfig::default();
        config.validate().unwrap();
        assert_eq!(config.semantics, DistanceSemantics::EdgeToEdge);
        assert_eq!(config.staleness_s, 60.0);
        assert_eq!(config.debounce_s, 0.2);
        assert!(config.spd.nearest_only);
    }

    #[test]
    fn empty_object_parses_to_defaults() {
        let config = EngineConfig::from_json_str("{}").unwrap();
        assert_eq!(config, EngineConfig::default());
    }

    #[test]
    fn estimator_fields_sit_at_top_level() {
        let config = EngineConfig::from_json_str(
            r#"{
                "semantics": "inter_centre",
                "staleness_s": 30,
                "nearest_only": false,
                "thresholds": {"very_close_max_m": 0.5}
            }"#,
        )
        .unwrap();
        assert_eq!(config.semantics, DistanceSemantics::InterCentre);
        assert_eq!(config.staleness_s, 30.0);
        assert!(!config.spd.nearest_only);
        assert_eq!(config.spd.thresholds.very_close_max_m, 0.5);
        assert_eq!(config.spd.thresholds.near_max_m, 0.6);
    }

    #[test]
    fn bad_runtime_values_rejected() {
        assert!(matches!(
            EngineConfig::from_json_str(r#"{"staleness_s": 0}"#),
            Err(EngineError::InvalidStaleness(_))
        ));
        assert!(matches!(
            EngineConfig::from_json_str(r#"{"debounce_s": -0.1}"#),
            Err(EngineError::InvalidDebounce(_))
        ));
        // Estimator validation still applies through the flattened field.
        assert!(
            EngineConfig::from_json_str(r#"{"thresholds": {"very_close_max_m": 0.9}}"#).is_err()
        );
    }

    #[test]
    fn round_trips_through_json() {
        let config = EngineConfig::default();
        let json = serde_json::to_string(&config).unwrap();
        let back = EngineConfig::from_json_str(&json).unwrap();
        assert_eq!(back, config);
    }
}
