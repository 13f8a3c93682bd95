//! Ranging error model.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::SimError;

/// Distance-dependent systematic error, in metres (negative values model
/// underestimation).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BiasModel {
    /// No systematic error.
    None,
    /// Linear underestimation that sets in below `onset_m` and grows as
    /// the true distance shrinks: `bias(d) = -max(0, onset_m - d) * slope`.
    ShortRangeLinear { onset_m: f64, slope: f64 },
}

impl BiasModel {
    pub fn bias_at(&self, true_distance_m: f64) -> f64 {
        match *self {
            BiasModel::None => 0.0,
            BiasModel::ShortRangeLinear { onset_m, slope } => {
                -(onset_m - true_distance_m).max(0.0) * slope
            }
        }
    }

    fn validate(&self) -> Result<(), SimError> {
        match *self {
            BiasModel::None => Ok(()),
            BiasModel::ShortRangeLinear { onset_m, slope } => {
                if onset_m.is_finite() && onset_m >= 0.0 && slope.is_finite() && slope >= 0.0 {
                    Ok(())
                } else {
                    Err(SimError::InvalidBias)
                }
            }
        }
    }
}

/// Full ranging error model: systematic bias, Gaussian jitter, and rare
/// kilometre-scale outliers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NoiseModel {
    pub bias: BiasModel,
    pub jitter_sigma_m: f64,
    pub outlier_probability: f64,
    pub outlier_magnitude_m: f64,
}

impl Default for NoiseModel {
    /// Testbed-calibrated defaults: short-range underestimation starting
    /// at 1.5 m, 2 cm jitter, one sample per thousand replaced by a
    /// 1.5 km outlier.
    fn default() -> Self {
        Self {
            bias: BiasModel::ShortRangeLinear {
                onset_m: 1.5,
                slope: 0.25,
            },
            jitter_sigma_m: 0.02,
            outlier_probability: 0.001,
            outlier_magnitude_m: 1500.0,
        }
    }
}

impl NoiseModel {
    /// Error-free model: every sample equals the true distance.
    pub fn zero() -> Self {
        Self {
            bias: BiasModel::None,
            jitter_sigma_m: 0.0,
            outlier_probability: 0.0,
            outlier_magnitude_m: 1500.0,
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        self.bias.validate()?;
        if !(self.jitter_sigma_m.is_finite() && self.jitter_sigma_m >= 0.0) {
            return Err(SimError::InvalidJitter(self.jitter_sigma_m));
        }
        if !(0.0..=1.0).contains(&self.outlier_probability) {
            return Err(SimError::InvalidOutlierProbability(
                self.outlier_probability,
            ));
        }
        if !(self.outlier_magnitude_m.is_finite() && self.outlier_magnitude_m > 0.0) {
            return Err(SimError::InvalidOutlierMagnitude(self.outlier_magnitude_m));
        }
        Ok(())
    }
}

/// Draws one simulated ranging measurement for a true distance.
///
/// Exactly two random draws happen per call, outlier check first, so a
/// seeded generator yields the same stream regardless of outcomes.
/// The returned distance is clamped at zero.
pub fn sample_ranging<R: Rng>(true_distance_m: f64, model: &NoiseModel, rng: &mut R) -> f64 {
    debug_assert!(true_distance_m >= 0.0);
    let outlier_draw: f64 = rng.random();
    let jitter = if model.jitter_sigma_m > 0.0 {
        Normal::new(0.0, model.jitter_sigma_m)
            .expect("validated sigma")
            .sample(rng)
    } else {
        // Keep the draw count fixed even when jitter is disabled.
        let _: f64 = rng.random();
        0.0
    };
    if outlier_draw < model.outlier_probability {
        return model.outlier_magnitude_m;
    }
    (true_distance_m + model.bias.bias_at(true_distance_m) + jitter).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_model_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let model = NoiseModel::zero();
        for d in [0.0, 0.4, 2.0, 6.5] {
            assert_eq!(sample_ranging(d, &model, &mut rng), d);
        }
    }

    #[test]
    fn default_bias_shape() {
        let model = NoiseModel::default();
        assert_eq!(model.bias.bias_at(2.0), 0.0);
        assert_eq!(model.bias.bias_at(1.5), 0.0);
        assert!((model.bias.bias_at(0.4) - -0.275).abs() < 1e-12);
        assert!((model.bias.bias_at(0.75) - -0.1875).abs() < 1e-12);
    }

    #[test]
    fn short_range_mean_underestimates() {
        let model = NoiseModel {
            outlier_probability: 0.0,
            ..NoiseModel::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 2000;
        let mean: f64 = (0..n)
            .map(|_| sample_ranging(0.4, &model, &mut rng))
            .sum::<f64>()
            / n as f64;
        assert!(mean < 0.4);
        assert!((mean - 0.125).abs() < 0.01);
    }

    #[test]
    fn outliers_appear_at_configured_rate() {
        let model = NoiseModel {
            outlier_probability: 0.05,
            ..NoiseModel::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 20_000;
        let outliers = (0..n)
            .filter(|_| sample_ranging(2.0, &model, &mut rng) > 1000.0)
            .count();
        let rate = outliers as f64 / n as f64;
        assert!((rate - 0.05).abs() < 0.01, "rate {rate}");
    }

    #[test]
    fn identical_seeds_identical_streams() {
        let model = NoiseModel::default();
        let draw = |seed: u64| -> Vec<f64> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..100)
                .map(|_| sample_ranging(1.0, &model, &mut rng))
                .collect()
        };
        assert_eq!(draw(42), draw(42));
        assert_ne!(draw(42), draw(43));
    }

    #[test]
    fn validation_rejects_bad_parameters() {
        let model = NoiseModel {
            jitter_sigma_m: -0.1,
            ..NoiseModel::default()
        };
        assert!(matches!(model.validate(), Err(SimError::InvalidJitter(_))));
        let model = NoiseModel {
            outlier_probability: 1.5,
            ..NoiseModel::default()
        };
        assert!(matches!(
            model.validate(),
            Err(SimError::InvalidOutlierProbability(_))
        ));
        let model = NoiseModel {
            outlier_magnitude_m: 0.0,
            ..NoiseModel::default()
        };
        assert!(matches!(
            model.validate(),
            Err(SimError::InvalidOutlierMagnitude(_))
        ));
        assert!(NoiseModel::default().validate().is_ok());
        assert!(NoiseModel::zero().validate().is_ok());
    }

    #[test]
    fn model_round_trips_through_json() {
        let model = NoiseModel::default();
        let json = serde_json::to_string(&model).unwrap();
        let back: NoiseModel = serde_json::from_str(&json).unwrap();
        assert_eq!(back, model);
    }
}
