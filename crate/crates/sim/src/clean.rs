//! Outlier removal and burst aggregation.

use semloc_core::{CoreError, DistanceSemantics, RangingEstimate, RangingSample};

use crate::error::SimError;

/// Anything farther than this is discarded as hardware garbage.
pub const DEFAULT_MAX_PLAUSIBLE_M: f64 = 1000.0;

/// Keeps exactly the samples with distance at or below `max_plausible_m`,
/// preserving order.
pub fn filter_outliers(
    samples: &[RangingSample],
    max_plausible_m: f64,
) -> Result<Vec<RangingSample>, SimError> {
    if !(max_plausible_m.is_finite() && max_plausible_m > 0.0) {
        return Err(SimError::InvalidMaxPlausible(max_plausible_m));
    }
    Ok(samples
        .iter()
        .filter(|s| s.distance_m <= max_plausible_m)
        .cloned()
        .collect())
}

/// [`filter_outliers`] over bare distances.
pub fn filter_outlier_values(values: &[f64], max_plausible_m: f64) -> Result<Vec<f64>, SimError> {
    if !(max_plausible_m.is_finite() && max_plausible_m > 0.0) {
        return Err(SimError::InvalidMaxPlausible(max_plausible_m));
    }
    Ok(values
        .iter()
        .copied()
        .filter(|v| *v <= max_plausible_m)
        .collect())
}

/// Median of a set of distances; `None` when empty.
pub fn median_value(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    Some(if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    })
}

/// Collapses a burst of samples for one pair into a single estimate.
///
/// The distance is the median, which shrugs off residual spikes below the
/// outlier cut. The estimate is tagged inter-centre: simulated nodes are
/// points, so the measured separation is a centre separation.
pub fn aggregate(samples: &[RangingSample]) -> Result<RangingEstimate, SimError> {
    let first = samples.first().ok_or(CoreError::NoSamples)?;
    for sample in samples {
        sample.validate()?;
        if !sample.same_pair(first) {
            return Err(SimError::MixedPairs(
                first.a.clone(),
                first.b.clone(),
                sample.a.clone(),
                sample.b.clone(),
            ));
        }
    }
    let distances: Vec<f64> = samples.iter().map(|s| s.distance_m).collect();
    let estimate = RangingEstimate {
        a: first.a.clone(),
        b: first.b.clone(),
        distance_m: median_value(&distances).expect("samples are non-empty"),
        sample_count: samples.len(),
        semantics: DistanceSemantics::InterCentre,
    };
    estimate.validate()?;
    Ok(estimate)
}
