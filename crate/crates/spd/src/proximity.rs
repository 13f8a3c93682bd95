//! Threshold-based proximity classification.

use semloc_core::{ObjectId, ProximityClass, Sod, SpdFragment};

use crate::config::{PhraseTemplates, ProximityThresholds};
use crate::error::SpdError;

/// Maps a distance onto the qualitative proximity scale.
///
/// The intervals are half-open: `[0, very_close)`, `[very_close, near)`,
/// `[near, vicinity)`; anything at or beyond the vicinity bound yields
/// `None`, so every non-negative distance gets exactly one answer.
pub fn classify_proximity(
    distance_m: f64,
    thresholds: &ProximityThresholds,
) -> Result<Option<ProximityClass>, SpdError> {
    thresholds.validate()?;
    if !distance_m.is_finite() {
        return Err(SpdError::NonFiniteDistance);
    }
    if distance_m < 0.0 {
        return Err(SpdError::NegativeDistance(distance_m));
    }
    Ok(if distance_m < thresholds.very_close_max_m {
        Some(ProximityClass::VeryClose)
    } else if distance_m < thresholds.near_max_m {
        Some(ProximityClass::Near)
    } else if distance_m < thresholds.vicinity_max_m {
        Some(ProximityClass::InVicinity)
    } else {
        None
    })
}

/// Builds proximity fragments for a target against reference distances.
///
/// References are processed in ascending `(distance, id)` order. With
/// `nearest_only` (the closest-reference rule) at most one fragment is
/// produced, for the reference attaining the minimal distance; it is
/// omitted when that reference classifies as no relation.
pub fn proximity_estimator(
    target: &ObjectId,
    references: &[(ObjectId, f64)],
    sod: &Sod,
    thresholds: &ProximityThresholds,
    nearest_only: bool,
    templates: &PhraseTemplates,
) -> Result<Vec<SpdFragment>, SpdError> {
    if references.is_empty() {
        return Err(SpdError::EmptyReferences);
    }
    let mut ordered: Vec<(&ObjectId, f64)> = Vec::with_capacity(references.len());
    for (id, distance) in references {
        sod.require(id)?;
        if !distance.is_finite() {
            return Err(SpdError::NonFiniteDistance);
        }
        if *distance < 0.0 {
            return Err(SpdError::NegativeDistance(*distance));
        }
        ordered.push((id, *distance));
    }
    ordered.sort_by(|(id_a, d_a), (id_b, d_b)| d_a.total_cmp(d_b).then_with(|| id_a.cmp(id_b)));
    if nearest_only {
        ordered.truncate(1);
    }

    let mut fragments = Vec::new();
    for (id, distance) in ordered {
        if let Some(class) = classify_proximity(distance, thresholds)? {
            let text = templates.render_proximity(class, sod.label(id));
            fragments.push(SpdFragment::proximity(
                target.clone(),
                id.clone(),
                class,
                distance,
                text,
            )?);
        }
    }
    Ok(fragments)
}
