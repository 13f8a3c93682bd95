//! Alignment detection from triangle angles (law of cosines).

use semloc_core::{ObjectId, Sod, SpdFragment};

use crate::config::{AlignmentConfig, AlignmentVariant, PhraseTemplates};
use crate::error::SpdError;

/// Tolerance on the cosine argument at the collinear boundary. Degenerate
/// but valid triangles built from exact distances can overshoot ±1 by a few
/// ulps; anything farther out is a genuine triangle-inequality violation.
const COS_CLAMP: f64 = 1e-9;

/// Angles at the two endpoints of the base segment, in degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Angles {
    pub at_b_deg: f64,
    pub at_c_deg: f64,
}

/// Result of angle recovery: either both base angles, or the report that
/// the three distances cannot form a triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AngleOutcome {
    Valid(Angles),
    InequalityViolation,
}

/// Alignment verdicts. `Undecidable` is produced only by the original
/// variant, when the measured distances violate the triangle inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlignmentVerdict {
    Aligned,
    NotAligned,
    Undecidable,
}

fn check_positive(value: f64) -> Result<(), SpdError> {
    if !value.is_finite() {
        return Err(SpdError::NonFiniteDistance);
    }
    if value <= 0.0 {
        return Err(SpdError::NonPositiveDistance(value));
    }
    Ok(())
}

/// Recovers the angles at B and C of the triangle (B, C, M) from the three
/// side lengths: `d_bc` the base, `d_bm` and `d_cm` the sides to M.
pub fn triangle_angles(d_bc: f64, d_bm: f64, d_cm: f64) -> Result<AngleOutcome, SpdError> {
    check_positive(d_bc)?;
    check_positive(d_bm)?;
    check_positive(d_cm)?;
    let cos_b = (d_bc * d_bc + d_bm * d_bm - d_cm * d_cm) / (2.0 * d_bc * d_bm);
    let cos_c = (d_bc * d_bc + d_cm * d_cm - d_bm * d_bm) / (2.0 * d_bc * d_cm);
    if cos_b.abs() > 1.0 + COS_CLAMP || cos_c.abs() > 1.0 + COS_CLAMP {
        return Ok(AngleOutcome::InequalityViolation);
    }
    let angles = Angles {
        at_b_deg: cos_b.clamp(-1.0, 1.0).acos().to_degrees(),
        at_c_deg: cos_c.clamp(-1.0, 1.0).acos().to_degrees(),
    };
    Ok(AngleOutcome::Valid(angles))
}

/// Angle-only alignment test: aligned when both base angles are under the
/// threshold. Cannot decide when the distances violate the triangle
/// inequality, which measured distances routinely do near collinearity.
pub fn alignment_original(
    d_bc: f64,
    d_bm: f64,
    d_cm: f64,
    config: &AlignmentConfig,
) -> Result<AlignmentVerdict, SpdError> {
    config.validate()?;
    Ok(match triangle_angles(d_bc, d_bm, d_cm)? {
        AngleOutcome::InequalityViolation => AlignmentVerdict::Undecidable,
        AngleOutcome::Valid(angles) => {
            if angles.at_b_deg < config.angle_threshold_deg
                && angles.at_c_deg < config.angle_threshold_deg
            {
                AlignmentVerdict::Aligned
            } else {
                AlignmentVerdict::NotAligned
            }
        }
    })
}

/// Guarded alignment test that always decides.
///
/// First the bounding guard: M's locus must not fall beyond either
/// endpoint, i.e. both sides must be shorter than the base. Then the sum
/// rule: side lengths summing below the base mean the measurements have
/// collapsed the triangle inwards, which only happens around collinearity,
/// so that counts as aligned. Otherwise the angle test decides.
pub fn alignment_revised(
    d_bc: f64,
    d_bm: f64,
    d_cm: f64,
    config: &AlignmentConfig,
) -> Result<AlignmentVerdict, SpdError> {
    config.validate()?;
    check_positive(d_bc)?;
    check_positive(d_bm)?;
    check_positive(d_cm)?;
    if d_bm >= d_bc || d_cm >= d_bc {
        return Ok(AlignmentVerdict::NotAligned);
    }
    if d_bm + d_cm < d_bc {
        return Ok(AlignmentVerdict::Aligned);
    }
    Ok(match triangle_angles(d_bc, d_bm, d_cm)? {
        // Only reachable when the sum equals the base to within rounding:
        // the degenerate boundary of the sum rule.
        AngleOutcome::InequalityViolation => AlignmentVerdict::Aligned,
        AngleOutcome::Valid(angles) => {
            if angles.at_b_deg < config.angle_threshold_deg
                && angles.at_c_deg < config.angle_threshold_deg
            {
                AlignmentVerdict::Aligned
            } else {
                AlignmentVerdict::NotAligned
            }
        }
    })
}

/// Runs the configured variant.
pub fn alignment_decide(
    d_bc: f64,
    d_bm: f64,
    d_cm: f64,
    config: &AlignmentConfig,
) -> Result<AlignmentVerdict, SpdError> {
    match config.variant {
        AlignmentVariant::Original => alignment_original(d_bc, d_bm, d_cm, config),
        AlignmentVariant::Revised => alignment_revised(d_bc, d_bm, d_cm, config),
    }
}

/// One candidate "between" relation: a reference pair with the target's
/// measured distance to each. `measured_ab_m` is the fallback separation
/// used when the references have no stored positions.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignmentPair {
    pub ref_a: ObjectId,
    pub ref_b: ObjectId,
    pub target_to_a_m: f64,
    pub target_to_b_m: f64,
    pub measured_ab_m: Option<f64>,
}

/// Separation between the pair's references: stored positions take
/// priority, a supplied measurement is the fallback.
fn pair_separation(pair: &AlignmentPair, sod: &Sod) -> Result<f64, SpdError> {
    let a = sod.require(&pair.ref_a)?;
    let b = sod.require(&pair.ref_b)?;
    if let (Some(ca), Some(cb)) = (&a.centre, &b.centre) {
        return Ok(ca.distance_to(cb));
    }
    pair.measured_ab_m
        .ok_or_else(|| SpdError::MissingSeparation(pair.ref_a.clone(), pair.ref_b.clone()))
}

/// Emits one "between" fragment per pair the configured variant judges
/// aligned, in input order.
pub fn alignment_estimator(
    target: &ObjectId,
    pairs: &[AlignmentPair],
    sod: &Sod,
    config: &AlignmentConfig,
    templates: &PhraseTemplates,
) -> Result<Vec<SpdFragment>, SpdError> {
    let mut fragments = Vec::new();
    for pair in pairs {
        let d_bc = pair_separation(pair, sod)?;
        let verdict = alignment_decide(d_bc, pair.target_to_a_m, pair.target_to_b_m, config)?;
        if verdict == AlignmentVerdict::Aligned {
            let text = templates.render_between(sod.label(&pair.ref_a), sod.label(&pair.ref_b));
            fragments.push(SpdFragment::alignment(
                target.clone(),
                pair.ref_a.clone(),
                pair.ref_b.clone(),
                text,
            )?);
        }
    }
    Ok(fragments)
}
