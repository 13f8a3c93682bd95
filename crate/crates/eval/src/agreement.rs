//! Agreement between participant responses and algorithm classifications.

use semloc_core::DistanceSemantics;
use serde::Serialize;

use crate::error::EvalError;
use crate::study::StudyDataset;

/// How responses are scoped when scoring agreement.
///
/// * `include_nr`: keep participants' no-response answers in scope and
///   let them match an algorithm "none" cell. When off, only expressed
///   responses count.
/// * `nearest_only`: compare only the reference the algorithm selects as
///   nearest (one per situation) instead of every reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AgreementOptions {
    pub include_nr: bool,
    pub nearest_only: bool,
    pub semantics: DistanceSemantics,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AgreementReport {
    pub matches: usize,
    pub comparisons: usize,
}

impl AgreementReport {
    /// Agreement rate in percent.
    pub fn rate_pct(&self) -> f64 {
        100.0 * self.matches as f64 / self.comparisons as f64
    }
}

/// Scores one option combination over the whole dataset.
pub fn agreement_rate(
    dataset: &StudyDataset,
    options: &AgreementOptions,
) -> Result<AgreementReport, EvalError> {
    let mut matches = 0;
    let mut comparisons = 0;
    for situation in &dataset.situations {
        let row = situation.algo_row(options.semantics)?;
        let scope: Vec<_> = if options.nearest_only {
            vec![situation.nearest.clone()]
        } else {
            situation.references.clone()
        };
        for reference in &scope {
            let algo = row
                .get(reference)
                .copied()
                .ok_or_else(|| EvalError::ReferenceMismatch {
                    situation: situation.id,
                    id: reference.clone(),
                })?;
            let responses =
                situation
                    .responses
                    .get(reference)
                    .ok_or_else(|| EvalError::ReferenceMismatch {
                        situation: situation.id,
                        id: reference.clone(),
                    })?;
            for response in responses {
                if response.is_none() && !options.include_nr {
                    continue;
                }
                comparisons += 1;
                if *response == algo {
                    matches += 1;
                }
            }
        }
    }
    if comparisons == 0 {
        return Err(EvalError::EmptyScope);
    }
    Ok(AgreementReport {
        matches,
        comparisons,
    })
}

/// All eight option combinations, in a stable order.
pub fn all_options() -> [AgreementOptions; 8] {
    let mut out = Vec::with_capacity(8);
    for semantics in [
        DistanceSemantics::EdgeToEdge,
        DistanceSemantics::InterCentre,
    ] {
        for nearest_only in [false, true] {
            for include_nr in [false, true] {
                out.push(AgreementOptions {
                    include_nr,
                    nearest_only,
                    semantics,
                });
            }
        }
    }
    out.try_into().expect("exactly eight combinations")
}
