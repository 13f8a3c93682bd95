//! Majority-vote room determination.

use std::collections::BTreeMap;

use semloc_core::{ObjectId, Sod, SpdFragment};

use crate::config::{PhraseTemplates, RoomVoteConfig};
use crate::error::SpdError;

/// Assigns a room to the target by letting its closest neighbours vote.
///
/// Neighbours beyond `max_neighbour_range_m` are ignored; the `k` closest
/// of the rest each vote for their own room. Ties are broken by the
/// smaller sum of the tied room's member distances, then by room id.
/// Returns `None` when no neighbour is eligible.
pub fn room_determination(
    target: &ObjectId,
    neighbours: &[(ObjectId, f64)],
    sod: &Sod,
    config: &RoomVoteConfig,
    templates: &PhraseTemplates,
) -> Result<Option<SpdFragment>, SpdError> {
    config.validate()?;
    let mut eligible: Vec<(&ObjectId, f64)> = Vec::new();
    for (id, distance) in neighbours {
        sod.require(id)?;
        if !distance.is_finite() {
            return Err(SpdError::NonFiniteDistance);
        }
        if *distance < 0.0 {
            return Err(SpdError::NegativeDistance(*distance));
        }
        if *distance <= config.max_neighbour_range_m {
            eligible.push((id, *distance));
        }
    }
    if eligible.is_empty() {
        return Ok(None);
    }
    eligible.sort_by(|(id_a, d_a), (id_b, d_b)| d_a.total_cmp(d_b).then_with(|| id_a.cmp(id_b)));
    eligible.truncate(config.k);

    // votes: room -> (count, distance sum); BTreeMap gives the id tie-break.
    let mut votes: BTreeMap<&str, (usize, f64)> = BTreeMap::new();
    for (id, distance) in &eligible {
        let room = sod.require(id)?.room.as_str();
        let entry = votes.entry(room).or_insert((0, 0.0));
        entry.0 += 1;
        entry.1 += distance;
    }
    let (winner, _) = votes
        .iter()
        .min_by(|(_, (count_a, sum_a)), (_, (count_b, sum_b))| {
            count_b.cmp(count_a).then_with(|| sum_a.total_cmp(sum_b))
        })
        .expect("eligible is non-empty");

    let text = templates.render_room(winner);
    let fragment = SpdFragment::room(target.clone(), (*winner).into(), text)?;
    Ok(Some(fragment))
}
