//! Fragment assembly into one rendered description.

use semloc_core::{CoreError, FragmentKind, ObjectId, Spd, SpdFragment};

/// Combines fragments into a single SPD.
///
/// Fragment order is canonical so equal fragment sets always render the
/// same string: room fragments first (by room id), then proximity
/// fragments (ascending distance, then reference id), then alignment
/// fragments (by reference pair). The sorts are stable, so fragments that
/// tie keep their input order.
pub fn combine(subject: ObjectId, fragments: Vec<SpdFragment>) -> Result<Spd, CoreError> {
    let mut room = Vec::new();
    let mut proximity = Vec::new();
    let mut alignment = Vec::new();
    for fragment in fragments {
        fragment.validate()?;
        match fragment.kind {
            FragmentKind::Room => room.push(fragment),
            FragmentKind::Proximity => proximity.push(fragment),
            FragmentKind::Alignment => alignment.push(fragment),
        }
    }
    room.sort_by(|a, b| a.references.cmp(&b.references));
    proximity.sort_by(|a, b| {
        let da = a.distance_m.unwrap_or(f64::INFINITY);
        let db = b.distance_m.unwrap_or(f64::INFINITY);
        da.total_cmp(&db)
            .then_with(|| a.references.cmp(&b.references))
    });
    alignment.sort_by(|a, b| a.references.cmp(&b.references));

    let mut ordered = room;
    ordered.append(&mut proximity);
    ordered.append(&mut alignment);
    Spd::from_fragments(subject, ordered)
}
