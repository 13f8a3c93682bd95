//! The three estimators and the combiner, driven end to end through the
//! public API on one hand-checked scene.
//!
//! The den: a lamp at the origin, a shelf 2 m to its right, a plant 3 m
//! behind, and a remote control resting on the lamp-shelf axis half a
//! metre from the lamp. Every expected number below follows from that
//! geometry by hand.

use semloc_core::{ObjectDescriptor, ObjectId, Point3, ProximityClass, Role, Sod};
use semloc_spd::{
    alignment_estimator, combine, proximity_estimator, room_determination, AlignmentPair, SpdConfig,
};

fn den() -> Sod {
    let fixed = [
        ("lamp", Point3::new(0.0, 0.0, 0.0)),
        ("shelf", Point3::new(2.0, 0.0, 0.0)),
        ("plant", Point3::new(0.0, 3.0, 0.0)),
    ];
    Sod::from_objects(fixed.into_iter().map(|(id, centre)| ObjectDescriptor {
        id: id.into(),
        label: id.to_owned(),
        room: "den".to_owned(),
        role: Role::FixedReference,
        centre: Some(centre),
        bounding_radius: 0.0,
    }))
    .unwrap()
}

#[test]
fn remote_control_on_the_lamp_shelf_axis() {
    let sod = den();
    let config = SpdConfig::default();
    let target: ObjectId = "remote".into();

    // Measured distances from the remote at (0.5, 0, 0).
    let to_lamp = 0.5;
    let to_shelf = 1.5;
    let to_plant = (0.5f64.powi(2) + 3.0f64.powi(2)).sqrt();
    let distances: Vec<(ObjectId, f64)> = vec![
        ("lamp".into(), to_lamp),
        ("shelf".into(), to_shelf),
        ("plant".into(), to_plant),
    ];

    let room = room_determination(
        &target,
        &distances,
        &sod,
        &config.room_vote,
        &config.templates,
    )
    .unwrap()
    .expect("all three neighbours are in range");
    assert_eq!(room.text, "in the den");

    let proximity = proximity_estimator(
        &target,
        &distances,
        &sod,
        &config.thresholds,
        false,
        &config.templates,
    )
    .unwrap();
    // Only the lamp is close enough to mention: the shelf and the plant
    // classify as no relation and stay silent.
    assert_eq!(proximity.len(), 1);
    assert_eq!(proximity[0].text, "near the lamp");
    assert_eq!(proximity[0].detail, Some(ProximityClass::Near));

    let pair = |a: &str, b: &str, da: f64, db: f64| AlignmentPair {
        ref_a: a.into(),
        ref_b: b.into(),
        target_to_a_m: da,
        target_to_b_m: db,
        measured_ab_m: None,
    };
    let alignment = alignment_estimator(
        &target,
        &[
            pair("lamp", "shelf", to_lamp, to_shelf),
            pair("lamp", "plant", to_lamp, to_plant),
            pair("shelf", "plant", to_shelf, to_plant),
        ],
        &sod,
        &config.alignment,
        &config.templates,
    )
    .unwrap();
    // The remote sits on the lamp-shelf segment; the two pairs involving
    // the plant see wide base angles and are rejected.
    assert_eq!(alignment.len(), 1);
    assert_eq!(alignment[0].text, "between the lamp and the shelf");

    let mut fragments = Vec::new();
    fragments.extend(alignment);
    fragments.extend(proximity);
    fragments.push(room);
    let spd = combine(target, fragments).unwrap();
    assert_eq!(
        spd.rendered,
        "in the den, near the lamp, between the lamp and the shelf"
    );
}
