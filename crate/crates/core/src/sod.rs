//! Semantic object descriptions: the indexed catalogue of known objects.

use std::path::Path;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::CoreError;
use crate::object::{ObjectDescriptor, ObjectId, Point3, Role};

/// The full set of object descriptors an installation knows about,
/// keyed by id and kept in declaration order.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Sod {
    objects: IndexMap<ObjectId, ObjectDescriptor>,
}

/// Raw JSON shape with everything optional, so missing fields can be
/// reported with the offending object's id instead of a serde path.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawObject {
    id: Option<ObjectId>,
    label: Option<String>,
    room: Option<String>,
    role: Option<Role>,
    centre: Option<Point3>,
    #[serde(default)]
    bounding_radius: f64,
}

impl Sod {
    /// Builds a catalogue from descriptors, rejecting duplicates and
    /// invalid entries.
    pub fn from_objects(
        objects: impl IntoIterator<Item = ObjectDescriptor>,
    ) -> Result<Self, CoreError> {
        let mut map = IndexMap::new();
        for object in objects {
            object.validate()?;
            let id = object.id.clone();
            if map.insert(id.clone(), object).is_some() {
                return Err(CoreError::DuplicateId(id));
            }
        }
        Ok(Self { objects: map })
    }

    /// Parses a JSON array of object descriptors.
    pub fn from_json_str(json: &str) -> Result<Self, CoreError> {
        let raws: Vec<RawObject> = serde_json::from_str(json)?;
        let mut objects = Vec::with_capacity(raws.len());
        for (index, raw) in raws.into_iter().enumerate() {
            let id = raw.id.ok_or(CoreError::MissingId(index))?;
            let label = raw
                .label
                .ok_or_else(|| CoreError::MissingField(id.clone(), "label"))?;
            let room = raw
                .room
                .ok_or_else(|| CoreError::MissingField(id.clone(), "room"))?;
            let role = raw
                .role
                .ok_or_else(|| CoreError::MissingField(id.clone(), "role"))?;
            objects.push(ObjectDescriptor {
                id,
                label,
                room,
                role,
                centre: raw.centre,
                bounding_radius: raw.bounding_radius,
            });
        }
        Self::from_objects(objects)
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self, CoreError> {
        let json = std::fs::read_to_string(path)?;
        Self::from_json_str(&json)
    }

    pub fn get(&self, id: &ObjectId) -> Option<&ObjectDescriptor> {
        self.objects.get(id)
    }

    /// Like [`Sod::get`] but failing with the unknown id.
    pub fn require(&self, id: &ObjectId) -> Result<&ObjectDescriptor, CoreError> {
        self.get(id)
            .ok_or_else(|| CoreError::UnknownObject(id.clone()))
    }

    /// Human-readable label, falling back to the id for unknown objects.
    pub fn label<'a>(&'a self, id: &'a ObjectId) -> &'a str {
        self.get(id).map_or(id.as_str(), |o| o.label.as_str())
    }

    pub fn objects(&self) -> impl Iterator<Item = &ObjectDescriptor> {
        self.objects.values()
    }

    pub fn fixed_references(&self) -> impl Iterator<Item = &ObjectDescriptor> {
        self.objects().filter(|o| o.is_fixed_reference())
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn descriptor(id: &str) -> ObjectDescriptor {
        ObjectDescriptor {
            id: id.into(),
            label: id.replace('_', " "),
            room: "kitchen".to_owned(),
            role: Role::FixedReference,
            centre: Some(Point3::new(0.0, 0.0, 0.0)),
            bounding_radius: 0.1,
        }
    }

    #[test]
    fn keeps_declaration_order() {
        let sod = Sod::from_objects(vec![descriptor("kettle"), descriptor("vase")]).unwrap();
        let ids: Vec<&str> = sod.objects().map(|o| o.id.as_str()).collect();
        assert_eq!(ids, ["kettle", "vase"]);
    }

    #[test]
    fn duplicate_id_names_offender() {
        let err = Sod::from_objects(vec![descriptor("kettle"), descriptor("kettle")]);
        match err {
            Err(CoreError::DuplicateId(id)) => assert_eq!(id.as_str(), "kettle"),
            other => panic!("expected DuplicateId, got {other:?}"),
        }
    }

    #[test]
    fn missing_label_names_object() {
        let json = r#"[{"id": "kettle", "room": "kitchen", "role": "fixed_reference",
                        "centre": [0, 0, 0]}]"#;
        match Sod::from_json_str(json) {
            Err(CoreError::MissingField(id, "label")) => {
                assert_eq!(id.as_str(), "kettle");
            }
            other => panic!("expected MissingField, got {other:?}"),
        }
    }

    #[test]
    fn missing_id_reports_entry_index() {
        let json = r#"[{"id": "a", "label": "a", "room": "r", "role": "mobile"},
                       {"label": "b", "room": "r", "role": "mobile"}]"#;
        assert!(matches!(
            Sod::from_json_str(json),
            Err(CoreError::MissingId(1))
        ));
    }

    #[test]
    fn radius_defaults_to_zero() {
        let json = r#"[{"id": "keys", "label": "keys", "room": "kitchen",
                        "role": "mobile"}]"#;
        let sod = Sod::from_json_str(json).unwrap();
        assert_eq!(sod.require(&"keys".into()).unwrap().bounding_radius, 0.0);
    }

    #[test]
    fn unknown_field_rejected() {
        let json = r#"[{"id": "keys", "label": "keys", "room": "kitchen",
                        "role": "mobile", "color": "red"}]"#;
        assert!(matches!(Sod::from_json_str(json), Err(CoreError::Parse(_))));
    }

    #[test]
    fn require_unknown_object() {
        let sod = Sod::from_objects(vec![descriptor("kettle")]).unwrap();
        assert!(matches!(
            sod.require(&"missing".into()),
            Err(CoreError::UnknownObject(_))
        ));
    }

    #[test]
    fn label_falls_back_to_id() {
        let sod = Sod::from_objects(vec![descriptor("coffee_maker")]).unwrap();
        assert_eq!(sod.label(&"coffee_maker".into()), "coffee maker");
        assert_eq!(sod.label(&"ghost".into()), "ghost");
    }
}
