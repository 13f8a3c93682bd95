//! Object identity, roles and geometry primitives.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::CoreError;

/// Identifier of a connected object.
///
/// Room fragments reuse this type to carry the room identifier, so an
/// `ObjectId` is best thought of as "an id that can appear in a fragment".
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ObjectId(String);

impl ObjectId {
    pub fn new(id: impl Into<String>) -> Self {
        Self(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ObjectId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for ObjectId {
    fn from(s: &str) -> Self {
        Self(s.to_owned())
    }
}

impl From<String> for ObjectId {
    fn from(s: String) -> Self {
        Self(s)
    }
}

/// Cartesian position in metres, serialised as `[x, y, z]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point3(pub [f64; 3]);

impl Point3 {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self([x, y, z])
    }

    pub fn x(&self) -> f64 {
        self.0[0]
    }

    pub fn y(&self) -> f64 {
        self.0[1]
    }

    pub fn z(&self) -> f64 {
        self.0[2]
    }

    pub fn distance_to(&self, other: &Point3) -> f64 {
        let dx = self.0[0] - other.0[0];
        let dy = self.0[1] - other.0[1];
        let dz = self.0[2] - other.0[2];
        (dx * dx + dy * dy + dz * dz).sqrt()
    }

    pub fn norm(&self) -> f64 {
        self.distance_to(&Point3::new(0.0, 0.0, 0.0))
    }
}

/// How an object participates in localisation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    /// Anchored at a known position; serves as a reference point.
    FixedReference,
    /// Moves freely; the thing being located.
    Mobile,
}

/// Static description of one connected object, as stored in the SOD.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectDescriptor {
    pub id: ObjectId,
    /// Human-readable name used in rendered phrases, e.g. "coffee maker".
    pub label: String,
    /// Flat room identifier, e.g. "kitchen".
    pub room: String,
    pub role: Role,
    /// Known position in metres. Required for fixed references.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub centre: Option<Point3>,
    /// Radius of the enclosing sphere in metres; 0 models a point object.
    #[serde(default)]
    pub bounding_radius: f64,
}

impl ObjectDescriptor {
    /// Checks the per-object invariants: non-negative radius, and a centre
    /// position whenever the object is a fixed reference.
    pub fn validate(&self) -> Result<(), CoreError> {
        if !self.bounding_radius.is_finite() || self.bounding_radius < 0.0 {
            return Err(CoreError::NegativeRadius(
                self.id.clone(),
                self.bounding_radius,
            ));
        }
        if self.role == Role::FixedReference && self.centre.is_none() {
            return Err(CoreError::MissingCentre(self.id.clone()));
        }
        if self.room.is_empty() {
            return Err(CoreError::MissingField(self.id.clone(), "room"));
        }
        Ok(())
    }

    pub fn is_fixed_reference(&self) -> bool {
        self.role == Role::FixedReference
    }
}
