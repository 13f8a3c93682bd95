//! Core domain model for semantic indoor localisation.
//!
//! The model revolves around three ideas:
//!
//! * a **semantic object description** (SOD) database holding static,
//!   per-object knowledge: identity, label, room, role and extent;
//! * **ranging estimates**, pairwise distances between connected objects
//!   aggregated from raw radio measurements;
//! * **semantic position descriptions** (SPDs), short English phrases such
//!   as `"in the kitchen, near the kettle"` assembled from qualitative
//!   fragments.
//!
//! This crate holds only the data types and their invariants. The
//! estimation algorithms live in `semloc-spd`, the measurement simulator in
//! `semloc-sim` and the message-bus engine in `semloc-engine`.

pub mod error;
pub mod object;
pub mod ranging;
pub mod sod;
pub mod spd;

pub use error::CoreError;
pub use object::{ObjectDescriptor, ObjectId, Point3, Role};
pub use ranging::{edge_to_edge, DistanceSemantics, RangingEstimate, RangingSample};
pub use sod::Sod;
pub use spd::{class_from_code, FragmentKind, ProximityClass, Spd, SpdFragment};
