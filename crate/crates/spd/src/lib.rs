//! The three micro-algorithms behind semantic position descriptions.
//!
//! Given pairwise distances between a target object and fixed reference
//! objects, this crate determines the target's room by majority vote,
//! classifies its proximity to each reference against fixed thresholds,
//! and detects rough alignment ("between A and B") from triangle angles
//! recovered with the law of cosines. A combiner assembles the individual
//! fragments into one rendered description.
//!
//! All operations are pure functions of their inputs and are safe to call
//! from any number of threads.

pub mod alignment;
pub mod combine;
pub mod config;
pub mod error;
pub mod proximity;
pub mod room;

pub use alignment::{
    alignment_decide, alignment_estimator, alignment_original, alignment_revised, triangle_angles,
    AlignmentPair, AlignmentVerdict, AngleOutcome, Angles,
};
pub use combine::combine;
pub use config::{
    AlignmentConfig, AlignmentVariant, PhraseTemplates, ProximityThresholds, RoomVoteConfig,
    SpdConfig,
};
pub use error::SpdError;
pub use proximity::{classify_proximity, proximity_estimator};
pub use room::room_determination;
