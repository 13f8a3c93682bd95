//! Evaluation harness for the semantic localisation stack.
//!
//! This crate scores the algorithms against recorded study data and
//! simulator traces:
//!
//! * [`study`] loads the study fixtures: the measured kitchen distance
//!   matrix, participant response marginals, and classification rows for
//!   rooms without measured distances;
//! * [`agreement`] compares participant responses with the algorithm's
//!   classifications under the different scoping rules;
//! * [`alignment_report`] scores alignment verdicts sample-by-sample on
//!   rail traces with known geometry;
//! * [`report`] renders results as human tables or machine JSON.
//!
//! The `semloc` binary in this crate fronts all of it, plus the simulator
//! and the message-bus engine, as one CLI.

pub mod agreement;
pub mod alignment_report;
pub mod error;
pub mod report;
pub mod study;

pub use agreement::{agreement_rate, all_options, AgreementOptions, AgreementReport};
pub use alignment_report::{alignment_report, AlignmentReport, Bucket, BucketStats, VerdictCounts};
pub use error::EvalError;
pub use report::{render_agreement, render_alignment, AgreementLine, Format};
pub use study::{
    computed_row, load_distances, AlgoRow, DistanceTable, Situation, StudyDataset, PARTICIPANTS,
};
