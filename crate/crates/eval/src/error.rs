//! Error type for the evaluation harness.

use semloc_core::ObjectId;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("distance matrix is not square: {rows} rows for {objects} objects")]
    MatrixShape { rows: usize, objects: usize },

    #[error("distance matrix asymmetric between {a} and {b}")]
    AsymmetricMatrix { a: ObjectId, b: ObjectId },

    #[error("distance matrix diagonal must be null (object {0})")]
    NonEmptyDiagonal(ObjectId),

    #[error("distance matrix has no entry for the pair {a}/{b}")]
    MissingDistance { a: ObjectId, b: ObjectId },

    #[error("no bounding radius for object {0}")]
    MissingRadius(ObjectId),

    #[error("unsupported distance unit {0:?} (expected \"cm\")")]
    BadUnit(String),

    #[error(
        "situation {situation}: {reference} has a {pct}% cell, \
         not reconstructible from 10 participants"
    )]
    BadPercentage {
        situation: u8,
        reference: ObjectId,
        pct: u32,
    },

    #[error("situation {situation}: {reference} percentages sum to {total}, expected 100")]
    BadDistribution {
        situation: u8,
        reference: ObjectId,
        total: u32,
    },

    #[error("situation {situation}: expected 10 participants, file says {participants}")]
    BadParticipantCount { situation: u8, participants: usize },

    #[error("situation {situation}: {id} is not a declared reference object")]
    ReferenceMismatch { situation: u8, id: ObjectId },

    #[error("classification rows claim situation {found}, loaded for situation {expected}")]
    SituationMismatch { expected: u8, found: u8 },

    #[error("situation {situation}: unknown proximity code {code:?}")]
    BadClassCode { situation: u8, code: String },

    #[error("duplicate situation id {0}")]
    DuplicateSituation(u8),

    #[error(
        "no classification row available for situation {situation} with {semantics} semantics"
    )]
    MissingSemantics {
        situation: u8,
        semantics: &'static str,
    },

    #[error("dataset holds no responses in scope; nothing to compare")]
    EmptyScope,

    #[error("trace has no data for node {0}; ground truth not computable")]
    MissingGroundTruth(ObjectId),

    #[error("scenario node {0} has no centre coordinates")]
    NodeWithoutCentre(ObjectId),

    #[error("trace entry {index}: sample streams for the pair differ in length ({a} vs {b})")]
    RaggedSamples { index: usize, a: usize, b: usize },

    #[error(
        "trace entry {index}: recorded true distances cannot form a triangle \
         with the scenario geometry; wrong scenario file?"
    )]
    InconsistentGroundTruth { index: usize },

    #[error("{path}: {source}")]
    File {
        path: String,
        #[source]
        source: Box<EvalError>,
    },

    #[error(transparent)]
    Core(#[from] semloc_core::CoreError),

    #[error(transparent)]
    Spd(#[from] semloc_spd::SpdError),

    #[error(transparent)]
    Sim(#[from] semloc_sim::SimError),

    #[error(transparent)]
    Engine(#[from] semloc_engine::EngineError),

    #[error(transparent)]
    Parse(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl EvalError {
    /// Wraps an error with the path of the file it came from.
    pub fn in_file(self, path: impl AsRef<std::path::Path>) -> Self {
        EvalError::File {
            path: path.as_ref().display().to_string(),
            source: Box::new(self),
        }
    }
}
