use crate::object::ObjectId;
use crate::spd::FragmentKind;

/// Errors raised while building or validating domain values.
#[derive(Debug, thiserror::Error)]
pub enum CoreError {
    #[error("duplicate object id `{0}`")]
    DuplicateId(ObjectId),
    #[error("object `{0}`: missing field `{1}`")]
    MissingField(ObjectId, &'static str),
    #[error("object entry #{0}: missing field `id`")]
    MissingId(usize),
    #[error("object `{0}`: negative bounding radius {1}")]
    NegativeRadius(ObjectId, f64),
    #[error("object `{0}`: fixed reference without a centre position")]
    MissingCentre(ObjectId),
    #[error("unknown object id `{0}`")]
    UnknownObject(ObjectId),
    #[error("distance must be non-negative, got {0}")]
    NegativeDistance(f64),
    #[error("distance must be finite")]
    NonFiniteDistance,
    #[error("ranging endpoints must differ, got `{0}` twice")]
    SelfRanging(ObjectId),
    #[error("a ranging estimate needs at least one sample")]
    NoSamples,
    #[error("fragment text must not be empty")]
    EmptyFragmentText,
    #[error("{kind:?} fragment expects {expected} reference(s), got {got}")]
    ReferenceCount {
        kind: FragmentKind,
        expected: usize,
        got: usize,
    },
    #[error("fragments describe different subjects: `{0}` and `{1}`")]
    MixedSubjects(ObjectId, ObjectId),
    #[error("unknown proximity code `{0}`")]
    UnknownCode(String),
    #[error("invalid object description document: {0}")]
    Parse(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
