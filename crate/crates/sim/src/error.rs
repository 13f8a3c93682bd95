use semloc_core::{CoreError, ObjectId};

/// Errors raised by simulation and cleaning.
#[derive(Debug, thiserror::Error)]
pub enum SimError {
    #[error("step length must be positive, got {0}")]
    InvalidStepLength(f64),
    #[error("samples per position must be at least 1")]
    InvalidSampleCount,
    #[error("span {span_m} m exceeds the rail length {rail_m} m")]
    SpanExceedsRail { span_m: f64, rail_m: f64 },
    #[error("axis must be a unit vector, got norm {0}")]
    AxisNotUnit(f64),
    #[error("scenario needs at least one fixed node")]
    NoFixedNodes,
    #[error("fixed node `{0}` has no centre position")]
    NodeWithoutCentre(ObjectId),
    #[error("node id `{0}` appears more than once in the scenario")]
    DuplicateNodeId(ObjectId),
    #[error("jitter sigma must be finite and non-negative, got {0}")]
    InvalidJitter(f64),
    #[error("outlier probability must lie in [0, 1], got {0}")]
    InvalidOutlierProbability(f64),
    #[error("outlier magnitude must be positive and finite, got {0}")]
    InvalidOutlierMagnitude(f64),
    #[error("bias parameters must be finite and non-negative")]
    InvalidBias,
    #[error("max plausible distance must be positive, got {0}")]
    InvalidMaxPlausible(f64),
    #[error("samples mix distinct pairs: ({0}, {1}) and ({2}, {3})")]
    MixedPairs(ObjectId, ObjectId, ObjectId, ObjectId),
    #[error("every sample for node `{0}` was implausible; nothing to aggregate")]
    AllSamplesImplausible(ObjectId),
    #[error("trace file is missing its header line")]
    MissingTraceHeader,
    #[error("trace file line {0} is not a valid record")]
    BadTraceRecord(usize),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("invalid document: {0}")]
    Parse(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
