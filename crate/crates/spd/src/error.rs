use semloc_core::{CoreError, ObjectId};

/// Errors raised by the estimators and their configuration.
#[derive(Debug, thiserror::Error)]
pub enum SpdError {
    #[error("estimator needs at least one reference")]
    EmptyReferences,
    #[error("distance must be positive, got {0}")]
    NonPositiveDistance(f64),
    #[error("distance must be non-negative, got {0}")]
    NegativeDistance(f64),
    #[error("distances must be finite")]
    NonFiniteDistance,
    #[error(
        "proximity thresholds must satisfy 0 < very_close < near < vicinity, \
         got {very_close_max_m} / {near_max_m} / {vicinity_max_m}"
    )]
    InvalidThresholds {
        very_close_max_m: f64,
        near_max_m: f64,
        vicinity_max_m: f64,
    },
    #[error("alignment angle threshold must lie in (0, 90) degrees, got {0}")]
    InvalidAngleThreshold(f64),
    #[error("room vote needs k >= 1, got {0}")]
    InvalidVoteCount(usize),
    #[error("room vote neighbour range must be positive, got {0}")]
    InvalidNeighbourRange(f64),
    #[error("no known separation between `{0}` and `{1}`: no stored positions and no measurement")]
    MissingSeparation(ObjectId, ObjectId),
    #[error(transparent)]
    Core(#[from] CoreError),
}
