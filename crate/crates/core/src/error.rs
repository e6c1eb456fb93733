use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("epoch index {0} overflows the slot counter")]
    EpochOverflow(u32),

    #[error("point has dimension {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("coordinate {value} at axis {axis} lies outside [0, 1]")]
    OutOfUnitCube { axis: usize, value: f64 },

    #[error("cluster index {index} out of range (cluster count {count})")]
    ClusterOutOfRange { index: usize, count: usize },

    #[error("arm cluster {arm} is not active for context cluster {context}")]
    InactiveArm { context: usize, arm: usize },

    #[error("arm cluster {arm} already sampled in round {round} of context cluster {context}")]
    DoubleRecord {
        context: usize,
        arm: usize,
        round: u64,
    },

    #[error("reward {0} outside [0, 1]")]
    RewardOutOfRange(f64),

    #[error("decision does not belong to the current epoch or carries no query")]
    StaleDecision,

    #[error(
        "stop round {stop_round} exceeds its bound {bound} (epoch {epoch}, context cluster {context})"
    )]
    StopBoundViolated {
        epoch: u32,
        context: usize,
        stop_round: u64,
        bound: u64,
    },
}
