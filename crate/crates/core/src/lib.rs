//! Contextual bandits with cost-aware active learning.
//!
//! The learner partitions the context and arm hypercubes into uniform grids
//! that refine at every doubling epoch, runs successive elimination over arm
//! cells separately for each context cell, and pays for every reward it asks
//! to see. Each query carries an interval estimate of the expected reward;
//! tighter and more confident intervals are cheaper.
//!
//! All numerics are generic over [`Scalar`] (any `num_traits::Float`);
//! `f64` and `f32` aliases are re-exported at the crate root.

pub mod baselines;
pub mod environment;
pub mod error;
pub mod params;
pub mod policy;
pub mod scalar;
pub mod spaces;

pub use baselines::PolicyKind;
pub use environment::{Annotation, Family, Landscape};
pub use error::{Error, Result};
pub use params::AlgoParams;
pub use policy::{
    ArmPick, ArmStats, ContextClusterState, Decision, EpochState, Phase, Policy, PriorInfo,
    RoundOutcome,
};
pub use scalar::Scalar;
pub use spaces::{Partition, Point};

pub type Point64 = Point<f64>;
pub type Partition64 = Partition<f64>;
pub type AlgoParams64 = AlgoParams<f64>;
pub type PriorInfo64 = PriorInfo<f64>;
pub type Decision64 = Decision<f64>;
pub type Policy64 = Policy<f64>;
pub type Landscape64 = Landscape<f64>;
pub type Annotation64 = Annotation<f64>;

pub type Point32 = Point<f32>;
pub type Partition32 = Partition<f32>;
pub type AlgoParams32 = AlgoParams<f32>;
pub type Policy32 = Policy<f32>;
pub type Landscape32 = Landscape<f32>;
