//! Simulation harness for the cost-aware contextual bandit learner:
//! configuration, seeded replications, experiments and their CSV and text
//! outputs.

pub mod config;
pub mod error;
pub mod experiment;
pub mod output;
pub mod sim;
pub mod stats;
pub mod verify;

pub use config::{Contender, RunConfig};
pub use error::HarnessError;
