//! Empirical checks of the concentration and elimination guarantees.

use cbal_core::environment::sample_reward;
use cbal_core::policy::control::{deviation, epsilon};
use cbal_core::EpochState;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::RunConfig;
use crate::error::HarnessError;
use crate::experiment::run;
use crate::sim::Collect;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcentrationReport {
    pub trials: u64,
    pub samples: u64,
    pub threshold: f64,
    pub exceed: u64,
    /// Hoeffding bound `2 exp(-2 s D^2)`, equal to `T_i^-(1+gamma)`.
    pub bound: f64,
}

impl ConcentrationReport {
    pub fn rate(&self) -> f64 {
        self.exceed as f64 / self.trials as f64
    }
}

/// Frequency with which the mean of `s` Bernoulli(`mu`) draws strays from
/// `mu` by more than the epoch's deviation `D(s)`.
pub fn concentration(
    mu: f64,
    s: u64,
    epoch_len: u64,
    gamma: f64,
    trials: u64,
    seed: u64,
) -> ConcentrationReport {
    let threshold: f64 = deviation(s, epoch_len, gamma);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut exceed = 0;
    for _ in 0..trials {
        let sum: f64 = (0..s).map(|_| sample_reward(mu, &mut rng)).sum();
        if (sum / s as f64 - mu).abs() > threshold {
            exceed += 1;
        }
    }
    ConcentrationReport {
        trials,
        samples: s,
        threshold,
        exceed,
        bound: 2.0 * (-2.0 * s as f64 * threshold * threshold).exp(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EliminationReport {
    /// (epoch, context cluster) cases inspected.
    pub cases: u64,
    /// Cases where every eps-optimal arm cluster was still active at the end.
    pub kept_all_near_optimal: u64,
    pub stop_events: u64,
    pub survivors_at_stop: u64,
    /// Survivors of stopped clusters that are 2 eps-optimal.
    pub near_optimal_survivors: u64,
}

impl EliminationReport {
    pub fn survival_rate(&self) -> f64 {
        ratio(self.kept_all_near_optimal, self.cases)
    }

    pub fn stop_purity(&self) -> f64 {
        ratio(self.near_optimal_survivors, self.survivors_at_stop)
    }

    pub fn merge(&mut self, o: &EliminationReport) {
        self.cases += o.cases;
        self.kept_all_near_optimal += o.kept_all_near_optimal;
        self.stop_events += o.stop_events;
        self.survivors_at_stop += o.survivors_at_stop;
        self.near_optimal_survivors += o.near_optimal_survivors;
    }
}

fn ratio(a: u64, b: u64) -> f64 {
    if b == 0 {
        1.0
    } else {
        a as f64 / b as f64
    }
}

/// Scores the final state of every epoch from `min_epoch` on against the
/// landscape's cluster-level best values.
pub fn score_epochs(
    cfg: &RunConfig,
    epochs: &[EpochState<f64>],
    min_epoch: u32,
    grid_n: usize,
) -> Result<EliminationReport, HarnessError> {
    let mut rep = EliminationReport::default();
    for state in epochs.iter().filter(|s| s.epoch() >= min_epoch) {
        let eps: f64 = epsilon(state.epoch(), &cfg.params);
        let arms = state.arm_partition();
        let arm_cells = (0..arms.cluster_count())
            .map(|n| arms.cell_bounds(n))
            .collect::<Result<Vec<_>, _>>()?;
        for cluster in state.clusters() {
            let ctx = state.context_partition().cell_bounds(cluster.index())?;
            let values = arm_cells
                .iter()
                .map(|cell| cfg.landscape.cluster_oracle(&ctx, cell, grid_n))
                .collect::<Result<Vec<f64>, _>>()?;
            let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            rep.cases += 1;
            let kept = values
                .iter()
                .enumerate()
                .filter(|&(_, v)| best - v <= eps)
                .all(|(n, _)| cluster.is_active(n));
            rep.kept_all_near_optimal += u64::from(kept);
            if cluster.is_stopped() {
                rep.stop_events += 1;
                for &n in cluster.active() {
                    rep.survivors_at_stop += 1;
                    rep.near_optimal_survivors += u64::from(best - values[n] <= 2.0 * eps);
                }
            }
        }
    }
    Ok(rep)
}

/// Runs `cfg` keeping epoch states and scores them.
pub fn elimination(
    cfg: &RunConfig,
    min_epoch: u32,
    grid_n: usize,
) -> Result<EliminationReport, HarnessError> {
    let outcome = run(
        cfg,
        Collect {
            trace: false,
            epochs: true,
        },
    )?;
    let mut total = EliminationReport::default();
    for r in &outcome.replications {
        total.merge(&score_epochs(cfg, &r.epochs, min_epoch, grid_n)?);
    }
    Ok(total)
}
