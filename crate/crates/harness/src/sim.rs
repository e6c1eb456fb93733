//! One seeded replication: contexts arrive, the contender decides, the
//! annotator charges, and payoff and regret are accumulated per slot.
//!
//! Every slot draws from the replication's generator in a fixed order:
//! context coordinates, then (with random arm picks) arm coordinates, then
//! the reward. The reward is sampled even when it is not queried, so
//! contenders that pick the same arms see the same rewards.

use cbal_core::environment::{annotate, context_arrival, sample_reward};
use cbal_core::spaces::epoch_of_slot;
use cbal_core::{EpochState, Phase, Policy64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{Contender, RunConfig};
use crate::error::HarnessError;

/// One row of `trace.csv`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRecord {
    pub rep: usize,
    pub t: u64,
    pub epoch: u32,
    pub m: usize,
    pub n: usize,
    pub phase: &'static str,
    pub q: u8,
    pub cost: f64,
    pub reward_sampled: f64,
    pub mu: f64,
    pub mu_star: f64,
    pub prior_valid: Option<u8>,
    pub cum_payoff: f64,
    pub cum_pseudo_regret: f64,
}

/// Cumulative totals after slot `t = 2^epoch`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Checkpoint {
    pub epoch: u32,
    #[serde(rename = "T")]
    pub t: u64,
    pub regret: f64,
    pub payoff: f64,
    pub cost: f64,
}

/// Per-query tally of whether the true mean fell inside the prior.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PriorTally {
    pub first_round_queries: u64,
    pub first_round_valid: u64,
    pub later_queries: u64,
    pub later_valid: u64,
}

impl PriorTally {
    pub fn merge(&mut self, other: &PriorTally) {
        self.first_round_queries += other.first_round_queries;
        self.first_round_valid += other.first_round_valid;
        self.later_queries += other.later_queries;
        self.later_valid += other.later_valid;
    }

    /// Fraction of round > 1 queries whose prior held (1 if there were none).
    pub fn later_rate(&self) -> f64 {
        if self.later_queries == 0 {
            1.0
        } else {
            self.later_valid as f64 / self.later_queries as f64
        }
    }
}

/// A context cluster that stopped querying.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StopEvent {
    pub epoch: u32,
    pub context: usize,
    pub stop_round: u64,
    /// Smallest round at which stopping is guaranteed.
    pub bound: u64,
}

#[derive(Debug, Clone, Default)]
pub struct ReplicationResult {
    pub rep: usize,
    /// Realized payoff: sampled rewards minus query costs.
    pub payoff: f64,
    /// Expected payoff: expected rewards minus query costs.
    pub expected_payoff: f64,
    /// Sum of `mu*` over slots: the oracle's expected payoff.
    pub oracle_payoff: f64,
    /// Oracle expected payoff minus `expected_payoff`.
    pub pseudo_regret: f64,
    /// Oracle expected payoff minus realized `payoff`.
    pub realized_regret: f64,
    pub reward: f64,
    pub cost: f64,
    pub queries: u64,
    pub checkpoints: Vec<Checkpoint>,
    pub priors: PriorTally,
    pub stops: Vec<StopEvent>,
    /// Final state of every epoch, when requested.
    pub epochs: Vec<EpochState<f64>>,
    pub trace: Vec<TraceRecord>,
}

/// Extra artifacts a replication may keep.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Collect {
    pub trace: bool,
    pub epochs: bool,
}

pub fn run_replication(
    cfg: &RunConfig,
    rep: usize,
    collect: Collect,
) -> Result<ReplicationResult, HarnessError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rep_seed(rep));
    let mut learner = match cfg.policy {
        Contender::Learner(kind) => Some(Policy64::new(cfg.params.clone(), kind, cfg.arm_pick)?),
        Contender::Oracle => None,
    };
    let land = &cfg.landscape;
    let mut out = ReplicationResult {
        rep,
        ..Default::default()
    };

    for t in 1..=cfg.horizon {
        let x = context_arrival::<f64, _>(&mut rng, cfg.params.d_x);
        let (mu_star_arm, mu_star) = land.oracle_best(&x)?;
        let decision = match learner.as_mut() {
            Some(p) => {
                let d = p.step(&x, &mut rng)?;
                if collect.epochs {
                    if let Some(done) = p.take_retired() {
                        out.epochs.push(done);
                    }
                }
                Some(d)
            }
            None => None,
        };
        let arm = decision.as_ref().map_or(&mu_star_arm, |d| &d.arm);
        let mu = land.mean_reward(&x, arm)?;
        let truth = sample_reward(mu, &mut rng);
        let prior = decision.as_ref().and_then(|d| d.prior.as_ref());
        let note = annotate(prior, truth, mu, &cfg.params);

        if let (Some(p), Some(d)) = (learner.as_mut(), decision.as_ref()) {
            if d.query {
                out.queries += 1;
                let valid = note.prior_valid == Some(true);
                if d.round == 1 {
                    out.priors.first_round_queries += 1;
                    out.priors.first_round_valid += u64::from(valid);
                } else {
                    out.priors.later_queries += 1;
                    out.priors.later_valid += u64::from(valid);
                }
                if let Some(outcome) = p.record_reward(d, note.reward)? {
                    if outcome.stopped {
                        out.stops.push(StopEvent {
                            epoch: d.epoch,
                            context: d.context_cluster,
                            stop_round: outcome.round,
                            bound: cbal_core::policy::control::first_stopping_round(
                                d.epoch,
                                &cfg.params,
                            ),
                        });
                    }
                }
            }
        }

        out.reward += truth;
        out.cost += note.cost;
        out.payoff += truth - note.cost;
        out.expected_payoff += mu - note.cost;
        out.oracle_payoff += mu_star;
        out.pseudo_regret += (mu_star - mu) + note.cost;
        out.realized_regret = out.oracle_payoff - out.payoff;

        if t.is_power_of_two() {
            out.checkpoints.push(Checkpoint {
                epoch: epoch_of_slot(t),
                t,
                regret: out.pseudo_regret,
                payoff: out.payoff,
                cost: out.cost,
            });
        }
        if collect.trace {
            let (epoch, m, n, phase, q) = match &decision {
                Some(d) => (
                    d.epoch,
                    d.context_cluster,
                    d.arm_cluster,
                    d.phase.as_str(),
                    u8::from(d.query),
                ),
                None => (epoch_of_slot(t), 0, 0, Phase::Exploitation.as_str(), 0),
            };
            out.trace.push(TraceRecord {
                rep,
                t,
                epoch,
                m,
                n,
                phase,
                q,
                cost: note.cost,
                reward_sampled: truth,
                mu,
                mu_star,
                prior_valid: note.prior_valid.map(u8::from),
                cum_payoff: out.payoff,
                cum_pseudo_regret: out.pseudo_regret,
            });
        }
    }

    if collect.epochs {
        if let Some(p) = learner.as_ref() {
            if let Some(last) = p.epoch_state() {
                out.epochs.push(last.clone());
            }
        }
    }
    Ok(out)
}
