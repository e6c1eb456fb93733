//! Multi-replication experiments: plain runs, policy comparison, cost
//! sweeps and the regret-exponent check.
//!
//! Replications run in parallel but are always merged by ascending index,
//! so results do not depend on scheduling.

use cbal_core::PolicyKind;
use rayon::prelude::*;

use crate::config::{Contender, RunConfig};
use crate::error::HarnessError;
use crate::sim::{run_replication, Collect, PriorTally, ReplicationResult};
use crate::stats::{fit_regret_exponent, mean_stderr, percent_diff};

/// Mean and standard error across replications.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
}

impl Estimate {
    fn of(values: impl Iterator<Item = f64>) -> Self {
        let v: Vec<f64> = values.collect();
        let (mean, stderr) = mean_stderr(&v);
        Estimate { mean, stderr }
    }
}

/// Replication-mean totals after slot `2^epoch`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct MeanCheckpoint {
    pub epoch: u32,
    #[serde(rename = "T")]
    pub t: u64,
    pub regret: f64,
    pub payoff: f64,
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub config: Vec<(String, String)>,
    pub payoff: Estimate,
    pub expected_payoff: Estimate,
    pub pseudo_regret: Estimate,
    pub realized_regret: Estimate,
    pub cost: Estimate,
    pub queries: Estimate,
    pub checkpoints: Vec<MeanCheckpoint>,
    pub priors: PriorTally,
    pub stop_events: usize,
    /// Stop events later than the guaranteed stopping round.
    pub stop_violations: usize,
}

impl RunSummary {
    pub fn from_results(cfg: &RunConfig, results: &[ReplicationResult]) -> Self {
        let mut priors = PriorTally::default();
        for r in results {
            priors.merge(&r.priors);
        }
        let n = results.len().max(1) as f64;
        let checkpoints = results
            .first()
            .map(|first| {
                first
                    .checkpoints
                    .iter()
                    .enumerate()
                    .map(|(j, c)| {
                        let sum = |f: fn(&crate::sim::Checkpoint) -> f64| {
                            results.iter().map(|r| f(&r.checkpoints[j])).sum::<f64>() / n
                        };
                        MeanCheckpoint {
                            epoch: c.epoch,
                            t: c.t,
                            regret: sum(|c| c.regret),
                            payoff: sum(|c| c.payoff),
                            cost: sum(|c| c.cost),
                        }
                    })
                    .collect()
            })
            .unwrap_or_default();
        let stops = results.iter().flat_map(|r| r.stops.iter());
        RunSummary {
            config: cfg.describe(),
            payoff: Estimate::of(results.iter().map(|r| r.payoff)),
            expected_payoff: Estimate::of(results.iter().map(|r| r.expected_payoff)),
            pseudo_regret: Estimate::of(results.iter().map(|r| r.pseudo_regret)),
            realized_regret: Estimate::of(results.iter().map(|r| r.realized_regret)),
            cost: Estimate::of(results.iter().map(|r| r.cost)),
            queries: Estimate::of(results.iter().map(|r| r.queries as f64)),
            checkpoints,
            priors,
            stop_events: stops.clone().count(),
            stop_violations: stops.filter(|s| s.stop_round > s.bound).count(),
        }
    }

    /// `key = value` lines, one record per line, fixed order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.config {
            out.push_str(&format!("{k} = {v}\n"));
        }
        let mut est = |name: &str, e: Estimate| {
            out.push_str(&format!(
                "{name}_mean = {}\n{name}_stderr = {}\n",
                e.mean, e.stderr
            ));
        };
        est("payoff", self.payoff);
        est("expected_payoff", self.expected_payoff);
        est("pseudo_regret", self.pseudo_regret);
        est("realized_regret", self.realized_regret);
        est("cost", self.cost);
        est("queries", self.queries);
        let p = &self.priors;
        out.push_str(&format!(
            "first_round_queries = {}\nfirst_round_prior_valid = {}\n\
             later_queries = {}\nlater_prior_valid = {}\nlater_prior_valid_rate = {}\n\
             stop_events = {}\nstop_bound_violations = {}\n",
            p.first_round_queries,
            p.first_round_valid,
            p.later_queries,
            p.later_valid,
            p.later_rate(),
            self.stop_events,
            self.stop_violations
        ));
        for c in &self.checkpoints {
            out.push_str(&format!("regret_at_T{} = {}\n", c.t, c.regret));
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub summary: RunSummary,
    pub replications: Vec<ReplicationResult>,
}

/// All replications of `cfg`, merged in replication order.
pub fn run(cfg: &RunConfig, collect: Collect) -> Result<RunOutcome, HarnessError> {
    cfg.validate()?;
    let replications = (0..cfg.replications)
        .into_par_iter()
        .map(|rep| run_replication(cfg, rep, collect))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RunOutcome {
        summary: RunSummary::from_results(cfg, &replications),
        replications,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareRow {
    pub policy: Contender,
    pub summary: RunSummary,
    /// `100 (U_self - U_other) / |U_other|` against every row, in row order.
    pub pct_vs: Vec<f64>,
}

/// Runs each configuration and tabulates payoffs. All configurations must
/// describe the same experiment apart from the policy.
pub fn compare(configs: &[RunConfig]) -> Result<Vec<CompareRow>, HarnessError> {
    let Some(first) = configs.first() else {
        return Err(HarnessError::Config("nothing to compare".into()));
    };
    for c in configs {
        if c.with_policy(first.policy) != *first {
            return Err(HarnessError::Config(format!(
                "`{}` runs in a different environment than `{}`",
                c.policy, first.policy
            )));
        }
    }
    let summaries = configs
        .iter()
        .map(|c| run(c, Collect::default()).map(|o| o.summary))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(configs
        .iter()
        .zip(&summaries)
        .map(|(c, s)| CompareRow {
            policy: c.policy,
            summary: s.clone(),
            pct_vs: summaries
                .iter()
                .map(|o| percent_diff(s.payoff.mean, o.payoff.mean))
                .collect(),
        })
        .collect())
}

/// CB-AL, CB-AL without priors and always-query on `base`'s environment.
pub fn compare_baselines(base: &RunConfig) -> Result<Vec<CompareRow>, HarnessError> {
    let configs: Vec<RunConfig> = PolicyKind::ALL
        .iter()
        .map(|&k| base.with_policy(Contender::Learner(k)))
        .collect();
    compare(&configs)
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SweepRow {
    pub c: f64,
    pub horizon: u64,
    pub mean_payoff: f64,
    pub stderr_payoff: f64,
    pub mean_pseudo_regret: f64,
    pub mean_cost: f64,
}

/// `base` rerun once per cost scale with the same seeds.
pub fn sweep_cost(base: &RunConfig, costs: &[f64]) -> Result<Vec<SweepRow>, HarnessError> {
    if costs.len() < 2 {
        return Err(HarnessError::Config(
            "a sweep needs at least two cost values".into(),
        ));
    }
    costs
        .iter()
        .map(|&c| {
            let mut cfg = base.clone();
            cfg.params.c = c;
            let s = run(&cfg, Collect::default())?.summary;
            Ok(SweepRow {
                c,
                horizon: cfg.horizon,
                mean_payoff: s.payoff.mean,
                stderr_payoff: s.payoff.stderr,
                mean_pseudo_regret: s.pseudo_regret.mean,
                mean_cost: s.cost.mean,
            })
        })
        .collect()
}

/// Relative payoff loss going from the first to the last row of a sweep.
pub fn relative_drop(rows: &[SweepRow]) -> f64 {
    match (rows.first(), rows.last()) {
        (Some(a), Some(b)) => (a.mean_payoff - b.mean_payoff) / a.mean_payoff.abs(),
        _ => 0.0,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlopeReport {
    pub slope: f64,
    pub theory: f64,
    /// Checkpoints the fit used.
    pub fitted: Vec<MeanCheckpoint>,
    /// `R(T)/T` at each fitted checkpoint.
    pub regret_rate: Vec<f64>,
}

impl SlopeReport {
    /// Whether `R(T)/T` strictly decreases over the last `k` fitted points.
    pub fn rate_decreasing(&self, k: usize) -> bool {
        let tail = &self.regret_rate[self.regret_rate.len().saturating_sub(k)..];
        tail.windows(2).all(|w| w[1] < w[0])
    }
}

/// Fits the regret exponent over checkpoints with `epoch >= first_epoch`,
/// or over the last `window` checkpoints when `first_epoch` is `None`.
pub fn slope_check(
    summary: &RunSummary,
    theory: f64,
    first_epoch: Option<u32>,
    window: usize,
) -> Result<SlopeReport, HarnessError> {
    let cps = &summary.checkpoints;
    let fitted: Vec<MeanCheckpoint> = match first_epoch {
        Some(e) => cps.iter().copied().filter(|c| c.epoch >= e).collect(),
        None => cps[cps.len().saturating_sub(window)..].to_vec(),
    };
    let points: Vec<(f64, f64)> = fitted.iter().map(|c| (c.t as f64, c.regret)).collect();
    let slope = fit_regret_exponent(&points)?;
    let regret_rate = fitted.iter().map(|c| c.regret / c.t as f64).collect();
    Ok(SlopeReport {
        slope,
        theory,
        fitted,
        regret_rate,
    })
}
