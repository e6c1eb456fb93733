//! The elimination-based decision engine.
//!
//! Slots are numbered from 1 and grouped into epochs `[2^i, 2^(i+1) - 1]`.
//! At the start of every epoch both spaces are re-partitioned at radius
//! `2^(-i alpha)` and all learning state is reset. Within an epoch each
//! context cluster runs its own rounds: every active arm cluster is queried
//! once per round, clearly worse clusters are dropped at round end, and once
//! the survivors are indistinguishable the cluster stops querying and plays
//! its lowest-indexed survivor for the rest of the epoch.
//!
//! Call order per slot: [`Policy::step`], then [`Policy::record_reward`] if
//! the decision carries a query.

mod cluster;
pub mod control;

use rand::Rng;

pub use cluster::{ArmStats, ContextClusterState, PriorInfo, RoundOutcome};

use crate::baselines::PolicyKind;
use crate::error::{Error, Result};
use crate::params::AlgoParams;
use crate::scalar::Scalar;
use crate::spaces::{epoch_of_slot, Partition, Point};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    Exploration,
    Exploitation,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Exploration => "exploration",
            Phase::Exploitation => "exploitation",
        }
    }
}

/// How a concrete arm is drawn from the chosen arm cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ArmPick {
    #[default]
    Center,
    /// Uniform inside the cell, using the caller's generator.
    Random,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decision<T> {
    pub slot: u64,
    pub epoch: u32,
    /// Round of the context cluster when the decision was made.
    pub round: u64,
    pub context_cluster: usize,
    pub arm_cluster: usize,
    pub arm: Point<T>,
    pub query: bool,
    /// Present iff `query`.
    pub prior: Option<PriorInfo<T>>,
    pub phase: Phase,
}

/// Partitions and per-context-cluster state for one epoch.
#[derive(Debug, Clone, PartialEq)]
pub struct EpochState<T> {
    epoch: u32,
    contexts: Partition<T>,
    arms: Partition<T>,
    clusters: Vec<ContextClusterState<T>>,
}

impl<T: Scalar> EpochState<T> {
    /// Fresh state for epoch `i`: every arm cluster active everywhere, all
    /// means zero, every round counter at 1.
    pub fn begin(i: u32, params: &AlgoParams<T>) -> Result<Self> {
        let contexts = Partition::for_epoch(params.d_x, i, params.alpha)?;
        let arms = Partition::for_epoch(params.d_k, i, params.alpha)?;
        let clusters = (0..contexts.cluster_count())
            .map(|m| ContextClusterState::new(m, arms.cluster_count()))
            .collect();
        Ok(Self {
            epoch: i,
            contexts,
            arms,
            clusters,
        })
    }

    pub fn epoch(&self) -> u32 {
        self.epoch
    }

    pub fn context_partition(&self) -> &Partition<T> {
        &self.contexts
    }

    pub fn arm_partition(&self) -> &Partition<T> {
        &self.arms
    }

    pub fn clusters(&self) -> &[ContextClusterState<T>] {
        &self.clusters
    }

    pub fn cluster(&self, m: usize) -> Option<&ContextClusterState<T>> {
        self.clusters.get(m)
    }
}

/// One learner instance. Single-threaded; run one instance per replication.
#[derive(Debug, Clone)]
pub struct Policy<T> {
    params: AlgoParams<T>,
    kind: PolicyKind,
    arm_pick: ArmPick,
    slot: u64,
    current: Option<EpochState<T>>,
    retired: Option<EpochState<T>>,
}

impl<T: Scalar> Policy<T> {
    pub fn new(params: AlgoParams<T>, kind: PolicyKind, arm_pick: ArmPick) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            params,
            kind,
            arm_pick,
            slot: 0,
            current: None,
            retired: None,
        })
    }

    pub fn params(&self) -> &AlgoParams<T> {
        &self.params
    }

    pub fn kind(&self) -> PolicyKind {
        self.kind
    }

    /// Last slot a decision was emitted for (0 before the first step).
    pub fn slot(&self) -> u64 {
        self.slot
    }

    pub fn epoch_state(&self) -> Option<&EpochState<T>> {
        self.current.as_ref()
    }

    /// State of the epoch that ended when the last `step` crossed an epoch
    /// boundary, if not taken yet.
    pub fn take_retired(&mut self) -> Option<EpochState<T>> {
        self.retired.take()
    }

    /// Chooses an arm for context `x` in the next slot, and whether to query.
    pub fn step<R: Rng + ?Sized>(&mut self, x: &Point<T>, rng: &mut R) -> Result<Decision<T>> {
        let t = self.slot + 1;
        let i = epoch_of_slot(t);
        if self.current.as_ref().map(EpochState::epoch) != Some(i) {
            let fresh = EpochState::begin(i, &self.params)?;
            self.retired = self.current.replace(fresh);
        }
        let state = self
            .current
            .as_ref()
            .expect("epoch state initialized above");
        let m = state.contexts.locate(x)?;
        let cluster = &state.clusters[m];

        let (n, phase) = if cluster.is_stopped() {
            (cluster.exploitation_arm(), Phase::Exploitation)
        } else {
            let n = cluster
                .next_unselected()
                .expect("an open round always has an unsampled active arm cluster");
            (n, Phase::Exploration)
        };
        let prior = match phase {
            Phase::Exploitation => None,
            Phase::Exploration if self.kind.sends_estimates() => {
                Some(cluster.prior_for(n, i, &self.params)?)
            }
            Phase::Exploration => Some(PriorInfo::uninformative()),
        };
        let arm = self.pick_arm(&state.arms, n, rng)?;
        let round = cluster.round();

        self.slot = t;
        Ok(Decision {
            slot: t,
            epoch: i,
            round,
            context_cluster: m,
            arm_cluster: n,
            arm,
            query: phase == Phase::Exploration,
            prior,
            phase,
        })
    }

    /// Feeds back the annotated reward for a querying decision. Returns the
    /// round outcome when this reward completed a round.
    pub fn record_reward(
        &mut self,
        decision: &Decision<T>,
        reward: T,
    ) -> Result<Option<RoundOutcome>> {
        let allow_stop = self.kind.stops();
        let state = self.current.as_mut().ok_or(Error::StaleDecision)?;
        if !decision.query || decision.epoch != state.epoch {
            return Err(Error::StaleDecision);
        }
        let i = state.epoch;
        let cluster = state
            .clusters
            .get_mut(decision.context_cluster)
            .ok_or(Error::StaleDecision)?;
        cluster.record_reward(decision.arm_cluster, reward)?;
        if cluster.round_complete() {
            return cluster.end_of_round(i, &self.params, allow_stop).map(Some);
        }
        Ok(None)
    }

    /// Flat `key=value` dump of the learning state, one entry per line,
    /// in a fixed order.
    ///
    /// Keys: `slot`, `epoch`, `context_cells`, `arm_cells`, then per context
    /// cluster `m`: `cluster.m.round`, `cluster.m.stopped`,
    /// `cluster.m.stop_round` (`-` if unset), `cluster.m.active`
    /// (comma-separated), and per arm cluster `n` with samples
    /// `cluster.m.arm.n.mean` / `cluster.m.arm.n.count`.
    pub fn snapshot(&self) -> String {
        let mut out = format!("kind={}\nslot={}\n", self.kind.as_str(), self.slot);
        let Some(state) = &self.current else {
            return out;
        };
        out.push_str(&format!(
            "epoch={}\ncontext_cells={}\narm_cells={}\n",
            state.epoch,
            state.contexts.cluster_count(),
            state.arms.cluster_count()
        ));
        for c in &state.clusters {
            let m = c.index();
            let active: Vec<String> = c.active().iter().map(ToString::to_string).collect();
            out.push_str(&format!(
                "cluster.{m}.round={}\ncluster.{m}.stopped={}\ncluster.{m}.stop_round={}\ncluster.{m}.active={}\n",
                c.round(),
                c.is_stopped(),
                c.stop_round().map_or_else(|| "-".to_string(), |s| s.to_string()),
                active.join(","),
            ));
            for n in 0..state.arms.cluster_count() {
                let s = c.stats(n).expect("arm index within partition");
                if s.count > 0 {
                    out.push_str(&format!(
                        "cluster.{m}.arm.{n}.mean={}\ncluster.{m}.arm.{n}.count={}\n",
                        s.mean, s.count
                    ));
                }
            }
        }
        out
    }

    fn pick_arm<R: Rng + ?Sized>(
        &self,
        arms: &Partition<T>,
        n: usize,
        rng: &mut R,
    ) -> Result<Point<T>> {
        match self.arm_pick {
            ArmPick::Center => arms.cluster_center(n),
            ArmPick::Random => {
                let coords = arms
                    .cell_bounds(n)?
                    .into_iter()
                    .map(|(lo, hi)| lo + T::lit(rng.gen::<f64>()) * (hi - lo))
                    .collect();
                Point::new(coords)
            }
        }
    }
}
