use std::collections::BTreeSet;

use super::control::{control_d1, control_d2, first_stopping_round, prior_delta, prior_half_width};
use crate::error::{Error, Result};
use crate::params::AlgoParams;
use crate::scalar::Scalar;

/// Running sample mean of one arm cluster.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ArmStats<T> {
    pub mean: T,
    pub count: u64,
}

/// Interval `[a, b]` claimed to contain the expected reward with probability
/// at least `1 - delta`. Not clamped to `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriorInfo<T> {
    pub a: T,
    pub b: T,
    pub delta: T,
}

impl<T: Scalar> PriorInfo<T> {
    /// `(0, 1, 0)`: no information beyond the reward range.
    pub fn uninformative() -> Self {
        Self {
            a: T::zero(),
            b: T::one(),
            delta: T::zero(),
        }
    }

    pub fn width(&self) -> T {
        self.b - self.a
    }

    pub fn contains(&self, mu: T) -> bool {
        self.a <= mu && mu <= self.b
    }
}

/// Result of closing a round for one context cluster.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundOutcome {
    /// The round that just ended.
    pub round: u64,
    pub removed: Vec<usize>,
    pub stopped: bool,
}

/// Elimination state of one context cluster within an epoch.
#[derive(Debug, Clone, PartialEq)]
pub struct ContextClusterState<T> {
    index: usize,
    active: BTreeSet<usize>,
    round: u64,
    selected: BTreeSet<usize>,
    stats: Vec<ArmStats<T>>,
    stopped: bool,
    stop_round: Option<u64>,
}

impl<T: Scalar> ContextClusterState<T> {
    pub fn new(index: usize, arm_clusters: usize) -> Self {
        Self {
            index,
            active: (0..arm_clusters).collect(),
            round: 1,
            selected: BTreeSet::new(),
            stats: vec![ArmStats::default(); arm_clusters],
            stopped: false,
            stop_round: None,
        }
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn active(&self) -> &BTreeSet<usize> {
        &self.active
    }

    pub fn is_active(&self, n: usize) -> bool {
        self.active.contains(&n)
    }

    pub fn round(&self) -> u64 {
        self.round
    }

    pub fn selected_this_round(&self) -> &BTreeSet<usize> {
        &self.selected
    }

    pub fn stats(&self, n: usize) -> Option<ArmStats<T>> {
        self.stats.get(n).copied()
    }

    pub fn is_stopped(&self) -> bool {
        self.stopped
    }

    pub fn stop_round(&self) -> Option<u64> {
        self.stop_round
    }

    /// Lowest-indexed active arm cluster not yet sampled this round.
    pub fn next_unselected(&self) -> Option<usize> {
        self.active.difference(&self.selected).next().copied()
    }

    /// Arm cluster played once querying has stopped.
    pub fn exploitation_arm(&self) -> usize {
        *self
            .active
            .first()
            .expect("the empirical leader is never deactivated")
    }

    pub fn round_complete(&self) -> bool {
        self.selected.len() == self.active.len()
    }

    /// Prior sent with a query for arm cluster `n` in epoch `i`.
    pub fn prior_for(&self, n: usize, i: u32, params: &AlgoParams<T>) -> Result<PriorInfo<T>> {
        self.require_active(n)?;
        if self.round == 1 {
            return Ok(PriorInfo::uninformative());
        }
        let mean = self.stats[n].mean;
        let half = prior_half_width(i, self.round, params);
        Ok(PriorInfo {
            a: mean - half,
            b: mean + half,
            delta: prior_delta(i, params.gamma),
        })
    }

    /// Folds a queried reward into the running mean of `n`.
    pub fn record_reward(&mut self, n: usize, r: T) -> Result<()> {
        self.require_active(n)?;
        if !(r >= T::zero() && r <= T::one()) {
            return Err(Error::RewardOutOfRange(r.as_f64()));
        }
        if self.stopped || !self.selected.insert(n) {
            return Err(Error::DoubleRecord {
                context: self.index,
                arm: n,
                round: self.round,
            });
        }
        let s = &mut self.stats[n];
        let count = T::from_count(s.count);
        s.mean = (s.mean * count + r) / (count + T::one());
        s.count += 1;
        Ok(())
    }

    /// Eliminates arm clusters whose gap to the empirical leader reaches
    /// `D1`, then stops querying if every survivor is within `D2`
    /// (`allow_stop == false` keeps the cluster exploring forever).
    pub fn end_of_round(
        &mut self,
        i: u32,
        params: &AlgoParams<T>,
        allow_stop: bool,
    ) -> Result<RoundOutcome> {
        if !self.round_complete() || self.stopped {
            return Err(Error::Config(format!(
                "round {} of context cluster {} is not ready to close",
                self.round, self.index
            )));
        }
        let s = self.round;
        let leader = self
            .active
            .iter()
            .map(|&n| self.stats[n].mean)
            .fold(T::neg_infinity(), T::max);

        let d1 = control_d1(i, s, params);
        let removed: Vec<usize> = self
            .active
            .iter()
            .copied()
            .filter(|&n| leader - self.stats[n].mean >= d1)
            .collect();
        for n in &removed {
            self.active.remove(n);
        }

        let mut stopped = false;
        if allow_stop {
            let d2 = control_d2(i, s, params);
            if self
                .active
                .iter()
                .all(|&n| leader - self.stats[n].mean <= d2)
            {
                let bound = first_stopping_round(i, params);
                if s > bound {
                    return Err(Error::StopBoundViolated {
                        epoch: i,
                        context: self.index,
                        stop_round: s,
                        bound,
                    });
                }
                self.stopped = true;
                self.stop_round = Some(s);
                stopped = true;
            }
        }

        self.round += 1;
        self.selected.clear();
        Ok(RoundOutcome {
            round: s,
            removed,
            stopped,
        })
    }

    fn require_active(&self, n: usize) -> Result<()> {
        if !self.active.contains(&n) {
            return Err(Error::InactiveArm {
                context: self.index,
                arm: n,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> AlgoParams<f64> {
        AlgoParams::new(1, 1, 0.5, 0.5)
    }

    fn with_means(means: &[f64]) -> ContextClusterState<f64> {
        let mut st = ContextClusterState::new(0, means.len());
        for (n, &m) in means.iter().enumerate() {
            st.record_reward(n, m).unwrap();
        }
        st
    }

    #[test]
    fn mean_update() {
        let mut st = ContextClusterState::<f64>::new(0, 1);
        st.record_reward(0, 0.3).unwrap();
        assert_eq!(
            st.stats(0).unwrap(),
            ArmStats {
                mean: 0.3,
                count: 1
            }
        );

        let mut st = ContextClusterState::<f64>::new(0, 1);
        st.stats[0] = ArmStats {
            mean: 0.5,
            count: 1,
        };
        st.record_reward(0, 0.8).unwrap();
        let s = st.stats(0).unwrap();
        assert!((s.mean - 0.65).abs() < 1e-15);
        assert_eq!(s.count, 2);
    }

    #[test]
    fn constant_rewards_keep_constant_mean() {
        let mut st = ContextClusterState::<f64>::new(0, 1);
        let mut p = params();
        p.l = 1e6; // keeps the cluster from stopping
        for _ in 0..10 {
            st.record_reward(0, 1.0).unwrap();
            st.end_of_round(3, &p, false).unwrap();
        }
        assert_eq!(
            st.stats(0).unwrap(),
            ArmStats {
                mean: 1.0,
                count: 10
            }
        );
    }

    #[test]
    fn double_record_rejected() {
        let mut st = ContextClusterState::<f64>::new(4, 2);
        st.record_reward(1, 0.5).unwrap();
        assert_eq!(
            st.record_reward(1, 0.5),
            Err(Error::DoubleRecord {
                context: 4,
                arm: 1,
                round: 1
            })
        );
        assert!(matches!(
            st.record_reward(0, 1.5),
            Err(Error::RewardOutOfRange(_))
        ));
        assert!(matches!(
            st.record_reward(7, 0.5),
            Err(Error::InactiveArm { .. })
        ));
    }

    #[test]
    fn first_round_prior_is_uninformative() {
        let st = ContextClusterState::<f64>::new(0, 3);
        assert_eq!(
            st.prior_for(2, 9, &params()).unwrap(),
            PriorInfo::uninformative()
        );
    }

    #[test]
    fn round_robin_order_is_ascending() {
        let mut st = ContextClusterState::<f64>::new(0, 3);
        for expect in 0..3 {
            assert_eq!(st.next_unselected(), Some(expect));
            st.record_reward(expect, 0.5).unwrap();
        }
        assert_eq!(st.next_unselected(), None);
        assert!(st.round_complete());
    }

    // A round-`s` state whose arm clusters all hold `s` samples with the given means.
    fn at_round(means: &[f64], s: u64) -> ContextClusterState<f64> {
        let mut st = ContextClusterState::new(0, means.len());
        for (n, &m) in means.iter().enumerate() {
            st.stats[n] = ArmStats { mean: m, count: s };
            st.selected.insert(n);
        }
        st.round = s;
        st
    }

    #[test]
    fn large_gap_is_eliminated() {
        let mut p = AlgoParams::new(1, 1, 0.0, 0.0);
        p.l = 0.3;
        let s = 1_000;
        let d1 = control_d1(0, s, &p);
        assert!(d1 > 0.3 && d1 < 0.7, "d1 = {d1}");
        let mut st = at_round(&[0.9, 0.2], s);
        let out = st.end_of_round(0, &p, false).unwrap();
        assert_eq!(out.removed, vec![1]);
        assert_eq!(st.active().iter().copied().collect::<Vec<_>>(), vec![0]);
        assert_eq!(st.round(), s + 1);
        assert!(st.selected_this_round().is_empty());
    }

    #[test]
    fn negative_d2_blocks_stopping() {
        let mut p = AlgoParams::new(1, 1, 0.5, 0.5);
        p.l = 4.0 + 1e-6;
        let s = 2;
        assert!(control_d2(20, s, &p) < 0.0);
        let mut st = at_round(&[0.9, 0.85], s);
        let out = st.end_of_round(20, &p, true).unwrap();
        assert!(out.removed.is_empty());
        assert!(!out.stopped && !st.is_stopped());
    }

    #[test]
    fn singleton_stops_when_d2_nonnegative() {
        let mut st = with_means(&[0.4]);
        let p = params();
        assert!(control_d2(0, 1, &p) >= 0.0);
        let out = st.end_of_round(0, &p, true).unwrap();
        assert!(out.stopped);
        assert_eq!(st.stop_round(), Some(1));
        assert_eq!(st.exploitation_arm(), 0);
        assert!(st.record_reward(0, 0.5).is_err());
    }

    #[test]
    fn stopping_disabled_keeps_exploring() {
        let mut st = with_means(&[0.4]);
        let out = st.end_of_round(0, &params(), false).unwrap();
        assert!(!out.stopped && !st.is_stopped());
    }

    #[test]
    fn leader_survives_ties() {
        let mut p = AlgoParams::new(1, 1, 0.0, 0.0);
        p.l = 0.01;
        let mut st = at_round(&[0.3, 0.3, 0.0], 1_000_000);
        st.end_of_round(0, &p, false).unwrap();
        assert!(st.is_active(0) && st.is_active(1));
        assert!(!st.is_active(2));
    }

    #[test]
    fn stop_past_bound_is_reported() {
        let p = params();
        let bound = first_stopping_round(3, &p);
        let mut st = at_round(&[0.5, 0.5], bound + 1);
        assert_eq!(
            st.end_of_round(3, &p, true),
            Err(Error::StopBoundViolated {
                epoch: 3,
                context: 0,
                stop_round: bound + 1,
                bound
            })
        );
        let mut st = at_round(&[0.5, 0.5], bound);
        assert!(st.end_of_round(3, &p, true).unwrap().stopped);
    }

    #[test]
    fn incomplete_round_cannot_close() {
        let mut st = ContextClusterState::<f64>::new(0, 2);
        st.record_reward(0, 0.1).unwrap();
        assert!(st.end_of_round(1, &params(), true).is_err());
    }
}
