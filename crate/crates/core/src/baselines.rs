//! Policy variants sharing the partition and elimination core.
//!
//! * [`PolicyKind::CbAl`] sends its running interval estimate with every
//!   query and stops querying once survivors are indistinguishable.
//! * [`PolicyKind::CbAlNoPrior`] behaves identically but always sends the
//!   uninformative prior `(0, 1, 0)`, so each query costs exactly `c`.
//! * [`PolicyKind::AlwaysQuery`] never stops: it queries every slot with the
//!   uninformative prior while still eliminating arm clusters.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PolicyKind {
    CbAl,
    CbAlNoPrior,
    AlwaysQuery,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 3] = [
        PolicyKind::CbAl,
        PolicyKind::CbAlNoPrior,
        PolicyKind::AlwaysQuery,
    ];

    /// Whether queries carry the learned interval rather than `(0, 1, 0)`.
    pub fn sends_estimates(self) -> bool {
        matches!(self, PolicyKind::CbAl)
    }

    /// Whether a context cluster may switch to query-free exploitation.
    pub fn stops(self) -> bool {
        !matches!(self, PolicyKind::AlwaysQuery)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PolicyKind::CbAl => "cbal",
            PolicyKind::CbAlNoPrior => "cbal_no_prior",
            PolicyKind::AlwaysQuery => "always_query",
        }
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PolicyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PolicyKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown policy `{s}` (expected cbal, cbal_no_prior or always_query)"
                ))
            })
    }
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::policy::{ArmPick, Phase, Policy, PriorInfo};
    use crate::{AlgoParams, Point};

    #[test]
    fn names_round_trip() {
        for k in PolicyKind::ALL {
            assert_eq!(k.as_str().parse::<PolicyKind>().unwrap(), k);
        }
        assert!("ucb".parse::<PolicyKind>().is_err());
    }

    #[test]
    fn always_query_never_exploits() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = AlgoParams::new(1, 1, 0.5, 0.5);
        let mut pol = Policy::new(p, PolicyKind::AlwaysQuery, ArmPick::Center).unwrap();
        let x = Point::new(vec![0.5]).unwrap();
        for _ in 0..2000 {
            let d = pol.step(&x, &mut rng).unwrap();
            assert!(d.query);
            assert_eq!(d.phase, Phase::Exploration);
            assert_eq!(d.prior, Some(PriorInfo::uninformative()));
            pol.record_reward(&d, 1.0).unwrap();
        }
    }

    #[test]
    fn no_prior_sends_uninformative_priors_only() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = AlgoParams::new(1, 1, 0.5, 0.5);
        let mut pol = Policy::new(p, PolicyKind::CbAlNoPrior, ArmPick::Center).unwrap();
        let x = Point::new(vec![0.2]).unwrap();
        for _ in 0..2000 {
            let d = pol.step(&x, &mut rng).unwrap();
            match d.phase {
                Phase::Exploration => {
                    assert_eq!(d.prior, Some(PriorInfo::uninformative()));
                    pol.record_reward(&d, 0.5).unwrap();
                }
                Phase::Exploitation => assert!(d.prior.is_none() && !d.query),
            }
        }
    }
}
