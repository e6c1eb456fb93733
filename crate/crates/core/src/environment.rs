//! Synthetic Lipschitz reward landscapes, Bernoulli rewards, and the
//! cost-charging annotator.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::params::AlgoParams;
use crate::policy::PriorInfo;
use crate::scalar::Scalar;
use crate::spaces::{dist_max, Point};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `max(0, 1 - lambda * d(k, x))`
    Peak,
    /// `max(0, 1 - lambda * d(k, x)^2)`
    Dome,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Peak => "peak",
            Family::Dome => "dome",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "peak" => Ok(Family::Peak),
            "dome" => Ok(Family::Dome),
            other => Err(Error::Config(format!(
                "unknown landscape family `{other}` (expected peak or dome)"
            ))),
        }
    }
}

/// Expected-reward surface `mu(x, k)` over `[0,1]^d_x x [0,1]^d_k`.
///
/// Both families peak at `k = x`, so the best arm for every context is the
/// context itself with `mu* = 1`. Distances use the max-metric.
#[derive(Debug, Clone, PartialEq)]
pub struct Landscape<T> {
    family: Family,
    lambda: T,
    d_x: usize,
    d_k: usize,
}

impl<T: Scalar> Landscape<T> {
    pub fn new(family: Family, lambda: T, d_x: usize, d_k: usize) -> Result<Self> {
        if !(lambda.is_finite() && lambda > T::zero()) {
            return Err(Error::Config(format!(
                "landscape steepness must be positive, got {lambda}"
            )));
        }
        if d_x == 0 || d_x != d_k {
            return Err(Error::Config(format!(
                "{family} landscapes compare arms with contexts and need d_x = d_k >= 1 (got {d_x}, {d_k})"
            )));
        }
        Ok(Self {
            family,
            lambda,
            d_x,
            d_k,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.d_x, self.d_k)
    }

    /// True Lipschitz constant in the context direction.
    pub fn lipschitz_x(&self) -> T {
        match self.family {
            Family::Peak => self.lambda,
            Family::Dome => T::lit(2.0) * self.lambda,
        }
    }

    /// True Lipschitz constant in the arm direction.
    pub fn lipschitz_k(&self) -> T {
        self.lipschitz_x()
    }

    pub fn mean_reward(&self, x: &Point<T>, k: &Point<T>) -> Result<T> {
        self.check(x.dim(), self.d_x)?;
        self.check(k.dim(), self.d_k)?;
        Ok(self.mean_at(x.coords(), k.coords()))
    }

    pub(crate) fn mean_at(&self, x: &[T], k: &[T]) -> T {
        let d = dist_max(k, x);
        let drop = match self.family {
            Family::Peak => self.lambda * d,
            Family::Dome => self.lambda * d * d,
        };
        (T::one() - drop).max(T::zero())
    }

    /// Best arm and its expected reward for context `x`.
    pub fn oracle_best(&self, x: &Point<T>) -> Result<(Point<T>, T)> {
        self.check(x.dim(), self.d_x)?;
        Ok((x.clone(), T::one()))
    }

    /// Lattice approximation of `max mu(x, k)` over a context cell times an
    /// arm cell, each given as per-axis `(lo, hi)` bounds. Uses `grid_n`
    /// evenly spaced values per axis, endpoints included.
    pub fn cluster_oracle(
        &self,
        context_cell: &[(T, T)],
        arm_cell: &[(T, T)],
        grid_n: usize,
    ) -> Result<T> {
        if grid_n < 2 {
            return Err(Error::Config(format!("grid_n must be >= 2, got {grid_n}")));
        }
        self.check(context_cell.len(), self.d_x)?;
        self.check(arm_cell.len(), self.d_k)?;
        let xs = lattice(context_cell, grid_n);
        let ks = lattice(arm_cell, grid_n);
        let mut best = T::neg_infinity();
        for x in &xs {
            for k in &ks {
                best = best.max(self.mean_at(x, k));
            }
        }
        Ok(best)
    }

    fn check(&self, got: usize, expected: usize) -> Result<()> {
        if got != expected {
            return Err(Error::DimensionMismatch { expected, got });
        }
        Ok(())
    }
}

fn lattice<T: Scalar>(cell: &[(T, T)], grid_n: usize) -> Vec<Vec<T>> {
    let steps = T::from_count(grid_n as u64 - 1);
    let axis_values: Vec<Vec<T>> = cell
        .iter()
        .map(|&(lo, hi)| {
            (0..grid_n)
                .map(|j| lo + (hi - lo) * T::from_count(j as u64) / steps)
                .collect()
        })
        .collect();
    let mut points: Vec<Vec<T>> = vec![Vec::with_capacity(cell.len())];
    for values in &axis_values {
        points = points
            .into_iter()
            .flat_map(|p| {
                values.iter().map(move |&v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    points
}

/// Bernoulli(`mu`) reward in `{0, 1}`.
pub fn sample_reward<T: Scalar, R: Rng + ?Sized>(mu: T, rng: &mut R) -> T {
    if T::lit(rng.gen::<f64>()) < mu {
        T::one()
    } else {
        T::zero()
    }
}

/// Uniform context in `[0, 1)^d`.
pub fn context_arrival<T: Scalar, R: Rng + ?Sized>(rng: &mut R, d: usize) -> Point<T> {
    let coords = (0..d).map(|_| T::lit(rng.gen::<f64>())).collect();
    Point::new(coords).expect("uniform draws lie in the unit cube")
}

/// `c * ((b - a)^beta1 + eta * delta^beta2)`.
pub fn query_cost<T: Scalar>(prior: &PriorInfo<T>, params: &AlgoParams<T>) -> T {
    params.c * (prior.width().powf(params.beta1) + params.eta * prior.delta.powf(params.beta2))
}

/// What the annotator returns for one slot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Annotation<T> {
    /// Sampled reward. Revealed to the learner only when queried.
    pub reward: T,
    pub cost: T,
    /// Whether `mu` lay inside the prior; `None` without a query.
    pub prior_valid: Option<bool>,
}

impl<T: Scalar> Annotation<T> {
    pub fn queried(&self) -> bool {
        self.prior_valid.is_some()
    }
}

/// Charges the query (if any) and checks the prior against the true mean.
pub fn annotate<T: Scalar>(
    prior: Option<&PriorInfo<T>>,
    truth: T,
    mu: T,
    params: &AlgoParams<T>,
) -> Annotation<T> {
    match prior {
        None => Annotation {
            reward: truth,
            cost: T::zero(),
            prior_valid: None,
        },
        Some(p) => Annotation {
            reward: truth,
            cost: query_cost(p, params),
            prior_valid: Some(p.contains(mu)),
        },
    }
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    fn pt(c: &[f64]) -> Point<f64> {
        Point::new(c.to_vec()).unwrap()
    }

    #[test]
    fn mean_reward_examples() {
        let peak = Landscape::new(Family::Peak, 0.5, 2, 2).unwrap();
        let mu = peak
            .mean_reward(&pt(&[0.3, 0.7]), &pt(&[0.5, 0.5]))
            .unwrap();
        assert!((mu - 0.9).abs() < 1e-15);
        assert_eq!(
            peak.mean_reward(&pt(&[0.3, 0.7]), &pt(&[0.3, 0.7]))
                .unwrap(),
            1.0
        );

        let dome = Landscape::new(Family::Dome, 1.0, 1, 1).unwrap();
        assert_eq!(dome.mean_reward(&pt(&[0.0]), &pt(&[0.5])).unwrap(), 0.75);
        assert_eq!(dome.lipschitz_x(), 2.0);

        let steep = Landscape::new(Family::Peak, 3.0, 1, 1).unwrap();
        assert_eq!(steep.mean_reward(&pt(&[0.0]), &pt(&[1.0])).unwrap(), 0.0);
    }

    #[test]
    fn landscape_validation() {
        assert!(Landscape::new(Family::Peak, 0.5, 2, 1).is_err());
        assert!(Landscape::new(Family::Dome, 0.0, 1, 1).is_err());
        let peak = Landscape::new(Family::Peak, 0.5, 2, 2).unwrap();
        assert!(matches!(
            peak.mean_reward(&pt(&[0.3]), &pt(&[0.5, 0.5])),
            Err(Error::DimensionMismatch { .. })
        ));
        assert_eq!("dome".parse::<Family>().unwrap(), Family::Dome);
        assert!("ridge".parse::<Family>().is_err());
    }

    #[test]
    fn oracle_examples() {
        let peak = Landscape::new(Family::Peak, 0.5, 2, 2).unwrap();
        let (k, mu) = peak.oracle_best(&pt(&[0.3, 0.7])).unwrap();
        assert_eq!((k.coords(), mu), (&[0.3, 0.7][..], 1.0));
        let dome = Landscape::new(Family::Dome, 1.0, 2, 2).unwrap();
        let (k, mu) = dome.oracle_best(&pt(&[0.0, 0.0])).unwrap();
        assert_eq!((k.coords(), mu), (&[0.0, 0.0][..], 1.0));
    }

    #[test]
    fn cluster_oracle_examples() {
        let lo = [(0.0, 0.5), (0.0, 0.5)];
        let hi = [(0.5, 1.0), (0.5, 1.0)];
        let peak = Landscape::new(Family::Peak, 0.5, 2, 2).unwrap();
        assert_eq!(peak.cluster_oracle(&lo, &lo, 9).unwrap(), 1.0);
        let peak1 = Landscape::new(Family::Peak, 1.0, 2, 2).unwrap();
        assert_eq!(peak1.cluster_oracle(&lo, &hi, 9).unwrap(), 1.0);
        assert!(peak.cluster_oracle(&lo, &hi, 1).is_err());
    }

    #[test]
    fn cluster_oracle_refines_monotonically() {
        let peak = Landscape::new(Family::Peak, 0.8, 1, 1).unwrap();
        let x = [(0.0, 0.3)];
        let k = [(0.55, 0.9)];
        // grid_n - 1 doubling keeps every coarser lattice point
        let mut prev = f64::NEG_INFINITY;
        for n in [2, 3, 5, 9, 17] {
            let v = peak.cluster_oracle(&x, &k, n).unwrap();
            assert!(v >= prev);
            prev = v;
        }
        assert!((prev - (1.0 - 0.8 * 0.25)).abs() < 1e-12);
    }

    #[test]
    fn degenerate_bernoulli() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..1000 {
            assert_eq!(sample_reward(0.0, &mut rng), 0.0);
            assert_eq!(sample_reward(1.0, &mut rng), 1.0);
        }
    }

    #[test]
    fn costs() {
        let mut p = AlgoParams::<f64>::new(1, 1, 0.5, 0.5);
        p.c = 1.0;
        p.eta = 1.0;
        p.beta1 = 1.0;
        p.beta2 = 2.0;
        let full = annotate(Some(&PriorInfo::uninformative()), 1.0, 0.4, &p);
        assert_eq!(full.cost, 1.0);
        assert_eq!(full.prior_valid, Some(true));

        let none = annotate(None, 1.0, 0.4, &p);
        assert_eq!(none.cost, 0.0);
        assert!(!none.queried());

        let prior = PriorInfo {
            a: 0.2,
            b: 0.7,
            delta: 0.01,
        };
        let a = annotate(Some(&prior), 0.0, 0.8, &p);
        assert!((a.cost - 0.5001).abs() < 1e-15);
        assert_eq!(a.prior_valid, Some(false));
    }

    #[test]
    fn arrivals_are_seeded() {
        let a: Vec<Point<f64>> = {
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            (0..5).map(|_| context_arrival(&mut rng, 3)).collect()
        };
        let b: Vec<Point<f64>> = {
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            (0..5).map(|_| context_arrival(&mut rng, 3)).collect()
        };
        assert_eq!(a, b);
        assert!(a.iter().all(|p| p.dim() == 3));
    }
}
