use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Algorithm and query-cost constants.
///
/// `l_x` and `l_k` are the Lipschitz constants the learner assumes for the
/// context and arm directions; `l` is the elimination margin and must exceed
/// `4 * (l_x + l_k)`. The query cost for a prior `(a, b, delta)` is
/// `c * ((b - a)^beta1 + eta * delta^beta2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgoParams<T> {
    pub d_x: usize,
    pub d_k: usize,
    pub alpha: T,
    pub gamma: T,
    pub l_x: T,
    pub l_k: T,
    pub l: T,
    pub c: T,
    pub eta: T,
    pub beta1: T,
    pub beta2: T,
}

impl<T: Scalar> AlgoParams<T> {
    /// Defaults for the given dimensions and Lipschitz constants:
    /// `alpha = 1/(d_x+d_k+2)`, `gamma = (d_k+1)/(d_x+d_k+2)`,
    /// `l = 4(l_x+l_k) + 1`, `c = 0.5`, `eta = 1`, `beta1 = 1`, `beta2 = 2`.
    pub fn new(d_x: usize, d_k: usize, l_x: T, l_k: T) -> Self {
        Self {
            d_x,
            d_k,
            alpha: default_alpha(d_x, d_k),
            gamma: default_gamma(d_x, d_k),
            l_x,
            l_k,
            l: default_margin(l_x, l_k),
            c: T::lit(0.5),
            eta: T::one(),
            beta1: T::one(),
            beta2: T::lit(2.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.d_x == 0 || self.d_k == 0 {
            return fail(format!(
                "dimensions must be positive (d_x = {}, d_k = {})",
                self.d_x, self.d_k
            ));
        }
        let open_unit = |v: T| v > T::zero() && v < T::one();
        if !open_unit(self.alpha) {
            return fail(format!("alpha = {} must lie in (0, 1)", self.alpha));
        }
        if !open_unit(self.gamma) {
            return fail(format!("gamma = {} must lie in (0, 1)", self.gamma));
        }
        if !(self.l_x >= T::zero() && self.l_k >= T::zero()) {
            return fail(format!(
                "Lipschitz constants must be non-negative (l_x = {}, l_k = {})",
                self.l_x, self.l_k
            ));
        }
        let floor = T::lit(4.0) * (self.l_x + self.l_k);
        if !(self.l.is_finite() && self.l > floor) {
            return fail(format!(
                "elimination margin l = {} must exceed 4(l_x + l_k) = {floor}",
                self.l
            ));
        }
        if self.c.is_nan() || self.eta.is_nan() || self.c <= T::zero() || self.eta <= T::zero() {
            return fail(format!(
                "cost scale c = {} and weight eta = {} must be positive",
                self.c, self.eta
            ));
        }
        if self.beta1.is_nan()
            || self.beta2.is_nan()
            || self.beta1 < T::one()
            || self.beta2 < T::one()
        {
            return fail(format!(
                "cost exponents must be >= 1 (beta1 = {}, beta2 = {})",
                self.beta1, self.beta2
            ));
        }
        Ok(())
    }

    /// `(d_x + d_k + 1) / (d_x + d_k + 2)`, the growth exponent of the regret bound.
    pub fn regret_exponent(&self) -> T {
        let d = T::from_count((self.d_x + self.d_k) as u64);
        (d + T::one()) / (d + T::lit(2.0))
    }
}

pub fn default_alpha<T: Scalar>(d_x: usize, d_k: usize) -> T {
    T::one() / T::from_count((d_x + d_k + 2) as u64)
}

pub fn default_gamma<T: Scalar>(d_x: usize, d_k: usize) -> T {
    T::from_count((d_k + 1) as u64) / T::from_count((d_x + d_k + 2) as u64)
}

pub fn default_margin<T: Scalar>(l_x: T, l_k: T) -> T {
    T::lit(4.0) * (l_x + l_k) + T::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_follow_dimensions() {
        let p = AlgoParams::<f64>::new(2, 2, 0.5, 0.5);
        assert!((p.alpha - 1.0 / 6.0).abs() < 1e-15);
        assert!((p.gamma - 0.5).abs() < 1e-15);
        assert_eq!(p.l, 5.0);
        p.validate().unwrap();

        let p = AlgoParams::new(1, 1, 0.5, 0.5);
        assert_eq!(p.alpha, 0.25);
        assert_eq!(p.gamma, 0.5);
        assert_eq!(p.regret_exponent(), 0.75);
    }

    #[test]
    fn margin_must_exceed_lipschitz_floor() {
        let mut p = AlgoParams::new(1, 1, 0.5, 0.5);
        p.l = 4.0;
        assert!(p.validate().is_err());
        p.l = 4.0 + 1e-9;
        assert!(p.validate().is_ok());
    }

    #[test]
    fn rejects_out_of_range_constants() {
        let base = AlgoParams::new(1, 1, 0.5, 0.5);
        let cases: Vec<fn(&mut AlgoParams<f64>)> = vec![
            |p| p.alpha = 0.0,
            |p| p.alpha = 1.0,
            |p| p.gamma = 1.0,
            |p| p.c = 0.0,
            |p| p.eta = -1.0,
            |p| p.beta1 = 0.5,
            |p| p.beta2 = 0.99,
            |p| p.l_x = -0.1,
            |p| p.d_k = 0,
        ];
        for tweak in cases {
            let mut p = base.clone();
            tweak(&mut p);
            assert!(p.validate().is_err(), "{p:?}");
        }
    }
}
