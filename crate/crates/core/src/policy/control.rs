//! Confidence radius, elimination and stopping thresholds, and the bounds
//! derived from them.

use crate::params::AlgoParams;
use crate::scalar::Scalar;
use crate::spaces::nominal_radius;

/// `T_i = 2^i` as a scalar. Exact for every representable power of two.
pub fn epoch_len<T: Scalar>(i: u32) -> T {
    T::from_count(u64::from(i)).exp2()
}

/// Hoeffding radius after `s` samples in an epoch of length `epoch_len`:
/// `sqrt(ln(2 T^(1+gamma)) / (2 s))`.
pub fn deviation<T: Scalar>(s: u64, epoch_len: u64, gamma: T) -> T {
    assert!(s >= 1, "deviation needs at least one sample");
    assert!(epoch_len >= 1, "epochs have at least one slot");
    let two = T::lit(2.0);
    let log_term = two.ln() + (T::one() + gamma) * T::from_count(epoch_len).ln();
    (log_term / (two * T::from_count(s))).sqrt()
}

fn deviation_in_epoch<T: Scalar>(s: u64, i: u32, gamma: T) -> T {
    assert!(s >= 1, "deviation needs at least one sample");
    let two = T::lit(2.0);
    let ln2 = two.ln();
    let log_term = ln2 + (T::one() + gamma) * T::from_count(u64::from(i)) * ln2;
    (log_term / (two * T::from_count(s))).sqrt()
}

/// `L * T_i^(-alpha)`.
pub fn epsilon<T: Scalar>(i: u32, params: &AlgoParams<T>) -> T {
    params.l * nominal_radius(i, params.alpha)
}

/// Cluster-inaccuracy slack `2 L_X rho_i + 2 L_K rho_i`.
pub fn lipschitz_slack<T: Scalar>(i: u32, params: &AlgoParams<T>) -> T {
    let rho = nominal_radius(i, params.alpha);
    T::lit(2.0) * (params.l_x + params.l_k) * rho
}

fn estimation_slack<T: Scalar>(i: u32, s: u64, params: &AlgoParams<T>) -> T {
    T::lit(2.0) * deviation_in_epoch(s, i, params.gamma) + lipschitz_slack(i, params)
}

/// Elimination threshold: an arm cluster whose empirical gap to the leader
/// reaches this value is deactivated.
pub fn control_d1<T: Scalar>(i: u32, s: u64, params: &AlgoParams<T>) -> T {
    epsilon(i, params) + estimation_slack(i, s, params)
}

/// Stopping threshold: once every surviving gap is at most this value the
/// context cluster stops querying for the rest of the epoch. Negative values
/// make stopping impossible.
pub fn control_d2<T: Scalar>(i: u32, s: u64, params: &AlgoParams<T>) -> T {
    T::lit(2.0) * epsilon(i, params) - estimation_slack(i, s, params)
}

/// Half-width of the prior interval sent with a query in round `round >= 2`.
pub fn prior_half_width<T: Scalar>(i: u32, round: u64, params: &AlgoParams<T>) -> T {
    assert!(round >= 2, "round-1 priors carry no estimate");
    lipschitz_slack(i, params) + T::lit(2.0) * deviation_in_epoch(round - 1, i, params.gamma)
}

/// Confidence level `T_i^(-(1+gamma))` attached to informed priors; also the
/// Hoeffding bound on a single round's abnormal event.
pub fn prior_delta<T: Scalar>(i: u32, gamma: T) -> T {
    epoch_len::<T>(i).powf(-(T::one() + gamma))
}

/// Real-valued bound on the stopping round,
/// `8 T_i^(2 alpha) ln(2 T_i^(gamma+1)) / (L - 4 L_X - 4 L_K)^2`.
pub fn stop_round_bound<T: Scalar>(i: u32, params: &AlgoParams<T>) -> T {
    let ti = epoch_len::<T>(i);
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    let margin = params.l - four * (params.l_x + params.l_k);
    T::lit(8.0) * ti.powf(two * params.alpha) * (two * ti.powf(params.gamma + T::one())).ln()
        / (margin * margin)
}

/// Smallest round `s` with `D1(i, s) <= D2(i, s)`. A context cluster that
/// completes this round always stops, so no stop round can exceed it.
pub fn first_stopping_round<T: Scalar>(i: u32, params: &AlgoParams<T>) -> u64 {
    let crosses = |s: u64| control_d1(i, s, params) <= control_d2(i, s, params);
    let guess = stop_round_bound(i, params)
        .ceil()
        .to_u64()
        .unwrap_or(u64::MAX)
        .max(1);
    let mut s = guess;
    while s > 1 && crosses(s - 1) {
        s -= 1;
    }
    while !crosses(s) {
        s += 1;
    }
    s
}
