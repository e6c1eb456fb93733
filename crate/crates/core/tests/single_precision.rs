//! The learner instantiated over `f32` follows the `f64` one.

use cbal_core::environment::{context_arrival, sample_reward};
use cbal_core::policy::control::{control_d1, deviation};
use cbal_core::{AlgoParams32, AlgoParams64, ArmPick, Family, Landscape32, Policy32, PolicyKind};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn thresholds_agree_to_single_precision() {
    let p32 = AlgoParams32::new(2, 2, 0.5, 0.5);
    let p64 = AlgoParams64::new(2, 2, 0.5, 0.5);
    for i in [0, 6, 12, 20] {
        for s in [1, 100, 10_000] {
            let a = control_d1(i, s, &p32) as f64;
            let b = control_d1(i, s, &p64);
            assert!((a - b).abs() <= 1e-5 * b, "i={i} s={s}: {a} vs {b}");
        }
    }
    let d: f32 = deviation(1, 64, 0.5);
    assert!((d - 1.861_648_7).abs() < 1e-5);
}

#[test]
fn single_precision_learner_runs() {
    let land = Landscape32::new(Family::Dome, 0.5, 1, 1).unwrap();
    let params = AlgoParams32::new(1, 1, land.lipschitz_x(), land.lipschitz_k());
    let mut pol = Policy32::new(params, PolicyKind::CbAl, ArmPick::Random).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut queries = 0;
    for _ in 0..4096 {
        let x = context_arrival::<f32, _>(&mut rng, 1);
        let d = pol.step(&x, &mut rng).unwrap();
        let r = sample_reward(land.mean_reward(&x, &d.arm).unwrap(), &mut rng);
        if d.query {
            queries += 1;
            pol.record_reward(&d, r).unwrap();
        }
    }
    assert!(queries > 0 && queries <= 4096);
    assert_eq!(pol.slot(), 4096);
}
