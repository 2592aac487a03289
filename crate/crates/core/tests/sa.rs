mod common;

use proptest::prelude::*;

use common::q;
use scp_anneal::ising::{exact_ground_states, reduce, ReductionConfig};
use scp_anneal::rng::rng;
use scp_anneal::sa::{estimate_success, sweep, total_time, wilson_interval, SaConfig, SaModel, Z_95};
use scp_anneal::{IsingModel, Rational, ScpInstance};

#[test]
fn stationary_distribution_is_boltzmann() {
    let model = IsingModel::from_parts(vec![q(1, 2), q(-3, 10)], [(0, 1, q(7, 10))], q(0, 1)).unwrap();
    let sa = SaModel::<f64>::new(&model);
    let beta = 0.8;
    let weights: Vec<f64> = (0..4u64)
        .map(|s| (-beta * common::to_f64(&model.energy_of_state(s))).exp())
        .collect();
    let z: f64 = weights.iter().sum();

    let mut r = rng(21);
    let mut bits = vec![false; 2];
    for _ in 0..1000 {
        sweep(&sa, &mut bits, beta, &mut r);
    }
    // thinned so successive samples are close to independent
    let (samples, thin) = (100_000usize, 10);
    let mut counts = [0usize; 4];
    for _ in 0..samples {
        for _ in 0..thin {
            sweep(&sa, &mut bits, beta, &mut r);
        }
        counts[bits[0] as usize | (bits[1] as usize) << 1] += 1;
    }
    for (s, &c) in counts.iter().enumerate() {
        let p = weights[s] / z;
        let sigma = (p * (1.0 - p) / samples as f64).sqrt();
        let got = c as f64 / samples as f64;
        assert!((got - p).abs() <= 3.0 * sigma, "state {s}: {got} vs {p} (σ = {sigma})");
    }
}

#[test]
fn flip_delta_matches_energy_difference() {
    let inst = ScpInstance::worked_example();
    let (model, _) = reduce::<Rational>(&inst, &ReductionConfig::default()).unwrap();
    let sa = SaModel::<f64>::new(&model);
    let mut r = rng(5);
    use rand::Rng;
    for _ in 0..200 {
        let mut bits: Vec<bool> = (0..model.num_spins()).map(|_| r.gen()).collect();
        let i = r.gen_range(0..bits.len());
        let before = sa.energy(&bits);
        let delta = sa.flip_delta(&bits, i);
        bits[i] = !bits[i];
        assert!((sa.energy(&bits) - before - delta).abs() < 1e-12);
        assert!((sa.energy(&bits) - common::to_f64(&model.energy(&bits).unwrap())).abs() < 1e-12);
    }
}

#[test]
fn longer_schedules_succeed_more_often() {
    let (model, _) = reduce::<Rational>(&ScpInstance::worked_example(), &ReductionConfig::default()).unwrap();
    let optimum = common::to_f64(&exact_ground_states(&model).unwrap().energy);
    let short = estimate_success(&model, &SaConfig::new(2, 1, 4), 400, optimum).unwrap();
    let long = estimate_success(&model, &SaConfig::new(300, 1, 4), 400, optimum).unwrap();
    assert!(long.w > short.w, "{} vs {}", long.w, short.w);
    assert!(long.ci.0 > 0.2);
}

proptest! {
    #[test]
    fn repetitions_are_minimal(sweeps in 1usize..1000, w in 0.001f64..0.999, p in 0.01f64..0.99) {
        let (reps, t) = total_time(sweeps, w, p).unwrap();
        prop_assert_eq!(t, reps * sweeps as u64);
        let reached = |r: u64| 1.0 - (1.0 - w).powf(r as f64);
        // allow for rounding right at the boundary
        prop_assert!(reached(reps) >= p - 1e-12);
        if reps > 1 {
            prop_assert!(reached(reps - 1) < p + 1e-12);
        }
    }

    #[test]
    fn wilson_interval_brackets_estimate(trials in 1usize..5000, frac in 0.0f64..=1.0) {
        let successes = ((trials as f64) * frac).round() as usize;
        let (lo, hi) = wilson_interval(successes, trials, Z_95);
        let w = successes as f64 / trials as f64;
        prop_assert!(0.0 <= lo && lo <= w + 1e-12 && w <= hi + 1e-12 && hi <= 1.0);
    }
}
