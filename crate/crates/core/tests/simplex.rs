mod common;

use common::{bregman, grid_omd_d2, grid_omd_d3, omd_kkt_violation, random_truncated, tsallis};
use meta_inf::inner::omd_update;
use meta_inf::simplex::{
    beta_divergence, bregman_project_truncated, mirror_step, mirror_step_kkt_residual, mix_with_uniform,
    tsallis_entropy, Distribution, TruncationLevel,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn dist(w: &[f64]) -> Distribution<f64> {
    Distribution::new(w.to_vec()).unwrap()
}

#[test]
fn half_entropy_of_two_arm_uniform_equals_divergence_from_vertex() {
    let target = 4.0 * (2f64.sqrt() - 1.0);
    let h = tsallis_entropy(0.5, &Distribution::uniform(2)).unwrap();
    let dv = beta_divergence(0.5, &dist(&[1.0, 0.0]), &Distribution::uniform(2)).unwrap();
    assert!((h - target).abs() < 1e-12);
    assert!((dv - target).abs() < 1e-12);
    assert!((target - 1.656854).abs() < 1e-6);
}

#[test]
fn divergence_matches_value_plus_gradient_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..2000 {
        let d = rng.random_range(2..=8);
        let x = random_truncated(d, 1e-3, &mut rng);
        let y = random_truncated(d, 1e-3, &mut rng);
        for q in [0.5, 0.3, 0.8] {
            let lib = beta_divergence(q, &dist(&x), &dist(&y)).unwrap();
            let oracle = bregman(q, &x, &y);
            assert!((lib - oracle).abs() < 1e-10, "q={q}: {lib} vs {oracle}");
        }
        let lib_h = tsallis_entropy(0.5, &dist(&x)).unwrap();
        assert!((lib_h - tsallis(0.5, &x)).abs() < 1e-12);
    }
}

#[test]
fn entropy_peaks_at_uniform() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for d in [2, 3, 5, 16] {
        let top = tsallis_entropy(0.5, &Distribution::uniform(d)).unwrap();
        for _ in 0..500 {
            let x = random_truncated(d, 0.0, &mut rng);
            let h = tsallis_entropy(0.5, &dist(&x)).unwrap();
            assert!(h >= 0.0 && h <= top + 1e-12);
        }
    }
}

#[test]
fn two_arm_mirror_step_matches_grid_scan() {
    let trunc = TruncationLevel::new(0.01, 2).unwrap();
    let x = omd_update(&dist(&[0.6, 0.4]), &[2.0, 0.0], 0.1, &trunc).unwrap();
    let oracle = grid_omd_d2(&[0.6, 0.4], &[2.0, 0.0], 0.1, 0.01, 1_000_000);
    for i in 0..2 {
        assert!((x.get(i) - oracle[i]).abs() < 1e-5, "{:?} vs {oracle:?}", x.weights());
    }
    // The loss on arm 0 moves mass to arm 1.
    assert!(x.get(0) < 0.6);
}

#[test]
fn projection_of_heavy_vertex_matches_grid() {
    let y = dist(&[0.98, 0.01, 0.01]);
    let trunc = TruncationLevel::new(0.05, 3).unwrap();
    let x = bregman_project_truncated(&y, &trunc).unwrap();
    let oracle = grid_omd_d3(y.weights(), &[0.0; 3], 0.0, 0.05);
    for i in 0..3 {
        assert!((x.get(i) - oracle[i]).abs() < 1e-6, "{:?} vs {oracle:?}", x.weights());
    }
    assert!((x.get(1) - 0.05).abs() < 1e-12 && (x.get(2) - 0.05).abs() < 1e-12);
    assert!(omd_kkt_violation(x.weights(), y.weights(), &[0.0; 3], 0.0, 0.05) < 1e-8);
}

#[test]
fn three_arm_mirror_steps_match_zoomed_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..20 {
        let delta = rng.random_range(0.0..0.2);
        let xt = random_truncated(3, delta, &mut rng);
        let g: Vec<f64> = (0..3).map(|_| rng.random_range(0.0..1.0 / delta.max(0.05))).collect();
        let eta = rng.random_range(0.001..1.0);
        let trunc = TruncationLevel::new(delta, 3).unwrap();
        let x = omd_update(&dist(&xt), &g, eta, &trunc).unwrap();
        let oracle = grid_omd_d3(&xt, &g, eta, delta);
        for i in 0..3 {
            assert!((x.get(i) - oracle[i]).abs() < 1e-5, "{:?} vs {oracle:?}", x.weights());
        }
    }
}

#[test]
fn kkt_holds_in_high_dimension() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for d in [4, 16, 64, 256] {
        for _ in 0..50 {
            let delta = rng.random_range(0.0..1.0 / d as f64);
            let y = random_truncated(d, delta, &mut rng);
            let mut g = vec![0.0; d];
            // Bandit-shaped gradient: one large importance-weighted entry.
            let i = rng.random_range(0..d);
            g[i] = rng.random::<f64>() / y[i];
            let eta = rng.random_range(1e-3..1.0);
            let trunc = TruncationLevel::new(delta, d).unwrap();
            let x = mirror_step(0.5, &dist(&y), &g, eta, &trunc).unwrap();
            let oracle = omd_kkt_violation(x.weights(), &y, &g, eta, delta);
            let lib = mirror_step_kkt_residual(0.5, &dist(&y), &g, eta, &trunc, &x);
            assert!(oracle < 1e-8, "d={d}: oracle residual {oracle}");
            assert!(lib < 1e-8, "d={d}: library residual {lib}");
        }
    }
}

#[test]
fn mixture_examples() {
    let t = TruncationLevel::new(0.05f64, 4).unwrap();
    let m = mix_with_uniform(1, &t).unwrap();
    let want = [0.05, 0.85, 0.05, 0.05];
    for i in 0..4 {
        assert!((m.get(i) - want[i]).abs() < 1e-15);
    }
    let u = mix_with_uniform(2, &TruncationLevel::new(0.25f64, 4).unwrap()).unwrap();
    assert!(u.weights().iter().all(|w| (w - 0.25).abs() < 1e-15));
    let e = mix_with_uniform(2, &TruncationLevel::<f64>::none(4)).unwrap();
    assert_eq!(e.weights(), &[0.0, 0.0, 1.0, 0.0]);
}

fn simplex_point(max_d: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.01f64..1.0, 2..=max_d).prop_map(|v| {
        let s: f64 = v.iter().sum();
        v.into_iter().map(|x| x / s).collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn divergence_nonnegative_and_zero_on_diagonal(x in simplex_point(12), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let y = random_truncated(x.len(), 1e-4, &mut rng);
        prop_assert!(beta_divergence(0.5, &dist(&x), &dist(&y)).unwrap() >= 0.0);
        prop_assert!(beta_divergence(0.5, &dist(&x), &dist(&x)).unwrap().abs() < 1e-12);
        prop_assert!(tsallis_entropy(0.5, &dist(&x)).unwrap() >= 0.0);
    }

    #[test]
    fn mirror_step_stays_feasible_and_descends(
        x in simplex_point(10),
        frac in 0.0f64..1.0,
        arm in 0usize..10,
        loss in 0.0f64..1.0,
        eta in 1e-4f64..2.0,
    ) {
        let d = x.len();
        let delta = frac / d as f64 * 0.5;
        let trunc = TruncationLevel::new(delta, d).unwrap();
        let xt = bregman_project_truncated(&dist(&x), &trunc).unwrap();
        prop_assert!(xt.is_in(&trunc));
        let mut g = vec![0.0; d];
        g[arm % d] = loss / xt.get(arm % d);
        let next = omd_update(&xt, &g, eta, &trunc).unwrap();
        prop_assert!(next.is_in(&trunc));
        prop_assert!((next.weights().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let before = common::omd_objective(xt.weights(), xt.weights(), &g, eta);
        let after = common::omd_objective(next.weights(), xt.weights(), &g, eta);
        prop_assert!(after <= before + 1e-12 * before.abs().max(1.0));
    }

    #[test]
    fn mixture_is_a_truncated_distribution(d in 2usize..20, i in 0usize..20, frac in 0.0f64..=1.0) {
        let delta = frac / d as f64;
        let t = TruncationLevel::new(delta, d).unwrap();
        let m = mix_with_uniform(i % d, &t).unwrap();
        prop_assert!((m.weights().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(m.weights().iter().all(|w| *w >= delta - 1e-15));
    }
}
