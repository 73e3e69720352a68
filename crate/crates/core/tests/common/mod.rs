//! Brute-force reference computations shared by the integration tests and the acceptance
//! suite. None of these call the library routine they are used to check.

#![allow(dead_code)]

use meta_inf::adversary::{few_good_arms_prior, BestArmSource, GapSpec, Prior, Scenario};
use rand::Rng;

/// `(Σ x^q − 1)/(q(1−q))`.
pub fn tsallis(q: f64, x: &[f64]) -> f64 {
    (x.iter().map(|v| v.powf(q)).sum::<f64>() - 1.0) / (q * (1.0 - q))
}

/// Bregman divergence of `Φ = −H_q` from its value and gradient: `Φ(x) − Φ(y) − ⟨∇Φ(y), x − y⟩`.
pub fn bregman(q: f64, x: &[f64], y: &[f64]) -> f64 {
    let phi = |z: &[f64]| -tsallis(q, z);
    let grad: Vec<f64> = y.iter().map(|v| -v.powf(q - 1.0) / (1.0 - q)).collect();
    let lin: f64 = grad.iter().zip(x.iter().zip(y)).map(|(g, (a, b))| g * (a - b)).sum();
    phi(x) - phi(y) - lin
}

/// `η⟨g, x⟩ + D_{1/2}(x, x_t)`, with the divergence written out term by term.
pub fn omd_objective(x: &[f64], xt: &[f64], g: &[f64], eta: f64) -> f64 {
    let mut acc = 0.0;
    for i in 0..x.len() {
        acc += eta * g[i] * x[i];
        acc += 4.0 * (0.5 * xt[i].sqrt() + 0.5 * x[i] / xt[i].sqrt() - x[i].sqrt());
    }
    acc
}

/// Minimizer of the OMD objective over `{x ∈ Δ_2 : x_i ≥ δ}` by a uniform scan of `n` points.
pub fn grid_omd_d2(xt: &[f64], g: &[f64], eta: f64, delta: f64, n: usize) -> Vec<f64> {
    let lo = delta;
    let hi = 1.0 - delta;
    let mut best = (f64::INFINITY, lo);
    for k in 0..n {
        let a = lo + (hi - lo) * k as f64 / (n - 1) as f64;
        let v = omd_objective(&[a, 1.0 - a], xt, g, eta);
        if v < best.0 {
            best = (v, a);
        }
    }
    vec![best.1, 1.0 - best.1]
}

/// Same over the 3-arm truncated simplex: a 1000×1000 scan followed by zoomed rescans around
/// the incumbent (the objective is convex, so zooming cannot leave the basin).
pub fn grid_omd_d3(xt: &[f64], g: &[f64], eta: f64, delta: f64) -> Vec<f64> {
    let f = |a: f64, b: f64| omd_objective(&[a, b, 1.0 - a - b], xt, g, eta);
    let feasible = |a: f64, b: f64| a >= delta && b >= delta && 1.0 - a - b >= delta - 1e-15;
    let (mut a0, mut a1) = (delta, 1.0 - 2.0 * delta);
    let (mut b0, mut b1) = (delta, 1.0 - 2.0 * delta);
    let mut n = 1000;
    let mut best = (f64::INFINITY, delta, delta);
    for _level in 0..5 {
        let ha = (a1 - a0) / (n - 1) as f64;
        let hb = (b1 - b0) / (n - 1) as f64;
        for i in 0..n {
            let a = a0 + ha * i as f64;
            for j in 0..n {
                let b = b0 + hb * j as f64;
                if !feasible(a, b) {
                    continue;
                }
                let v = f(a, b);
                if v < best.0 {
                    best = (v, a, b);
                }
            }
        }
        a0 = (best.1 - 2.0 * ha).max(delta);
        a1 = (best.1 + 2.0 * ha).min(1.0 - 2.0 * delta);
        b0 = (best.2 - 2.0 * hb).max(delta);
        b1 = (best.2 + 2.0 * hb).min(1.0 - 2.0 * delta);
        n = 201;
    }
    vec![best.1, best.2, 1.0 - best.1 - best.2]
}

/// Largest violation of the optimality conditions of `min η⟨g,x⟩ + D_{1/2}(x, y)` over
/// `Δ_δ`, relative to the size of the gradient terms.
pub fn omd_kkt_violation(x: &[f64], y: &[f64], g: &[f64], eta: f64, delta: f64) -> f64 {
    // ∂/∂x_i = ηg_i − 2/√x_i + 2/√y_i; free coordinates share −λ, clamped ones may exceed it.
    let grad: Vec<f64> = (0..x.len())
        .map(|i| eta * g[i] - 2.0 / x[i].sqrt() + 2.0 / y[i].sqrt())
        .collect();
    let scale = (0..x.len())
        .map(|i| (2.0 / x[i].sqrt()).max(eta * g[i].abs()))
        .fold(1.0f64, f64::max);
    let tol_clamp = 1e-12f64.max(delta * 1e-9);
    let free: Vec<usize> = (0..x.len()).filter(|&i| x[i] > delta + tol_clamp).collect();
    let sum_err = (x.iter().sum::<f64>() - 1.0).abs();
    let floor_err = x.iter().map(|&v| (delta - v).max(0.0)).fold(0.0, f64::max);
    if free.is_empty() {
        return sum_err.max(floor_err);
    }
    let level = free.iter().map(|&i| grad[i]).sum::<f64>() / free.len() as f64;
    let stat = free.iter().map(|&i| (grad[i] - level).abs()).fold(0.0, f64::max) / scale;
    // Clamped coordinates need a non-negative multiplier: grad_i ≥ level.
    let mult = (0..x.len())
        .filter(|i| !free.contains(i))
        .map(|i| (level - grad[i]).max(0.0))
        .fold(0.0, f64::max)
        / scale;
    stat.max(mult).max(sum_err).max(floor_err)
}

/// `∫ v e^{−γ(a/v+bv)} / ∫ e^{−γ(a/v+bv)}` over `[lo, hi]` by the trapezoid rule on `n` points.
pub fn ewoo_trapezoid(a: f64, b: f64, gamma: f64, lo: f64, hi: f64, n: usize) -> f64 {
    let h = (hi - lo) / (n - 1) as f64;
    let e = |v: f64| gamma * (a / v + b * v);
    let m = (0..n).map(|k| e(lo + h * k as f64)).fold(f64::INFINITY, f64::min);
    let (mut i0, mut i1) = (0.0, 0.0);
    for k in 0..n {
        let v = lo + h * k as f64;
        let w = if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
        let f = (m - e(v)).exp();
        i0 += w * f;
        i1 += w * v * f;
    }
    i1 / i0
}

/// Bracket of the regret guarantee as a function of `v`, re-evaluated from its terms.
pub struct BoundOracle {
    pub s: f64,
    pub sigma: f64,
    pub alpha: f64,
    pub one_minus: f64,
    pub u_expl: f64,
    pub u_lr_const: f64,
    pub u_init: f64,
    pub u_psi: f64,
    pub entropy_term: f64,
}

impl BoundOracle {
    pub fn eval(&self, v: f64) -> f64 {
        self.u_expl * self.s
            + (self.alpha * self.alpha / v).min(self.alpha) * self.s * self.sigma
            + self.u_lr_const
            + self.sigma * self.s * v
            + self.sigma / self.one_minus * (self.u_init + self.u_psi + self.entropy_term) / v
    }

    /// Minimum over a global log grid, refined by a dense local grid around the incumbent.
    pub fn grid_min(&self, lo: f64, hi: f64, n: usize) -> (f64, f64) {
        let scan = |lo: f64, hi: f64| {
            let r = (hi / lo).ln() / (n - 1) as f64;
            (0..n)
                .map(|k| lo * (r * k as f64).exp())
                .map(|v| (self.eval(v), v))
                .fold((f64::INFINITY, lo), |a, b| if b.0 < a.0 { b } else { a })
        };
        let (_, v) = scan(lo, hi);
        let (f, v) = scan(v * 0.98, v * 1.02);
        (v, f)
    }
}

/// Gap scenario with the default noise level.
pub fn scenario(prior: Prior<f64>, gap: f64, episodes: usize, rounds: usize) -> Scenario<f64> {
    let arms = prior.arms();
    Scenario::new(
        BestArmSource::Prior(prior),
        GapSpec::with_default_noise(gap, 0.3).unwrap(),
        episodes,
        rounds,
        arms,
    )
    .unwrap()
}

pub fn few_good(k: usize, zeta: f64, arms: usize) -> Prior<f64> {
    few_good_arms_prior(k, zeta, arms).unwrap()
}

/// A random point of the truncated simplex: Dirichlet(1) draw mapped affinely into `Δ_δ`.
pub fn random_truncated<G: Rng>(d: usize, delta: f64, rng: &mut G) -> Vec<f64> {
    let e: Vec<f64> = (0..d).map(|_| -rng.random::<f64>().max(1e-300).ln()).collect();
    let s: f64 = e.iter().sum();
    e.iter().map(|v| delta + (1.0 - d as f64 * delta) * v / s).collect()
}

pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    (m, v.sqrt())
}
