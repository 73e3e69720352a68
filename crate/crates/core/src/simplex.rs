//! Probability-simplex primitives: Tsallis entropy, beta-divergence, the truncated simplex
//! and the Tsallis mirror step that underlies both the inner OMD update and the Bregman
//! projection onto the truncated simplex.
//!
//! The Tsallis entropy used throughout is the scaled form
//! `H_q(x) = (Σ x_i^q − 1) / (q(1−q))`, which is 1-strongly convex for every `q`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// A point on the probability simplex over `d` arms.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Distribution<R> {
    weights: Vec<R>,
}

impl<R: Real> Distribution<R> {
    /// Validates non-negativity and unit mass (within [`Real::SIMPLEX_TOL`]).
    pub fn new(weights: Vec<R>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::domain("distribution over zero arms"));
        }
        if let Some(i) = weights.iter().position(|w| !w.is_finite() || *w < R::zero()) {
            return Err(Error::domain(format!("weight {i} is negative or not finite")));
        }
        let total: R = weights.iter().copied().sum();
        if (total - R::one()).abs() > R::of(R::SIMPLEX_TOL) {
            return Err(Error::domain(format!("weights sum to {total}, not 1")));
        }
        Ok(Self { weights })
    }

    pub(crate) fn from_raw(weights: Vec<R>) -> Self {
        debug_assert!(!weights.is_empty());
        Self { weights }
    }

    pub fn uniform(d: usize) -> Self {
        assert!(d > 0, "uniform distribution over zero arms");
        Self::from_raw(vec![R::one() / R::of_usize(d); d])
    }

    pub fn one_hot(i: usize, d: usize) -> Self {
        assert!(i < d, "arm {i} out of range for {d} arms");
        let mut w = vec![R::zero(); d];
        w[i] = R::one();
        Self::from_raw(w)
    }

    #[inline]
    pub fn weights(&self) -> &[R] {
        &self.weights
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    #[inline]
    pub fn get(&self, i: usize) -> R {
        self.weights[i]
    }

    pub(crate) fn weights_mut(&mut self) -> &mut Vec<R> {
        &mut self.weights
    }

    pub fn into_inner(self) -> Vec<R> {
        self.weights
    }

    pub fn l1_distance(&self, other: &Self) -> R {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        self.weights
            .iter()
            .zip(&other.weights)
            .map(|(a, b)| (*a - *b).abs())
            .sum()
    }

    /// True when every component is at least `trunc.delta()` (within the simplex tolerance).
    pub fn is_in(&self, trunc: &TruncationLevel<R>) -> bool {
        let tol = R::of(R::SIMPLEX_TOL);
        self.dim() == trunc.arms()
            && self.weights.iter().all(|w| *w >= trunc.delta() - tol)
            && (self.weights.iter().copied().sum::<R>() - R::one()).abs() <= tol
    }

    /// Converts between scalar types.
    pub fn cast<S: Real>(&self) -> Distribution<S> {
        Distribution::from_raw(self.weights.iter().map(|w| S::of(w.as_f64())).collect())
    }
}

/// The truncated simplex `Δ_δ = {x : x_i ≥ δ, Σ x_i = 1}` over `d` arms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruncationLevel<R> {
    delta: R,
    arms: usize,
}

impl<R: Real> TruncationLevel<R> {
    /// Requires `0 ≤ δ ≤ 1/d`. Values exceeding `1/d` by rounding only are snapped to `1/d`.
    pub fn new(delta: R, arms: usize) -> Result<Self> {
        if arms == 0 {
            return Err(Error::domain("truncated simplex over zero arms"));
        }
        let cap = R::one() / R::of_usize(arms);
        if !delta.is_finite() || delta < R::zero() {
            return Err(Error::domain(format!("truncation level {delta} must be ≥ 0")));
        }
        if delta > cap {
            if delta - cap <= cap * R::of(1e-12) {
                return Ok(Self { delta: cap, arms });
            }
            return Err(Error::domain(format!(
                "truncation level {delta} exceeds 1/d = {cap}"
            )));
        }
        Ok(Self { delta, arms })
    }

    /// The full simplex (`δ = 0`).
    pub fn none(arms: usize) -> Self {
        Self::new(R::zero(), arms).expect("δ = 0 is always feasible")
    }

    #[inline]
    pub fn delta(&self) -> R {
        self.delta
    }

    #[inline]
    pub fn arms(&self) -> usize {
        self.arms
    }

    /// True when `Δ_δ` is the single point `1/d · 1`.
    pub fn is_singleton(&self) -> bool {
        R::of_usize(self.arms) * self.delta >= R::one() - R::of(R::SOLVER_TOL)
    }
}

fn check_q<R: Real>(q: R) -> Result<()> {
    if q > R::zero() && q < R::one() {
        Ok(())
    } else {
        Err(Error::domain(format!("Tsallis parameter q = {q} outside (0, 1)")))
    }
}

/// Scaled Tsallis entropy `(Σ x_i^q − 1)/(q(1−q))`.
pub fn tsallis_entropy<R: Real>(q: R, x: &Distribution<R>) -> Result<R> {
    check_q(q)?;
    let s: R = x.weights().iter().map(|w| w.powf(q)).sum();
    Ok(((s - R::one()) / (q * (R::one() - q))).max(R::zero()))
}

/// Beta-divergence `D_q(x, y)`, the Bregman divergence of the negative Tsallis entropy.
///
/// Terms with `y_i = 0 = x_i` contribute zero; `y_i = 0 < x_i` is singular.
pub fn beta_divergence<R: Real>(q: R, x: &Distribution<R>, y: &Distribution<R>) -> Result<R> {
    check_q(q)?;
    if x.dim() != y.dim() {
        return Err(Error::domain("beta-divergence between distributions of different sizes"));
    }
    let one_minus_q = R::one() - q;
    let mut acc = R::zero();
    for (i, (&xi, &yi)) in x.weights().iter().zip(y.weights()).enumerate() {
        if yi <= R::zero() {
            if xi > R::zero() {
                return Err(Error::Singular { index: i });
            }
            continue;
        }
        acc = acc + one_minus_q * yi.powf(q) + q * xi / yi.powf(one_minus_q) - xi.powf(q);
    }
    Ok((acc / (q * one_minus_q)).max(R::zero()))
}

/// `e_i^δ = (1 − δd)·e_i + δ·1`: arm `i` gets `1 − (d−1)δ`, every other arm gets `δ`.
pub fn mix_with_uniform<R: Real>(i: usize, trunc: &TruncationLevel<R>) -> Result<Distribution<R>> {
    let d = trunc.arms();
    if i >= d {
        return Err(Error::domain(format!("arm {i} out of range for {d} arms")));
    }
    let delta = trunc.delta();
    let mut w = vec![delta; d];
    w[i] = R::one() - R::of_usize(d - 1) * delta;
    Ok(Distribution::from_raw(w))
}

/// Problem scale `σ = √T · d^{1/4} / √2`.
pub fn problem_scale<R: Real>(rounds: u64, arms: usize) -> R {
    R::of_u64(rounds).sqrt() * R::of_usize(arms).sqrt().sqrt() / R::SQRT_2()
}

/// Bregman projection (under `D_{1/2}`) of `y` onto the truncated simplex.
pub fn bregman_project_truncated<R: Real>(
    y: &Distribution<R>,
    trunc: &TruncationLevel<R>,
) -> Result<Distribution<R>> {
    if y.dim() != trunc.arms() {
        return Err(Error::domain("projection target has the wrong number of arms"));
    }
    if y.is_in(trunc) {
        return Ok(y.clone());
    }
    let zeros = vec![R::zero(); y.dim()];
    mirror_step(R::of(0.5), y, &zeros, R::zero(), trunc)
}

/// The Tsallis mirror step `argmin_{x ∈ Δ_δ} η⟨g, x⟩ + D_q(x, y)`.
///
/// Stationarity gives `x_i(λ) = max(δ, ((1−q)(w_i + λ))^{−1/(1−q)})` with
/// `w_i = y_i^{q−1}/(1−q) + η g_i`; the normalizer λ is the root of the monotone equation
/// `Σ_i x_i(λ) = 1`, found by Newton's method safeguarded by bisection.
pub fn mirror_step<R: Real>(
    q: R,
    y: &Distribution<R>,
    g: &[R],
    eta: R,
    trunc: &TruncationLevel<R>,
) -> Result<Distribution<R>> {
    check_q(q)?;
    let d = y.dim();
    if g.len() != d || trunc.arms() != d {
        return Err(Error::domain("mirror step inputs have inconsistent dimensions"));
    }
    let mut w = vec![R::zero(); d];
    mirror_weights(q, y.weights(), eta, g, &mut w);
    let mut out = vec![R::zero(); d];
    solve_normalizer(q, &w, trunc, &mut out)?;
    Ok(Distribution::from_raw(out))
}

/// `w_i = y_i^{q−1}/(1−q) + η g_i` (`+∞` where `y_i = 0`).
pub(crate) fn mirror_weights<R: Real>(q: R, y: &[R], eta: R, g: &[R], w: &mut [R]) {
    let one_minus_q = R::one() - q;
    let half = q == R::of(0.5);
    for ((wi, &yi), &gi) in w.iter_mut().zip(y).zip(g) {
        let base = if yi <= R::zero() {
            R::infinity()
        } else if half {
            R::of(2.0) / yi.sqrt()
        } else {
            yi.powf(q - R::one()) / one_minus_q
        };
        *wi = if gi == R::zero() { base } else { base + eta * gi };
    }
}

const MAX_SOLVER_ITERS: usize = 200;

/// Finds λ with `Σ_i x_i(λ) = 1` and writes `x(λ)` into `out`.
pub(crate) fn solve_normalizer<R: Real>(
    q: R,
    w: &[R],
    trunc: &TruncationLevel<R>,
    out: &mut [R],
) -> Result<()> {
    let d = w.len();
    let delta = trunc.delta();
    if trunc.is_singleton() {
        out.fill(R::one() / R::of_usize(d));
        return Ok(());
    }
    let tol = R::of(R::SOLVER_TOL);
    let half = q == R::of(0.5);
    let one_minus_q = R::one() - q;
    let p = R::one() / one_minus_q;

    // (Σ x_i(λ) − 1, d/dλ Σ x_i(λ))
    let eval = |lam: R| -> (R, R) {
        let mut f = -R::one();
        let mut fp = R::zero();
        for &wi in w {
            let shifted = wi + lam;
            if !shifted.is_finite() {
                f = f + delta;
                continue;
            }
            if shifted <= R::zero() {
                return (R::infinity(), R::zero());
            }
            let v = if half {
                R::of(4.0) / (shifted * shifted)
            } else {
                (one_minus_q * shifted).powf(-p)
            };
            if v > delta {
                f = f + v;
                fp = fp - p * v / shifted;
            } else {
                f = f + delta;
            }
        }
        (f, fp)
    };

    let min_w = w.iter().copied().fold(R::infinity(), R::min);
    if !min_w.is_finite() {
        return Err(Error::domain("mirror step reference has no positive component"));
    }
    let mut lo = -min_w;

    let mut hi = R::zero();
    let (mut f_hi, _) = eval(hi);
    if f_hi > R::zero() {
        lo = lo.max(R::zero());
        let mut step = R::one().max(min_w.abs());
        let mut grown = 0;
        loop {
            hi = lo.max(R::zero()) + step;
            f_hi = eval(hi).0;
            if f_hi <= R::zero() {
                break;
            }
            lo = hi;
            step = step + step;
            grown += 1;
            if grown > MAX_SOLVER_ITERS {
                return Err(Error::Numerical {
                    what: "mirror step bracket",
                    residual: f_hi.as_f64(),
                    at: None,
                });
            }
        }
    }

    let mut lam = hi;
    let mut residual = f_hi;
    for _ in 0..MAX_SOLVER_ITERS {
        let (f, fp) = eval(lam);
        residual = f;
        if f.abs() <= tol {
            break;
        }
        if f > R::zero() {
            lo = lam;
        } else {
            hi = lam;
        }
        let newton = lam - f / fp;
        let next = if fp < R::zero() && newton > lo && newton < hi {
            newton
        } else {
            lo + (hi - lo) / R::of(2.0)
        };
        if next == lam || hi - lo <= R::epsilon() * hi.abs().max(lo.abs()) {
            break;
        }
        lam = next;
    }

    // Rounding floor of the sum itself for large d.
    let floor = R::epsilon() * R::of_usize(4 * d.max(16));
    if !(residual.abs() <= tol.max(floor)) {
        return Err(Error::Numerical {
            what: "mirror step normalizer",
            residual: residual.as_f64(),
            at: None,
        });
    }
    for (o, &wi) in out.iter_mut().zip(w) {
        let shifted = wi + lam;
        let v = if !shifted.is_finite() {
            R::zero()
        } else if half {
            R::of(4.0) / (shifted * shifted)
        } else {
            (one_minus_q * shifted).powf(-p)
        };
        *o = v.max(delta);
    }
    Ok(())
}

/// KKT residual of a claimed mirror-step solution `x` for `(q, y, g, η, δ)`.
///
/// The maximum of: spread of the implied multiplier λ over free coordinates, negative part of
/// the bound multipliers on clipped coordinates, `|Σx − 1|` and any violation of `x_i ≥ δ`.
pub fn mirror_step_kkt_residual<R: Real>(
    q: R,
    y: &Distribution<R>,
    g: &[R],
    eta: R,
    trunc: &TruncationLevel<R>,
    x: &Distribution<R>,
) -> R {
    let d = y.dim();
    let delta = trunc.delta();
    let one_minus_q = R::one() - q;
    let mut w = vec![R::zero(); d];
    mirror_weights(q, y.weights(), eta, g, &mut w);
    let grad_reg = |v: R| v.powf(q - R::one()) / one_minus_q;

    let mut feas = (x.weights().iter().copied().sum::<R>() - R::one()).abs();
    for &xi in x.weights() {
        feas = feas.max(delta - xi);
    }
    // Coordinates strictly above the floor carry λ = x_i^{q−1}/(1−q) − w_i.
    let slack = R::of(1e-9).max(delta * R::of(1e-9));
    let free: Vec<R> = x
        .weights()
        .iter()
        .zip(&w)
        .filter(|(xi, wi)| **xi > delta + slack && wi.is_finite())
        .map(|(xi, wi)| grad_reg(*xi) - *wi)
        .collect();
    if free.is_empty() {
        return feas;
    }
    let lam = free.iter().copied().sum::<R>() / R::of_usize(free.len());
    let mut res = feas;
    for l in &free {
        res = res.max((*l - lam).abs());
    }
    for (xi, wi) in x.weights().iter().zip(&w) {
        if *xi <= delta + slack && wi.is_finite() {
            // μ_i = w_i + λ − δ^{q−1}/(1−q) must be ≥ 0.
            let mu = *wi + lam - grad_reg(delta.max(R::min_positive_value()));
            res = res.max(-mu);
        }
    }
    res
}
