//! Assembly and minimization of the Meta-INF regret guarantee.
//!
//! With `C = σ/(1−dε)·(U_init + U_ψ + H_{1/2}(ψ)·S)` the guarantee is
//!
//! ```text
//! min_v  U_expl·S + U_lr(v) + σSv + C/v,
//! U_lr(v) = min{α²/v, α}·Sσ + √2σ(1 + ln(S+1)) / (α²(1−dε)^{3/2}δ^{3/4}).
//! ```
//!
//! The bracket is convex on `(0, α]` and on `[α, ∞)` separately but has a concave kink at
//! `α`, so the minimizer is found by a log-grid scan followed by golden-section refinement
//! and checked against the closed-form minimizer of each piece.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::outer::MetaParams;
use crate::scalar::Real;
use crate::simplex::{tsallis_entropy, Distribution};

const GRID: usize = 4096;
const GOLDEN_REL_TOL: f64 = 1e-12;

/// All terms of the guarantee, plus the minimizing `v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundBreakdown<R> {
    /// Exploration cost per episode, `δT(d−1)`.
    pub u_expl: R,
    /// `U_lr(v_star)`, both terms.
    pub u_lr: R,
    /// The `v`-dependent part `min{α²/v, α}·Sσ` at `v_star`.
    pub u_lr_switch: R,
    /// The `v`-independent part of `U_lr`.
    pub u_lr_const: R,
    pub u_init: R,
    pub u_psi: R,
    /// `H_{1/2}(ψ)·S`.
    pub entropy_term: R,
    pub v_star: R,
    pub bound_value: R,
    pub episodes: usize,
}

impl<R: Real> BoundBreakdown<R> {
    /// Bracket value at an arbitrary `v > 0`.
    pub fn bracket_at(&self, v: R, params: &MetaParams<R>) -> R {
        Terms::new(self, params).eval(v)
    }
}

#[derive(Clone, Copy)]
struct Terms<R> {
    fixed: R,
    alpha: R,
    s_sigma: R,
    c: R,
}

impl<R: Real> Terms<R> {
    fn new(b: &BoundBreakdown<R>, p: &MetaParams<R>) -> Self {
        let s = R::of_usize(b.episodes);
        Self {
            fixed: b.u_expl * s + b.u_lr_const,
            alpha: p.alpha,
            s_sigma: s * p.sigma,
            c: p.sigma / p.one_minus_d_eps() * (b.u_init + b.u_psi + b.entropy_term),
        }
    }

    fn switch(&self, v: R) -> R {
        (self.alpha * self.alpha / v).min(self.alpha) * self.s_sigma
    }

    fn eval(&self, v: R) -> R {
        self.fixed + self.switch(v) + self.s_sigma * v + self.c / v
    }
}

/// Evaluates every term for the best-arm distribution `ψ` and minimizes over `v`.
pub fn regret_bound<R: Real>(psi: &Distribution<R>, params: &MetaParams<R>) -> Result<BoundBreakdown<R>> {
    let size = params.size;
    let d = R::of_usize(size.arms);
    let d_eps = d * params.eps_delta;
    if params.identification_vacuous || d_eps >= R::one() {
        return Err(Error::VacuousBound { d_eps: d_eps.as_f64() });
    }
    if psi.dim() != size.arms {
        return Err(Error::domain("ψ size differs from the number of arms"));
    }
    let s = R::of_usize(size.episodes);
    let delta = params.delta;
    let alpha = params.alpha;
    let sigma = params.sigma;
    let one_minus = params.one_minus_d_eps();

    let u_expl = delta * R::of_u64(size.rounds) * (d - R::one());
    let u_lr_const = R::SQRT_2() * sigma * (R::one() + (s + R::one()).ln())
        / (alpha * alpha * one_minus.powf(R::of(1.5)) * delta.powf(R::of(0.75)));
    let u_init = R::of(4.0) * R::SQRT_2() * (d / delta).sqrt() * (s.ln() + R::one());
    let u_psi = R::of(6.0) * s * d * params.eps_delta / delta.sqrt();
    let entropy_term = tsallis_entropy(R::of(0.5), psi)? * s;

    let mut b = BoundBreakdown {
        u_expl,
        u_lr: R::zero(),
        u_lr_switch: R::zero(),
        u_lr_const,
        u_init,
        u_psi,
        entropy_term,
        v_star: R::zero(),
        bound_value: R::zero(),
        episodes: size.episodes,
    };
    let terms = Terms::new(&b, params);
    let v = minimize(&terms, (u_init + u_psi + entropy_term) / (one_minus * s));
    b.v_star = v;
    b.u_lr_switch = terms.switch(v);
    b.u_lr = b.u_lr_switch + u_lr_const;
    b.bound_value = terms.eval(v);
    Ok(b)
}

/// Search interval `[1e-6, max(10·√k, 10·√(k + α²))]` where `k` is the `1/v` mass per `σS`;
/// the second branch keeps the piece minimizer `√(k + α²)` inside when α dominates.
fn minimize<R: Real>(t: &Terms<R>, k: R) -> R {
    let lo = R::of(1e-6);
    let hi = (R::of(10.0) * (k + t.alpha * t.alpha).sqrt()).max(R::of(10.0) * k.sqrt()).max(lo * R::of(10.0));
    let f = |v: R| t.eval(v);

    // Log-grid scan.
    let ratio = (hi / lo).ln() / R::of_usize(GRID - 1);
    let at = |i: usize| lo * (ratio * R::of_usize(i)).exp();
    let mut best = 0;
    let mut best_val = f(lo);
    for i in 1..GRID {
        let val = f(at(i));
        if val < best_val {
            best = i;
            best_val = val;
        }
    }
    let a = at(best.saturating_sub(1));
    let b = at((best + 1).min(GRID - 1));
    let mut v = golden(&f, a, b);

    // Closed-form minimizers of the two convex pieces, and the kink.
    let s = t.s_sigma;
    let below = ((t.c + t.alpha * t.alpha * s) / s).sqrt();
    let above = (t.c / s).sqrt();
    for cand in [below.min(t.alpha), above.max(t.alpha), t.alpha] {
        if cand >= lo && cand <= hi && f(cand) < f(v) {
            v = cand;
        }
    }
    v
}

fn golden<R: Real, F: Fn(R) -> R>(f: &F, mut a: R, mut b: R) -> R {
    let inv_phi = R::of((5f64.sqrt() - 1.0) / 2.0);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let tol = R::of(GOLDEN_REL_TOL).max(R::epsilon() * R::of(4.0));
    for _ in 0..400 {
        if (b - a) <= tol * (a.abs() + b.abs()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    (a + b) / R::of(2.0)
}
