//! ε-EWOO over the learning rate.
//!
//! Losses are tracked in the variable `v = σ·η`, where the summed regularized
//! loss is `A/v + B·v`; the prediction is the exponentially weighted mean of
//! `v` over `[α, √(D²+α²)]`, mapped back to `η = v/σ`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::outer::params::MetaParams;
use crate::scalar::Real;

const PROBES: usize = 64;
const MAX_DEPTH: u32 = 20;
const REL_TOL: f64 = 1e-8;

/// Accumulated ε-EWOO losses: `Σ ℓ̃(v) = inv_coeff / v + lin_coeff · v`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LrMetaState<R> {
    pub inv_coeff: R,
    pub lin_coeff: R,
    pub episode_count: u64,
    pub params: MetaParams<R>,
}

impl<R: Real> LrMetaState<R> {
    pub fn new(params: MetaParams<R>) -> Self {
        Self {
            inv_coeff: R::zero(),
            lin_coeff: R::zero(),
            episode_count: 0,
            params,
        }
    }

    /// Weighted mean of `v` under `exp(−γ Σ ℓ̃(v))` on the EWOO domain.
    pub fn predict_v(&self) -> Result<R> {
        let (lo, hi) = self.params.v_domain();
        if self.episode_count == 0 {
            return Ok((lo + hi) / R::of(2.0));
        }
        ewoo_mean(self.inv_coeff, self.lin_coeff, self.params.gamma, lo, hi)
    }

    /// Learning rate for the next episode.
    pub fn predict(&self) -> Result<R> {
        Ok(eta_from_v(self.predict_v()?, self.params.sigma))
    }

    pub fn update(&mut self, divergence: R) -> Result<()> {
        if !(divergence >= R::zero()) || !divergence.is_finite() {
            return Err(Error::domain(format!("divergence {divergence} must be finite and ≥ 0")));
        }
        let p = &self.params;
        self.inv_coeff = self.inv_coeff + p.sigma * (divergence / p.one_minus_d_eps() + p.alpha * p.alpha);
        self.lin_coeff = self.lin_coeff + p.sigma;
        self.episode_count += 1;
        Ok(())
    }

    /// `Σ ℓ̃(v)` of the accumulated episodes.
    pub fn cumulative_loss(&self, v: R) -> R {
        self.inv_coeff / v + self.lin_coeff * v
    }
}

pub fn eps_ewoo_predict<R: Real>(state: &LrMetaState<R>) -> Result<R> {
    state.predict()
}

pub fn eps_ewoo_update<R: Real>(mut state: LrMetaState<R>, divergence: R) -> Result<LrMetaState<R>> {
    state.update(divergence)?;
    Ok(state)
}

/// Inner learning rate for an analysis variable `v`: the regret bound
/// `σ(B/v + v)` corresponds to `B/η + ησ²`, so `η = v/σ`.
pub fn eta_from_v<R: Real>(v: R, sigma: R) -> R {
    v / sigma
}

pub fn v_from_eta<R: Real>(eta: R, sigma: R) -> R {
    eta * sigma
}

/// `∫ v e^{−γ(a/v + bv)} dv / ∫ e^{−γ(a/v + bv)} dv` over `[lo, hi]`.
///
/// The exponent is shifted by its minimum on the interval so the integrand
/// peaks at 1; breakpoints at the peak and at multiples of the Laplace width
/// around it keep adaptive Simpson from missing a narrow spike.
pub fn ewoo_mean<R: Real>(a: R, b: R, gamma: R, lo: R, hi: R) -> Result<R> {
    if !(lo > R::zero() && hi >= lo) {
        return Err(Error::domain(format!("EWOO domain [{lo}, {hi}] invalid")));
    }
    if hi == lo {
        return Ok(lo);
    }
    let exponent = |v: R| gamma * (a / v + b * v);
    let span = hi - lo;
    let mut knots: Vec<R> = (0..=PROBES).map(|k| lo + span * R::of_usize(k) / R::of_usize(PROBES)).collect();
    knots[PROBES] = hi;

    let mut shift = knots.iter().map(|&v| exponent(v)).fold(R::infinity(), R::min);
    if a > R::zero() && b > R::zero() {
        let peak = (a / b).sqrt().max(lo).min(hi);
        shift = shift.min(exponent(peak));
        knots.push(peak);
        let curvature = R::of(2.0) * gamma * a / (peak * peak * peak);
        if curvature > R::zero() {
            let width = R::one() / curvature.sqrt();
            for k in [0.25, 1.0, 3.0, 10.0, 30.0] {
                for sgn in [-1.0, 1.0] {
                    let v = peak + R::of(k * sgn) * width;
                    if v > lo && v < hi {
                        knots.push(v);
                    }
                }
            }
        }
    }
    knots.sort_by(|x, y| x.partial_cmp(y).expect("finite knots"));
    knots.dedup();

    let f = |v: R| {
        let w = (shift - exponent(v)).exp();
        [w, v * w]
    };

    // A coarse pass fixes the absolute tolerance for the adaptive pass.
    let panels: Vec<Panel<R>> = knots
        .windows(2)
        .map(|k| {
            let (x0, x1) = (k[0], k[1]);
            let xm = (x0 + x1) / R::of(2.0);
            Panel::new(x0, x1, f(x0), f(xm), f(x1))
        })
        .collect();
    let coarse: [R; 2] = panels.iter().fold([R::zero(); 2], |acc, p| {
        let s = p.simpson();
        [acc[0] + s[0], acc[1] + s[1]]
    });
    if !(coarse[0] > R::zero()) {
        return Err(Error::Quadrature { achieved: f64::INFINITY });
    }
    let rel = R::of(REL_TOL).max(R::epsilon() * R::of(16.0));
    let tol = [coarse[0] * rel, coarse[1] * rel];
    let share = R::of_usize(panels.len());

    let mut total = [R::zero(); 2];
    let mut worst = R::zero();
    for p in panels {
        let whole = p.simpson();
        let mut unresolved = [R::zero(); 2];
        let got = adaptive(&f, p, whole, [tol[0] / share, tol[1] / share], MAX_DEPTH, &mut unresolved);
        total[0] = total[0] + got[0];
        total[1] = total[1] + got[1];
        worst = worst + (unresolved[0] / coarse[0]).max(unresolved[1] / coarse[1]);
    }
    let tiny = rel * R::of(1e3);
    if worst > tiny || !(total[0] > R::zero()) {
        return Err(Error::Quadrature {
            achieved: worst.as_f64(),
        });
    }
    Ok((total[1] / total[0]).max(lo).min(hi))
}

#[derive(Clone, Copy)]
struct Panel<R> {
    x0: R,
    x1: R,
    f0: [R; 2],
    fm: [R; 2],
    f1: [R; 2],
}

impl<R: Real> Panel<R> {
    fn new(x0: R, x1: R, f0: [R; 2], fm: [R; 2], f1: [R; 2]) -> Self {
        Self { x0, x1, f0, fm, f1 }
    }

    fn simpson(&self) -> [R; 2] {
        let h = (self.x1 - self.x0) / R::of(6.0);
        let c = |k: usize| h * (self.f0[k] + R::of(4.0) * self.fm[k] + self.f1[k]);
        [c(0), c(1)]
    }
}

fn adaptive<R: Real, F: Fn(R) -> [R; 2]>(
    f: &F,
    p: Panel<R>,
    whole: [R; 2],
    tol: [R; 2],
    depth: u32,
    unresolved: &mut [R; 2],
) -> [R; 2] {
    let two = R::of(2.0);
    let xm = (p.x0 + p.x1) / two;
    let left = Panel::new(p.x0, xm, p.f0, f((p.x0 + xm) / two), p.fm);
    let right = Panel::new(xm, p.x1, p.fm, f((xm + p.x1) / two), p.f1);
    let (sl, sr) = (left.simpson(), right.simpson());
    let err = [sl[0] + sr[0] - whole[0], sl[1] + sr[1] - whole[1]];
    let fifteen = R::of(15.0);
    let ok = err[0].abs() <= fifteen * tol[0] && err[1].abs() <= fifteen * tol[1];
    if ok || depth == 0 {
        if !ok {
            unresolved[0] = unresolved[0] + err[0].abs() / fifteen;
            unresolved[1] = unresolved[1] + err[1].abs() / fifteen;
        }
        return [
            sl[0] + sr[0] + err[0] / fifteen,
            sl[1] + sr[1] + err[1] / fifteen,
        ];
    }
    let half = [tol[0] / two, tol[1] / two];
    let l = adaptive(f, left, sl, half, depth - 1, unresolved);
    let r = adaptive(f, right, sr, half, depth - 1, unresolved);
    [l[0] + r[0], l[1] + r[1]]
}
