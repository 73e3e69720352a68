//! Comparison learners: INF restarted every episode (from uniform or from a known prior),
//! Exp3 restarted every episode, and one continuous Exp3.S run over all `S·T` rounds.
//!
//! Every baseline draws its sampling randomness from the same per-episode learner streams
//! as Meta-INF, so runs on one environment are paired.

use std::f64::consts::E;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use crate::adversary::{Environment, Prior};
use crate::error::{Error, Result};
use crate::harness::report::{RegretReport, ReportBuilder};
use crate::inner::{estimate_best_arm, play_episode, InfLearner};
use crate::scalar::Real;
use crate::seed::{stream_rng, Stream};
use crate::simplex::{tsallis_entropy, Distribution, TruncationLevel};

/// Which baseline to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BaselineTag {
    InfReset,
    InfKnownPrior,
    Exp3,
    Exp3s,
}

impl BaselineTag {
    pub const ALL: [BaselineTag; 4] = [Self::InfReset, Self::InfKnownPrior, Self::Exp3, Self::Exp3s];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::InfReset => "inf_reset",
            Self::InfKnownPrior => "inf_known_prior",
            Self::Exp3 => "exp3",
            Self::Exp3s => "exp3s",
        }
    }
}

impl fmt::Display for BaselineTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BaselineTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::domain(format!("unknown baseline `{s}`")))
    }
}

/// A baseline together with its Tsallis parameter (ignored by the Exp3 family).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BaselineKind<R> {
    pub tag: BaselineTag,
    pub q: R,
}

/// Smallest prior mass used when a prior has zero components.
pub const PRIOR_FLOOR: f64 = 1e-12;

/// `η = √(2 H_q(P) / (T d^q))`, the rate that balances the INF bound for initialization `P`.
pub fn known_prior_eta<R: Real>(q: R, prior: &Distribution<R>, rounds: usize) -> Result<R> {
    let h = tsallis_entropy(q, prior)?;
    let d = R::of_usize(prior.dim());
    Ok((R::of(2.0) * h / (R::of_usize(rounds) * d.powf(q))).sqrt())
}

/// `S·√(2 H_q(P) T d^q)`.
pub fn known_prior_bound<R: Real>(q: R, prior: &Distribution<R>, rounds: usize, episodes: usize) -> Result<R> {
    let h = tsallis_entropy(q, prior)?;
    let d = R::of_usize(prior.dim());
    Ok(R::of_usize(episodes) * (R::of(2.0) * h * R::of_usize(rounds) * d.powf(q)).sqrt())
}

/// Floors every component of `p` at `floor` and renormalizes; `None` rejects zero components.
pub fn floored_prior<R: Real>(p: &Distribution<R>, floor: Option<R>) -> Result<Distribution<R>> {
    match floor {
        None => match p.weights().iter().position(|w| *w <= R::zero()) {
            Some(index) => Err(Error::Singular { index }),
            None => Ok(p.clone()),
        },
        Some(f) => {
            let w: Vec<R> = p.weights().iter().map(|w| w.max(f)).collect();
            let s: R = w.iter().copied().sum();
            Distribution::new(w.into_iter().map(|x| x / s).collect())
        }
    }
}

fn run_inf_from<R: Real>(
    env: &Environment<R>,
    tag: &str,
    q: R,
    phi: &Distribution<R>,
    eta: R,
    record: bool,
) -> Result<RegretReport<R>> {
    let d = env.arms();
    if phi.dim() != d {
        return Err(Error::domain("initialization size differs from the number of arms"));
    }
    let trunc = TruncationLevel::none(d);
    let mut out = ReportBuilder::new(tag, env, record);
    for s in 0..env.episodes() {
        let losses = env.episode(s);
        let mut rng = stream_rng(env.seed(), Stream::Learner, s as u64);
        let mut learner = InfLearner::with_q(q, phi.clone(), eta, trunc);
        let res = play_episode(&mut learner, &losses, &mut rng, record).map_err(|e| e.in_episode(s))?;
        let best_total = losses.totals()[losses.true_best_arm()];
        out.push_episode(res, best_total, eta);
    }
    out.finish()
}

/// Vanilla INF restarted from uniform every episode, without truncation.
pub fn run_inf_reset<R: Real>(env: &Environment<R>, q: R, record: bool) -> Result<RegretReport<R>> {
    let u = Distribution::uniform(env.arms());
    let eta = known_prior_eta(q, &u, env.rounds())?;
    let mut r = run_inf_from(env, BaselineTag::InfReset.as_str(), q, &u, eta, record)?;
    r.reference_bound = Some(known_prior_bound(q, &u, env.rounds(), env.episodes())?);
    Ok(r)
}

/// INF restarted every episode from the prior the best arms are drawn from.
pub fn run_inf_known_prior<R: Real>(
    env: &Environment<R>,
    prior: &Prior<R>,
    q: R,
    floor: Option<R>,
    record: bool,
) -> Result<RegretReport<R>> {
    let phi = floored_prior(&prior.weights, floor)?;
    let eta = known_prior_eta(q, &phi, env.rounds())?;
    if !(eta > R::zero()) {
        return Err(Error::domain("known-prior learning rate is zero (degenerate prior)"));
    }
    let mut r = run_inf_from(env, BaselineTag::InfKnownPrior.as_str(), q, &phi, eta, record)?;
    r.reference_bound = Some(known_prior_bound(q, &phi, env.rounds(), env.episodes())?);
    Ok(r)
}

/// Exp3 with loss estimates, `η = √(2 ln d / (T d))`, restarted every episode.
pub fn run_exp3<R: Real>(env: &Environment<R>) -> Result<RegretReport<R>> {
    let d = env.arms();
    let t = env.rounds();
    let ln_d = R::of_usize(d).ln();
    let eta = (R::of(2.0) * ln_d / (R::of_usize(t) * R::of_usize(d))).sqrt();
    let mut out = ReportBuilder::new(BaselineTag::Exp3.as_str(), env, false);
    let mut p = vec![R::zero(); d];
    for s in 0..env.episodes() {
        let losses = env.episode(s);
        let mut rng = stream_rng(env.seed(), Stream::Learner, s as u64);
        let mut cum = vec![R::zero(); d];
        let mut incurred = R::zero();
        for round in 0..t {
            // p ∝ exp(−η L̂), shifted by the smallest estimate.
            let m = cum.iter().copied().fold(R::infinity(), R::min);
            for (pi, li) in p.iter_mut().zip(&cum) {
                *pi = (-eta * (*li - m)).exp();
            }
            let z: R = p.iter().copied().sum();
            p.iter_mut().for_each(|pi| *pi = *pi / z);
            let arm = draw(&p, &mut rng);
            let f = losses.loss(round, arm);
            incurred = incurred + f;
            cum[arm] = cum[arm] + f / p[arm];
        }
        let best = losses.true_best_arm();
        out.push(incurred - losses.totals()[best], eta, best, estimate_best_arm(&cum));
    }
    let mut r = out.finish()?;
    let n = R::of_usize(t) * R::of_usize(d) * ln_d;
    r.reference_bound = Some(R::of_usize(env.episodes()) * (R::of(2.0) * n).sqrt());
    Ok(r)
}

/// Default Exp3.S constants for `H` switches over `T'` rounds with `K` arms:
/// `γ = min{1, √(K(H ln(KT') + e) / ((e−1)T'))}` and `α = 1/T'`.
pub fn exp3s_defaults(arms: usize, horizon: u64, switches: usize) -> (f64, f64) {
    let k = arms as f64;
    let t = horizon as f64;
    let h = switches as f64;
    let gamma = (k * (h * (k * t).ln() + E) / ((E - 1.0) * t)).sqrt().min(1.0);
    (gamma, 1.0 / t)
}

/// `2√(e−1) √(K T' (H ln(K T') + e))`.
pub fn exp3s_reference_bound(arms: usize, horizon: u64, switches: usize) -> f64 {
    let k = arms as f64;
    let t = horizon as f64;
    2.0 * (E - 1.0).sqrt() * (k * t * (switches as f64 * (k * t).ln() + E)).sqrt()
}

/// Exp3.S over the concatenation of all episodes, with uniform mixing `γ = mixing`
/// (default from [`exp3s_defaults`]). Rewards are `1 − loss`.
pub fn run_exp3s<R: Real>(env: &Environment<R>, mixing: Option<R>) -> Result<RegretReport<R>> {
    let d = env.arms();
    let t = env.rounds();
    let horizon = (env.episodes() * t) as u64;
    let (default_gamma, share) = exp3s_defaults(d, horizon, env.episodes());
    let gamma = mixing.unwrap_or(R::of(default_gamma));
    if !(gamma > R::zero() && gamma <= R::one()) {
        return Err(Error::domain(format!("Exp3.S mixing {gamma} outside (0, 1]")));
    }
    let k = R::of_usize(d);
    let share = R::of(E * share) / k;
    let mut w = vec![R::one() / k; d];
    let mut p = vec![R::zero(); d];
    let mut out = ReportBuilder::new(BaselineTag::Exp3s.as_str(), env, false);
    for s in 0..env.episodes() {
        let losses = env.episode(s);
        let mut rng = stream_rng(env.seed(), Stream::Learner, s as u64);
        let mut cum = vec![R::zero(); d];
        let mut incurred = R::zero();
        for round in 0..t {
            // w is kept normalized, so W = 1 below.
            for (pi, wi) in p.iter_mut().zip(&w) {
                *pi = (R::one() - gamma) * *wi + gamma / k;
            }
            let arm = draw(&p, &mut rng);
            let f = losses.loss(round, arm);
            incurred = incurred + f;
            let xhat = (R::one() - f) / p[arm];
            cum[arm] = cum[arm] + f / p[arm];
            w[arm] = w[arm] * (gamma * xhat / k).exp();
            for wi in w.iter_mut() {
                *wi = *wi + share;
            }
            let z: R = w.iter().copied().sum();
            w.iter_mut().for_each(|wi| *wi = *wi / z);
        }
        let best = losses.true_best_arm();
        out.push(incurred - losses.totals()[best], gamma, best, estimate_best_arm(&cum));
    }
    let mut r = out.finish()?;
    r.reference_bound = Some(R::of(exp3s_reference_bound(d, horizon, env.episodes())));
    Ok(r)
}

fn draw<R: Real, G: Rng + ?Sized>(p: &[R], rng: &mut G) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, pi) in p.iter().enumerate() {
        acc += pi.as_f64();
        if u < acc {
            return i;
        }
    }
    p.len() - 1
}
