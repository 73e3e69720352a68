//! Hyperparameter bundle of one Meta-INF run.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::simplex::{problem_scale, TruncationLevel};

/// Sizes of the game: `S` episodes of `T` rounds over `d` arms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ProblemSize {
    pub episodes: usize,
    pub rounds: u64,
    pub arms: usize,
}

impl ProblemSize {
    pub fn new(episodes: usize, rounds: u64, arms: usize) -> Result<Self> {
        if episodes == 0 || rounds == 0 || arms == 0 {
            return Err(Error::domain("S, T and d must all be at least 1"));
        }
        Ok(Self {
            episodes,
            rounds,
            arms,
        })
    }
}

/// Per-arm misidentification bound `ε_δ = exp(−(3/28)·Δ²·δ·T)`.
pub fn identification_error<R: Real>(gap: R, delta: R, rounds: u64) -> R {
    (-R::of(3.0 / 28.0) * gap * gap * delta * R::of_u64(rounds)).exp()
}

/// Admissible truncation levels `[56 ln d / (3Δ²T), 1/d]`; may be empty.
pub fn admissible_delta_interval<R: Real>(rounds: u64, arms: usize, gap: R) -> (R, R) {
    let lo = R::of(56.0) * R::of_usize(arms).ln() / (R::of(3.0) * gap * gap * R::of_u64(rounds));
    (lo, R::one() / R::of_usize(arms))
}

/// Smallest `T` for which the interval is non-empty, `⌈56 d ln d / (3Δ²)⌉`.
pub fn min_feasible_rounds<R: Real>(arms: usize, gap: R) -> u64 {
    let t = R::of(56.0) * R::of_usize(arms) * R::of_usize(arms).ln() / (R::of(3.0) * gap * gap);
    t.as_f64().ceil().max(1.0) as u64
}

/// How the truncation level δ is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeltaRule<R> {
    /// `c / (Δ^{4/7} T^{4/7} d^{3/7})`, clamped into the admissible interval.
    Gap { c: R },
    /// `c / (T^{4/7} d^{3/7})`, for when Δ is not known to the learner.
    GapFree { c: R },
    Fixed(R),
}

/// How the ε-EWOO regularization α is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaRule<R> {
    /// `c · ∛(2√2 (ln(S+1) + 1) / (S (1−dε)^{3/2} δ^{3/4}))`.
    Formula { c: R },
    Fixed(R),
}

/// `(δ, α, D, γ, σ, ε_δ)` together with the problem sizes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetaParams<R> {
    pub delta: R,
    pub alpha: R,
    /// Half-width parameter `D` of the ε-EWOO domain `[α, √(D²+α²)]`.
    pub big_d: R,
    pub gamma: R,
    pub sigma: R,
    pub eps_delta: R,
    pub size: ProblemSize,
    pub gap: Option<R>,
    /// Constructed with the admissibility check overridden.
    pub forced: bool,
    /// `d·ε_δ ≥ 1`: only possible when forced; the algorithm then treats ε_δ as 0.
    pub identification_vacuous: bool,
}

impl<R: Real> MetaParams<R> {
    /// Gap-tuned parameters with multiplicative constants on δ and α.
    pub fn compute(size: ProblemSize, gap: Option<R>, c_delta: R, c_alpha: R) -> Result<Self> {
        let rule = match gap {
            Some(_) => DeltaRule::Gap { c: c_delta },
            None => DeltaRule::GapFree { c: c_delta },
        };
        Self::build(size, gap, rule, AlphaRule::Formula { c: c_alpha }, false)
    }

    pub fn build(
        size: ProblemSize,
        gap: Option<R>,
        delta_rule: DeltaRule<R>,
        alpha_rule: AlphaRule<R>,
        force: bool,
    ) -> Result<Self> {
        let d = size.arms;
        let t = size.rounds;
        if d < 2 && !force {
            return Err(Error::domain("Meta-INF needs at least two arms"));
        }
        if let Some(g) = gap {
            if !(g > R::zero() && g <= R::one()) {
                return Err(Error::domain(format!("gap Δ = {g} outside (0, 1]")));
            }
        }
        let cap = R::one() / R::of_usize(d);
        let interval = gap.map(|g| admissible_delta_interval(t, d, g));
        let shape = R::of_u64(t).powf(R::of(4.0 / 7.0)) * R::of_usize(d).powf(R::of(3.0 / 7.0));

        let delta = match delta_rule {
            DeltaRule::Gap { c } => {
                let g = gap.ok_or_else(|| Error::domain("gap-based δ needs a gap"))?;
                let raw = c / (g.powf(R::of(4.0 / 7.0)) * shape);
                let (lo, hi) = interval.expect("gap given");
                if lo > hi {
                    if !force {
                        return Err(infeasible(t, d, g, lo, hi));
                    }
                    raw.min(hi)
                } else {
                    raw.max(lo).min(hi)
                }
            }
            DeltaRule::GapFree { c } => (c / shape).min(cap),
            DeltaRule::Fixed(v) => v,
        };
        if !(delta > R::zero()) || delta > cap * (R::one() + R::of(1e-12)) {
            return Err(Error::Infeasible {
                message: format!("δ = {delta} outside (0, 1/d = {cap}]"),
                min_rounds: None,
            });
        }
        if let (Some(g), Some((lo, hi)), false) = (gap, interval, force) {
            if delta < lo * (R::one() - R::of(1e-12)) || lo > hi {
                return Err(infeasible(t, d, g, lo, hi));
            }
        }

        let eps = gap.map_or(R::zero(), |g| identification_error(g, delta, t));
        let d_eps = R::of_usize(d) * eps;
        let vacuous = d_eps >= R::one();
        if vacuous && !force {
            return Err(Error::Infeasible {
                message: format!("d·ε_δ = {d_eps} ≥ 1 makes best-arm identification vacuous"),
                min_rounds: gap.map(|g| min_feasible_rounds(d, g)),
            });
        }
        let one_minus = if vacuous { R::one() } else { R::one() - d_eps };

        let sigma = problem_scale::<R>(t, d);
        let big_d = R::SQRT_2() / (one_minus.sqrt() * delta.powf(R::of(0.25)));
        let alpha = match alpha_rule {
            AlphaRule::Formula { c } => {
                let s = R::of_usize(size.episodes);
                let num = R::of(2.0) * R::SQRT_2() * ((s + R::one()).ln() + R::one());
                let den = s * one_minus.powf(R::of(1.5)) * delta.powf(R::of(0.75));
                c * (num / den).cbrt()
            }
            AlphaRule::Fixed(a) => a,
        };
        if !(alpha > R::zero() && alpha.is_finite()) {
            return Err(Error::domain(format!("α = {alpha} must be positive")));
        }
        let gamma = R::of(2.0) / (sigma * big_d) * (alpha * alpha / (big_d * big_d)).min(R::one());
        Ok(Self {
            delta,
            alpha,
            big_d,
            gamma,
            sigma,
            eps_delta: eps,
            size,
            gap,
            forced: force,
            identification_vacuous: vacuous,
        })
    }

    /// `1 − d·ε_δ` as used by the algorithm (1 when identification is vacuous).
    pub fn one_minus_d_eps(&self) -> R {
        if self.identification_vacuous {
            R::one()
        } else {
            R::one() - R::of_usize(self.size.arms) * self.eps_delta
        }
    }

    pub fn trunc(&self) -> TruncationLevel<R> {
        TruncationLevel::new(self.delta, self.size.arms).expect("δ validated at construction")
    }

    /// ε-EWOO domain `[α, √(D² + α²)]` in the analysis variable `v`.
    pub fn v_domain(&self) -> (R, R) {
        (self.alpha, (self.big_d * self.big_d + self.alpha * self.alpha).sqrt())
    }
}

fn infeasible<R: Real>(rounds: u64, arms: usize, gap: R, lo: R, hi: R) -> Error {
    let min_t = min_feasible_rounds(arms, gap);
    Error::Infeasible {
        message: format!(
            "admissible δ interval [{lo:.6}, {hi:.6}] excludes δ for T = {rounds}, d = {arms}, Δ = {gap}; \
             the smallest feasible T is {min_t}"
        ),
        min_rounds: Some(min_t),
    }
}

/// `ℓ̃(v) = σ((B/(1−dε) + α²)/v + v)` for an observed divergence `B`.
pub fn regularized_lr_loss<R: Real>(v: R, divergence: R, params: &MetaParams<R>) -> R {
    let c = divergence / params.one_minus_d_eps() + params.alpha * params.alpha;
    params.sigma * (c / v + v)
}
