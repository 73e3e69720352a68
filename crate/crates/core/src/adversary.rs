//! Oblivious adversaries with a controlled per-episode gap.
//!
//! Each episode's loss matrix is fixed from `(seed, episode)` before any learner interaction.
//! Every arm's losses are its mean plus antithetic noise pairs `(+u, −u)` placed at random
//! rounds, so the empirical means are exactly `μ*` for the best arm and `μ* + Δ` for every
//! other arm regardless of the seed.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::inner::sample_arm;
use crate::scalar::Real;
use crate::seed::{stream_rng, Stream};
use crate::simplex::Distribution;

/// Loss matrix of one episode, stored round-major.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeLosses<R> {
    rounds: usize,
    arms: usize,
    losses: Vec<R>,
    true_best_arm: usize,
}

impl<R: Real> EpisodeLosses<R> {
    /// Builds an episode from a `rounds × arms` matrix; the best arm is the column with the
    /// lowest total loss (lowest index on ties).
    pub fn from_rows(rows: &[Vec<R>]) -> Result<Self> {
        let rounds = rows.len();
        let arms = rows.first().map_or(0, Vec::len);
        if rounds == 0 || arms == 0 {
            return Err(Error::domain("episode needs at least one round and one arm"));
        }
        if rows.iter().any(|r| r.len() != arms) {
            return Err(Error::domain("ragged loss matrix"));
        }
        Self::from_flat(rounds, arms, rows.concat())
    }

    pub fn from_flat(rounds: usize, arms: usize, losses: Vec<R>) -> Result<Self> {
        if losses.len() != rounds * arms || rounds == 0 || arms == 0 {
            return Err(Error::domain("loss buffer does not match rounds × arms"));
        }
        if losses.iter().any(|f| !(*f >= R::zero() && *f <= R::one())) {
            return Err(Error::domain("losses must lie in [0, 1]"));
        }
        let mut ep = Self {
            rounds,
            arms,
            losses,
            true_best_arm: 0,
        };
        let totals = ep.totals();
        ep.true_best_arm = argmin_lowest(&totals);
        Ok(ep)
    }

    #[inline]
    pub fn rounds(&self) -> usize {
        self.rounds
    }

    #[inline]
    pub fn arms(&self) -> usize {
        self.arms
    }

    #[inline]
    pub fn true_best_arm(&self) -> usize {
        self.true_best_arm
    }

    /// `f_{t,i}`.
    #[inline]
    pub fn loss(&self, t: usize, arm: usize) -> R {
        self.losses[t * self.arms + arm]
    }

    pub fn row(&self, t: usize) -> &[R] {
        &self.losses[t * self.arms..(t + 1) * self.arms]
    }

    /// Per-arm cumulative loss over the episode.
    pub fn totals(&self) -> Vec<R> {
        let mut totals = vec![R::zero(); self.arms];
        for row in self.losses.chunks_exact(self.arms) {
            for (acc, f) in totals.iter_mut().zip(row) {
                *acc = *acc + *f;
            }
        }
        totals
    }

    pub fn means(&self) -> Vec<R> {
        let n = R::of_usize(self.rounds);
        self.totals().into_iter().map(|s| s / n).collect()
    }
}

pub(crate) fn argmin_lowest<R: Real>(v: &[R]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate().skip(1) {
        if *x < v[best] {
            best = i;
        }
    }
    best
}

/// Distribution the adversary draws each episode's best arm from.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Prior<R> {
    pub weights: Distribution<R>,
}

impl<R: Real> Prior<R> {
    pub fn new(weights: Distribution<R>) -> Self {
        Self { weights }
    }

    pub fn uniform(arms: usize) -> Self {
        Self::new(Distribution::uniform(arms))
    }

    pub fn arms(&self) -> usize {
        self.weights.dim()
    }
}

/// Few-good-arms prior: mass `1−ζ` split evenly over the first `k` arms, `ζ` over the rest.
pub fn few_good_arms_prior<R: Real>(k: usize, zeta: R, arms: usize) -> Result<Prior<R>> {
    if k == 0 || k >= arms {
        return Err(Error::domain(format!("few-good-arms needs 1 ≤ k < d, got k = {k}, d = {arms}")));
    }
    if !(zeta > R::zero() && zeta < R::one()) {
        return Err(Error::domain(format!("few-good-arms needs ζ in (0, 1), got {zeta}")));
    }
    let good = (R::one() - zeta) / R::of_usize(k);
    let bad = zeta / R::of_usize(arms - k);
    let w = (0..arms).map(|i| if i < k { good } else { bad }).collect();
    Ok(Prior::new(Distribution::new(w)?))
}

/// `S` i.i.d. best arms drawn from the prior.
pub fn sample_best_arm_sequence<R: Real, G: Rng + ?Sized>(
    prior: &Prior<R>,
    episodes: usize,
    rng: &mut G,
) -> Vec<usize> {
    (0..episodes).map(|_| sample_arm(&prior.weights, rng)).collect()
}

/// Per-episode gap structure of the generated losses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapSpec<R> {
    gap: R,
    base_loss: R,
    noise_amp: R,
}

impl<R: Real> GapSpec<R> {
    pub fn new(gap: R, base_loss: R, noise_amp: R) -> Result<Self> {
        if !(gap > R::zero() && gap <= R::of(0.6)) {
            return Err(Error::domain(format!("gap Δ = {gap} outside (0, 0.6]")));
        }
        if !(base_loss > R::zero() && base_loss < R::one()) {
            return Err(Error::domain(format!("base loss μ* = {base_loss} outside (0, 1)")));
        }
        if !(noise_amp >= R::zero()) {
            return Err(Error::domain("noise amplitude must be ≥ 0"));
        }
        let slack = R::of(1e-12);
        if base_loss - noise_amp < -slack || base_loss + gap + noise_amp > R::one() + slack {
            return Err(Error::domain(format!(
                "μ* = {base_loss}, Δ = {gap}, noise = {noise_amp} would leave [0, 1]"
            )));
        }
        Ok(Self {
            gap,
            base_loss,
            noise_amp,
        })
    }

    /// Default noise amplitude `min(0.25, μ*, 1 − μ* − Δ)`.
    pub fn with_default_noise(gap: R, base_loss: R) -> Result<Self> {
        let amp = R::of(0.25)
            .min(base_loss)
            .min(R::one() - base_loss - gap)
            .max(R::zero());
        Self::new(gap, base_loss, amp)
    }

    pub fn gap(&self) -> R {
        self.gap
    }

    pub fn base_loss(&self) -> R {
        self.base_loss
    }

    pub fn noise_amp(&self) -> R {
        self.noise_amp
    }
}

/// Generates one episode whose best arm is `best` with exact per-arm means.
///
/// With odd `rounds` one round per arm carries no noise so that the pairs still cancel.
pub fn gen_episode_losses<R: Real, G: Rng + ?Sized>(
    best: usize,
    spec: &GapSpec<R>,
    rounds: usize,
    arms: usize,
    rng: &mut G,
) -> Result<EpisodeLosses<R>> {
    if arms < 2 || best >= arms {
        return Err(Error::domain(format!("best arm {best} invalid for {arms} arms")));
    }
    if rounds == 0 {
        return Err(Error::domain("episode with zero rounds"));
    }
    let mut losses = vec![R::zero(); rounds * arms];
    let mut noise = vec![R::zero(); rounds];
    let amp = spec.noise_amp().as_f64();
    for arm in 0..arms {
        let mean = if arm == best {
            spec.base_loss()
        } else {
            spec.base_loss() + spec.gap()
        };
        noise.fill(R::zero());
        if amp > 0.0 {
            for pair in noise.chunks_exact_mut(2) {
                let u = R::of(rng.random_range(-amp..=amp));
                pair[0] = u;
                pair[1] = -u;
            }
            noise.shuffle(rng);
        }
        for (t, n) in noise.iter().enumerate() {
            let f = (mean + *n).max(R::zero()).min(R::one());
            losses[t * arms + arm] = f;
        }
    }
    let ep = EpisodeLosses::from_flat(rounds, arms, losses)?;
    debug_assert_eq!(ep.true_best_arm(), best);
    Ok(ep)
}

/// Empirical distribution `ψ` of a best-arm sequence.
pub fn empirical_best_arm_distribution<R: Real>(best_arms: &[usize], arms: usize) -> Result<Distribution<R>> {
    if best_arms.is_empty() || arms == 0 {
        return Err(Error::domain("empirical distribution of an empty sequence"));
    }
    let mut counts = vec![0usize; arms];
    for &j in best_arms {
        if j >= arms {
            return Err(Error::domain(format!("arm {j} out of range for {arms} arms")));
        }
        counts[j] += 1;
    }
    let n = R::of_usize(best_arms.len());
    Ok(Distribution::from_raw(
        counts.into_iter().map(|c| R::of_usize(c) / n).collect(),
    ))
}

/// True iff every non-best arm's mean exceeds the best arm's by at least `Δ` (1e-12 slack).
pub fn verify_gap<R: Real>(ep: &EpisodeLosses<R>, gap: R) -> bool {
    let means = ep.means();
    let best = ep.true_best_arm();
    means
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != best)
        .all(|(_, m)| *m - means[best] >= gap - R::of(1e-12))
}

/// How the adversary picks each episode's best arm.
#[derive(Debug, Clone, PartialEq)]
pub enum BestArmSource<R> {
    Prior(Prior<R>),
    /// A fixed sequence, repeated cyclically when shorter than the number of episodes.
    Fixed(Vec<usize>),
}

/// Everything needed to regenerate the losses of a game.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario<R> {
    pub source: BestArmSource<R>,
    pub gap: GapSpec<R>,
    pub episodes: usize,
    pub rounds: usize,
    pub arms: usize,
}

impl<R: Real> Scenario<R> {
    pub fn new(source: BestArmSource<R>, gap: GapSpec<R>, episodes: usize, rounds: usize, arms: usize) -> Result<Self> {
        if episodes == 0 || rounds == 0 || arms < 2 {
            return Err(Error::domain("scenario needs S ≥ 1, T ≥ 1 and d ≥ 2"));
        }
        match &source {
            BestArmSource::Prior(p) if p.arms() != arms => {
                return Err(Error::domain("prior size differs from the number of arms"))
            }
            BestArmSource::Fixed(seq) if seq.is_empty() || seq.iter().any(|j| *j >= arms) => {
                return Err(Error::domain("fixed best-arm sequence is empty or out of range"))
            }
            _ => {}
        }
        Ok(Self {
            source,
            gap,
            episodes,
            rounds,
            arms,
        })
    }

    /// The prior the best arms are drawn from; for fixed sequences, their empirical distribution.
    pub fn prior(&self) -> Prior<R> {
        match &self.source {
            BestArmSource::Prior(p) => p.clone(),
            BestArmSource::Fixed(seq) => Prior::new(
                empirical_best_arm_distribution(seq, self.arms).expect("validated sequence"),
            ),
        }
    }

    /// Fixes the game for one replicate seed.
    pub fn realize(&self, seed: u64) -> Environment<R> {
        let best_arms = match &self.source {
            BestArmSource::Prior(p) => {
                let mut rng = stream_rng(seed, Stream::BestArms, 0);
                sample_best_arm_sequence(p, self.episodes, &mut rng)
            }
            BestArmSource::Fixed(seq) => seq.iter().copied().cycle().take(self.episodes).collect(),
        };
        Environment {
            scenario: self.clone(),
            seed,
            best_arms,
        }
    }
}

/// A realized oblivious game: the best-arm sequence is drawn up front and each episode's loss
/// matrix is a pure function of `(seed, episode)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Environment<R> {
    scenario: Scenario<R>,
    seed: u64,
    best_arms: Vec<usize>,
}

impl<R: Real> Environment<R> {
    pub fn scenario(&self) -> &Scenario<R> {
        &self.scenario
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn episodes(&self) -> usize {
        self.scenario.episodes
    }

    pub fn rounds(&self) -> usize {
        self.scenario.rounds
    }

    pub fn arms(&self) -> usize {
        self.scenario.arms
    }

    pub fn best_arms(&self) -> &[usize] {
        &self.best_arms
    }

    pub fn episode(&self, s: usize) -> EpisodeLosses<R> {
        let mut rng = stream_rng(self.seed, Stream::EpisodeLosses, s as u64);
        gen_episode_losses(
            self.best_arms[s],
            &self.scenario.gap,
            self.scenario.rounds,
            self.scenario.arms,
            &mut rng,
        )
        .expect("scenario validated at construction")
    }
}
