//! INF with Tsallis parameter 1/2 and guaranteed exploration: one episode of sampling,
//! importance-weighted loss estimation and OMD over the truncated simplex, followed by an
//! estimate of the best arm in hindsight.
//!
//! [`InfLearner`] also serves the INF baselines, which use a general `q` and `δ = 0`.

use rand::Rng;

use crate::adversary::{argmin_lowest, EpisodeLosses};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::simplex::{mirror_weights, solve_normalizer, Distribution, TruncationLevel};

/// Parameters of one inner episode: initialization `ϕ_s`, learning rate `η_s`, truncation `δ`.
#[derive(Debug, Clone, PartialEq)]
pub struct InnerParams<R> {
    phi: Distribution<R>,
    eta: R,
    trunc: TruncationLevel<R>,
}

impl<R: Real> InnerParams<R> {
    pub fn new(phi: Distribution<R>, eta: R, trunc: TruncationLevel<R>) -> Result<Self> {
        if !(eta > R::zero() && eta.is_finite()) {
            return Err(Error::domain(format!("learning rate η = {eta} must be positive")));
        }
        if !phi.is_in(&trunc) {
            return Err(Error::domain("initialization lies outside the truncated simplex"));
        }
        Ok(Self { phi, eta, trunc })
    }

    pub fn phi(&self) -> &Distribution<R> {
        &self.phi
    }

    pub fn eta(&self) -> R {
        self.eta
    }

    pub fn trunc(&self) -> &TruncationLevel<R> {
        &self.trunc
    }
}

/// Decision point, cumulative estimated losses and round counter.
#[derive(Debug, Clone, PartialEq)]
pub struct InnerState<R> {
    pub x: Distribution<R>,
    pub cum_est_loss: Vec<R>,
    pub t: u64,
}

/// Draws arm `i` with probability `x_i` by inversion of one uniform draw.
pub fn sample_arm<R: Real, G: Rng + ?Sized>(x: &Distribution<R>, rng: &mut G) -> usize {
    sample_index(x.weights(), rng)
}

#[inline]
fn sample_index<R: Real, G: Rng + ?Sized>(w: &[R], rng: &mut G) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, wi) in w.iter().enumerate() {
        acc += wi.as_f64();
        if u < acc {
            return i;
        }
    }
    // u landed in the rounding gap above Σw; take the last arm with positive mass.
    w.iter().rposition(|wi| *wi > R::zero()).unwrap_or(w.len() - 1)
}

/// Importance-weighted estimate `f̂_i = f · 1[i = played] / x_i`.
pub fn estimate_loss<R: Real>(played: usize, observed_loss: R, x: &Distribution<R>) -> Result<Vec<R>> {
    if played >= x.dim() {
        return Err(Error::domain(format!("arm {played} out of range")));
    }
    let p = x.get(played);
    if p <= R::zero() {
        return Err(Error::DivisionByZero { arm: played });
    }
    let mut g = vec![R::zero(); x.dim()];
    g[played] = observed_loss / p;
    Ok(g)
}

/// `argmin_{x ∈ Δ_δ} η⟨g, x⟩ + D_{1/2}(x, x_t)`.
pub fn omd_update<R: Real>(
    x_t: &Distribution<R>,
    g: &[R],
    eta: R,
    trunc: &TruncationLevel<R>,
) -> Result<Distribution<R>> {
    crate::simplex::mirror_step(R::of(0.5), x_t, g, eta, trunc)
}

/// Arm with the lowest cumulative estimated loss; ties go to the lowest index.
pub fn estimate_best_arm<R: Real>(cum_est_loss: &[R]) -> usize {
    assert!(!cum_est_loss.is_empty(), "best arm of an empty vector");
    argmin_lowest(cum_est_loss)
}

/// Outcome of one inner episode.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeResult<R> {
    pub plays: Vec<usize>,
    pub incurred_loss: R,
    pub est_best_arm: usize,
    pub true_best_arm: usize,
    /// `x_{s,t}` for every round, when requested.
    pub decisions: Option<Vec<Distribution<R>>>,
}

/// Stateful INF learner over `Δ_δ` with Tsallis parameter `q`.
///
/// Only the loss of the played arm is ever passed to [`InfLearner::observe`].
#[derive(Debug, Clone)]
pub struct InfLearner<R> {
    q: R,
    eta: R,
    trunc: TruncationLevel<R>,
    state: InnerState<R>,
    w: Vec<R>,
    next: Vec<R>,
    g: Vec<R>,
}

impl<R: Real> InfLearner<R> {
    /// The `q = 1/2` learner of Meta-INF.
    pub fn new(params: &InnerParams<R>) -> Self {
        Self::with_q(R::of(0.5), params.phi.clone(), params.eta, params.trunc)
    }

    pub fn with_q(q: R, phi: Distribution<R>, eta: R, trunc: TruncationLevel<R>) -> Self {
        let d = phi.dim();
        Self {
            q,
            eta,
            trunc,
            state: InnerState {
                x: phi,
                cum_est_loss: vec![R::zero(); d],
                t: 0,
            },
            w: vec![R::zero(); d],
            next: vec![R::zero(); d],
            g: vec![R::zero(); d],
        }
    }

    pub fn state(&self) -> &InnerState<R> {
        &self.state
    }

    pub fn decision(&self) -> &Distribution<R> {
        &self.state.x
    }

    pub fn play<G: Rng + ?Sized>(&self, rng: &mut G) -> usize {
        sample_arm(&self.state.x, rng)
    }

    /// Feeds back the loss of the played arm and moves to the next decision point.
    pub fn observe(&mut self, played: usize, loss: R) -> Result<()> {
        let p = self.state.x.get(played);
        if p <= R::zero() {
            return Err(Error::DivisionByZero { arm: played });
        }
        let est = loss / p;
        self.state.cum_est_loss[played] = self.state.cum_est_loss[played] + est;
        self.state.t += 1;
        if est != R::zero() {
            self.g.fill(R::zero());
            self.g[played] = est;
            mirror_weights(self.q, self.state.x.weights(), self.eta, &self.g, &mut self.w);
            solve_normalizer(self.q, &self.w, &self.trunc, &mut self.next)
                .map_err(|e| e.at_round(self.state.t))?;
            let x = &mut self.state.x;
            std::mem::swap(&mut self.next, x.weights_mut());
        }
        debug_assert!(
            self.state.x.is_in(&self.trunc),
            "decision left the truncated simplex at round {}",
            self.state.t
        );
        Ok(())
    }

    pub fn best_arm(&self) -> usize {
        estimate_best_arm(&self.state.cum_est_loss)
    }
}

/// Runs `T` rounds of the inner learner on `losses`, then estimates the best arm.
pub fn run_episode<R: Real, G: Rng + ?Sized>(
    losses: &EpisodeLosses<R>,
    params: &InnerParams<R>,
    rng: &mut G,
    record_decisions: bool,
) -> Result<EpisodeResult<R>> {
    if params.phi.dim() != losses.arms() {
        return Err(Error::domain("inner parameters and losses disagree on the number of arms"));
    }
    let mut learner = InfLearner::new(params);
    play_episode(&mut learner, losses, rng, record_decisions)
}

pub(crate) fn play_episode<R: Real, G: Rng + ?Sized>(
    learner: &mut InfLearner<R>,
    losses: &EpisodeLosses<R>,
    rng: &mut G,
    record_decisions: bool,
) -> Result<EpisodeResult<R>> {
    let rounds = losses.rounds();
    let mut plays = Vec::with_capacity(rounds);
    let mut decisions = record_decisions.then(|| Vec::with_capacity(rounds));
    let mut incurred = R::zero();
    for t in 0..rounds {
        if let Some(d) = decisions.as_mut() {
            d.push(learner.decision().clone());
        }
        let arm = learner.play(rng);
        let f = losses.loss(t, arm);
        incurred = incurred + f;
        learner.observe(arm, f)?;
        plays.push(arm);
    }
    Ok(EpisodeResult {
        plays,
        incurred_loss: incurred,
        est_best_arm: learner.best_arm(),
        true_best_arm: losses.true_best_arm(),
        decisions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn degenerate_distribution_always_samples_its_arm() {
        let x = Distribution::<f64>::one_hot(2, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!((0..1000).all(|_| sample_arm(&x, &mut rng) == 2));
    }

    #[test]
    fn sampling_is_seed_deterministic() {
        let x = Distribution::<f64>::new(vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let a: Vec<usize> = {
            let mut rng = ChaCha8Rng::seed_from_u64(9);
            (0..100).map(|_| sample_arm(&x, &mut rng)).collect()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let b: Vec<usize> = (0..100).map(|_| sample_arm(&x, &mut rng)).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn loss_estimate_values() {
        let x = Distribution::<f64>::uniform(2);
        assert_eq!(estimate_loss(0, 0.4, &x).unwrap(), vec![0.8, 0.0]);
        assert_eq!(estimate_loss(1, 0.0, &x).unwrap(), vec![0.0, 0.0]);
        let e = Distribution::<f64>::one_hot(0, 2);
        assert_eq!(estimate_loss(1, 0.5, &e), Err(Error::DivisionByZero { arm: 1 }));
    }

    #[test]
    fn omd_fixed_points() {
        let t = TruncationLevel::new(0.01, 3).unwrap();
        let x = Distribution::<f64>::new(vec![0.5, 0.3, 0.2]).unwrap();
        let same = omd_update(&x, &[0.0; 3], 0.7, &t).unwrap();
        for (a, b) in same.weights().iter().zip(x.weights()) {
            assert!((a - b).abs() < 1e-12);
        }
        let u = Distribution::<f64>::uniform(4);
        let t4 = TruncationLevel::new(0.01, 4).unwrap();
        let eq = omd_update(&u, &[0.3; 4], 0.5, &t4).unwrap();
        for w in eq.weights() {
            assert!((w - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn best_arm_tie_breaks_low() {
        assert_eq!(estimate_best_arm(&[3.0, 1.0, 2.0]), 1);
        assert_eq!(estimate_best_arm(&[1.0, 1.0]), 0);
        assert_eq!(estimate_best_arm(&[0.0; 5]), 0);
    }

    #[test]
    fn single_round_episode() {
        let ep = EpisodeLosses::from_rows(&[vec![0.3, 0.6, 0.9]]).unwrap();
        let params = InnerParams::new(
            Distribution::uniform(3),
            0.1,
            TruncationLevel::new(0.05, 3).unwrap(),
        )
        .unwrap();
        for seed in 0..20 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let r = run_episode(&ep, &params, &mut rng, false).unwrap();
            assert_eq!(r.plays.len(), 1);
            // Only the played arm carries estimated loss.
            let expect = if r.plays[0] == 0 { 1 } else { 0 };
            assert_eq!(r.est_best_arm, expect);
            assert_eq!(r.true_best_arm, 0);
        }
    }

    #[test]
    fn zero_loss_round_keeps_tie_break() {
        let ep = EpisodeLosses::from_rows(&[vec![0.0, 0.0]]).unwrap();
        let params =
            InnerParams::new(Distribution::uniform(2), 0.1, TruncationLevel::new(0.1, 2).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        assert_eq!(run_episode(&ep, &params, &mut rng, false).unwrap().est_best_arm, 0);
    }

    #[test]
    fn singleton_simplex_stays_uniform() {
        let rows: Vec<Vec<f64>> = (0..50).map(|t| vec![(t % 3) as f64 / 3.0, 0.5, 0.9]).collect();
        let ep = EpisodeLosses::from_rows(&rows).unwrap();
        let params = InnerParams::new(
            Distribution::uniform(3),
            5.0,
            TruncationLevel::new(1.0 / 3.0, 3).unwrap(),
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = run_episode(&ep, &params, &mut rng, true).unwrap();
        for x in r.decisions.unwrap() {
            assert_eq!(x, Distribution::uniform(3));
        }
    }

    #[test]
    fn params_validation() {
        let t = TruncationLevel::new(0.1, 3).unwrap();
        assert!(InnerParams::new(Distribution::<f64>::uniform(3), 0.0, t).is_err());
        assert!(InnerParams::new(Distribution::<f64>::one_hot(0, 3), 1.0, t).is_err());
    }
}
