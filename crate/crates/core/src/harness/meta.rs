use crate::adversary::{Environment, Scenario};
use crate::error::{Error, Result};
use crate::inner::{play_episode, InfLearner};
use crate::outer::{identification_error, InitMetaState, LrMetaState, MetaParams};
use crate::scalar::Real;
use crate::seed::{stream_rng, Stream};
use crate::simplex::{beta_divergence, mix_with_uniform, Distribution};

use super::bound::regret_bound;
use super::report::{RegretReport, ReportBuilder};

pub const META_INF: &str = "meta_inf";

/// Meta-INF over every episode of `env`.
///
/// Before episode `s` the outer learners propose `(η_s, ϕ_s)`; afterwards FTL observes the
/// estimated best arm `ĵ_s` and ε-EWOO the divergence `D_{1/2}(e_ĵ^δ, ϕ_s)`.
pub fn run_meta_inf<R: Real>(env: &Environment<R>, params: &MetaParams<R>, record: bool) -> Result<RegretReport<R>> {
    let size = params.size;
    if size.arms != env.arms() || size.episodes != env.episodes() || size.rounds != env.rounds() as u64 {
        return Err(Error::domain("parameters were computed for a different problem size"));
    }
    let half = R::of(0.5);
    let trunc = params.trunc();
    let mut lr = LrMetaState::new(*params);
    let mut init = InitMetaState::new(env.arms());
    let mut out = ReportBuilder::new(META_INF, env, record);

    for s in 0..env.episodes() {
        let eta = lr.predict().map_err(|e| e.in_episode(s))?;
        let phi = init.predict(&trunc);
        let losses = env.episode(s);
        let mut rng = stream_rng(env.seed(), Stream::Learner, s as u64);
        let mut learner = InfLearner::with_q(half, phi.clone(), eta, trunc);
        let res = play_episode(&mut learner, &losses, &mut rng, record).map_err(|e| e.in_episode(s))?;

        let j = res.est_best_arm;
        let divergence = beta_divergence(half, &mix_with_uniform(j, &trunc)?, &phi)?;
        init.update(j)?;
        lr.update(divergence)?;

        let best_total = losses.totals()[losses.true_best_arm()];
        out.push_episode(res, best_total, eta);
    }

    let mut report = out.finish()?;
    report.bound = match regret_bound(&report.psi, params) {
        Ok(b) => Some(b),
        Err(Error::VacuousBound { .. }) => None,
        Err(e) => return Err(e),
    };
    report.params = Some(*params);
    report.final_phi = Some(init.predict(&trunc));
    Ok(report)
}

/// Total regret of a play sequence against the true best arm of every episode.
pub fn total_regret<R: Real>(plays: &[Vec<usize>], env: &Environment<R>) -> Result<R> {
    if plays.len() != env.episodes() {
        return Err(Error::domain("one play sequence per episode is required"));
    }
    let mut total = R::zero();
    for (s, ys) in plays.iter().enumerate() {
        let losses = env.episode(s);
        if ys.len() != losses.rounds() {
            return Err(Error::domain(format!("episode {s} has {} plays for {} rounds", ys.len(), losses.rounds())));
        }
        let j = losses.true_best_arm();
        for (t, &y) in ys.iter().enumerate() {
            if y >= losses.arms() {
                return Err(Error::domain(format!("arm {y} out of range")));
            }
            total = total + losses.loss(t, y) - losses.loss(t, j);
        }
    }
    Ok(total)
}

/// Empirical best-arm identification of the inner learner alone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Identification<R> {
    pub episodes: usize,
    pub correct: usize,
    pub rate: R,
    /// `1 − d·ε_δ`; may be negative when the guarantee is vacuous.
    pub floor: R,
}

/// Runs `scenario.episodes` independent episodes of the inner learner from uniform with the
/// first-episode learning rate of `params`, and counts correct best-arm estimates.
pub fn identification_experiment<R: Real>(
    scenario: &Scenario<R>,
    params: &MetaParams<R>,
    seed: u64,
) -> Result<Identification<R>> {
    let env = scenario.realize(seed);
    let trunc = params.trunc();
    let eta = LrMetaState::new(*params).predict()?;
    let d = env.arms();
    let mut correct = 0;
    for s in 0..env.episodes() {
        let losses = env.episode(s);
        let mut rng = stream_rng(seed, Stream::Identification, s as u64);
        let mut learner = InfLearner::with_q(R::of(0.5), Distribution::uniform(d), eta, trunc);
        let res = play_episode(&mut learner, &losses, &mut rng, false).map_err(|e| e.in_episode(s))?;
        if res.est_best_arm == res.true_best_arm {
            correct += 1;
        }
    }
    let gap = scenario.gap.gap();
    let floor = R::one() - R::of_usize(d) * identification_error(gap, params.delta, env.rounds() as u64);
    Ok(Identification {
        episodes: env.episodes(),
        correct,
        rate: R::of_usize(correct) / R::of_usize(env.episodes()),
        floor,
    })
}
