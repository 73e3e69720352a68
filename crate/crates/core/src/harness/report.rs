use serde::Serialize;

use crate::adversary::{empirical_best_arm_distribution, Environment};
use crate::error::Result;
use crate::inner::EpisodeResult;
use crate::outer::MetaParams;
use crate::scalar::Real;
use crate::simplex::Distribution;

use super::bound::BoundBreakdown;

/// Outcome of one algorithm on one realized game.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegretReport<R> {
    pub algorithm: String,
    pub seed: u64,
    pub per_episode_regret: Vec<R>,
    pub total_regret: R,
    pub identification_correct: Vec<bool>,
    /// Learning rate used in each episode (constant for the baselines).
    pub chosen_eta: Vec<R>,
    pub true_best_arms: Vec<usize>,
    pub est_best_arms: Vec<usize>,
    /// Empirical distribution of the true best arms.
    pub psi: Distribution<R>,
    /// Empirical distribution of the estimated best arms.
    pub psi_hat: Distribution<R>,
    /// Regret guarantee evaluated at this game's `ψ` (Meta-INF only).
    pub bound: Option<BoundBreakdown<R>>,
    /// Textbook regret bound of the algorithm, for comparison.
    pub reference_bound: Option<R>,
    pub params: Option<MetaParams<R>>,
    /// Initialization after the last meta-update (Meta-INF only).
    pub final_phi: Option<Distribution<R>>,
    /// Per-episode decision trajectories, when recorded.
    #[serde(skip)]
    pub decisions: Option<Vec<Vec<Distribution<R>>>>,
}

impl<R: Real> RegretReport<R> {
    pub fn episodes(&self) -> usize {
        self.per_episode_regret.len()
    }

    /// Mean regret over episodes `from..to` (0-based, half open).
    pub fn mean_regret_over(&self, from: usize, to: usize) -> R {
        let slice = &self.per_episode_regret[from..to];
        slice.iter().copied().sum::<R>() / R::of_usize(slice.len())
    }

    pub fn identification_rate(&self) -> R {
        let hits = self.identification_correct.iter().filter(|c| **c).count();
        R::of_usize(hits) / R::of_usize(self.identification_correct.len())
    }
}

/// Collects per-episode results into a report.
pub(crate) struct ReportBuilder<R> {
    algorithm: String,
    seed: u64,
    arms: usize,
    regret: Vec<R>,
    eta: Vec<R>,
    truth: Vec<usize>,
    est: Vec<usize>,
    decisions: Option<Vec<Vec<Distribution<R>>>>,
}

impl<R: Real> ReportBuilder<R> {
    pub(crate) fn new(algorithm: &str, env: &Environment<R>, record: bool) -> Self {
        let s = env.episodes();
        Self {
            algorithm: algorithm.to_string(),
            seed: env.seed(),
            arms: env.arms(),
            regret: Vec::with_capacity(s),
            eta: Vec::with_capacity(s),
            truth: Vec::with_capacity(s),
            est: Vec::with_capacity(s),
            decisions: record.then(|| Vec::with_capacity(s)),
        }
    }

    pub(crate) fn push(&mut self, regret: R, eta: R, true_best: usize, est_best: usize) {
        self.regret.push(regret);
        self.eta.push(eta);
        self.truth.push(true_best);
        self.est.push(est_best);
    }

    pub(crate) fn push_episode(&mut self, res: EpisodeResult<R>, true_best_total: R, eta: R) {
        self.push(res.incurred_loss - true_best_total, eta, res.true_best_arm, res.est_best_arm);
        if let (Some(all), Some(d)) = (self.decisions.as_mut(), res.decisions) {
            all.push(d);
        }
    }

    pub(crate) fn finish(self) -> Result<RegretReport<R>> {
        let total = self.regret.iter().copied().sum();
        Ok(RegretReport {
            algorithm: self.algorithm,
            seed: self.seed,
            identification_correct: self.truth.iter().zip(&self.est).map(|(a, b)| a == b).collect(),
            psi: empirical_best_arm_distribution(&self.truth, self.arms)?,
            psi_hat: empirical_best_arm_distribution(&self.est, self.arms)?,
            per_episode_regret: self.regret,
            total_regret: total,
            chosen_eta: self.eta,
            true_best_arms: self.truth,
            est_best_arms: self.est,
            bound: None,
            reference_bound: None,
            params: None,
            final_phi: None,
            decisions: self.decisions,
        })
    }
}
