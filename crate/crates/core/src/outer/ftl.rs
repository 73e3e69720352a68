//! Follow-the-leader over initializations.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::simplex::{Distribution, TruncationLevel};

/// Histogram of the estimated best arms seen so far.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InitMetaState {
    pub best_arm_counts: Vec<u64>,
    pub episode_count: u64,
}

impl InitMetaState {
    pub fn new(arms: usize) -> Self {
        Self {
            best_arm_counts: vec![0; arms],
            episode_count: 0,
        }
    }

    pub fn arms(&self) -> usize {
        self.best_arm_counts.len()
    }

    /// Average of `e_ĵ^δ` over past episodes, i.e. `(1−dδ)·counts/n + δ`;
    /// uniform before the first observation.
    pub fn predict<R: Real>(&self, trunc: &TruncationLevel<R>) -> Distribution<R> {
        let d = self.arms();
        debug_assert_eq!(d, trunc.arms());
        if self.episode_count == 0 {
            return Distribution::uniform(d);
        }
        let delta = trunc.delta();
        let mass = R::one() - R::of_usize(d) * delta;
        let n = R::of_u64(self.episode_count);
        let w = self
            .best_arm_counts
            .iter()
            .map(|&c| mass * R::of_u64(c) / n + delta)
            .collect();
        Distribution::from_raw(w)
    }

    pub fn update(&mut self, est_best: usize) -> Result<()> {
        let d = self.arms();
        let slot = self
            .best_arm_counts
            .get_mut(est_best)
            .ok_or_else(|| Error::domain(format!("arm {est_best} out of range for d = {d}")))?;
        *slot += 1;
        self.episode_count += 1;
        Ok(())
    }
}

pub fn ftl_predict<R: Real>(state: &InitMetaState, trunc: &TruncationLevel<R>) -> Distribution<R> {
    state.predict(trunc)
}

pub fn ftl_update(mut state: InitMetaState, est_best: usize) -> Result<InitMetaState> {
    state.update(est_best)?;
    Ok(state)
}
