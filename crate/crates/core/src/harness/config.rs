//! Experiment configuration. Every field has a default except the problem sizes, so the
//! smallest valid config is a `[problem]` section.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::adversary::{few_good_arms_prior, BestArmSource, GapSpec, Prior, Scenario};
use crate::baselines::BaselineTag;
use crate::error::{Error, Result};
use crate::outer::{AlphaRule, DeltaRule, MetaParams, ProblemSize};
use crate::scalar::Real;
use crate::seed::{split, Stream};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: ProblemConfig,
    #[serde(default)]
    pub scenario: ScenarioConfig,
    #[serde(default)]
    pub params: ParamsConfig,
    #[serde(default)]
    pub run: RunConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub episodes: usize,
    pub rounds: u64,
    pub arms: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PriorKind {
    #[default]
    Uniform,
    FewGoodArms,
    Fixed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub prior: PriorKind,
    /// Number of good arms (few-good-arms prior).
    pub k: Option<usize>,
    /// Mass outside the good arms (few-good-arms prior).
    pub zeta: Option<f64>,
    /// Best-arm sequence, repeated cyclically (fixed prior).
    pub sequence: Option<Vec<usize>>,
    pub gap: f64,
    /// Mean loss of the best arm.
    pub base_loss: f64,
    /// Amplitude of the zero-mean loss noise; defaults to the largest admissible value ≤ 0.25.
    pub noise_amp: Option<f64>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            prior: PriorKind::Uniform,
            k: None,
            zeta: None,
            sequence: None,
            gap: 0.5,
            base_loss: 0.3,
            noise_amp: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ParamsConfig {
    /// Fixed truncation level; otherwise the gap-based (or gap-free) formula.
    pub delta: Option<f64>,
    /// Fixed ε-EWOO regularization; otherwise the formula.
    pub alpha: Option<f64>,
    pub c_delta: f64,
    pub c_alpha: f64,
    /// Whether the learner may use the scenario gap when choosing δ.
    pub gap_known: bool,
    /// Accept parameters outside the admissible interval.
    pub force: bool,
}

impl Default for ParamsConfig {
    fn default() -> Self {
        Self {
            delta: None,
            alpha: None,
            c_delta: 1.0,
            c_alpha: 1.0,
            gap_known: true,
            force: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    MetaInf,
    InfReset,
    InfKnownPrior,
    Exp3,
    Exp3s,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [Self::MetaInf, Self::InfReset, Self::InfKnownPrior, Self::Exp3, Self::Exp3s];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::MetaInf => "meta_inf",
            Self::InfReset => "inf_reset",
            Self::InfKnownPrior => "inf_known_prior",
            Self::Exp3 => "exp3",
            Self::Exp3s => "exp3s",
        }
    }

    pub fn baseline(self) -> Option<BaselineTag> {
        match self {
            Self::MetaInf => None,
            Self::InfReset => Some(BaselineTag::InfReset),
            Self::InfKnownPrior => Some(BaselineTag::InfKnownPrior),
            Self::Exp3 => Some(BaselineTag::Exp3),
            Self::Exp3s => Some(BaselineTag::Exp3s),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| Error::domain(format!("unknown algorithm `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub algorithms: Vec<Algorithm>,
    /// Replicate indices; each is split from the master seed.
    pub seeds: Vec<u64>,
    pub master_seed: u64,
    pub record_decisions: bool,
    /// Episodes of the stand-alone identification experiment.
    pub identify_episodes: usize,
    /// Tsallis parameter of the INF baselines.
    pub q: f64,
    /// Exp3.S uniform mixing; defaults to the horizon-tuned value.
    pub exp3s_mixing: Option<f64>,
    /// Floor applied to zero components of the known prior.
    pub prior_floor: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            algorithms: vec![Algorithm::MetaInf],
            seeds: vec![0],
            master_seed: 0,
            record_decisions: false,
            identify_episodes: 200,
            q: 0.5,
            exp3s_mixing: None,
            prior_floor: 1e-12,
        }
    }
}

/// A config value that fails validation, named by its dotted key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub key: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.key, self.message)
    }
}

impl std::error::Error for ConfigError {}

fn bad(key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        key: key.to_string(),
        message: message.into(),
    }
}

fn check(ok: bool, key: &str, message: &str) -> std::result::Result<(), ConfigError> {
    if ok {
        Ok(())
    } else {
        Err(bad(key, message))
    }
}

impl ExperimentConfig {
    /// Structural checks; parameter feasibility is checked separately by [`Self::meta_params`].
    pub fn validate(&self) -> std::result::Result<(), ConfigError> {
        let p = &self.problem;
        check(p.episodes >= 1, "problem.episodes", "must be at least 1")?;
        check(p.rounds >= 1, "problem.rounds", "must be at least 1")?;
        check(p.arms >= 2, "problem.arms", "must be at least 2")?;

        let s = &self.scenario;
        check(s.gap > 0.0 && s.gap <= 1.0, "scenario.gap", "must lie in (0, 1]")?;
        check(
            s.base_loss >= 0.0 && s.base_loss + s.gap <= 1.0,
            "scenario.base_loss",
            "must satisfy 0 ≤ base_loss and base_loss + gap ≤ 1",
        )?;
        if let Some(a) = s.noise_amp {
            check(a >= 0.0, "scenario.noise_amp", "must be non-negative")?;
        }
        match s.prior {
            PriorKind::Uniform => {}
            PriorKind::FewGoodArms => {
                let k = s.k.ok_or_else(|| bad("scenario.k", "required by the few_good_arms prior"))?;
                check(k >= 1 && k < p.arms, "scenario.k", "must satisfy 1 ≤ k < arms")?;
                let z = s.zeta.ok_or_else(|| bad("scenario.zeta", "required by the few_good_arms prior"))?;
                check(z > 0.0 && z < 1.0, "scenario.zeta", "must lie in (0, 1)")?;
            }
            PriorKind::Fixed => {
                let seq = s
                    .sequence
                    .as_ref()
                    .ok_or_else(|| bad("scenario.sequence", "required by the fixed prior"))?;
                check(!seq.is_empty(), "scenario.sequence", "must not be empty")?;
                check(seq.iter().all(|j| *j < p.arms), "scenario.sequence", "arm index out of range")?;
            }
        }

        let q = &self.params;
        if let Some(d) = q.delta {
            check(d > 0.0, "params.delta", "must be positive")?;
        }
        if let Some(a) = q.alpha {
            check(a > 0.0, "params.alpha", "must be positive")?;
        }
        check(q.c_delta > 0.0, "params.c_delta", "must be positive")?;
        check(q.c_alpha > 0.0, "params.c_alpha", "must be positive")?;

        let r = &self.run;
        check(!r.algorithms.is_empty(), "run.algorithms", "must list at least one algorithm")?;
        check(!r.seeds.is_empty(), "run.seeds", "must list at least one seed")?;
        check(r.identify_episodes >= 1, "run.identify_episodes", "must be at least 1")?;
        check(r.q > 0.0 && r.q < 1.0, "run.q", "must lie in (0, 1)")?;
        if let Some(m) = r.exp3s_mixing {
            check(m > 0.0 && m <= 1.0, "run.exp3s_mixing", "must lie in (0, 1]")?;
        }
        check(r.prior_floor > 0.0 && r.prior_floor < 1.0, "run.prior_floor", "must lie in (0, 1)")?;
        Ok(())
    }

    pub fn problem_size(&self) -> Result<ProblemSize> {
        ProblemSize::new(self.problem.episodes, self.problem.rounds, self.problem.arms)
    }

    pub fn gap_spec<R: Real>(&self) -> Result<GapSpec<R>> {
        let s = &self.scenario;
        match s.noise_amp {
            Some(a) => GapSpec::new(R::of(s.gap), R::of(s.base_loss), R::of(a)),
            None => GapSpec::with_default_noise(R::of(s.gap), R::of(s.base_loss)),
        }
    }

    /// Scenario over `episodes` episodes (the configured count unless overridden).
    pub fn scenario_with<R: Real>(&self, episodes: usize) -> Result<Scenario<R>> {
        let s = &self.scenario;
        let d = self.problem.arms;
        let source = match s.prior {
            PriorKind::Uniform => BestArmSource::Prior(Prior::uniform(d)),
            PriorKind::FewGoodArms => BestArmSource::Prior(few_good_arms_prior(
                s.k.unwrap_or(0),
                R::of(s.zeta.unwrap_or(f64::NAN)),
                d,
            )?),
            PriorKind::Fixed => BestArmSource::Fixed(s.sequence.clone().unwrap_or_default()),
        };
        let rounds = usize::try_from(self.problem.rounds).map_err(|_| Error::domain("rounds too large"))?;
        Scenario::new(source, self.gap_spec()?, episodes, rounds, d)
    }

    pub fn scenario<R: Real>(&self) -> Result<Scenario<R>> {
        self.scenario_with(self.problem.episodes)
    }

    /// Meta-INF parameters for a game of `episodes` episodes.
    pub fn meta_params_with<R: Real>(&self, episodes: usize) -> Result<MetaParams<R>> {
        let p = &self.params;
        let size = ProblemSize::new(episodes, self.problem.rounds, self.problem.arms)?;
        let gap = R::of(self.scenario.gap);
        let known = p.gap_known.then_some(gap);
        let delta_rule = match (p.delta, known) {
            (Some(d), _) => DeltaRule::Fixed(R::of(d)),
            (None, Some(_)) => DeltaRule::Gap { c: R::of(p.c_delta) },
            (None, None) => DeltaRule::GapFree { c: R::of(p.c_delta) },
        };
        let alpha_rule = match p.alpha {
            Some(a) => AlphaRule::Fixed(R::of(a)),
            None => AlphaRule::Formula { c: R::of(p.c_alpha) },
        };
        // Feasibility is always judged against the true gap, even when the learner is blind to it.
        let mut params = MetaParams::build(size, Some(gap), delta_rule, alpha_rule, p.force)?;
        params.gap = known;
        Ok(params)
    }

    pub fn meta_params<R: Real>(&self) -> Result<MetaParams<R>> {
        self.meta_params_with(self.problem.episodes)
    }

    /// Seed of replicate `seed`, split from the master seed.
    pub fn run_seed(&self, seed: u64) -> u64 {
        split(self.run.master_seed, Stream::Run, seed)
    }
}
