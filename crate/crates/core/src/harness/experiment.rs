use rayon::prelude::*;
use serde::Serialize;

use crate::adversary::Scenario;
use crate::baselines::{run_exp3, run_exp3s, run_inf_known_prior, run_inf_reset};
use crate::error::Result;
use crate::outer::MetaParams;
use crate::scalar::Real;

use super::config::{Algorithm, ExperimentConfig};
use super::meta::run_meta_inf;
use super::report::RegretReport;

/// Reports of every (seed, algorithm) cell, seed-major in config order, plus per-algorithm
/// aggregates.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput<R> {
    pub params: Option<MetaParams<R>>,
    pub reports: Vec<RegretReport<R>>,
    pub summaries: Vec<AlgorithmSummary>,
}

/// Seed-aggregated statistics of one algorithm.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgorithmSummary {
    pub algorithm: String,
    pub n_seeds: usize,
    pub mean_total_regret: f64,
    /// Sample standard deviation of the total regret across seeds.
    pub std: f64,
    /// Mean of the per-seed guarantee (Meta-INF) or reference bound (baselines).
    pub bound_value: Option<f64>,
    pub v_star: Option<f64>,
    pub u_expl: Option<f64>,
    pub u_lr: Option<f64>,
    pub u_init: Option<f64>,
    pub u_psi: Option<f64>,
    pub entropy_term: Option<f64>,
    pub identification_rate: f64,
}

/// Runs one algorithm on the game of replicate `seed`.
pub fn run_cell<R: Real>(
    config: &ExperimentConfig,
    scenario: &Scenario<R>,
    params: Option<&MetaParams<R>>,
    algorithm: Algorithm,
    seed: u64,
) -> Result<RegretReport<R>> {
    let env = scenario.realize(config.run_seed(seed));
    let run = &config.run;
    let q = R::of(run.q);
    let mut report = match algorithm {
        Algorithm::MetaInf => {
            let p = params.expect("Meta-INF parameters are computed before dispatch");
            run_meta_inf(&env, p, run.record_decisions)?
        }
        Algorithm::InfReset => run_inf_reset(&env, q, run.record_decisions)?,
        Algorithm::InfKnownPrior => run_inf_known_prior(
            &env,
            &scenario.prior(),
            q,
            Some(R::of(run.prior_floor)),
            run.record_decisions,
        )?,
        Algorithm::Exp3 => run_exp3(&env)?,
        Algorithm::Exp3s => run_exp3s(&env, run.exp3s_mixing.map(R::of))?,
    };
    report.seed = seed;
    Ok(report)
}

/// Runs every configured algorithm on every seed, in parallel across cells.
pub fn run_experiment<R: Real>(config: &ExperimentConfig) -> Result<ExperimentOutput<R>> {
    let scenario = config.scenario::<R>()?;
    let params = if config.run.algorithms.contains(&Algorithm::MetaInf) {
        Some(config.meta_params::<R>()?)
    } else {
        None
    };
    let cells: Vec<(u64, Algorithm)> = config
        .run
        .seeds
        .iter()
        .flat_map(|&s| config.run.algorithms.iter().map(move |&a| (s, a)))
        .collect();
    let reports = cells
        .par_iter()
        .map(|&(seed, alg)| run_cell(config, &scenario, params.as_ref(), alg, seed))
        .collect::<Result<Vec<_>>>()?;
    let summaries = config
        .run
        .algorithms
        .iter()
        .map(|a| summarize(a.as_str(), &reports))
        .collect();
    Ok(ExperimentOutput {
        params,
        reports,
        summaries,
    })
}

/// Mean and sample standard deviation.
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

fn mean_of<R: Real>(rs: &[&RegretReport<R>], f: impl Fn(&RegretReport<R>) -> Option<f64>) -> Option<f64> {
    let vals: Option<Vec<f64>> = rs.iter().map(|r| f(r)).collect();
    vals.filter(|v| !v.is_empty()).map(|v| mean_std(&v).0)
}

pub fn summarize<R: Real>(algorithm: &str, reports: &[RegretReport<R>]) -> AlgorithmSummary {
    let rs: Vec<&RegretReport<R>> = reports.iter().filter(|r| r.algorithm == algorithm).collect();
    let totals: Vec<f64> = rs.iter().map(|r| r.total_regret.as_f64()).collect();
    let (mean, std) = mean_std(&totals);
    let bound = |g: fn(&super::bound::BoundBreakdown<R>) -> R| mean_of(&rs, move |r| r.bound.as_ref().map(|b| g(b).as_f64()));
    AlgorithmSummary {
        algorithm: algorithm.to_string(),
        n_seeds: rs.len(),
        mean_total_regret: mean,
        std,
        bound_value: mean_of(&rs, |r| match &r.bound {
            Some(b) => Some(b.bound_value.as_f64()),
            None => r.reference_bound.map(Real::as_f64),
        }),
        v_star: bound(|b| b.v_star),
        u_expl: bound(|b| b.u_expl),
        u_lr: bound(|b| b.u_lr),
        u_init: bound(|b| b.u_init),
        u_psi: bound(|b| b.u_psi),
        entropy_term: bound(|b| b.entropy_term),
        identification_rate: mean_of(&rs, |r| Some(r.identification_rate().as_f64())).unwrap_or(f64::NAN),
    }
}
