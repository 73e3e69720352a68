use std::io::Write;
use std::path::Path;

use anyhow::Context;
use meta_inf::harness::output::{fmt_real, write_all};
use meta_inf::harness::{
    identification_experiment, mean_std, run_experiment, regret_bound, Algorithm, ExperimentConfig,
    ExperimentOutput, META_INF,
};
use meta_inf::outer::{admissible_delta_interval, min_feasible_rounds};
use meta_inf::Error;

use crate::config_io::{load, render, ConfigProblem};
use crate::Common;

/// Process exit code on success.
pub type Outcome = anyhow::Result<u8>;

/// Wraps an I/O failure so it maps to exit code 4.
#[derive(Debug)]
struct OutputFailure(std::io::Error);

impl std::fmt::Display for OutputFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "cannot write output: {}", self.0)
    }
}

impl std::error::Error for OutputFailure {}

pub fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<ConfigProblem>().is_some() {
        return 2;
    }
    if e.downcast_ref::<OutputFailure>().is_some() {
        return 4;
    }
    match e.downcast_ref::<Error>() {
        Some(Error::Numerical { .. } | Error::Quadrature { .. } | Error::DivisionByZero { .. }) => 3,
        _ => 2,
    }
}

fn config(c: &Common) -> anyhow::Result<ExperimentConfig> {
    let mut cfg = load(&c.config, &c.overrides, c.master_seed.as_deref())?;
    if c.record_decisions {
        cfg.run.record_decisions = true;
    }
    Ok(cfg)
}

fn write_outputs(dir: &Path, out: &ExperimentOutput<f64>) -> anyhow::Result<()> {
    let files = write_all(dir, &out.reports, &out.summaries).map_err(OutputFailure)?;
    for f in files {
        println!("wrote {}", f.display());
    }
    Ok(())
}

fn print_summary(out: &ExperimentOutput<f64>) {
    println!(
        "{:<16} {:>6} {:>16} {:>12} {:>16} {:>8}",
        "algorithm", "seeds", "mean_regret", "std", "bound", "ident"
    );
    for s in &out.summaries {
        println!(
            "{:<16} {:>6} {:>16.3} {:>12.3} {:>16} {:>8.4}",
            s.algorithm,
            s.n_seeds,
            s.mean_total_regret,
            s.std,
            s.bound_value.map_or("-".to_string(), |b| format!("{b:.3}")),
            s.identification_rate
        );
    }
}

pub fn run(c: &Common) -> Outcome {
    let cfg = config(c)?;
    let out = run_experiment::<f64>(&cfg)?;
    if let Some(p) = out.params.filter(|p| p.forced) {
        eprintln!("warning: parameters forced outside the admissible interval (δ = {})", p.delta);
    }
    print_summary(&out);
    write_outputs(&c.out, &out)?;
    Ok(0)
}

pub fn compare(c: &Common) -> Outcome {
    let mut cfg = config(c)?;
    cfg.run.algorithms = Algorithm::ALL.to_vec();
    let out = run_experiment::<f64>(&cfg)?;
    print_summary(&out);

    let s = cfg.problem.episodes;
    let from = s - s / 4;
    println!();
    println!("per-episode regret, episodes {}..{} (paired with {META_INF} on identical losses)", from + 1, s);
    let meta: Vec<f64> = out
        .reports
        .iter()
        .filter(|r| r.algorithm == META_INF)
        .map(|r| r.mean_regret_over(from, s))
        .collect();
    for a in Algorithm::ALL {
        let own: Vec<f64> = out
            .reports
            .iter()
            .filter(|r| r.algorithm == a.as_str())
            .map(|r| r.mean_regret_over(from, s))
            .collect();
        let diff: Vec<f64> = own.iter().zip(&meta).map(|(o, m)| o - m).collect();
        let (mean, _) = mean_std(&own);
        let (d, sd) = mean_std(&diff);
        let se = sd / (diff.len() as f64).sqrt();
        println!("{:<16} {:>12.3}   minus {META_INF}: {:>10.3} ± {:.3} (s.e.)", a.as_str(), mean, d, se);
    }
    write_outputs(&c.out, &out)?;
    Ok(0)
}

pub fn bound(c: &Common) -> Outcome {
    let cfg = config(c)?;
    let params = cfg.meta_params::<f64>()?;
    let psi = cfg.scenario::<f64>()?.prior().weights;
    let b = regret_bound(&psi, &params)?;
    let rows = [
        ("delta", params.delta),
        ("alpha", params.alpha),
        ("eps_delta", params.eps_delta),
        ("sigma", params.sigma),
        ("u_expl", b.u_expl),
        ("u_lr", b.u_lr),
        ("u_init", b.u_init),
        ("u_psi", b.u_psi),
        ("entropy_term", b.entropy_term),
        ("v_star", b.v_star),
        ("eta_star", b.v_star / params.sigma),
        ("bound_value", b.bound_value),
    ];
    for (k, v) in rows {
        println!("{k:<14} {v:.6e}");
    }
    let write = || -> std::io::Result<std::path::PathBuf> {
        std::fs::create_dir_all(&c.out)?;
        let path = c.out.join("bound.csv");
        let mut f = std::fs::File::create(&path)?;
        writeln!(f, "quantity,value")?;
        for (k, v) in rows {
            writeln!(f, "{k},{}", fmt_real(v))?;
        }
        Ok(path)
    };
    let path = write().map_err(OutputFailure)?;
    println!("wrote {}", path.display());
    Ok(0)
}

pub fn identify(c: &Common) -> Outcome {
    let cfg = config(c)?;
    let n = cfg.run.identify_episodes;
    let params = cfg.meta_params_with::<f64>(n)?;
    let scenario = cfg.scenario_with::<f64>(n)?;
    let seed = cfg.run.seeds[0];
    let id = identification_experiment(&scenario, &params, cfg.run_seed(seed))?;
    println!("episodes        {}", id.episodes);
    println!("correct         {}", id.correct);
    println!("empirical_rate  {:.6}", id.rate);
    println!("floor (1 - dε)  {:.6}", id.floor);
    let write = || -> std::io::Result<std::path::PathBuf> {
        std::fs::create_dir_all(&c.out)?;
        let path = c.out.join("identification.csv");
        let mut f = std::fs::File::create(&path)?;
        writeln!(f, "seed,episodes,correct,empirical_rate,floor")?;
        writeln!(f, "{seed},{},{},{},{}", id.episodes, id.correct, fmt_real(id.rate), fmt_real(id.floor))?;
        Ok(path)
    };
    let path = write().map_err(OutputFailure)?;
    println!("wrote {}", path.display());
    Ok(0)
}

pub fn validate(c: &Common) -> Outcome {
    let mut cfg = config(c)?;
    print!("{}", render(&cfg));
    println!();
    let d = cfg.problem.arms;
    let t = cfg.problem.rounds;
    let gap = cfg.scenario.gap;
    let (lo, hi) = admissible_delta_interval(t, d, gap);
    println!("admissible_delta      [{lo:.6}, {hi:.6}]");
    println!("min_feasible_rounds   {}", min_feasible_rounds(d, gap));
    let forced = cfg.params.force;
    let show = |p: &meta_inf::MetaParams64| {
        println!("delta                 {:.6}", p.delta);
        println!("eps_delta             {:.6e}", p.eps_delta);
        println!("one_minus_d_eps       {:.6}", 1.0 - d as f64 * p.eps_delta);
        println!("alpha                 {:.6}", p.alpha);
    };
    cfg.params.force = false;
    match cfg.meta_params::<f64>() {
        Ok(p) => {
            show(&p);
            println!("feasible              true");
            Ok(0)
        }
        Err(Error::Infeasible { message, .. }) => {
            cfg.params.force = true;
            if let Ok(p) = cfg.meta_params::<f64>() {
                show(&p);
            }
            println!("feasible              false ({message})");
            if forced {
                println!("note: params.force is set, so `run` will proceed anyway");
            }
            Ok(1)
        }
        Err(e) => Err(e).context("computing parameters"),
    }
}
