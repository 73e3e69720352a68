//! CSV writers. Reals are printed with 17 significant digits so they parse back to the
//! same `f64`.

use std::io::Write;
use std::path::Path;

use crate::scalar::Real;

use super::experiment::AlgorithmSummary;
use super::report::RegretReport;

pub const EPISODES_CSV: &str = "episodes.csv";
pub const SUMMARY_CSV: &str = "summary.csv";
pub const DECISIONS_CSV: &str = "decisions.csv";

/// Formats a real so that `parse::<f64>()` recovers it exactly.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_real).unwrap_or_default()
}

pub fn write_episodes<R: Real, W: Write>(out: W, reports: &[RegretReport<R>]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "seed",
        "episode",
        "algorithm",
        "eta",
        "regret",
        "cum_regret",
        "true_best_arm",
        "est_best_arm",
        "identified",
    ])?;
    for r in reports {
        let mut cum = 0.0;
        for s in 0..r.episodes() {
            let reg = r.per_episode_regret[s].as_f64();
            cum += reg;
            w.write_record([
                r.seed.to_string(),
                s.to_string(),
                r.algorithm.clone(),
                fmt_real(r.chosen_eta[s].as_f64()),
                fmt_real(reg),
                fmt_real(cum),
                r.true_best_arms[s].to_string(),
                r.est_best_arms[s].to_string(),
                u8::from(r.identification_correct[s]).to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_summary<W: Write>(out: W, summaries: &[AlgorithmSummary]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "algorithm",
        "mean_total_regret",
        "std",
        "bound_value",
        "v_star",
        "u_expl",
        "u_lr",
        "u_init",
        "u_psi",
        "entropy_term",
        "n_seeds",
        "identification_rate",
    ])?;
    for s in summaries {
        w.write_record([
            s.algorithm.clone(),
            fmt_real(s.mean_total_regret),
            fmt_real(s.std),
            fmt_opt(s.bound_value),
            fmt_opt(s.v_star),
            fmt_opt(s.u_expl),
            fmt_opt(s.u_lr),
            fmt_opt(s.u_init),
            fmt_opt(s.u_psi),
            fmt_opt(s.entropy_term),
            s.n_seeds.to_string(),
            fmt_real(s.identification_rate),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// One row per (seed, algorithm, episode, round) with the full decision vector.
pub fn write_decisions<R: Real, W: Write>(out: W, reports: &[RegretReport<R>]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let arms = reports.first().map_or(0, |r| r.psi.dim());
    let mut header = vec!["seed".to_string(), "algorithm".into(), "episode".into(), "round".into()];
    header.extend((0..arms).map(|i| format!("x{i}")));
    w.write_record(&header)?;
    for r in reports {
        let Some(eps) = &r.decisions else { continue };
        for (s, rounds) in eps.iter().enumerate() {
            for (t, x) in rounds.iter().enumerate() {
                let mut row = vec![r.seed.to_string(), r.algorithm.clone(), s.to_string(), t.to_string()];
                row.extend(x.weights().iter().map(|v| fmt_real(v.as_f64())));
                w.write_record(&row)?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Writes `episodes.csv`, `summary.csv` and, when any report carries decisions, `decisions.csv`.
pub fn write_all<R: Real>(
    dir: &Path,
    reports: &[RegretReport<R>],
    summaries: &[AlgorithmSummary],
) -> std::io::Result<Vec<std::path::PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let path = dir.join(EPISODES_CSV);
    write_episodes(std::fs::File::create(&path)?, reports)?;
    written.push(path);
    let path = dir.join(SUMMARY_CSV);
    write_summary(std::fs::File::create(&path)?, summaries)?;
    written.push(path);
    if reports.iter().any(|r| r.decisions.is_some()) {
        let path = dir.join(DECISIONS_CSV);
        write_decisions(std::fs::File::create(&path)?, reports)?;
        written.push(path);
    }
    Ok(written)
}
