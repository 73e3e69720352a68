//! Loading the TOML config and applying `KEY=VALUE` overrides.

use std::path::Path;

use meta_inf::harness::ExperimentConfig;
use toml::{Table, Value};

const SECTIONS: [&str; 4] = ["problem", "scenario", "params", "run"];

/// Keys accepted in each section; bare override keys are resolved against this list.
const KEYS: [(&str, &[&str]); 4] = [
    ("problem", &["episodes", "rounds", "arms"]),
    ("scenario", &["prior", "k", "zeta", "sequence", "gap", "base_loss", "noise_amp"]),
    ("params", &["delta", "alpha", "c_delta", "c_alpha", "gap_known", "force"]),
    (
        "run",
        &[
            "algorithms",
            "seeds",
            "master_seed",
            "record_decisions",
            "identify_episodes",
            "q",
            "exp3s_mixing",
            "prior_floor",
        ],
    ),
];

/// A configuration problem: exit code 2, message names the key or path.
#[derive(Debug)]
pub struct ConfigProblem(pub String);

impl std::fmt::Display for ConfigProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigProblem {}

fn problem(msg: impl Into<String>) -> ConfigProblem {
    ConfigProblem(msg.into())
}

pub fn read_table(path: &Path) -> Result<Table, ConfigProblem> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| problem(format!("cannot read config file {}: {e}", path.display())))?;
    text.parse::<Table>()
        .map_err(|e| problem(format!("{}: {}", path.display(), e.message())))
}

/// Resolves `section.key` or a bare key that names exactly one known field.
fn resolve(key: &str) -> Result<(String, String), ConfigProblem> {
    if let Some((section, field)) = key.split_once('.') {
        if !SECTIONS.contains(&section) {
            return Err(problem(format!("override key `{key}`: unknown section `{section}`")));
        }
        return Ok((section.to_string(), field.to_string()));
    }
    let hits: Vec<&str> = KEYS
        .iter()
        .filter(|(_, fields)| fields.contains(&key))
        .map(|(s, _)| *s)
        .collect();
    match hits.as_slice() {
        [one] => Ok((one.to_string(), key.to_string())),
        [] => Err(problem(format!("override key `{key}`: no such config key"))),
        _ => Err(problem(format!("override key `{key}` is ambiguous; use section.{key}"))),
    }
}

/// Parses an override value: TOML literal if possible, a comma list becomes an array, anything
/// else is a string.
fn parse_value(raw: &str) -> Value {
    let literal = |s: &str| -> Value {
        let s = s.trim();
        format!("v = {s}")
            .parse::<Table>()
            .ok()
            .and_then(|mut t| t.remove("v"))
            .unwrap_or_else(|| Value::String(s.to_string()))
    };
    let trimmed = raw.trim();
    if trimmed.contains(',') && !trimmed.starts_with('[') {
        Value::Array(trimmed.split(',').filter(|s| !s.trim().is_empty()).map(literal).collect())
    } else {
        literal(trimmed)
    }
}

pub fn apply_override(table: &mut Table, spec: &str) -> Result<(), ConfigProblem> {
    let (key, raw) = spec
        .split_once('=')
        .ok_or_else(|| problem(format!("override `{spec}` is not of the form KEY=VALUE")))?;
    let (section, field) = resolve(key.trim())?;
    let entry = table
        .entry(section.clone())
        .or_insert_with(|| Value::Table(Table::new()));
    let Value::Table(sub) = entry else {
        return Err(problem(format!("config key `{section}` is not a section")));
    };
    sub.insert(field, parse_value(raw));
    Ok(())
}

/// File, then the `MB_SEED` environment variable, then overrides; finally validation.
pub fn load(path: &Path, overrides: &[String], env_seed: Option<&str>) -> Result<ExperimentConfig, ConfigProblem> {
    let mut table = read_table(path)?;
    if let Some(seed) = env_seed {
        let v: u64 = seed
            .trim()
            .parse()
            .map_err(|_| problem(format!("MB_SEED: `{seed}` is not a non-negative integer")))?;
        apply_override(&mut table, &format!("run.master_seed={v}"))?;
    }
    for o in overrides {
        apply_override(&mut table, o)?;
    }
    let config: ExperimentConfig = Value::Table(table)
        .try_into()
        .map_err(|e: toml::de::Error| problem(format!("{}: {}", path.display(), e.message())))?;
    config.validate().map_err(|e| problem(e.to_string()))?;
    Ok(config)
}

/// The fully defaulted config as TOML.
pub fn render(config: &ExperimentConfig) -> String {
    toml::to_string(config).unwrap_or_else(|e| format!("# cannot render config: {e}\n"))
}
