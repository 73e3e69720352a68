//! End-to-end experiments: the Meta-INF loop, regret accounting, the regret guarantee,
//! seed sweeps and CSV output.

pub mod bound;
pub mod config;
pub mod experiment;
pub mod meta;
pub mod output;
pub mod report;

pub use bound::{regret_bound, BoundBreakdown};
pub use config::{Algorithm, ConfigError, ExperimentConfig, PriorKind};
pub use experiment::{mean_std, run_cell, run_experiment, summarize, AlgorithmSummary, ExperimentOutput};
pub use meta::{identification_experiment, run_meta_inf, total_regret, Identification, META_INF};
pub use report::RegretReport;
