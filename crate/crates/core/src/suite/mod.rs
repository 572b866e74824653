//! Check orchestration: configuration, the check catalogue, refinement
//! sweeps and the JSON/CSV artifacts.

pub mod checks;
pub mod config;
pub mod oracle;
pub mod report;
pub mod sweep;

use rayon::prelude::*;

pub use config::{SuiteConfig, Tolerances, ALL_SUITES, DEFAULT_SUITES};
pub use report::{CheckClass, CheckRecord, Environment, VerificationReport, REPORT_SCHEMA, SWEEP_SCHEMA};
pub use sweep::{converge, SweepTable};

use crate::error::Result;

/// Worker count from `CFQ_WORKERS`, defaulting to the rayon default.
pub fn workers_from_env() -> usize {
    std::env::var("CFQ_WORKERS")
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&n: &usize| n > 0)
        .unwrap_or_else(rayon::current_num_threads)
}

/// Runs the selected suites on a pool of `workers` threads and returns the
/// records ordered by `check_id`.
pub fn run_suite_with(config: &SuiteConfig, workers: usize) -> Result<VerificationReport> {
    config.validate()?;
    let jobs: Vec<checks::Job> = config
        .selected_suites()
        .iter()
        .flat_map(|s| checks::jobs_for(s, config))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| crate::error::Error::Config(format!("worker pool: {e}")))?;
    let mut records: Vec<CheckRecord> = pool.install(|| jobs.into_par_iter().map(|j| j()).collect());
    records.sort_by(|a, b| a.check_id.cmp(&b.check_id));
    Ok(VerificationReport {
        environment: Environment {
            schema: REPORT_SCHEMA.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config_hash: config.hash(),
            seed: config.seed,
        },
        records,
    })
}

pub fn run_suite(config: &SuiteConfig) -> Result<VerificationReport> {
    run_suite_with(config, workers_from_env())
}
