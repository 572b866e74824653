use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const REPORT_SCHEMA: &str = "cfq-report/1";
pub const SWEEP_SCHEMA: &str = "cfq-sweep/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckClass {
    Exact,
    Convergence,
    Quadrature,
    Plumbing,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check_id: String,
    /// The identity being checked, or "plumbing".
    #[serde(rename = "paper_ref")]
    pub identity: String,
    pub class: CheckClass,
    pub computed: Vec<f64>,
    pub expected: Vec<f64>,
    pub abs_err: f64,
    pub rel_err: f64,
    pub slope: Option<f64>,
    pub pass: bool,
    pub runtime_s: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl CheckRecord {
    pub fn new(check_id: impl Into<String>, identity: impl Into<String>, class: CheckClass) -> Self {
        Self {
            check_id: check_id.into(),
            identity: identity.into(),
            class,
            computed: Vec::new(),
            expected: Vec::new(),
            abs_err: 0.0,
            rel_err: 0.0,
            slope: None,
            pass: false,
            runtime_s: 0.0,
            note: None,
        }
    }

    pub fn values(mut self, computed: Vec<f64>, expected: Vec<f64>) -> Self {
        self.computed = computed;
        self.expected = expected;
        self
    }

    pub fn errors(mut self, abs_err: f64, rel_err: f64) -> Self {
        self.abs_err = abs_err;
        self.rel_err = rel_err;
        self
    }

    pub fn slope(mut self, s: f64) -> Self {
        self.slope = Some(s);
        self
    }

    pub fn pass(mut self, p: bool) -> Self {
        self.pass = p;
        self
    }

    pub fn note(mut self, n: impl Into<String>) -> Self {
        self.note = Some(n.into());
        self
    }

    /// A record for a check that could not run on the configured sector.
    pub fn skipped(check_id: impl Into<String>, identity: impl Into<String>, class: CheckClass) -> Self {
        Self::new(check_id, identity, class).pass(true).note("skipped: insufficient sector")
    }

    /// A failed record carrying the error message.
    pub fn failed(check_id: impl Into<String>, identity: impl Into<String>, class: CheckClass, e: &Error) -> Self {
        Self::new(check_id, identity, class).pass(false).note(format!("error: {e}"))
    }

    pub fn is_skipped(&self) -> bool {
        self.note.as_deref().is_some_and(|n| n.starts_with("skipped"))
    }
}

/// Runs `f` and stamps its wall time on the record it returns.
pub fn timed<F: FnOnce() -> CheckRecord>(f: F) -> CheckRecord {
    let t = Instant::now();
    let mut r = f();
    r.runtime_s = t.elapsed().as_secs_f64();
    r
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub schema: String,
    pub version: String,
    pub config_hash: String,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub environment: Environment,
    pub records: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| !r.pass)
    }

    pub fn get(&self, check_id: &str) -> Option<&CheckRecord> {
        self.records.iter().find(|r| r.check_id == check_id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The JSON with every `runtime_s` zeroed, for determinism comparisons.
    pub fn to_json_without_runtimes(&self) -> String {
        let mut c = self.clone();
        c.records.iter_mut().for_each(|r| r.runtime_s = 0.0);
        c.to_json()
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir).map_err(|e| Error::Config(format!("{}: {e}", dir.display())))?;
        }
        std::fs::write(path, self.to_json()).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }
}
