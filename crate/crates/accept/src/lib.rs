//! Acceptance criteria as runnable checks.
//!
//! Each criterion returns an [`Outcome`] with one [`Check`] per assertion and
//! the measured quantity behind it. Oracles in [`oracle`] recompute the
//! expected values without going through the code paths under test.

use std::time::{Duration, Instant};

use serde_json::{json, Value};
use senlab_core::Exec;

mod criteria;
pub mod oracle;

#[derive(Clone, Debug)]
pub struct Check {
    pub label: String,
    pub passed: bool,
    pub measured: String,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub index: usize,
    pub name: &'static str,
    pub checks: Vec<Check>,
    pub runtime: Duration,
    pub limit: Duration,
}

impl Outcome {
    pub fn within_limit(&self) -> bool {
        self.runtime < self.limit
    }

    pub fn passed(&self) -> bool {
        self.within_limit() && self.checks.iter().all(|c| c.passed)
    }

    pub fn failing(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    /// One status line: verdict, index, name, every check (failing ones
    /// flagged), runtime.
    pub fn line(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let shown: Vec<String> = self
            .checks
            .iter()
            .map(|c| format!("{}{}: {}", if c.passed { "" } else { "FAILED " }, c.label, c.measured))
            .collect();
        format!(
            "{status} {:>2} {:<22} [{}] {:.3}s (limit {}s){}",
            self.index,
            self.name,
            shown.join("; "),
            self.runtime.as_secs_f64(),
            self.limit.as_secs_f64(),
            if self.within_limit() { "" } else { " OVER TIME" }
        )
    }

    pub fn to_json(&self) -> Value {
        json!({
            "index": self.index,
            "name": self.name,
            "passed": self.passed(),
            "runtime_s": format!("{:.3}", self.runtime.as_secs_f64()),
            "limit_s": self.limit.as_secs_f64(),
            "checks": self.checks.iter().map(|c| json!({"label": c.label, "passed": c.passed, "measured": c.measured})).collect::<Vec<_>>(),
        })
    }
}

pub(crate) struct Recorder {
    checks: Vec<Check>,
}

impl Recorder {
    fn new() -> Self {
        Recorder { checks: Vec::new() }
    }

    pub(crate) fn check(&mut self, label: impl Into<String>, passed: bool, measured: impl Into<String>) {
        self.checks.push(Check { label: label.into(), passed, measured: measured.into() });
    }

    /// Records an error from the code under test as a failed check.
    pub(crate) fn attempt<T>(&mut self, label: &str, r: senlab_core::Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.check(label, false, e.to_string());
                None
            }
        }
    }
}

type Runner = fn(&mut Recorder, Exec);

const CRITERIA: [(usize, &str, &str, u64, Runner); 10] = [
    (1, "exactness", "dps", 1000, criteria::exactness),
    (2, "closed-form-solution", "dps", 100, criteria::closed_form),
    (3, "coaction-vs-operator", "dps", 5000, criteria::coaction_vs_operator),
    (4, "group-law", "senmod", 5000, criteria::group_law),
    (5, "classifier", "senmod", 5000, criteria::classifier),
    (6, "cohomology", "senmod", 1000, criteria::cohomology),
    (7, "tate-bound", "gamma", 30_000, criteria::tate_bound),
    (8, "neumann-inversion", "gamma", 30_000, criteria::neumann),
    (9, "picard-sequence", "picard", 5000, criteria::picard),
    (10, "log-identity", "dps", 1000, criteria::log_identity),
];

/// Suite names accepted by [`run_suite`].
pub const SUITES: [&str; 6] = ["all", "dps", "senmod", "gamma", "picard", "log"];

/// Criteria whose failure is understood and recorded with its reason, as
/// `(index, check label)`. These are reported as FAIL, never skipped.
pub const KNOWN_UNATTAINABLE: [(usize, &str); 1] = [(8, "contraction |ρM| < 1")];

pub fn run(index: usize, exec: Exec) -> Option<Outcome> {
    let &(index, name, _, limit_ms, runner) = CRITERIA.iter().find(|c| c.0 == index)?;
    let mut rec = Recorder::new();
    let start = Instant::now();
    runner(&mut rec, exec);
    Some(Outcome { index, name, checks: rec.checks, runtime: start.elapsed(), limit: Duration::from_millis(limit_ms) })
}

/// Runs a named suite (or a single criterion given by its number) in index order.
pub fn run_suite(suite: &str, exec: Exec) -> Option<Vec<Outcome>> {
    let indices: Vec<usize> = match suite {
        "all" => CRITERIA.iter().map(|c| c.0).collect(),
        "log" => vec![10],
        s => {
            if let Ok(i) = s.parse::<usize>() {
                vec![i]
            } else {
                CRITERIA.iter().filter(|c| c.2 == s && !(s == "dps" && c.0 == 10)).map(|c| c.0).collect()
            }
        }
    };
    if indices.is_empty() {
        return None;
    }
    indices.into_iter().map(|i| run(i, exec)).collect()
}
