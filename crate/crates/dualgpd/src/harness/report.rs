//! Suite reports and their text and JSON renderings.

use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;

use super::config::SuiteConfig;
use super::golden;
use super::suites::run_checks;
use super::HarnessError;
use crate::coordmodels::{Check, CheckReport};

/// Identifies the layout of the JSON report; see `docs/report-schema.md`.
pub const REPORT_SCHEMA: &str = "dualgpd-report/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfigEcho {
    pub dims: String,
    pub trials: usize,
    pub inject_fault: bool,
    pub golden: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub suite: &'static str,
    pub anchor: &'static str,
    /// Decimal string, so 64-bit seeds survive JSON readers that use doubles.
    pub seed: String,
    pub config: ConfigEcho,
    pub passed: bool,
    pub summary: Summary,
    pub checks: Vec<Check>,
    /// Wall time; left out unless asked for, so reports stay reproducible.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

impl Report {
    pub fn new(config: &SuiteConfig, checks: CheckReport) -> Self {
        let d = config.suite.descriptor();
        let passed = checks.checks.iter().filter(|c| c.passed).count();
        let total = checks.checks.len();
        Report {
            schema: REPORT_SCHEMA,
            suite: d.name,
            anchor: d.anchor,
            seed: config.seed.to_string(),
            config: ConfigEcho {
                dims: config.dims.to_string(),
                trials: config.trials,
                inject_fault: config.inject_fault,
                golden: config.golden.as_ref().map(|p| p.display().to_string()),
            },
            passed: total > 0 && passed == total,
            summary: Summary { checks: total, passed, failed: total - passed },
            checks: checks.checks,
            timing_ms: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "suite {} (seed {}, dims {}, trials {})", self.suite, self.seed, self.config.dims, self.config.trials);
        let _ = writeln!(out, "  {}", self.anchor);
        for c in &self.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            let points = if c.points > 0 { format!(", {} points", c.points) } else { String::new() };
            let _ = writeln!(out, "{mark} {} [{:?}{points}]", c.name, c.mode);
            if !c.passed {
                if let Some(w) = &c.witness {
                    let _ = writeln!(out, "     at [{}]: [{}] vs [{}]", w.point.join(", "), w.lhs.join(", "), w.rhs.join(", "));
                }
            }
            if let Some(d) = c.detail.as_ref().filter(|_| !c.passed) {
                let _ = writeln!(out, "     {d}");
            }
        }
        let _ = write!(out, "{}: {} of {} checks passed", if self.passed { "PASS" } else { "FAIL" }, self.summary.passed, self.summary.checks);
        if let Some(ms) = self.timing_ms {
            let _ = write!(out, " in {ms} ms");
        }
        out.push('\n');
        out
    }
}

/// Runs a suite, including the golden comparison when a directory is configured.
pub fn run_suite(config: &SuiteConfig) -> Result<Report, HarnessError> {
    config.validate()?;
    let start = Instant::now();
    let mut checks = run_checks(config);
    if let Some(dir) = &config.golden {
        checks.extend_prefixed("golden", golden::compare_golden(config, dir)?);
    }
    let mut report = Report::new(config, checks);
    report.timing_ms = Some(start.elapsed().as_millis());
    Ok(report)
}
