//! The verification harness behind the command-line tool: run
//! configuration, suite reports and the suites themselves.
//!
//! Reports are assembled in a fixed order and never contain wall-clock
//! times in JSON, so identical configurations give identical bytes.

pub mod claims;
pub mod closure;
pub mod commands;
pub mod demo;
pub mod laws;

use std::fmt::Write;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::hyp::Sweep;

pub use claims::verify_claims;
pub use closure::{
    sweep_closure_algebra, sweep_closure_bounded, sweep_closure_programs, sweep_closure_structural,
    ProgramSemantics,
};
pub use commands::{
    cmd_compile, cmd_decode, cmd_eval, cmd_lfp, formula_source, lfp_text, parse_binding,
    parse_oracle, CommandError, CompileReport, EvalReport, OracleSpec, QuantifierMode,
};
pub use demo::{run_demo, Demo, UnknownDemo};
pub use laws::{
    lfp_corpus, positivity_corpus, program_corpus, sweep_f_psi_bit, sweep_lfp_leastness,
    sweep_monotonicity, sweep_positivity, sweep_recursion, sweep_smn, transformer_corpus, LfpCase,
    Transformer,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub fuel: u64,
    /// Quantifier bound `B`.
    pub bound: u64,
    /// Universe size `N` of the operator checks.
    pub universe: u64,
    /// Horizon `X` of the membership checks.
    pub horizon: u64,
    pub seed: u64,
    #[serde(skip)]
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            fuel: 100_000,
            bound: 64,
            universe: 32,
            horizon: 64,
            seed: 0,
            format: Format::Text,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{field} must be at least 1")]
pub struct ConfigError {
    pub field: &'static str,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        for (field, v) in [
            ("fuel", self.fuel),
            ("bound", self.bound),
            ("universe", self.universe),
            ("horizon", self.horizon),
        ] {
            if v == 0 {
                return Err(ConfigError { field });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    #[serde(flatten)]
    pub sweep: Sweep,
    #[serde(skip)]
    pub wall: Duration,
}

impl SuiteReport {
    /// Runs `f` and records how long it took.
    pub fn timed(f: impl FnOnce() -> Sweep) -> Self {
        let start = Instant::now();
        let sweep = f();
        SuiteReport {
            sweep,
            wall: start.elapsed(),
        }
    }

    pub fn status(&self) -> Status {
        Status::of(self.sweep.failed, self.sweep.unknown)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Unknown,
}

impl Status {
    fn of(failed: u64, unknown: u64) -> Self {
        if failed > 0 {
            Status::Fail
        } else if unknown > 0 {
            Status::Unknown
        } else {
            Status::Pass
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => EXIT_PASS,
            Status::Fail => EXIT_FAIL,
            Status::Unknown => EXIT_UNKNOWN,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Unknown => "UNKNOWN",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Totals {
    pub cases: u64,
    pub passed: u64,
    pub failed: u64,
    pub unknown: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub command: String,
    pub config: RunConfig,
    pub suites: Vec<SuiteReport>,
    pub totals: Totals,
    pub status: Status,
    /// Human-readable lines (tables, traces) shown by demos.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<String>,
}

impl Report {
    pub fn new(
        command: &str,
        config: &RunConfig,
        suites: Vec<SuiteReport>,
        trace: Vec<String>,
    ) -> Self {
        let mut totals = Totals::default();
        for s in &suites {
            totals.cases += s.sweep.cases;
            totals.passed += s.sweep.passed;
            totals.failed += s.sweep.failed;
            totals.unknown += s.sweep.unknown;
        }
        let status = Status::of(totals.failed, totals.unknown);
        Report {
            command: command.to_string(),
            config: config.clone(),
            suites,
            totals,
            status,
            trace,
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    pub fn wall(&self) -> Duration {
        self.suites.iter().map(|s| s.wall).sum()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let c = &self.config;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{}  fuel={} bound={} universe={} horizon={} seed={}",
            self.command, c.fuel, c.bound, c.universe, c.horizon, c.seed
        );
        for line in &self.trace {
            let _ = writeln!(out, "  {line}");
        }
        let width = self
            .suites
            .iter()
            .map(|s| s.sweep.name.len())
            .max()
            .unwrap_or(0);
        for s in &self.suites {
            let w = &s.sweep;
            let _ = writeln!(
                out,
                "{:<7} {:<width$}  {:>6} cases {:>6} passed {:>4} failed {:>4} unknown  ({:.2}s)",
                s.status().label(),
                w.name,
                w.cases,
                w.passed,
                w.failed,
                w.unknown,
                s.wall.as_secs_f64(),
            );
            for f in &w.failures {
                let _ = writeln!(out, "        - {}: {}", f.case, f.detail);
            }
        }
        let t = &self.totals;
        let _ = writeln!(
            out,
            "result: {} ({} cases, {} passed, {} failed, {} unknown)",
            self.status.label().to_lowercase(),
            t.cases,
            t.passed,
            t.failed,
            t.unknown
        );
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_text(),
            Format::Json => self.to_json(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyp::Check;

    fn sweep(name: &str, checks: Vec<Check>) -> SuiteReport {
        let cases = checks
            .into_iter()
            .enumerate()
            .map(|(i, c)| (format!("#{i}"), c))
            .collect();
        SuiteReport {
            sweep: Sweep::from_cases(name, cases),
            wall: Duration::from_millis(5),
        }
    }

    #[test]
    fn status_prefers_failure_over_unknown() {
        let cfg = RunConfig::default();
        let r = Report::new(
            "t",
            &cfg,
            vec![sweep("a", vec![Check::Pass, Check::Unknown])],
            vec![],
        );
        assert_eq!(r.exit_code(), EXIT_UNKNOWN);
        let r = Report::new(
            "t",
            &cfg,
            vec![
                sweep("a", vec![Check::Unknown]),
                sweep("b", vec![Check::Fail("x".into())]),
            ],
            vec![],
        );
        assert_eq!(r.exit_code(), EXIT_FAIL);
        assert_eq!(
            r.totals,
            Totals {
                cases: 2,
                passed: 0,
                failed: 1,
                unknown: 1
            }
        );
        let r = Report::new("t", &cfg, vec![sweep("a", vec![Check::Pass])], vec![]);
        assert_eq!(r.exit_code(), EXIT_PASS);
    }

    #[test]
    fn json_has_no_wall_time() {
        let cfg = RunConfig::default();
        let r = Report::new("t", &cfg, vec![sweep("a", vec![Check::Pass])], vec![]);
        let j = r.to_json();
        assert!(!j.contains("wall"));
        assert!(!j.contains("format"));
        let mut slow = r.clone();
        slow.suites[0].wall = Duration::from_secs(9);
        assert_eq!(slow.to_json(), j);
    }

    #[test]
    fn zero_bounds_are_rejected() {
        assert!(RunConfig::default().validate().is_ok());
        let bad = RunConfig {
            horizon: 0,
            ..RunConfig::default()
        };
        assert_eq!(bad.validate(), Err(ConfigError { field: "horizon" }));
    }
}
