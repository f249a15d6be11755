//! Small guided runs of the closure constructions, the reduction identity
//! and the fixed-point scanner.

use std::fmt;
use std::str::FromStr;

use crate::fixpoint::{find_fixed_point_violations, recheck_violation, Side};
use crate::formula::{FiniteSet, PsiConfig};
use crate::hyp::{
    abbrev, complement, reduction_identity_check, shipped_pool, sweep_u2_shape, u1, union_of, Cert,
    Check, CodePool, Sweep,
};
use crate::nat::nat;

use super::claims::reduction_sweep;
use super::closure::{sweep_closure_programs, sweep_closure_structural};
use super::{Report, RunConfig, SuiteReport};

/// Rows of the membership tables.
pub const TABLE_ROWS: u64 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Demo {
    Union,
    Complement,
    ReductionIdentity,
    Diagonal,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown demo `{0}` (expected union, complement, reduction-identity or diagonal)")]
pub struct UnknownDemo(pub String);

impl FromStr for Demo {
    type Err = UnknownDemo;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "union" => Ok(Demo::Union),
            "complement" => Ok(Demo::Complement),
            "reduction-identity" => Ok(Demo::ReductionIdentity),
            "diagonal" => Ok(Demo::Diagonal),
            other => Err(UnknownDemo(other.to_string())),
        }
    }
}

impl fmt::Display for Demo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Demo::Union => "union",
            Demo::Complement => "complement",
            Demo::ReductionIdentity => "reduction-identity",
            Demo::Diagonal => "diagonal",
        })
    }
}

fn table(certs: &[Cert]) -> Vec<String> {
    let mut out = vec![];
    for (i, c) in certs.iter().enumerate() {
        out.push(format!(
            "c{i} = {c}  norm {}  code {}",
            c.norm(),
            abbrev(c.index())
        ));
    }
    let head: Vec<String> = (0..certs.len()).map(|i| format!("c{i}")).collect();
    out.push(format!("x   {}", head.join("  ")));
    for x in 0..TABLE_ROWS {
        let row: Vec<String> = certs
            .iter()
            .map(|c| if c.member(&nat(x)) { " 1" } else { " ." }.to_string())
            .collect();
        out.push(format!("{x:<3} {}", row.join("  ")));
    }
    out
}

fn closure_demo(name: &str, certs: Vec<Cert>, cfg: &RunConfig) -> Report {
    let pool = CodePool::new(&certs);
    let trace = table(&certs);
    let mut suites = vec![
        SuiteReport::timed(|| sweep_closure_structural(&pool, TABLE_ROWS)),
        SuiteReport::timed(|| sweep_closure_programs(&pool, TABLE_ROWS, cfg.fuel)),
    ];
    if name == "complement" {
        suites.push(SuiteReport::timed(|| sweep_u2_shape(&pool)));
    }
    Report::new(&format!("demo {name}"), cfg, suites, trace)
}

fn diagonal(cfg: &RunConfig) -> Report {
    let q = FiniteSet::empty();
    let pc = PsiConfig::conservative(cfg.bound, cfg.fuel);
    let scan = find_fixed_point_violations(&q, cfg.horizon, &pc);
    let mut trace = vec![format!(
        "Q = {}, y < {}: {} definite violations, {} undecided points",
        scan.oracle,
        scan.y_limit,
        scan.violations.len(),
        scan.undecided
    )];
    let mut s = Sweep::new("diagonal.violations");
    let found = if scan.violations.is_empty() {
        Check::Fail("no violation found".into())
    } else {
        Check::Pass
    };
    s.record(|| "at least one definite violation".into(), found);
    for v in &scan.violations {
        let side = match v.side {
            Side::InQButPsiFalse => "in Q but psi is false",
            Side::PsiTrueButNotInQ => "psi is true but not in Q",
        };
        trace.push(format!("y = {}: {side} ({:?})", v.y, v.shape));
        let check = if recheck_violation(v, &q, &pc) {
            Check::Pass
        } else {
            Check::Fail("evidence does not recheck".into())
        };
        s.record(|| format!("recheck y={}", v.y), check);
    }
    Report::new(
        "demo diagonal",
        cfg,
        vec![SuiteReport {
            sweep: s,
            wall: Default::default(),
        }],
        trace,
    )
}

pub fn run_demo(demo: Demo, cfg: &RunConfig) -> Report {
    match demo {
        Demo::Union => {
            let (a, b) = (u1(3u64), u1(5u64));
            let u = union_of(&[a.clone(), b.clone()]).expect("non-empty");
            closure_demo("union", vec![a, b, u], cfg)
        }
        Demo::Complement => {
            let a = u1(3u64);
            let u = union_of(&[a.clone(), u1(5u64)]).expect("non-empty");
            let certs = vec![
                a.clone(),
                complement(&a),
                complement(&complement(&a)),
                u.clone(),
                complement(&u),
            ];
            closure_demo("complement", certs, cfg)
        }
        Demo::ReductionIdentity => {
            let pool = shipped_pool();
            let report = reduction_identity_check(&pool, cfg.horizon, cfg.fuel);
            let mut trace: Vec<String> = pool
                .certs()
                .iter()
                .map(|c| format!("norm {}  {c}", c.norm()))
                .collect();
            trace.push(format!(
                "{} pool codes, {} registered with their children, x < {}",
                report.pool_size, report.registered, report.horizon
            ));
            let suite = SuiteReport::timed(|| reduction_sweep(&report));
            Report::new("demo reduction-identity", cfg, vec![suite], trace)
        }
        Demo::Diagonal => diagonal(cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for d in [
            Demo::Union,
            Demo::Complement,
            Demo::ReductionIdentity,
            Demo::Diagonal,
        ] {
            assert_eq!(d.to_string().parse::<Demo>().unwrap(), d);
        }
        assert!("unions".parse::<Demo>().is_err());
    }

    #[test]
    fn union_table_shows_three_and_five() {
        let r = run_demo(Demo::Union, &RunConfig::default());
        assert_eq!(r.exit_code(), 0, "{}", r.to_text());
        let rows: Vec<&String> = r
            .trace
            .iter()
            .filter(|l| l.starts_with("3 ") || l.starts_with("5 "))
            .collect();
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(|l| l.ends_with(" 1")));
    }

    #[test]
    fn diagonal_finds_a_violation_of_the_empty_set() {
        let r = run_demo(Demo::Diagonal, &RunConfig::default());
        assert_eq!(r.exit_code(), 0, "{}", r.to_text());
        assert!(r.trace.iter().any(|l| l.starts_with("y = 42:")));
    }
}
