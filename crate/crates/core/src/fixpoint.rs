//! Monotone operators over finite universes: stage iteration, monotonicity
//! probes and a scanner for points where a set fails to be a fixed point of
//! `psi`.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::formula::{
    check_positive, positivity_violation, psi_decide, Env, EvalMode, FiniteSet, Formula,
    FormulaEvalError, Interp, PsiConfig, PsiEvidence, PsiShape, SetOracle, Structure, ThreeVal,
    Violation, DEFAULT_APP_FUEL,
};
use crate::nat::{nat, Nat};

pub type StageSet = BTreeSet<u64>;

#[derive(Debug, thiserror::Error)]
pub enum FixpointError {
    #[error("formula is not positive: {0}")]
    NotPositive(Violation),
    #[error("operator formula needs exactly one free variable, found {0:?}")]
    FreeVars(Vec<String>),
    #[error("operator formula mentions more than one relation symbol: {0:?}")]
    Relations(Vec<String>),
    #[error(transparent)]
    Eval(#[from] FormulaEvalError),
    #[error("exhaustive search supports universes of at most {max} elements, got {got}")]
    TooLarge { max: u64, got: u64 },
}

/// `A ↦ {y < N : f(y, A)}` for a formula with one free variable.
#[derive(Clone, Debug)]
pub struct Operator {
    pub formula: Formula,
    pub var: String,
    pub symbol: String,
    pub app_fuel: u64,
}

impl Operator {
    /// The free variable and relation symbol are read off the formula. A
    /// formula without relation symbols gets the symbol `R`.
    pub fn new(formula: Formula) -> Result<Self, FixpointError> {
        let vars: Vec<String> = formula.free_vars().into_iter().collect();
        if vars.len() != 1 {
            return Err(FixpointError::FreeVars(vars));
        }
        let rels: Vec<String> = formula.relations().into_iter().collect();
        if rels.len() > 1 {
            return Err(FixpointError::Relations(rels));
        }
        let symbol = rels.into_iter().next().unwrap_or_else(|| "R".to_string());
        Ok(Operator {
            formula,
            var: vars[0].clone(),
            symbol,
            app_fuel: DEFAULT_APP_FUEL,
        })
    }

    pub fn is_positive(&self) -> bool {
        check_positive(&self.formula, &self.symbol)
    }

    pub fn require_positive(&self) -> Result<(), FixpointError> {
        match positivity_violation(&self.formula, &self.symbol) {
            Some(v) => Err(FixpointError::NotPositive(v)),
            None => Ok(()),
        }
    }

    /// One application under `FiniteUniverse(n)`. Points whose verdict is
    /// Unknown (an application ran out of fuel) are left out and counted.
    pub fn apply_counted(&self, a: &StageSet, n: u64) -> Result<(StageSet, usize), FixpointError> {
        let oracle = FiniteSet(a.iter().map(|&x| nat(x)).collect());
        let structure = Structure::new().with(&self.symbol, &oracle);
        let mode = EvalMode::FiniteUniverse(n);
        Interp::new(&structure, mode, self.app_fuel)?;
        let verdicts: Vec<(u64, ThreeVal)> = (0..n)
            .into_par_iter()
            .map_init(
                || Interp::new(&structure, mode, self.app_fuel).expect("checked above"),
                |interp, y| {
                    let env: Env = [(self.var.clone(), nat(y))].into_iter().collect();
                    interp.eval(&self.formula, &env).map(|v| (y, v))
                },
            )
            .collect::<Result<_, _>>()?;
        let unknown = verdicts
            .iter()
            .filter(|(_, v)| *v == ThreeVal::Unknown)
            .count();
        Ok((
            verdicts
                .into_iter()
                .filter(|(_, v)| v.is_true())
                .map(|(y, _)| y)
                .collect(),
            unknown,
        ))
    }

    pub fn apply(&self, a: &StageSet, n: u64) -> Result<StageSet, FixpointError> {
        Ok(self.apply_counted(a, n)?.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Least,
    Greatest,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageTrace {
    pub direction: Direction,
    pub universe: u64,
    pub stage_cap: u64,
    /// `stages[0]` is the starting set; each later stage is the operator
    /// applied to the previous one. Repeats are not stored.
    pub stages: Vec<StageSet>,
    /// Index of the first stage that is a fixed point, if one was reached.
    pub stabilized_at: Option<usize>,
    /// Points left out of some stage because their verdict was Unknown.
    pub undecided: usize,
}

impl StageTrace {
    pub fn last(&self) -> &StageSet {
        self.stages.last().expect("a trace has a starting stage")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("traces serialize")
    }
}

pub fn default_stage_cap(n: u64) -> u64 {
    n + 1
}

fn iterate(
    op: &Operator,
    n: u64,
    cap: u64,
    direction: Direction,
) -> Result<StageTrace, FixpointError> {
    op.require_positive()?;
    let start: StageSet = match direction {
        Direction::Least => StageSet::new(),
        Direction::Greatest => (0..n).collect(),
    };
    let mut trace = StageTrace {
        direction,
        universe: n,
        stage_cap: cap,
        stages: vec![start],
        stabilized_at: None,
        undecided: 0,
    };
    for _ in 0..cap {
        let (next, unknown) = op.apply_counted(trace.last(), n)?;
        trace.undecided += unknown;
        if &next == trace.last() {
            trace.stabilized_at = Some(trace.stages.len() - 1);
            break;
        }
        trace.stages.push(next);
    }
    Ok(trace)
}

/// Iterates upward from the empty set.
pub fn lfp_finite(op: &Operator, n: u64, stage_cap: u64) -> Result<StageTrace, FixpointError> {
    iterate(op, n, stage_cap, Direction::Least)
}

/// Iterates downward from `[0, n)`.
pub fn gfp_finite(op: &Operator, n: u64, stage_cap: u64) -> Result<StageTrace, FixpointError> {
    iterate(op, n, stage_cap, Direction::Greatest)
}

pub const EXHAUSTIVE_MAX: u64 = 16;

/// The ⊆-least fixed point found by checking every subset of `[0, n)`, or
/// `None` if the fixed points have no least element.
pub fn exhaustive_least_fixed_point(
    op: &Operator,
    n: u64,
) -> Result<Option<StageSet>, FixpointError> {
    if n > EXHAUSTIVE_MAX {
        return Err(FixpointError::TooLarge {
            max: EXHAUSTIVE_MAX,
            got: n,
        });
    }
    let fixed: Vec<u64> = (0u64..1 << n)
        .into_par_iter()
        .map(|mask| {
            let s = from_mask(mask, n);
            Ok((op.apply(&s, n)? == s).then_some(mask))
        })
        .collect::<Result<Vec<_>, FixpointError>>()?
        .into_iter()
        .flatten()
        .collect();
    let least = fixed.iter().find(|&&m| fixed.iter().all(|&o| m & o == m));
    Ok(least.map(|&m| from_mask(m, n)))
}

fn from_mask(mask: u64, n: u64) -> StageSet {
    (0..n).filter(|i| mask >> i & 1 == 1).collect()
}

/// Random pairs `A ⊆ B ⊆ [0, n)`, reproducible from the seed.
pub fn random_nested_pairs(n: u64, trials: usize, seed: u64) -> Vec<(StageSet, StageSet)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials)
        .map(|_| {
            let b: StageSet = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
            let a: StageSet = b.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
            (a, b)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonotonicityCounterexample {
    pub smaller: StageSet,
    pub larger: StageSet,
    /// In the image of `smaller` but not of `larger`.
    pub lost: StageSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonotonicityReport {
    pub universe: u64,
    pub trials: usize,
    pub seed: u64,
    pub counterexamples: Vec<MonotonicityCounterexample>,
}

/// Samples `A ⊆ B` and checks `Φ(A) ⊆ Φ(B)`. Runs whether or not the
/// formula is positive.
pub fn monotonicity_probe(
    op: &Operator,
    n: u64,
    trials: usize,
    seed: u64,
) -> Result<MonotonicityReport, FixpointError> {
    let mut counterexamples = Vec::new();
    for (a, b) in random_nested_pairs(n, trials, seed) {
        let fa = op.apply(&a, n)?;
        let fb = op.apply(&b, n)?;
        if !fa.is_subset(&fb) {
            let lost = fa.difference(&fb).copied().collect();
            counterexamples.push(MonotonicityCounterexample {
                smaller: a,
                larger: b,
                lost,
            });
        }
    }
    Ok(MonotonicityReport {
        universe: n,
        trials,
        seed,
        counterexamples,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    InQButPsiFalse,
    PsiTrueButNotInQ,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedPointViolation {
    #[serde(with = "crate::nat::dec")]
    pub y: Nat,
    pub side: Side,
    pub shape: PsiShape,
    pub evidence: PsiEvidence,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ViolationReport {
    pub oracle: crate::formula::Descriptor,
    pub y_limit: u64,
    pub bound: u64,
    pub fuel: u64,
    pub scanned: u64,
    /// Points skipped because either side was Unknown.
    pub undecided: u64,
    pub violations: Vec<FixedPointViolation>,
}

/// Scans `y < y_limit` for points where `y ∈ Q` and `psi(y, Q)` disagree.
/// Only definite disagreements are reported.
pub fn find_fixed_point_violations(
    q: &dyn SetOracle,
    y_limit: u64,
    cfg: &PsiConfig<'_>,
) -> ViolationReport {
    let rows: Vec<(Option<FixedPointViolation>, bool)> = (0..y_limit)
        .into_par_iter()
        .map(|y| {
            let y = nat(y);
            let in_q = q.member(&y);
            let (psi, evidence) = psi_decide(&y, q, cfg);
            let side = match (in_q.to_bool(), psi.to_bool()) {
                (Some(true), Some(false)) => Side::InQButPsiFalse,
                (Some(false), Some(true)) => Side::PsiTrueButNotInQ,
                (Some(_), Some(_)) => return (None, false),
                _ => return (None, true),
            };
            let shape = crate::formula::psi_shape(&y);
            (
                Some(FixedPointViolation {
                    y,
                    side,
                    shape,
                    evidence,
                }),
                false,
            )
        })
        .collect();
    let undecided = rows.iter().filter(|(_, u)| *u).count() as u64;
    ViolationReport {
        oracle: q.descriptor(),
        y_limit,
        bound: cfg.bound,
        fuel: cfg.fuel,
        scanned: y_limit,
        undecided,
        violations: rows.into_iter().filter_map(|(v, _)| v).collect(),
    }
}

/// Re-derives a reported violation from its evidence.
pub fn recheck_violation(v: &FixedPointViolation, q: &dyn SetOracle, cfg: &PsiConfig<'_>) -> bool {
    let psi = crate::formula::recheck(&v.y, q, cfg, &v.evidence);
    match v.side {
        Side::InQButPsiFalse => q.member(&v.y) == ThreeVal::True && psi == Some(false),
        Side::PsiTrueButNotInQ => q.member(&v.y) == ThreeVal::False && psi == Some(true),
    }
}
