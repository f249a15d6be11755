//! Bounded three-valued evaluation.
//!
//! `FiniteUniverse(N)` is the classical semantics of the finite structure
//! `[0,N)`. `ConservativeOmega(B)` reads quantifiers over all of ω and only
//! commits to a verdict it can justify: a witness for `∃`, a refutation for
//! `∀`.
//!
//! Both modes solve equation guards: if the body of `∃v` has a conjunct
//! `t = p(v)` whose left side is already known and whose right side is an
//! application-free pattern of pairs, successors and sums around `v`, that
//! conjunct fixes the only possible value of `v` and nothing else needs to
//! be searched. Guards under `∨` contribute the union of both sides. In
//! conservative mode this decides the quantifier outright, in either
//! direction, because the candidates are the only ones in all of ω.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::ast::{Expr, Formula};
use super::oracle::SetOracle;
use super::three_val::ThreeVal;
use crate::coding::{decode_tuple, encode_tuple};
use crate::kernel::{Evaluator, Outcome};
use crate::nat::{nat, Nat};

pub const DEFAULT_APP_FUEL: u64 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", content = "bound", rename_all = "snake_case")]
pub enum EvalMode {
    ConservativeOmega(u64),
    FiniteUniverse(u64),
}

impl EvalMode {
    pub fn limit(self) -> u64 {
        match self {
            EvalMode::ConservativeOmega(b) | EvalMode::FiniteUniverse(b) => b,
        }
    }

    fn finite(self) -> bool {
        matches!(self, EvalMode::FiniteUniverse(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FormulaEvalError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("no interpretation for relation symbol `{0}`")]
    UnknownRelation(String),
    #[error("quantifier bound must be at least 1")]
    ZeroBound,
}

pub type Env = BTreeMap<String, Nat>;

/// Interpretations of relation symbols. Symbols without an explicit entry
/// fall back to `default` if one is given.
#[derive(Default, Clone)]
pub struct Structure<'a> {
    rels: BTreeMap<String, &'a dyn SetOracle>,
    default: Option<&'a dyn SetOracle>,
}

impl<'a> Structure<'a> {
    pub fn new() -> Self {
        Structure {
            rels: BTreeMap::new(),
            default: None,
        }
    }

    /// Every symbol is read as `r`.
    pub fn uniform(r: &'a dyn SetOracle) -> Self {
        Structure {
            rels: BTreeMap::new(),
            default: Some(r),
        }
    }

    pub fn with(mut self, name: &str, r: &'a dyn SetOracle) -> Self {
        self.rels.insert(name.to_string(), r);
        self
    }

    fn get(&self, name: &str) -> Option<&'a dyn SetOracle> {
        self.rels.get(name).copied().or(self.default)
    }
}

/// Evaluates `f` with every relation symbol read as `r`.
pub fn eval_bounded(
    f: &Formula,
    env: &Env,
    r: &dyn SetOracle,
    mode: EvalMode,
) -> Result<ThreeVal, FormulaEvalError> {
    eval_in(f, env, &Structure::uniform(r), mode, DEFAULT_APP_FUEL)
}

pub fn eval_in(
    f: &Formula,
    env: &Env,
    structure: &Structure<'_>,
    mode: EvalMode,
    app_fuel: u64,
) -> Result<ThreeVal, FormulaEvalError> {
    Interp::new(structure, mode, app_fuel)?.eval(f, env)
}

/// A reusable evaluation context: program decodings and application
/// results are cached across calls.
pub struct Interp<'s, 'a> {
    structure: &'s Structure<'a>,
    mode: EvalMode,
    fuel: u64,
    machine: Evaluator<'static>,
    apps: HashMap<(Nat, Nat), Outcome>,
}

enum Partial {
    Undef,
    Fuel,
}

/// What a guard says about a bound variable: `None` if nothing, otherwise
/// a finite list containing every value that can make the body true.
type Candidates = Option<Vec<Nat>>;

type Scope = Vec<(String, Nat)>;

fn lookup<'e>(scope: &'e Scope, v: &str) -> Option<&'e Nat> {
    scope.iter().rev().find(|(n, _)| n == v).map(|(_, x)| x)
}

impl<'s, 'a> Interp<'s, 'a> {
    pub fn new(
        structure: &'s Structure<'a>,
        mode: EvalMode,
        app_fuel: u64,
    ) -> Result<Self, FormulaEvalError> {
        if mode.limit() == 0 {
            return Err(FormulaEvalError::ZeroBound);
        }
        Ok(Interp {
            structure,
            mode,
            fuel: app_fuel,
            machine: Evaluator::default(),
            apps: HashMap::new(),
        })
    }

    pub fn eval(&mut self, f: &Formula, env: &Env) -> Result<ThreeVal, FormulaEvalError> {
        if let Some(v) = f.free_vars().into_iter().find(|v| !env.contains_key(v)) {
            return Err(FormulaEvalError::UnboundVariable(v));
        }
        if let Some(r) = f
            .relations()
            .into_iter()
            .find(|r| self.structure.get(r).is_none())
        {
            return Err(FormulaEvalError::UnknownRelation(r));
        }
        let mut scope: Scope = env.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        Ok(self.formula(f, &mut scope))
    }

    /// The value of a term; applications may diverge or run out of fuel.
    pub fn eval_term(&mut self, e: &Expr, env: &Env) -> Result<Outcome, FormulaEvalError> {
        let mut free = std::collections::BTreeSet::new();
        e.vars(&mut free);
        if let Some(v) = free.into_iter().find(|v| !env.contains_key(v)) {
            return Err(FormulaEvalError::UnboundVariable(v));
        }
        let scope: Scope = env.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        Ok(match self.term(e, &scope) {
            Ok(v) => Outcome::Halted(v),
            Err(Partial::Undef) => Outcome::Undefined,
            Err(Partial::Fuel) => Outcome::OutOfFuel,
        })
    }

    fn app(&mut self, e: Nat, k: Nat) -> Result<Nat, Partial> {
        let key = (e, k);
        let out = match self.apps.get(&key) {
            Some(o) => o.clone(),
            None => {
                let o = self
                    .machine
                    .apply(&key.0, std::slice::from_ref(&key.1), self.fuel);
                self.apps.insert(key, o.clone());
                o
            }
        };
        match out {
            Outcome::Halted(v) => Ok(v),
            Outcome::Undefined => Err(Partial::Undef),
            Outcome::OutOfFuel => Err(Partial::Fuel),
        }
    }

    fn term(&mut self, e: &Expr, scope: &Scope) -> Result<Nat, Partial> {
        Ok(match e {
            Expr::Var(v) => lookup(scope, v)
                .cloned()
                .expect("free variables checked up front"),
            Expr::Const(n) => n.clone(),
            Expr::Succ(a) => self.term(a, scope)? + Nat::ONE,
            Expr::Add(a, b) => self.term(a, scope)? + self.term(b, scope)?,
            Expr::Mul(a, b) => self.term(a, scope)? * self.term(b, scope)?,
            Expr::Pair(xs) => {
                let vals = xs
                    .iter()
                    .map(|x| self.term(x, scope))
                    .collect::<Result<Vec<_>, _>>()?;
                encode_tuple(&vals)
            }
            Expr::App(a, b) => {
                let e = self.term(a, scope)?;
                let k = self.term(b, scope)?;
                self.app(e, k)?
            }
        })
    }

    fn atom(&mut self, r: Result<bool, Partial>) -> ThreeVal {
        match r {
            Ok(b) => b.into(),
            // an undefined application makes the atom false
            Err(Partial::Undef) => ThreeVal::False,
            Err(Partial::Fuel) => ThreeVal::Unknown,
        }
    }

    fn formula(&mut self, f: &Formula, scope: &mut Scope) -> ThreeVal {
        match f {
            Formula::Eq(a, b) => {
                let r = self
                    .term(a, scope)
                    .and_then(|x| Ok(x == self.term(b, scope)?));
                self.atom(r)
            }
            Formula::Mem(t, rel) => match self.term(t, scope) {
                Ok(v) => self
                    .structure
                    .get(rel)
                    .expect("relations checked up front")
                    .member(&v),
                Err(p) => self.atom(Err(p)),
            },
            Formula::Not(g) => !self.formula(g, scope),
            Formula::And(a, b) => {
                let l = self.formula(a, scope);
                if l == ThreeVal::False {
                    return l;
                }
                l.and(self.formula(b, scope))
            }
            Formula::Or(a, b) => {
                let l = self.formula(a, scope);
                if l == ThreeVal::True {
                    return l;
                }
                l.or(self.formula(b, scope))
            }
            Formula::Implies(a, b) => {
                let l = self.formula(a, scope);
                if l == ThreeVal::False {
                    return ThreeVal::True;
                }
                l.implies(self.formula(b, scope))
            }
            Formula::Exists(v, body) => self.exists(v, body, scope),
            Formula::Forall(v, body) => {
                let mut acc = ThreeVal::True;
                for c in 0..self.mode.limit() {
                    scope.push((v.clone(), nat(c)));
                    let r = self.formula(body, scope);
                    scope.pop();
                    if r == ThreeVal::False {
                        return r;
                    }
                    acc = acc.and(r);
                }
                if self.mode.finite() {
                    acc
                } else {
                    ThreeVal::Unknown
                }
            }
        }
    }

    fn exists(&mut self, v: &str, body: &Formula, scope: &mut Scope) -> ThreeVal {
        // ∃ distributes over ∨ in both modes
        if let Formula::Or(a, b) = body {
            let l = self.exists(v, a, scope);
            if l == ThreeVal::True {
                return l;
            }
            return l.or(self.exists(v, b, scope));
        }
        let guard = guard(v, body, scope, &mut Vec::new());
        let exhaustive = guard.is_some();
        let candidates: Vec<Nat> = match guard {
            Some(cs) if self.mode.finite() => cs
                .into_iter()
                .filter(|c| *c < nat(self.mode.limit()))
                .collect(),
            Some(cs) => cs,
            None => (0..self.mode.limit()).map(nat).collect(),
        };
        let mut acc = ThreeVal::False;
        for c in candidates {
            scope.push((v.to_string(), c));
            let r = self.formula(body, scope);
            scope.pop();
            if r == ThreeVal::True {
                return r;
            }
            acc = acc.or(r);
        }
        if self.mode.finite() || exhaustive {
            acc
        } else {
            ThreeVal::Unknown
        }
    }
}

/// Scans the propositional structure of `f` (looking through inner `∃`s
/// that do not rebind `v`) for equations that pin `v`.
fn guard(v: &str, f: &Formula, scope: &Scope, shadow: &mut Vec<String>) -> Candidates {
    match f {
        Formula::And(a, b) => match (guard(v, a, scope, shadow), guard(v, b, scope, shadow)) {
            (Some(x), Some(y)) => Some(x.into_iter().filter(|c| y.contains(c)).collect()),
            (x, None) => x,
            (None, y) => y,
        },
        Formula::Or(a, b) => {
            let mut x = guard(v, a, scope, shadow)?;
            for c in guard(v, b, scope, shadow)? {
                if !x.contains(&c) {
                    x.push(c);
                }
            }
            Some(x)
        }
        Formula::Exists(w, g) if w != v => {
            shadow.push(w.clone());
            let r = guard(v, g, scope, shadow);
            shadow.pop();
            r
        }
        Formula::Eq(l, r) => {
            for (pat, known) in [(l, r), (r, l)] {
                if pat.has_app() {
                    continue;
                }
                if let Some(val) = ground(known, scope, shadow) {
                    if let Some(cs) = solve(v, pat, val, scope, shadow) {
                        return Some(cs);
                    }
                }
            }
            None
        }
        _ => None,
    }
}

/// The value of `e` if it is application-free and all its variables are
/// bound outside the inner quantifiers being looked through.
fn ground(e: &Expr, scope: &Scope, shadow: &[String]) -> Option<Nat> {
    Some(match e {
        Expr::Var(v) => {
            if shadow.iter().any(|s| s == v) {
                return None;
            }
            lookup(scope, v)?.clone()
        }
        Expr::Const(n) => n.clone(),
        Expr::Succ(a) => ground(a, scope, shadow)? + Nat::ONE,
        Expr::Add(a, b) => ground(a, scope, shadow)? + ground(b, scope, shadow)?,
        Expr::Mul(a, b) => ground(a, scope, shadow)? * ground(b, scope, shadow)?,
        Expr::Pair(xs) => encode_tuple(
            &xs.iter()
                .map(|x| ground(x, scope, shadow))
                .collect::<Option<Vec<_>>>()?,
        ),
        Expr::App(..) => return None,
    })
}

/// Necessary condition on `v` for `pat = val` to hold.
fn solve(v: &str, pat: &Expr, val: Nat, scope: &Scope, shadow: &[String]) -> Candidates {
    if !pat.mentions(v) {
        return None;
    }
    match pat {
        Expr::Var(_) => Some(vec![val]),
        Expr::Pair(ps) => match decode_tuple(&val) {
            Some(parts) if parts.len() == ps.len() => ps
                .iter()
                .zip(parts)
                .find_map(|(p, part)| solve(v, p, part, scope, shadow)),
            _ => Some(vec![]),
        },
        Expr::Succ(p) => {
            if val.is_zero() {
                Some(vec![])
            } else {
                solve(v, p, val - Nat::ONE, scope, shadow)
            }
        }
        Expr::Add(a, b) => {
            let (p, q) = if a.mentions(v) { (a, b) } else { (b, a) };
            if q.mentions(v) {
                return None;
            }
            match ground(q, scope, shadow)? {
                k if k <= val => solve(v, p, val - k, scope, shadow),
                _ => Some(vec![]),
            }
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::oracle::FiniteSet;
    use crate::formula::parse::parse;
    use ThreeVal::*;

    fn env(pairs: &[(&str, u64)]) -> Env {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), nat(*v)))
            .collect()
    }

    fn ev(src: &str, e: &Env, r: &FiniteSet, mode: EvalMode) -> ThreeVal {
        eval_bounded(&parse(src).unwrap(), e, r, mode).unwrap()
    }

    #[test]
    fn tautology() {
        for mode in [EvalMode::ConservativeOmega(5), EvalMode::FiniteUniverse(5)] {
            assert_eq!(
                ev("x = x", &env(&[("x", 3)]), &FiniteSet::empty(), mode),
                True
            );
        }
    }

    #[test]
    fn unwitnessed_exists() {
        let empty = FiniteSet::empty();
        assert_eq!(
            ev(
                "∃t (t ∈ R)",
                &Env::new(),
                &empty,
                EvalMode::ConservativeOmega(100)
            ),
            Unknown
        );
        assert_eq!(
            ev(
                "∃t (t ∈ R)",
                &Env::new(),
                &empty,
                EvalMode::FiniteUniverse(100)
            ),
            False
        );
        let some = FiniteSet::from_u64s([42]);
        assert_eq!(
            ev(
                "∃t (t ∈ R)",
                &Env::new(),
                &some,
                EvalMode::ConservativeOmega(100)
            ),
            True
        );
        assert_eq!(
            ev(
                "∃t (t ∈ R)",
                &Env::new(),
                &some,
                EvalMode::ConservativeOmega(10)
            ),
            Unknown
        );
    }

    #[test]
    fn forall_refutation() {
        let r = FiniteSet::from_u64s([0, 1, 2]);
        assert_eq!(
            ev(
                "forall s. s in R",
                &Env::new(),
                &r,
                EvalMode::ConservativeOmega(10)
            ),
            False
        );
        assert_eq!(
            ev(
                "forall s. s in R",
                &Env::new(),
                &r,
                EvalMode::ConservativeOmega(3)
            ),
            Unknown
        );
        assert_eq!(
            ev(
                "forall s. s in R",
                &Env::new(),
                &r,
                EvalMode::FiniteUniverse(3)
            ),
            True
        );
    }

    #[test]
    fn errors() {
        let f = parse("x = y").unwrap();
        let e = eval_bounded(
            &f,
            &env(&[("x", 1)]),
            &FiniteSet::empty(),
            EvalMode::FiniteUniverse(3),
        );
        assert_eq!(e, Err(FormulaEvalError::UnboundVariable("y".into())));
        let f = parse("0 in R /\\ 0 in Q").unwrap();
        let empty = FiniteSet::empty();
        let s = Structure::new().with("R", &empty);
        assert_eq!(
            eval_in(&f, &Env::new(), &s, EvalMode::FiniteUniverse(3), 10),
            Err(FormulaEvalError::UnknownRelation("Q".into()))
        );
    }

    #[test]
    fn guards_match_brute_force() {
        // the guard rewrites must not change finite-universe verdicts
        let r = FiniteSet::from_u64s([0, 2, 3, 7, 12]);
        let srcs = [
            "exists a, b. y = pair(a, b) /\\ a in R",
            "exists z. z + 1 = y /\\ z in R",
            "exists z. S(z) = y /\\ z in R",
            "exists a. exists b. y = pair(a, b) /\\ (a = 0 \\/ b in R)",
            "exists a. y = a + 3 /\\ a in R",
        ];
        for src in srcs {
            let f = parse(src).unwrap();
            for y in 0..40u64 {
                let e = env(&[("y", y)]);
                let with = eval_bounded(&f, &e, &r, EvalMode::FiniteUniverse(16)).unwrap();
                let brute = brute_force(&f, &e, &r, 16);
                assert_eq!(with, brute, "{src} at y={y}");
            }
        }
    }

    /// Plain two-valued recursion over [0,n), no shortcuts.
    fn brute_force(f: &Formula, e: &Env, r: &FiniteSet, n: u64) -> ThreeVal {
        fn t(x: &Expr, e: &Env) -> Nat {
            match x {
                Expr::Var(v) => e[v].clone(),
                Expr::Const(c) => c.clone(),
                Expr::Succ(a) => t(a, e) + Nat::ONE,
                Expr::Add(a, b) => t(a, e) + t(b, e),
                Expr::Mul(a, b) => t(a, e) * t(b, e),
                Expr::Pair(xs) => encode_tuple(&xs.iter().map(|x| t(x, e)).collect::<Vec<_>>()),
                Expr::App(..) => unreachable!(),
            }
        }
        fn go(f: &Formula, e: &mut Env, r: &FiniteSet, n: u64) -> bool {
            match f {
                Formula::Eq(a, b) => t(a, e) == t(b, e),
                Formula::Mem(x, _) => r.contains(&t(x, e)),
                Formula::Not(g) => !go(g, e, r, n),
                Formula::And(a, b) => go(a, e, r, n) && go(b, e, r, n),
                Formula::Or(a, b) => go(a, e, r, n) || go(b, e, r, n),
                Formula::Implies(a, b) => !go(a, e, r, n) || go(b, e, r, n),
                Formula::Exists(v, g) | Formula::Forall(v, g) => {
                    let saved = e.get(v).cloned();
                    let all = matches!(f, Formula::Forall(..));
                    let mut res = all;
                    for c in 0..n {
                        e.insert(v.clone(), nat(c));
                        let b = go(g, e, r, n);
                        if all && !b {
                            res = false;
                        }
                        if !all && b {
                            res = true;
                        }
                    }
                    match saved {
                        Some(s) => e.insert(v.clone(), s),
                        None => e.remove(v),
                    };
                    res
                }
            }
        }
        go(f, &mut e.clone(), r, n).into()
    }

    #[test]
    fn shadowed_names_block_guards() {
        // inner x rebinds the outer one; the guard must not use outer x
        let f = parse("exists a. exists x. a = x /\\ x = 2").unwrap();
        let e = env(&[("x", 9)]);
        let r = FiniteSet::empty();
        assert_eq!(
            eval_bounded(&f, &e, &r, EvalMode::FiniteUniverse(5)).unwrap(),
            True
        );
    }

    #[test]
    fn partial_applications() {
        use crate::kernel::build::*;
        use crate::kernel::compile;
        let undef = compile(&program(1, crate::kernel::Term::Undefined)).unwrap();
        let looping = compile(&program(1, mu(konst(1)))).unwrap();
        let succ1 = compile(&program(1, succ(proj(0)))).unwrap();
        let r = FiniteSet::from_u64s([5]);
        let f = parse("app(e, 4) in R").unwrap();
        let m = EvalMode::FiniteUniverse(4);
        let at = |i: &crate::kernel::Index| {
            let mut e = Env::new();
            e.insert("e".into(), i.0.clone());
            eval_bounded(&f, &e, &r, m).unwrap()
        };
        assert_eq!(at(&succ1), True);
        assert_eq!(at(&undef), False);
        assert_eq!(at(&looping), Unknown);
    }
}
