//! Positivity of a formula in a relation symbol.
//!
//! The strict grammar only admits the atoms `0 ∈ R`, `1 ∈ R`, `x ∈ R`,
//! `x+1 ∈ R`, `x+y ∈ R` and `x·y ∈ R`. Membership of any other term is read
//! as the abbreviation `∃z (z = t & z ∈ R)` before the grammar is applied.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::ast::{Expr, Formula};
use crate::nat::Nat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Clause {
    Negation,
    Implication,
    AtomShape,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Clause::Negation => "negation",
            Clause::Implication => "implication",
            Clause::AtomShape => "atomic membership shape",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub clause: Clause,
    pub symbol: String,
    /// The offending subformula, rendered.
    pub at: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} occurs under the {} clause in `{}`",
            self.symbol, self.clause, self.at
        )
    }
}

impl std::error::Error for Violation {}

fn simple_atom(t: &Expr) -> bool {
    let is_var = |e: &Expr| matches!(e, Expr::Var(_));
    let is_one = |e: &Expr| matches!(e, Expr::Const(n) if *n == Nat::ONE);
    match t {
        Expr::Const(n) => *n <= Nat::ONE,
        Expr::Var(_) => true,
        Expr::Succ(a) => is_var(a),
        Expr::Add(a, b) => is_var(a) && (is_var(b) || is_one(b)),
        Expr::Mul(a, b) => is_var(a) && is_var(b),
        _ => false,
    }
}

struct Fresh {
    used: BTreeSet<String>,
    next: usize,
}

impl Fresh {
    fn var(&mut self) -> String {
        loop {
            let v = format!("z{}", self.next);
            self.next += 1;
            if self.used.insert(v.clone()) {
                return v;
            }
        }
    }
}

/// Rewrites every membership atom in `symbol` whose term is outside the
/// strict atom list into `∃z (z = t & z ∈ symbol)`.
pub fn normalize_atoms(f: &Formula, symbol: &str) -> Formula {
    let mut fresh = Fresh {
        used: f.all_vars(),
        next: 0,
    };
    normalize(f, symbol, &mut fresh)
}

fn normalize(f: &Formula, symbol: &str, fresh: &mut Fresh) -> Formula {
    let mut go = |g: &Formula| Box::new(normalize(g, symbol, fresh));
    match f {
        Formula::Mem(t, r) if r == symbol && !simple_atom(t) => {
            let z = fresh.var();
            Formula::exists(
                &z,
                Formula::and(
                    Formula::eq(Expr::Var(z.clone()), t.clone()),
                    Formula::mem(Expr::Var(z.clone()), r),
                ),
            )
        }
        Formula::Eq(..) | Formula::Mem(..) => f.clone(),
        Formula::Not(g) => Formula::Not(go(g)),
        Formula::Or(a, b) => {
            let a = go(a);
            Formula::Or(a, go(b))
        }
        Formula::And(a, b) => {
            let a = go(a);
            Formula::And(a, go(b))
        }
        Formula::Implies(a, b) => {
            let a = go(a);
            Formula::Implies(a, go(b))
        }
        Formula::Exists(v, g) => Formula::Exists(v.clone(), go(g)),
        Formula::Forall(v, g) => Formula::Forall(v.clone(), go(g)),
    }
}

/// The first place where `f` leaves the positive grammar in `symbol`.
pub fn positivity_violation(f: &Formula, symbol: &str) -> Option<Violation> {
    strict(&normalize_atoms(f, symbol), symbol)
}

fn strict(f: &Formula, symbol: &str) -> Option<Violation> {
    if !f.mentions_rel(symbol) {
        return None;
    }
    let bad = |clause| {
        Some(Violation {
            clause,
            symbol: symbol.to_string(),
            at: f.to_string(),
        })
    };
    match f {
        Formula::Eq(..) => None,
        Formula::Mem(t, _) => {
            if simple_atom(t) {
                None
            } else {
                bad(Clause::AtomShape)
            }
        }
        Formula::Not(_) => bad(Clause::Negation),
        Formula::Implies(..) => bad(Clause::Implication),
        Formula::Or(a, b) | Formula::And(a, b) => strict(a, symbol).or_else(|| strict(b, symbol)),
        Formula::Exists(_, g) | Formula::Forall(_, g) => strict(g, symbol),
    }
}

pub fn check_positive(f: &Formula, symbol: &str) -> bool {
    positivity_violation(f, symbol).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse::parse;

    fn pos(s: &str) -> bool {
        check_positive(&parse(s).unwrap(), "R")
    }

    #[test]
    fn grammar_clauses() {
        assert!(pos("0 in R"));
        assert!(pos("1 in R"));
        assert!(pos("x in R"));
        assert!(pos("x + 1 in R"));
        assert!(pos("S(x) in R"));
        assert!(pos("x + y in R /\\ x * y in R"));
        assert!(pos("exists t. forall s. pair(t, s) in R"));
        assert!(pos("forall x. x * x = x -> 0 = 1"));
        assert!(pos("~(x = 0) /\\ x in R"));
        assert!(!pos("x in Q -> 0 in R \\/ 1 = 1"));
    }

    #[test]
    fn rejections_name_the_clause() {
        let v = positivity_violation(&parse("~(0 in R)").unwrap(), "R").unwrap();
        assert_eq!(v.clause, Clause::Negation);
        let v = positivity_violation(&parse("x in R -> x = 0").unwrap(), "R").unwrap();
        assert_eq!(v.clause, Clause::Implication);
        let v = positivity_violation(&parse("x = 0 -> x in R").unwrap(), "R").unwrap();
        assert_eq!(v.clause, Clause::Implication);
    }

    #[test]
    fn other_symbols_are_ignored() {
        assert!(check_positive(&parse("~(x in Q) /\\ x in R").unwrap(), "R"));
        assert!(!check_positive(
            &parse("~(x in Q) /\\ x in R").unwrap(),
            "Q"
        ));
    }

    #[test]
    fn normalization_introduces_fresh_names() {
        let f = parse("exists z0. pair(z0, x) in R").unwrap();
        let g = normalize_atoms(&f, "R");
        assert!(g.to_string().contains("z1"), "{g}");
        assert!(check_positive(&f, "R"));
    }
}
