//! The named formulas of the workbench, kept as concrete syntax so that what
//! is evaluated is exactly what is printed.

use super::ast::Formula;
use super::parse::parse;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Builtin {
    pub name: &'static str,
    /// The relation symbol the formula is positive in.
    pub symbol: &'static str,
    /// Free variables, in argument order.
    pub vars: &'static [&'static str],
    pub source: &'static str,
}

pub const BUILTINS: [Builtin; 4] = [
    Builtin {
        name: "psi",
        symbol: "R",
        vars: &["y"],
        source: "exists a, x, e. y = pair(a, x) /\\ ((a = pair(0, e) /\\ x = e) \\/ \
                 (a = pair(1, e) /\\ exists t. forall s. pair(app(e, pair(t, s)), x) in R))",
    },
    Builtin {
        name: "psi_prime",
        symbol: "R",
        vars: &["e"],
        source: "e = 1 \\/ (e != 1 /\\ exists n. forall m. app(e, pair(n, m)) in R)",
    },
    Builtin {
        name: "psi0",
        symbol: "J",
        vars: &["a"],
        source: "(exists e. a = pair(0, e)) \\/ (exists e. a = pair(1, e) /\\ forall k. app(e, k) in J)",
    },
    Builtin {
        name: "psi1",
        symbol: "A",
        vars: &["a", "x"],
        source: "(exists e. a = pair(0, e) /\\ x = e) \\/ \
                 (exists e. a = pair(1, e) /\\ exists t. forall s. pair(app(e, pair(t, s)), x) in A)",
    },
];

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown builtin formula `{0}` (expected one of psi, psi_prime, psi0, psi1)")]
pub struct UnknownBuiltin(pub String);

pub fn builtin_info(name: &str) -> Result<&'static Builtin, UnknownBuiltin> {
    BUILTINS
        .iter()
        .find(|b| b.name == name)
        .ok_or_else(|| UnknownBuiltin(name.to_string()))
}

pub fn builtin(name: &str) -> Result<Formula, UnknownBuiltin> {
    let b = builtin_info(name)?;
    Ok(parse(b.source).expect("builtin sources parse"))
}
