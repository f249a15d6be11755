use std::collections::BTreeSet;
use std::fmt;

use crate::nat::Nat;

/// Arithmetic terms. `App(e, k)` is `φ_e(k)` and may be undefined.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Var(String),
    Const(Nat),
    Succ(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    /// Tuple code `⟨t0,…,t(n-1)⟩`.
    Pair(Vec<Expr>),
    App(Box<Expr>, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Eq(Expr, Expr),
    /// `t ∈ R` for the relation symbol `R`.
    Mem(Expr, String),
    Not(Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

impl Expr {
    pub fn var(s: &str) -> Expr {
        Expr::Var(s.to_string())
    }

    pub fn num(n: u64) -> Expr {
        Expr::Const(Nat::from(n))
    }

    pub fn pair2(a: Expr, b: Expr) -> Expr {
        Expr::Pair(vec![a, b])
    }

    pub fn app(e: Expr, k: Expr) -> Expr {
        Expr::App(Box::new(e), Box::new(k))
    }

    pub fn vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Var(v) => {
                out.insert(v.clone());
            }
            Expr::Const(_) => {}
            Expr::Succ(a) => a.vars(out),
            Expr::Add(a, b) | Expr::Mul(a, b) | Expr::App(a, b) => {
                a.vars(out);
                b.vars(out);
            }
            Expr::Pair(xs) => xs.iter().for_each(|x| x.vars(out)),
        }
    }

    pub fn mentions(&self, v: &str) -> bool {
        let mut s = BTreeSet::new();
        self.vars(&mut s);
        s.contains(v)
    }

    pub fn has_app(&self) -> bool {
        match self {
            Expr::App(..) => true,
            Expr::Var(_) | Expr::Const(_) => false,
            Expr::Succ(a) => a.has_app(),
            Expr::Add(a, b) | Expr::Mul(a, b) => a.has_app() || b.has_app(),
            Expr::Pair(xs) => xs.iter().any(Expr::has_app),
        }
    }
}

impl Formula {
    pub fn mem(t: Expr, rel: &str) -> Formula {
        Formula::Mem(t, rel.to_string())
    }

    pub fn eq(a: Expr, b: Expr) -> Formula {
        Formula::Eq(a, b)
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn exists(v: &str, f: Formula) -> Formula {
        Formula::Exists(v.to_string(), Box::new(f))
    }

    pub fn forall(v: &str, f: Formula) -> Formula {
        Formula::Forall(v.to_string(), Box::new(f))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let mut add = |e: &Expr, bound: &Vec<String>| {
            let mut vs = BTreeSet::new();
            e.vars(&mut vs);
            out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
        };
        match self {
            Formula::Eq(a, b) => {
                add(a, bound);
                add(b, bound);
            }
            Formula::Mem(t, _) => add(t, bound),
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::Or(a, b) | Formula::And(a, b) | Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                bound.push(v.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Relation symbols occurring in the formula.
    pub fn relations(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| {
            if let Formula::Mem(_, r) = f {
                out.insert(r.clone());
            }
        });
        out
    }

    pub fn mentions_rel(&self, rel: &str) -> bool {
        self.relations().contains(rel)
    }

    pub fn walk(&self, f: &mut dyn FnMut(&Formula)) {
        f(self);
        match self {
            Formula::Eq(..) | Formula::Mem(..) => {}
            Formula::Not(a) | Formula::Exists(_, a) | Formula::Forall(_, a) => a.walk(f),
            Formula::Or(a, b) | Formula::And(a, b) | Formula::Implies(a, b) => {
                a.walk(f);
                b.walk(f);
            }
        }
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.walk(&mut |_| n += 1);
        n
    }

    /// Every variable name used anywhere, bound or free.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| match f {
            Formula::Eq(a, b) => {
                a.vars(&mut out);
                b.vars(&mut out);
            }
            Formula::Mem(t, _) => t.vars(&mut out),
            Formula::Exists(v, _) | Formula::Forall(v, _) => {
                out.insert(v.clone());
            }
            _ => {}
        });
        out
    }
}

fn fmt_sum(e: &Expr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match e {
        Expr::Add(a, b) => {
            fmt_sum(a, f)?;
            f.write_str(" + ")?;
            fmt_prod(b, f)
        }
        _ => fmt_prod(e, f),
    }
}

fn fmt_prod(e: &Expr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match e {
        Expr::Mul(a, b) => {
            fmt_prod(a, f)?;
            f.write_str(" * ")?;
            fmt_atom(b, f)
        }
        _ => fmt_atom(e, f),
    }
}

fn fmt_atom(e: &Expr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match e {
        Expr::Var(v) => f.write_str(v),
        Expr::Const(n) => write!(f, "{n}"),
        Expr::Succ(a) => {
            f.write_str("S(")?;
            fmt_sum(a, f)?;
            f.write_str(")")
        }
        Expr::Pair(xs) => {
            f.write_str("pair(")?;
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                fmt_sum(x, f)?;
            }
            f.write_str(")")
        }
        Expr::App(a, b) => {
            f.write_str("app(")?;
            fmt_sum(a, f)?;
            f.write_str(", ")?;
            fmt_sum(b, f)?;
            f.write_str(")")
        }
        Expr::Add(..) | Expr::Mul(..) => {
            f.write_str("(")?;
            fmt_sum(e, f)?;
            f.write_str(")")
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_sum(self, f)
    }
}

fn fmt_operand(g: &Formula, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match g {
        Formula::Eq(..) | Formula::Mem(..) | Formula::Not(..) => write!(f, "{g}"),
        _ => write!(f, "({g})"),
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Eq(a, b) => write!(f, "{a} = {b}"),
            Formula::Mem(t, r) => write!(f, "{t} in {r}"),
            Formula::Not(g) => {
                f.write_str("~")?;
                match **g {
                    Formula::Not(_) => write!(f, "{g}"),
                    _ => write!(f, "({g})"),
                }
            }
            Formula::Or(a, b) => {
                fmt_operand(a, f)?;
                f.write_str(" \\/ ")?;
                fmt_operand(b, f)
            }
            Formula::And(a, b) => {
                fmt_operand(a, f)?;
                f.write_str(" /\\ ")?;
                fmt_operand(b, f)
            }
            Formula::Implies(a, b) => {
                fmt_operand(a, f)?;
                f.write_str(" -> ")?;
                fmt_operand(b, f)
            }
            Formula::Exists(v, g) => write!(f, "exists {v}. {g}"),
            Formula::Forall(v, g) => write!(f, "forall {v}. {g}"),
        }
    }
}
