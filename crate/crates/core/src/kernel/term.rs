use std::fmt;

use crate::nat::Nat;

/// A node of the structured program language.
///
/// Every node is evaluated in the argument context of the enclosing program
/// except two: the body of [`Term::Minimize`] sees one extra argument (the
/// search variable, appended last) and the head of [`Term::Compose`] is a
/// separate program whose arguments are the values of `args`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Const(Nat),
    Proj(usize),
    Succ(Box<Term>),
    /// Predecessor, with `pred 0 = 0`.
    Pred(Box<Term>),
    Add(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
    /// `1` if both sides are equal, `0` otherwise.
    Eq(Box<Term>, Box<Term>),
    /// Evaluates `then` when `cond` is zero, `otherwise` when it is not. Only
    /// the chosen branch is evaluated.
    IfZero {
        cond: Box<Term>,
        then: Box<Term>,
        otherwise: Box<Term>,
    },
    /// Sequence code `⟨c0,…,c(n-1)⟩` of the children's values.
    Tuple(Vec<Term>),
    /// `(x)_i`.
    TupleSub(Box<Term>, Box<Term>),
    CantorPair(Box<Term>, Box<Term>),
    CantorFst(Box<Term>),
    CantorSnd(Box<Term>),
    Compose {
        head: Box<Program>,
        args: Vec<Term>,
    },
    /// Least `y` with `body(x̄, y) = 0`.
    Minimize(Box<Term>),
    /// Universal function: `φ^arity_code(args)`.
    Eval {
        arity: usize,
        code: Box<Term>,
        args: Vec<Term>,
    },
    /// The index `s^m_n(code, fixed)` where `m = fixed.len()`.
    Smn {
        rest: usize,
        code: Box<Term>,
        fixed: Vec<Term>,
    },
    OracleQuery(Box<Term>),
    /// Nowhere defined.
    Undefined,
}

/// A term together with its declared arity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Program {
    pub arity: usize,
    pub body: Term,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum StructError {
    #[error("projection {index} out of range for arity {arity}")]
    ProjOutOfRange { index: usize, arity: usize },
    #[error("compose head has arity {head} but {args} arguments were supplied")]
    ComposeArity { head: usize, args: usize },
    #[error("eval node declares arity {declared} but has {args} argument children")]
    EvalArity { declared: usize, args: usize },
}

impl Program {
    pub fn new(arity: usize, body: Term) -> Self {
        Program { arity, body }
    }

    /// The canonical nowhere-defined program. Every natural that is not a
    /// well-formed program index decodes to it.
    pub fn nowhere_defined() -> Self {
        Program {
            arity: 0,
            body: Term::Undefined,
        }
    }

    pub fn is_nowhere_defined(&self) -> bool {
        matches!(self.body, Term::Undefined)
    }

    pub fn check(&self) -> Result<(), StructError> {
        self.body.check(self.arity)
    }

    pub fn uses_oracle(&self) -> bool {
        self.body.uses_oracle()
    }
}

impl Term {
    pub fn check(&self, arity: usize) -> Result<(), StructError> {
        match self {
            Term::Const(_) | Term::Undefined => Ok(()),
            Term::Proj(i) => {
                if *i < arity {
                    Ok(())
                } else {
                    Err(StructError::ProjOutOfRange { index: *i, arity })
                }
            }
            Term::Succ(t)
            | Term::Pred(t)
            | Term::CantorFst(t)
            | Term::CantorSnd(t)
            | Term::OracleQuery(t) => t.check(arity),
            Term::Add(a, b)
            | Term::Mul(a, b)
            | Term::Eq(a, b)
            | Term::TupleSub(a, b)
            | Term::CantorPair(a, b) => {
                a.check(arity)?;
                b.check(arity)
            }
            Term::IfZero {
                cond,
                then,
                otherwise,
            } => {
                cond.check(arity)?;
                then.check(arity)?;
                otherwise.check(arity)
            }
            Term::Tuple(xs) => xs.iter().try_for_each(|x| x.check(arity)),
            Term::Compose { head, args } => {
                if head.arity != args.len() {
                    return Err(StructError::ComposeArity {
                        head: head.arity,
                        args: args.len(),
                    });
                }
                head.check()?;
                args.iter().try_for_each(|x| x.check(arity))
            }
            Term::Minimize(body) => body.check(arity + 1),
            Term::Eval {
                arity: k,
                code,
                args,
            } => {
                if *k != args.len() {
                    return Err(StructError::EvalArity {
                        declared: *k,
                        args: args.len(),
                    });
                }
                code.check(arity)?;
                args.iter().try_for_each(|x| x.check(arity))
            }
            Term::Smn { code, fixed, .. } => {
                code.check(arity)?;
                fixed.iter().try_for_each(|x| x.check(arity))
            }
        }
    }

    pub fn uses_oracle(&self) -> bool {
        let mut found = false;
        self.visit(&mut |t| found |= matches!(t, Term::OracleQuery(_)));
        found
    }

    /// Pre-order walk over this term and every nested term, including
    /// compose heads.
    pub fn visit(&self, f: &mut dyn FnMut(&Term)) {
        f(self);
        match self {
            Term::Const(_) | Term::Proj(_) | Term::Undefined => {}
            Term::Succ(t)
            | Term::Pred(t)
            | Term::CantorFst(t)
            | Term::CantorSnd(t)
            | Term::OracleQuery(t)
            | Term::Minimize(t) => t.visit(f),
            Term::Add(a, b)
            | Term::Mul(a, b)
            | Term::Eq(a, b)
            | Term::TupleSub(a, b)
            | Term::CantorPair(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Term::IfZero {
                cond,
                then,
                otherwise,
            } => {
                cond.visit(f);
                then.visit(f);
                otherwise.visit(f);
            }
            Term::Tuple(xs) => xs.iter().for_each(|x| x.visit(f)),
            Term::Compose { head, args } => {
                head.body.visit(f);
                args.iter().for_each(|x| x.visit(f));
            }
            Term::Eval { code, args, .. } => {
                code.visit(f);
                args.iter().for_each(|x| x.visit(f));
            }
            Term::Smn { code, fixed, .. } => {
                code.visit(f);
                fixed.iter().for_each(|x| x.visit(f));
            }
        }
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }
}

/// Terse constructors for building programs in Rust code.
pub mod build {
    use super::{Program, Term};
    use crate::nat::{nat, Nat};

    pub fn konst(n: u64) -> Term {
        Term::Const(nat(n))
    }
    pub fn big(n: Nat) -> Term {
        Term::Const(n)
    }
    pub fn proj(i: usize) -> Term {
        Term::Proj(i)
    }
    pub fn succ(t: Term) -> Term {
        Term::Succ(Box::new(t))
    }
    pub fn pred(t: Term) -> Term {
        Term::Pred(Box::new(t))
    }
    pub fn add(a: Term, b: Term) -> Term {
        Term::Add(Box::new(a), Box::new(b))
    }
    pub fn mul(a: Term, b: Term) -> Term {
        Term::Mul(Box::new(a), Box::new(b))
    }
    pub fn eq(a: Term, b: Term) -> Term {
        Term::Eq(Box::new(a), Box::new(b))
    }
    pub fn ifz(cond: Term, then: Term, otherwise: Term) -> Term {
        Term::IfZero {
            cond: Box::new(cond),
            then: Box::new(then),
            otherwise: Box::new(otherwise),
        }
    }
    pub fn tuple(xs: Vec<Term>) -> Term {
        Term::Tuple(xs)
    }
    pub fn sub(x: Term, i: Term) -> Term {
        Term::TupleSub(Box::new(x), Box::new(i))
    }
    pub fn sub_at(x: Term, i: u64) -> Term {
        sub(x, konst(i))
    }
    pub fn cpair(a: Term, b: Term) -> Term {
        Term::CantorPair(Box::new(a), Box::new(b))
    }
    pub fn cfst(x: Term) -> Term {
        Term::CantorFst(Box::new(x))
    }
    pub fn csnd(x: Term) -> Term {
        Term::CantorSnd(Box::new(x))
    }
    pub fn compose(head: Program, args: Vec<Term>) -> Term {
        Term::Compose {
            head: Box::new(head),
            args,
        }
    }
    pub fn mu(body: Term) -> Term {
        Term::Minimize(Box::new(body))
    }
    pub fn eval(code: Term, args: Vec<Term>) -> Term {
        Term::Eval {
            arity: args.len(),
            code: Box::new(code),
            args,
        }
    }
    pub fn smn(rest: usize, code: Term, fixed: Vec<Term>) -> Term {
        Term::Smn {
            rest,
            code: Box::new(code),
            fixed,
        }
    }
    pub fn oracle(t: Term) -> Term {
        Term::OracleQuery(Box::new(t))
    }
    pub fn program(arity: usize, body: Term) -> Program {
        Program::new(arity, body)
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::asm::render(self))
    }
}
