//! Shape-directed evaluation of `psi(y, R)`.
//!
//! `y` is decoded as `⟨a,x⟩` and `a` as `⟨tag,e⟩`. Injectivity of the tuple
//! code makes the decoded components the only candidates for the leading
//! existential, so the first branch is decided exactly. The second branch,
//! `∃t ∀s ⟨φ_e(⟨t,s⟩),x⟩ ∈ R`, is decided according to a [`Discipline`].

use serde::Serialize;

use super::oracle::SetOracle;
use super::three_val::ThreeVal;
use crate::coding::{pair, unpair};
use crate::kernel::{Evaluator, Outcome};
use crate::nat::{nat, Nat};

/// Exact representative sets for the second branch at a fixed `x`: if some
/// `t` makes the row true, a listed `t` does; if a row is false at some `s`,
/// it is false at a listed `s`.
pub trait Cover: Sync {
    /// `None` if `e` is not covered.
    fn t_reps(&self, e: &Nat, x: &Nat) -> Option<Vec<Nat>>;

    fn s_reps(&self, e: &Nat, x: &Nat, t: &Nat) -> Option<Vec<Nat>>;
}

#[derive(Clone, Copy)]
pub enum Discipline<'a> {
    /// Quantifiers range over ω: the second branch is never decided.
    Conservative,
    /// Quantifiers range over `[0, bound)`, read as complete.
    Box,
    Cover(&'a dyn Cover),
}

#[derive(Clone, Copy)]
pub struct PsiConfig<'a> {
    pub bound: u64,
    pub fuel: u64,
    pub discipline: Discipline<'a>,
}

impl PsiConfig<'static> {
    pub fn conservative(bound: u64, fuel: u64) -> Self {
        PsiConfig {
            bound,
            fuel,
            discipline: Discipline::Conservative,
        }
    }

    pub fn boxed(bound: u64, fuel: u64) -> Self {
        PsiConfig {
            bound,
            fuel,
            discipline: Discipline::Box,
        }
    }
}

/// The decoded shape of a candidate `y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum PsiShape {
    /// `y` is not a pair code.
    NotPair,
    /// `y = ⟨a,x⟩` but `a` is not `⟨0,e⟩` or `⟨1,e⟩`.
    BadTag {
        #[serde(with = "crate::nat::dec")]
        a: Nat,
        #[serde(with = "crate::nat::dec")]
        x: Nat,
    },
    Base {
        #[serde(with = "crate::nat::dec")]
        e: Nat,
        #[serde(with = "crate::nat::dec")]
        x: Nat,
    },
    Limit {
        #[serde(with = "crate::nat::dec")]
        e: Nat,
        #[serde(with = "crate::nat::dec")]
        x: Nat,
    },
}

pub fn psi_shape(y: &Nat) -> PsiShape {
    let Some((a, x)) = unpair(y) else {
        return PsiShape::NotPair;
    };
    match unpair(&a) {
        Some((tag, e)) if tag.is_zero() => PsiShape::Base { e, x },
        Some((tag, e)) if tag == Nat::ONE => PsiShape::Limit { e, x },
        _ => PsiShape::BadTag { a, x },
    }
}

/// How a verdict of [`psi_decide`] was reached.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PsiEvidence {
    /// Decided by decoding alone.
    Shape,
    /// Every listed `s` satisfies the atom at this `t`.
    Witness {
        #[serde(with = "crate::nat::dec")]
        t: Nat,
        #[serde(with = "crate::nat::dec::vec")]
        s: Vec<Nat>,
    },
    /// For every representative `t`, the paired `s` falsifies the atom.
    Refutation {
        refuters: Vec<Refuter>,
    },
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Refuter {
    #[serde(with = "crate::nat::dec")]
    pub t: Nat,
    #[serde(with = "crate::nat::dec")]
    pub s: Nat,
}

pub fn psi_shape_eval(y: &Nat, r: &dyn SetOracle, cfg: &PsiConfig<'_>) -> ThreeVal {
    psi_decide(y, r, cfg).0
}

/// Bit `m` of `f_psi(A)`.
pub fn f_psi_bit(a: &dyn SetOracle, m: &Nat, cfg: &PsiConfig<'_>) -> ThreeVal {
    psi_shape_eval(m, a, cfg)
}

pub fn psi_decide(y: &Nat, r: &dyn SetOracle, cfg: &PsiConfig<'_>) -> (ThreeVal, PsiEvidence) {
    match unpair(y) {
        Some((a, x)) => psi_decide_at(&a, &x, r, cfg),
        None => (ThreeVal::False, PsiEvidence::Shape),
    }
}

/// [`psi_decide`] at `y = ⟨a,x⟩`, without building `y`.
pub fn psi_decide_at(
    a: &Nat,
    x: &Nat,
    r: &dyn SetOracle,
    cfg: &PsiConfig<'_>,
) -> (ThreeVal, PsiEvidence) {
    match unpair(a) {
        Some((tag, e)) if tag.is_zero() => ((e == *x).into(), PsiEvidence::Shape),
        Some((tag, e)) if tag == Nat::ONE => limit_branch(&e, x, r, cfg),
        _ => (ThreeVal::False, PsiEvidence::Shape),
    }
}

/// The atom `⟨φ_e(⟨t,s⟩),x⟩ ∈ R`.
pub fn psi_atom(
    ev: &mut Evaluator<'_>,
    e: &Nat,
    x: &Nat,
    t: &Nat,
    s: &Nat,
    r: &dyn SetOracle,
    fuel: u64,
) -> ThreeVal {
    match ev.apply(e, &[pair(t, s)], fuel) {
        Outcome::Halted(v) => r.member_pair(&v, x),
        Outcome::Undefined => ThreeVal::False,
        Outcome::OutOfFuel => ThreeVal::Unknown,
    }
}

type SReps<'c> = Box<dyn Fn(&Nat) -> Option<Vec<Nat>> + 'c>;

fn reps<'c>(e: &'c Nat, x: &'c Nat, cfg: &PsiConfig<'c>) -> Option<(Vec<Nat>, SReps<'c>)> {
    match cfg.discipline {
        Discipline::Conservative => None,
        Discipline::Box => {
            let b = cfg.bound;
            Some((
                (0..b).map(nat).collect(),
                Box::new(move |_| Some((0..b).map(nat).collect())),
            ))
        }
        Discipline::Cover(c) => c
            .t_reps(e, x)
            .map(|ts| (ts, Box::new(move |t: &Nat| c.s_reps(e, x, t)) as SReps<'c>)),
    }
}

fn limit_branch(
    e: &Nat,
    x: &Nat,
    r: &dyn SetOracle,
    cfg: &PsiConfig<'_>,
) -> (ThreeVal, PsiEvidence) {
    let undecided = (ThreeVal::Unknown, PsiEvidence::Undecided);
    let Some((ts, s_of)) = reps(e, x, cfg) else {
        return undecided;
    };
    let mut ev = Evaluator::default();
    let mut exists = ThreeVal::False;
    let mut refuters = Vec::new();
    for t in ts {
        let Some(ss) = s_of(&t) else {
            return undecided;
        };
        let mut forall = ThreeVal::True;
        let mut refuter = None;
        for s in &ss {
            forall = forall.and(psi_atom(&mut ev, e, x, &t, s, r, cfg.fuel));
            if forall == ThreeVal::False {
                refuter = Some(s.clone());
                break;
            }
        }
        match forall {
            ThreeVal::True => return (ThreeVal::True, PsiEvidence::Witness { t, s: ss }),
            ThreeVal::False => refuters.push(Refuter {
                t,
                s: refuter.expect("set on false"),
            }),
            ThreeVal::Unknown => exists = ThreeVal::Unknown,
        }
    }
    if exists == ThreeVal::Unknown {
        return undecided;
    }
    (ThreeVal::False, PsiEvidence::Refutation { refuters })
}

/// Re-derives a definite verdict from its evidence alone, without search.
/// Returns `None` if the evidence does not support a definite verdict.
pub fn recheck(
    y: &Nat,
    r: &dyn SetOracle,
    cfg: &PsiConfig<'_>,
    evidence: &PsiEvidence,
) -> Option<bool> {
    let mut ev = Evaluator::default();
    match (psi_shape(y), evidence) {
        (PsiShape::NotPair | PsiShape::BadTag { .. }, PsiEvidence::Shape) => Some(false),
        (PsiShape::Base { e, x }, PsiEvidence::Shape) => Some(e == x),
        (PsiShape::Limit { e, x }, PsiEvidence::Witness { t, s }) => {
            let (_, s_of) = reps(&e, &x, cfg)?;
            if s_of(t)? != *s {
                return None;
            }
            s.iter()
                .all(|s| psi_atom(&mut ev, &e, &x, t, s, r, cfg.fuel) == ThreeVal::True)
                .then_some(true)
        }
        (PsiShape::Limit { e, x }, PsiEvidence::Refutation { refuters }) => {
            let (ts, s_of) = reps(&e, &x, cfg)?;
            if ts.len() != refuters.len() {
                return None;
            }
            for (t, rf) in ts.iter().zip(refuters) {
                if *t != rf.t || !s_of(t)?.contains(&rf.s) {
                    return None;
                }
                if psi_atom(&mut ev, &e, &x, t, &rf.s, r, cfg.fuel) != ThreeVal::False {
                    return None;
                }
            }
            Some(false)
        }
        _ => None,
    }
}
