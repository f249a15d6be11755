//! Certified codes in `I`.
//!
//! A certificate records how a code was built. From the recipe we know, for
//! every argument `k`, which certificate `φ_E(k)` must be; that is what lets
//! membership in `I`, the norm and membership in `H(a)` be computed without
//! searching over ω.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::coding::{cantor_fst, cantor_pair, pair, tuple_subscript_usize};
use crate::kernel::build::*;
use crate::kernel::{compile, Index};
use crate::nat::{nat, to_usize, Nat};

use super::programs::{co_singleton_h, co_singleton_r, complement_f, complement_g, g0, u3_index};

pub type Cert = Arc<HypCert>;

#[derive(Clone, Debug)]
pub enum Shape {
    /// `⟨0,i⟩`, the set `{i}`.
    Singleton(Nat),
    /// `⟨1,g0(c)⟩`: every child is `c`, so the set is that of `c`.
    Constantized(Cert),
    /// `u3(h(e))`, the set `ω \ {e}`.
    CoSingleton(Nat),
    /// `u3(E)` where `φ_E(i)` is child `min(i, n-1)`.
    Union(Vec<Cert>),
    /// `⟨1,g(c)⟩` for a non-singleton `c`.
    Complement(Cert),
    /// `u3(f(c,t))`: the complement of row `t` of `c`, i.e. of
    /// `⋂_s H(child_c(t,s))`.
    Row { of: Cert, t: Nat },
}

#[derive(Debug)]
pub struct HypCert {
    shape: Shape,
    norm: u32,
    index: OnceLock<Nat>,
    enumerator: OnceLock<Option<Index>>,
}

#[derive(Debug, PartialEq, Eq, thiserror::Error)]
#[error("a union needs at least one member")]
pub struct EmptyUnion;

fn make(shape: Shape) -> Cert {
    let mut c = HypCert {
        shape,
        norm: 0,
        index: OnceLock::new(),
        enumerator: OnceLock::new(),
    };
    c.norm = c.compute_norm();
    Arc::new(c)
}

pub fn u1(i: impl Into<Nat>) -> Cert {
    make(Shape::Singleton(i.into()))
}

pub fn constantize(c: &Cert) -> Cert {
    make(Shape::Constantized(c.clone()))
}

pub fn co_singleton(e: impl Into<Nat>) -> Cert {
    make(Shape::CoSingleton(e.into()))
}

pub fn union_of(children: &[Cert]) -> Result<Cert, EmptyUnion> {
    if children.is_empty() {
        return Err(EmptyUnion);
    }
    Ok(make(Shape::Union(children.to_vec())))
}

/// The code `u2(c)`. A singleton's complement is a co-singleton.
pub fn complement(c: &Cert) -> Cert {
    match &c.shape {
        Shape::Singleton(e) => co_singleton(e.clone()),
        _ => make(Shape::Complement(c.clone())),
    }
}

/// `None` for singletons, which have no rows.
pub fn row(c: &Cert, t: Nat) -> Option<Cert> {
    (!c.is_singleton()).then(|| make(Shape::Row { of: c.clone(), t }))
}

fn cp0(i: &Nat) -> Nat {
    cantor_pair(i, &Nat::ZERO)
}

fn zero() -> Vec<Nat> {
    vec![Nat::ZERO]
}

impl HypCert {
    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn kind(&self) -> &'static str {
        match self.shape {
            Shape::Singleton(_) => "singleton",
            Shape::Constantized(_) => "constantized",
            Shape::CoSingleton(_) => "co_singleton",
            Shape::Union(_) => "union",
            Shape::Complement(_) => "complement",
            Shape::Row { .. } => "row",
        }
    }

    pub fn norm(&self) -> u32 {
        self.norm
    }

    pub fn is_singleton(&self) -> bool {
        matches!(self.shape, Shape::Singleton(_))
    }

    /// The code itself. Computed on first use; limit codes are large.
    pub fn index(&self) -> &Nat {
        self.index.get_or_init(|| match &self.shape {
            Shape::Singleton(i) => pair(&nat(0), i),
            Shape::Constantized(c) => pair(&nat(1), &g0(c.index())),
            Shape::CoSingleton(e) => u3_index(co_singleton_h(e).value()),
            Shape::Union(_) => u3_index(self.enumerator().expect("union").value()),
            Shape::Complement(c) => pair(&nat(1), &complement_g(c.index())),
            Shape::Row { of, t } => u3_index(&complement_f(of.index(), t)),
        })
    }

    /// The `E` in `⟨1,E⟩`; `None` for singletons.
    pub fn body(&self) -> Option<Nat> {
        (!self.is_singleton()).then(|| tuple_subscript_usize(self.index(), 1))
    }

    /// For unions: the program listing the members, saturating at the last.
    pub fn enumerator(&self) -> Option<Index> {
        self.enumerator
            .get_or_init(|| {
                let Shape::Union(cs) = &self.shape else {
                    return None;
                };
                let (last, rest) = cs.split_last().expect("non-empty");
                let mut body = big(last.index().clone());
                for (i, c) in rest.iter().enumerate().rev() {
                    body = ifz(eq(proj(0), konst(i as u64)), body, big(c.index().clone()));
                }
                Some(compile(&program(1, body)).expect("enumerator is well formed"))
            })
            .clone()
    }

    /// Number of distinct members a union enumerates.
    pub fn period(&self) -> Option<usize> {
        match &self.shape {
            Shape::Union(cs) => Some(cs.len()),
            _ => None,
        }
    }

    /// The certificate of `φ_E(⟨t,s⟩)`.
    pub fn child(&self, t: &Nat, s: &Nat) -> Option<Cert> {
        Some(match &self.shape {
            Shape::Singleton(_) => return None,
            Shape::Constantized(c) => c.clone(),
            Shape::Union(cs) => {
                let i = to_usize(&cantor_fst(t))
                    .unwrap_or(usize::MAX)
                    .min(cs.len() - 1);
                cs[i].clone()
            }
            Shape::CoSingleton(e) => u1(co_singleton_r(e, &cantor_fst(t))),
            Shape::Complement(c) => row(c, s.clone()).expect("complement of a non-singleton"),
            Shape::Row { of, t: t0 } => {
                complement(&of.child(t0, &cantor_fst(t)).expect("rows of limits"))
            }
        })
    }

    /// The certificate of `φ_E(k)` for an arbitrary `k`.
    pub fn child_at(&self, k: &Nat) -> Option<Cert> {
        self.child(&tuple_subscript_usize(k, 0), &tuple_subscript_usize(k, 1))
    }

    /// Values of `t` among which the largest child norm is attained.
    pub fn t_norm_reps(&self) -> Vec<Nat> {
        match &self.shape {
            Shape::Singleton(_) => vec![],
            Shape::Union(cs) => (0..cs.len() as u64).map(|i| cp0(&nat(i))).collect(),
            Shape::Row { of, t } => of.s_norm_reps(t).iter().map(cp0).collect(),
            _ => zero(),
        }
    }

    pub fn s_norm_reps(&self, _t: &Nat) -> Vec<Nat> {
        match &self.shape {
            Shape::Singleton(_) => vec![],
            Shape::Complement(c) => c.t_norm_reps(),
            _ => zero(),
        }
    }

    /// Representatives of `t` for membership of `x`: a row containing `x`
    /// exists iff a listed one does.
    pub fn t_reps(&self, x: &Nat) -> Vec<Nat> {
        match &self.shape {
            Shape::Singleton(_) => vec![],
            Shape::Union(_) => self.t_norm_reps(),
            Shape::CoSingleton(_) => vec![cp0(x)],
            Shape::Row { of, t } => of.s_reps(x, t).iter().map(cp0).collect(),
            Shape::Constantized(_) | Shape::Complement(_) => zero(),
        }
    }

    /// Representatives of `s` in row `t`: if some child misses `x`, a listed
    /// one does.
    pub fn s_reps(&self, x: &Nat, _t: &Nat) -> Vec<Nat> {
        match &self.shape {
            Shape::Singleton(_) => vec![],
            Shape::Complement(c) => c.t_reps(x),
            _ => zero(),
        }
    }

    fn compute_norm(&self) -> u32 {
        let mut best: Option<u32> = None;
        for t in self.t_norm_reps() {
            for s in self.s_norm_reps(&t) {
                let n = self.child(&t, &s).expect("limit").norm;
                best = Some(best.map_or(n, |b| b.max(n)));
            }
        }
        best.map_or(0, |b| b + 1)
    }

    /// `x ∈ H(self)`, from the recipe.
    pub fn member(&self, x: &Nat) -> bool {
        match &self.shape {
            Shape::Singleton(i) => i == x,
            Shape::Constantized(c) => c.member(x),
            Shape::Union(cs) => cs.iter().any(|c| c.member(x)),
            Shape::CoSingleton(e) => e != x,
            Shape::Complement(c) => !c.member(x),
            Shape::Row { of, t } => !of.row_holds(t, x),
        }
    }

    /// `∀s. x ∈ H(child(t,s))`.
    pub fn row_holds(&self, t: &Nat, x: &Nat) -> bool {
        match &self.shape {
            Shape::Singleton(_) => false,
            Shape::Constantized(c) => c.member(x),
            Shape::Union(_) => self.child(t, &Nat::ZERO).expect("limit").member(x),
            Shape::CoSingleton(e) => co_singleton_r(e, &cantor_fst(t)) == *x,
            Shape::Complement(c) => !c.member(x),
            Shape::Row { of, t: t0 } => !of.child(t0, &cantor_fst(t)).expect("limit").member(x),
        }
    }

    /// The certificates this one was built from.
    pub fn parts(&self) -> Vec<Cert> {
        match &self.shape {
            Shape::Singleton(_) | Shape::CoSingleton(_) => vec![],
            Shape::Constantized(c) | Shape::Complement(c) | Shape::Row { of: c, .. } => {
                vec![c.clone()]
            }
            Shape::Union(cs) => cs.clone(),
        }
    }
}

/// `H(a)` membership for a certified code.
pub fn hset_member(c: &HypCert, x: &Nat) -> bool {
    c.member(x)
}

impl fmt::Display for HypCert {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.shape {
            Shape::Singleton(i) => write!(f, "{{{i}}}"),
            Shape::Constantized(c) => write!(f, "const({c})"),
            Shape::CoSingleton(e) => write!(f, "~{{{e}}}"),
            Shape::Union(cs) => {
                f.write_str("(")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" | ")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str(")")
            }
            Shape::Complement(c) => write!(f, "~{c}"),
            Shape::Row { of, t } => write!(f, "row({of}, {t})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(x: u64) -> Nat {
        nat(x)
    }

    #[test]
    fn singleton_codes() {
        assert_eq!(u1(0u64).index(), &n(3));
        assert_eq!(u1(3u64).norm(), 0);
        assert!(u1(3u64).member(&n(3)));
        assert!(!u1(3u64).member(&n(4)));
    }

    #[test]
    fn norms() {
        let a = u1(3u64);
        let b = u1(5u64);
        assert_eq!(constantize(&a).norm(), 1);
        assert_eq!(union_of(&[a.clone(), b.clone()]).unwrap().norm(), 1);
        assert_eq!(complement(&a).norm(), 1);
        assert_eq!(complement(&complement(&a)).norm(), 3);
        assert_eq!(complement(&constantize(&a)).norm(), 3);
        assert_eq!(union_of(&[constantize(&a), b]).unwrap().norm(), 2);
        assert_eq!(union_of(&[]).unwrap_err(), EmptyUnion);
    }

    #[test]
    fn membership() {
        let a = u1(3u64);
        let b = u1(5u64);
        let u = union_of(&[a.clone(), b.clone()]).unwrap();
        let cu = complement(&u);
        let ccu = complement(&cu);
        for x in 0..10u64 {
            let inu = x == 3 || x == 5;
            assert_eq!(u.member(&n(x)), inu);
            assert_eq!(cu.member(&n(x)), !inu);
            assert_eq!(ccu.member(&n(x)), inu);
            assert_eq!(complement(&a).member(&n(x)), x != 3);
        }
    }

    #[test]
    fn rows_agree_with_children() {
        // row_holds(t,x) must agree with ∀s over the children, sampled
        let a = u1(3u64);
        let certs = [
            constantize(&a),
            union_of(&[a.clone(), u1(5u64)]).unwrap(),
            complement(&a),
            complement(&union_of(&[a.clone(), u1(5u64)]).unwrap()),
            complement(&complement(&a)),
        ];
        for c in &certs {
            for t in 0..6u64 {
                for x in 0..7u64 {
                    let sampled = (0..6u64).all(|s| c.child(&n(t), &n(s)).unwrap().member(&n(x)));
                    if c.row_holds(&n(t), &n(x)) {
                        assert!(sampled, "{c} t={t} x={x}");
                    }
                }
            }
        }
    }
}
