//! A finite pool of certified codes, the oracle `Q*` it induces, and the
//! check that `Q*` is a fixed point of `f_psi` on the pool.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use super::algebra::{build_arithmetical, SetExpr};
use super::cert::{complement, constantize, u1, union_of, Cert};
use crate::coding::unpair;
use crate::formula::{
    psi_decide_at, Cover, Descriptor, Discipline, PsiConfig, SetOracle, ThreeVal,
};
use crate::nat::{nat, Nat};

/// Certificates closed under the parts they were built from, without
/// repeated codes. Parts come before the certificates using them.
#[derive(Clone, Debug, Default)]
pub struct CodePool {
    certs: Vec<Cert>,
}

impl CodePool {
    pub fn new(roots: &[Cert]) -> Self {
        let mut pool = CodePool::default();
        let mut seen = HashSet::new();
        for r in roots {
            pool.add(r, &mut seen);
        }
        pool
    }

    fn add(&mut self, c: &Cert, seen: &mut HashSet<Nat>) {
        for p in c.parts() {
            self.add(&p, seen);
        }
        if seen.insert(c.index().clone()) {
            self.certs.push(c.clone());
        }
    }

    pub fn certs(&self) -> &[Cert] {
        &self.certs
    }

    pub fn len(&self) -> usize {
        self.certs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.certs.is_empty()
    }

    pub fn max_norm(&self) -> u32 {
        self.certs.iter().map(|c| c.norm()).max().unwrap_or(0)
    }

    /// Every part of every member is a member.
    pub fn is_closed(&self) -> bool {
        let idx: HashSet<&Nat> = self.certs.iter().map(|c| c.index()).collect();
        self.certs
            .iter()
            .all(|c| c.parts().iter().all(|p| idx.contains(p.index())))
    }
}

/// The pool used by the checks: singletons, constant codes, unions and
/// complements up to norm 3.
pub fn shipped_pool() -> CodePool {
    let s3 = u1(3u64);
    let s5 = u1(5u64);
    let s7 = u1(7u64);
    let u35 = union_of(&[s3.clone(), s5.clone()]).expect("non-empty");
    let roots = vec![
        u1(0u64),
        s3.clone(),
        s5.clone(),
        s7.clone(),
        constantize(&s3),
        u35.clone(),
        complement(&s3),
        union_of(&[s7, complement(&s3)]).expect("non-empty"),
        constantize(&constantize(&s3)),
        complement(&complement(&s3)),
        complement(&u35),
        union_of(&[constantize(&s3), u1(0u64)]).expect("non-empty"),
        complement(&constantize(&s5)),
        build_arithmetical(&SetExpr::parse("{1,2,4}").expect("literal")),
    ];
    CodePool::new(&roots)
}

/// `Q* = {⟨a,x⟩ : a certified, x ∈ H(a)}`, answering from the recipes of the
/// pool and of the children the representatives reach for `x < horizon`.
/// Singleton codes are answered for every `x`; other unregistered codes are
/// `Unknown`.
pub struct QStar {
    by_index: HashMap<Nat, Cert>,
    /// Limit certificates keyed by the `E` of `⟨1,E⟩`.
    by_body: HashMap<Nat, Cert>,
    pool_size: usize,
    horizon: u64,
}

impl QStar {
    pub fn new(pool: &CodePool, horizon: u64) -> Self {
        let mut extra: Vec<Cert> = Vec::new();
        for c in pool.certs() {
            for x in (0..horizon).map(nat) {
                for t in c.t_reps(&x) {
                    for s in c.s_reps(&x, &t) {
                        extra.push(c.child(&t, &s).expect("limit"));
                    }
                }
            }
        }
        // the codes are the expensive part
        extra.par_iter().for_each(|c| {
            c.index();
        });
        let mut by_index = HashMap::new();
        let mut by_body = HashMap::new();
        for c in pool.certs().iter().chain(&extra) {
            by_index
                .entry(c.index().clone())
                .or_insert_with(|| c.clone());
            if let Some(e) = c.body() {
                by_body.entry(e).or_insert_with(|| c.clone());
            }
        }
        QStar {
            by_index,
            by_body,
            pool_size: pool.len(),
            horizon,
        }
    }

    pub fn registered(&self) -> usize {
        self.by_index.len()
    }

    pub fn cert(&self, a: &Nat) -> Option<&Cert> {
        self.by_index.get(a)
    }
}

impl SetOracle for QStar {
    fn member(&self, y: &Nat) -> ThreeVal {
        match unpair(y) {
            Some((a, x)) => self.member_pair(&a, &x),
            None => ThreeVal::False,
        }
    }

    fn member_pair(&self, a: &Nat, x: &Nat) -> ThreeVal {
        if let Some(c) = self.by_index.get(a) {
            return c.member(x).into();
        }
        match unpair(a) {
            Some((tag, e)) if tag.is_zero() => (e == *x).into(),
            Some((tag, _)) if tag == Nat::ONE => ThreeVal::Unknown,
            _ => ThreeVal::False,
        }
    }

    fn descriptor(&self) -> Descriptor {
        Descriptor::Certificate {
            pool_size: self.pool_size,
            horizon: self.horizon,
        }
    }
}

impl Cover for QStar {
    fn t_reps(&self, e: &Nat, x: &Nat) -> Option<Vec<Nat>> {
        self.by_body.get(e).map(|c| c.t_reps(x))
    }

    fn s_reps(&self, e: &Nat, x: &Nat, t: &Nat) -> Option<Vec<Nat>> {
        self.by_body.get(e).map(|c| c.s_reps(x, t))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionMismatch {
    pub code: String,
    pub x: u64,
    pub expected: bool,
    pub got: ThreeVal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionReport {
    pub pool_size: usize,
    pub registered: usize,
    pub horizon: u64,
    pub fuel: u64,
    pub checked: u64,
    pub mismatches: Vec<ReductionMismatch>,
}

impl ReductionReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares `psi(⟨a,x⟩, Q*)`, decided by running `a`'s program, with
/// `x ∈ H(a)` from the recipe, for every pool code and every `x < horizon`.
pub fn reduction_identity_check(pool: &CodePool, horizon: u64, fuel: u64) -> ReductionReport {
    let q = QStar::new(pool, horizon);
    let cfg = PsiConfig {
        bound: 0,
        fuel,
        discipline: Discipline::Cover(&q),
    };
    let cases: Vec<(usize, u64)> = (0..pool.len())
        .flat_map(|i| (0..horizon).map(move |x| (i, x)))
        .collect();
    let mismatches: Vec<ReductionMismatch> = cases
        .par_iter()
        .filter_map(|&(i, x)| {
            let c = &pool.certs()[i];
            let expected = c.member(&nat(x));
            let got = psi_decide_at(c.index(), &nat(x), &q, &cfg).0;
            (got != ThreeVal::from(expected)).then(|| ReductionMismatch {
                code: c.to_string(),
                x,
                expected,
                got,
            })
        })
        .collect();
    ReductionReport {
        pool_size: pool.len(),
        registered: q.registered(),
        horizon,
        fuel,
        checked: cases.len() as u64,
        mismatches,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coding::pair;

    #[test]
    fn shipped_pool_is_closed() {
        let p = shipped_pool();
        assert!(p.is_closed());
        assert!(p.len() >= 14);
        assert_eq!(p.max_norm(), 3);
    }

    #[test]
    fn reduction_identity_small_horizon() {
        let r = reduction_identity_check(&shipped_pool(), 12, 100_000);
        assert!(r.passed(), "{:?}", r.mismatches);
        assert_eq!(r.checked, 12 * r.pool_size as u64);
    }

    #[test]
    fn encoded_and_split_forms_agree() {
        let pool = shipped_pool();
        let q = QStar::new(&pool, 4);
        let cfg = PsiConfig {
            bound: 0,
            fuel: 100_000,
            discipline: Discipline::Cover(&q),
        };
        for c in pool.certs().iter().filter(|c| c.norm() <= 1) {
            for x in 0..4u64 {
                let y = pair(c.index(), &nat(x));
                assert_eq!(
                    crate::formula::psi_decide(&y, &q, &cfg),
                    psi_decide_at(c.index(), &nat(x), &q, &cfg)
                );
            }
        }
    }

    #[test]
    fn unregistered_limit_codes_are_unknown() {
        let q = QStar::new(&CodePool::new(&[u1(1u64)]), 4);
        let y = pair(&constantize(&u1(2u64)).index().clone(), &nat(2));
        assert_eq!(q.member(&y), ThreeVal::Unknown);
        assert_eq!(
            q.member(&pair(&u1(2u64).index().clone(), &nat(2))),
            ThreeVal::True
        );
        assert_eq!(q.member(&nat(2)), ThreeVal::False);
    }
}
