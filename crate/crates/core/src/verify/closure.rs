//! Closure semantics of certified codes: singletons, unions and
//! complements denote what they should, checked three ways.

use std::collections::{HashMap, HashSet};
use std::sync::Mutex;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::coding::unpair;
use crate::formula::{
    psi_decide_at, Cover, Descriptor, Discipline, PsiConfig, SetOracle, ThreeVal,
};
use crate::hyp::{
    build_arithmetical, hset_member_bounded, Cert, Check, CodePool, SetExpr, Shape, Sweep,
};
use crate::nat::{nat, Nat};

/// `x ∈ H(a)` computed from the programs alone: limit codes are unfolded by
/// running their enumerators at the representatives of the registered
/// certificates, all the way down to singleton codes.
pub struct ProgramSemantics {
    by_body: HashMap<Nat, Cert>,
    fuel: u64,
    horizon: u64,
    memo: Mutex<HashMap<(Nat, Nat), ThreeVal>>,
}

impl ProgramSemantics {
    /// Registers every certificate reachable from the pool through children
    /// at the representatives of some `x < horizon`.
    pub fn new(pool: &CodePool, horizon: u64, fuel: u64) -> Self {
        let mut seen: HashSet<Nat> = HashSet::new();
        let mut by_body = HashMap::new();
        let mut level: Vec<Cert> = pool.certs().to_vec();
        while !level.is_empty() {
            level.par_iter().for_each(|c| {
                c.index();
            });
            let mut next = Vec::new();
            for c in level {
                if c.is_singleton() || !seen.insert(c.index().clone()) {
                    continue;
                }
                for x in (0..horizon).map(nat) {
                    for t in c.t_reps(&x) {
                        for s in c.s_reps(&x, &t) {
                            next.push(c.child(&t, &s).expect("limit"));
                        }
                    }
                }
                by_body.insert(c.body().expect("limit"), c);
            }
            level = next;
        }
        ProgramSemantics {
            by_body,
            fuel,
            horizon,
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn registered(&self) -> usize {
        self.by_body.len()
    }

    fn config(&self) -> PsiConfig<'_> {
        PsiConfig {
            bound: 0,
            fuel: self.fuel,
            discipline: Discipline::Cover(self),
        }
    }
}

impl SetOracle for ProgramSemantics {
    fn member(&self, y: &Nat) -> ThreeVal {
        match unpair(y) {
            Some((a, x)) => self.member_pair(&a, &x),
            None => ThreeVal::False,
        }
    }

    fn member_pair(&self, a: &Nat, x: &Nat) -> ThreeVal {
        let key = (a.clone(), x.clone());
        if let Some(&v) = self.memo.lock().expect("memo").get(&key) {
            return v;
        }
        let v = psi_decide_at(a, x, self, &self.config()).0;
        self.memo.lock().expect("memo").insert(key, v);
        v
    }

    fn descriptor(&self) -> Descriptor {
        Descriptor::Certificate {
            pool_size: self.by_body.len(),
            horizon: self.horizon,
        }
    }
}

impl Cover for ProgramSemantics {
    fn t_reps(&self, e: &Nat, x: &Nat) -> Option<Vec<Nat>> {
        self.by_body.get(e).map(|c| c.t_reps(x))
    }

    fn s_reps(&self, e: &Nat, x: &Nat, t: &Nat) -> Option<Vec<Nat>> {
        self.by_body.get(e).map(|c| c.s_reps(x, t))
    }
}

fn cases_over(pool: &CodePool, horizon: u64) -> Vec<(usize, u64)> {
    (0..pool.len())
        .flat_map(|i| (0..horizon).map(move |x| (i, x)))
        .collect()
}

/// Each code against the set operation it was built with, applied to the
/// membership of its parts.
pub fn sweep_closure_structural(pool: &CodePool, horizon: u64) -> Sweep {
    let cases = cases_over(pool, horizon)
        .into_par_iter()
        .map(|(i, x)| {
            let c = &pool.certs()[i];
            let xn = nat(x);
            let want = match c.shape() {
                Shape::Singleton(e) => *e == xn,
                Shape::Constantized(d) => d.member(&xn),
                Shape::Union(cs) => cs.iter().any(|d| d.member(&xn)),
                Shape::CoSingleton(e) => *e != xn,
                Shape::Complement(d) => !d.member(&xn),
                Shape::Row { of, t } => !of.row_holds(t, &xn),
            };
            let got = c.member(&xn);
            let check = if got == want {
                Check::Pass
            } else {
                Check::Fail(format!("member {got}, parts give {want}"))
            };
            (format!("{c} x={x}"), check)
        })
        .collect();
    Sweep::from_cases("closure.structural", cases)
}

/// Each code against [`ProgramSemantics`].
pub fn sweep_closure_programs(pool: &CodePool, horizon: u64, fuel: u64) -> Sweep {
    let sem = ProgramSemantics::new(pool, horizon, fuel);
    let cases = cases_over(pool, horizon)
        .into_par_iter()
        .map(|(i, x)| {
            let c = &pool.certs()[i];
            let want = c.member(&nat(x));
            let got = sem.member_pair(c.index(), &nat(x));
            let check = match got.to_bool() {
                None => Check::Unknown,
                Some(b) if b == want => Check::Pass,
                Some(b) => Check::Fail(format!("programs give {b}, recipe gives {want}")),
            };
            (format!("{c} x={x}"), check)
        })
        .collect();
    Sweep::from_cases("closure.programs", cases)
}

/// The bounded numeric approximation never contradicts the recipe. An
/// undecided approximation counts as passing: only a definite wrong
/// verdict is a failure.
pub fn sweep_closure_bounded(pool: &CodePool, horizon: u64, bound: u64, fuel: u64) -> Sweep {
    let cases = cases_over(pool, horizon)
        .into_par_iter()
        .map(|(i, x)| {
            let c = &pool.certs()[i];
            let want = c.member(&nat(x));
            let got = hset_member_bounded(c.index(), &nat(x), c.norm() + 1, bound, fuel);
            let check = match got.to_bool() {
                Some(b) if b != want => {
                    Check::Fail(format!("bounded check says {b}, recipe says {want}"))
                }
                _ => Check::Pass,
            };
            (format!("{c} x={x}"), check)
        })
        .collect();
    Sweep::from_cases("closure.bounded", cases)
}

fn gen_expr(rng: &mut ChaCha8Rng, depth: u32) -> SetExpr {
    if depth == 0 || rng.gen_bool(0.35) {
        let mut xs: Vec<Nat> = (0..rng.gen_range(1..4))
            .map(|_| nat(rng.gen_range(0..12)))
            .collect();
        xs.sort();
        xs.dedup();
        return SetExpr::Finite(xs);
    }
    match rng.gen_range(0..3) {
        0 => SetExpr::Union(
            (0..rng.gen_range(2..4))
                .map(|_| gen_expr(rng, depth - 1))
                .collect(),
        ),
        1 => SetExpr::Inter((0..2).map(|_| gen_expr(rng, depth - 1)).collect()),
        _ => SetExpr::Complement(Box::new(gen_expr(rng, depth - 1))),
    }
}

/// Random Boolean combinations of finite sets whose codes have norm at
/// most `max_norm`: the code's set equals the combination's set.
pub fn sweep_closure_algebra(exprs: usize, max_norm: u32, horizon: u64, seed: u64) -> Sweep {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xa16);
    let mut picked: Vec<(SetExpr, Cert)> = Vec::new();
    let mut tries = 0;
    while picked.len() < exprs && tries < exprs * 50 {
        tries += 1;
        let e = gen_expr(&mut rng, 3);
        let c = build_arithmetical(&e);
        if c.norm() <= max_norm {
            picked.push((e, c));
        }
    }
    let cases = picked
        .par_iter()
        .flat_map_iter(|(e, c)| {
            (0..horizon).map(move |x| {
                let (want, got) = (e.contains(&nat(x)), c.member(&nat(x)));
                let check = if want == got {
                    Check::Pass
                } else {
                    Check::Fail(format!("code gives {got}, expression {want}"))
                };
                (format!("{e} x={x}"), check)
            })
        })
        .collect();
    Sweep::from_cases("closure.algebra", cases)
}
