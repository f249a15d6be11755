//! Sweeps checking the defining equations of the closure functions by
//! running both sides.
//!
//! Every case is `Pass`, `Fail` (both sides definite and different, or one
//! defined and the other not) or `Unknown` (some run ran out of fuel).

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::cert::complement;
use super::pool::CodePool;
use super::programs::*;
use crate::coding::{cantor_pair, pair, tuple_subscript_usize, unpair};
use crate::kernel::build::*;
use crate::kernel::{compile, Evaluator, Outcome, Term};
use crate::nat::{nat, Nat};

/// Failures kept per sweep; the counts are always complete.
pub const MAX_RECORDED_FAILURES: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Check {
    Pass,
    Fail(String),
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub case: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sweep {
    pub name: String,
    pub cases: u64,
    pub passed: u64,
    pub failed: u64,
    pub unknown: u64,
    pub failures: Vec<Failure>,
}

impl Sweep {
    pub fn new(name: &str) -> Self {
        Sweep {
            name: name.to_string(),
            cases: 0,
            passed: 0,
            failed: 0,
            unknown: 0,
            failures: vec![],
        }
    }

    pub fn record(&mut self, case: impl FnOnce() -> String, check: Check) {
        self.cases += 1;
        match check {
            Check::Pass => self.passed += 1,
            Check::Unknown => self.unknown += 1,
            Check::Fail(detail) => {
                self.failed += 1;
                if self.failures.len() < MAX_RECORDED_FAILURES {
                    self.failures.push(Failure {
                        case: case(),
                        detail,
                    });
                }
            }
        }
    }

    pub fn from_cases(name: &str, cases: Vec<(String, Check)>) -> Self {
        let mut s = Sweep::new(name);
        for (c, k) in cases {
            s.record(|| c, k);
        }
        s
    }
}

/// Short form of a possibly huge natural for reports.
pub fn abbrev(n: &Nat) -> String {
    let s = n.to_string();
    if s.len() <= 24 {
        s
    } else {
        format!(
            "{}…{} ({} bits)",
            &s[..8],
            &s[s.len() - 8..],
            crate::nat::bits(n)
        )
    }
}

fn show(o: &Outcome) -> String {
    match o {
        Outcome::Halted(v) => format!("halted {}", abbrev(v)),
        Outcome::Undefined => "undefined".into(),
        Outcome::OutOfFuel => "out of fuel".into(),
    }
}

/// Both sides agree: equal values, or both undefined.
pub fn compare(lhs: &Outcome, rhs: &Outcome) -> Check {
    match (lhs, rhs) {
        (Outcome::OutOfFuel, _) | (_, Outcome::OutOfFuel) => Check::Unknown,
        (a, b) if a == b => Check::Pass,
        (a, b) => Check::Fail(format!("left {}, right {}", show(a), show(b))),
    }
}

fn expect(lhs: &Outcome, want: &Nat) -> Check {
    compare(lhs, &Outcome::Halted(want.clone()))
}

fn par_cases<T: Sync>(
    items: &[T],
    f: impl Fn(&mut Evaluator<'_>, &T) -> (String, Check) + Sync,
) -> Vec<(String, Check)> {
    items
        .par_iter()
        .map_init(Evaluator::default, |ev, it| f(ev, it))
        .collect()
}

/// `φ_{g0(a)}(k) = a` for `a, k < n`.
pub fn sweep_g0_constant(n: u64, fuel: u64) -> Sweep {
    let items: Vec<(u64, u64)> = (0..n).flat_map(|a| (0..n).map(move |k| (a, k))).collect();
    let cases = par_cases(&items, |ev, &(a, k)| {
        (
            format!("a={a} k={k}"),
            expect(&ev.apply(&g0(&nat(a)), &[nat(k)], fuel), &nat(a)),
        )
    });
    Sweep::from_cases("g0.constant", cases)
}

/// `φ_{h(e)}(t) = ⟨0, r(e,t)⟩` for `e, t < n`.
pub fn sweep_co_singleton_values(n: u64, fuel: u64) -> Sweep {
    let items: Vec<(u64, u64)> = (0..n).flat_map(|e| (0..n).map(move |t| (e, t))).collect();
    let cases = par_cases(&items, |ev, &(e, t)| {
        let r = if t == e { t + 1 } else { t };
        let got = ev.apply(co_singleton_h(&nat(e)).value(), &[nat(t)], fuel);
        (
            format!("e={e} t={t}"),
            expect(&got, &pair(&nat(0), &nat(r))),
        )
    });
    Sweep::from_cases("co_singleton.values", cases)
}

/// The range of `t ↦ (φ_{h(e)}(t))_1` over `t ≤ m+1` covers `[0,m] \ {e}`
/// and never hits `e`, for each `e < n`.
pub fn sweep_co_singleton_cover(n: u64, m: u64, fuel: u64) -> Sweep {
    let es: Vec<u64> = (0..n).collect();
    let cases = par_cases(&es, |ev, &e| {
        let h = co_singleton_h(&nat(e));
        let mut range = Vec::new();
        for t in 0..=m + 1 {
            match ev.apply(h.value(), &[nat(t)], fuel) {
                Outcome::Halted(v) => range.push(tuple_subscript_usize(&v, 1)),
                Outcome::OutOfFuel => return (format!("e={e}"), Check::Unknown),
                Outcome::Undefined => {
                    return (format!("e={e}"), Check::Fail(format!("undefined at t={t}")))
                }
            }
        }
        let check = if range.contains(&nat(e)) {
            Check::Fail(format!("{e} is in the range"))
        } else if let Some(y) = (0..=m).find(|&y| y != e && !range.contains(&nat(y))) {
            Check::Fail(format!("{y} is missed"))
        } else {
            Check::Pass
        };
        (format!("e={e} m={m}"), check)
    });
    Sweep::from_cases("co_singleton.cover", cases)
}

/// Enumerators used as the `e` of the union equations: the pool's union
/// enumerators, a few arithmetic maps, and a partial one.
pub fn union_corpus(pool: &CodePool) -> Vec<Nat> {
    let mut out: Vec<Nat> = pool
        .certs()
        .iter()
        .filter_map(|c| c.enumerator())
        .map(|i| i.into_nat())
        .collect();
    let extra = [
        program(1, tuple(vec![konst(0), proj(0)])),
        program(1, add(proj(0), konst(10))),
        program(1, konst(7)),
        program(
            1,
            ifz(
                pred(proj(0)),
                tuple(vec![konst(0), konst(4)]),
                Term::Undefined,
            ),
        ),
    ];
    out.extend(
        extra
            .iter()
            .map(|p| compile(p).expect("well formed").into_nat()),
    );
    out
}

fn union_ks() -> Vec<Nat> {
    let mut ks: Vec<Nat> = (0..12).map(nat).collect();
    for i in 0..3u64 {
        for t in 0..2u64 {
            for s in 0..2u64 {
                ks.push(pair(&cantor_pair(&nat(i), &nat(t)), &nat(s)));
            }
        }
    }
    ks
}

/// The union transformer computes its defining right-hand side.
pub fn sweep_union_transformer(corpus: &[Nat], fuel: u64) -> Sweep {
    let p = programs();
    let items: Vec<(usize, Nat)> = (0..corpus.len())
        .flat_map(|i| union_ks().into_iter().map(move |k| (i, k)))
        .collect();
    let cases = par_cases(&items, |ev, (i, k)| {
        let e = &corpus[*i];
        let lhs = ev.apply(
            p.union_phi.value(),
            &[p.e0.0.clone(), e.clone(), k.clone()],
            fuel,
        );
        let rhs = union_phi_reference(ev, e, k, fuel);
        (format!("e#{i} k={}", abbrev(k)), compare(&lhs, &rhs))
    });
    Sweep::from_cases("union.transformer", cases)
}

/// `φ_{s11(e0*,e)}(⟨π(i,t),s⟩) = φ_{g0(φ_e(i))}(⟨t,s⟩)`.
pub fn sweep_union_specialized(corpus: &[Nat], fuel: u64) -> Sweep {
    let items: Vec<(usize, u64, u64, u64)> = (0..corpus.len())
        .flat_map(|c| {
            (0..4u64).flat_map(move |i| {
                (0..3u64).flat_map(move |t| (0..3u64).map(move |s| (c, i, t, s)))
            })
        })
        .collect();
    let cases = par_cases(&items, |ev, &(c, i, t, s)| {
        let e = &corpus[c];
        let k = pair(&cantor_pair(&nat(i), &nat(t)), &nat(s));
        let lhs = ev.apply(&union_body(e), &[k], fuel);
        let rhs = match ev.apply(e, &[nat(i)], fuel) {
            Outcome::Halted(v) => ev.apply(&g0(&v), &[pair(&nat(t), &nat(s))], fuel),
            other => other,
        };
        (format!("e#{c} i={i} t={t} s={s}"), compare(&lhs, &rhs))
    });
    Sweep::from_cases("union.specialized", cases)
}

/// `φ(e0*, e, k) = φ²_{e0*}(e, k) = φ_{s11(e0*,e)}(k)`.
pub fn sweep_union_fixed_point(corpus: &[Nat], fuel: u64) -> Sweep {
    let p = programs();
    let items: Vec<(usize, Nat)> = (0..corpus.len())
        .flat_map(|i| union_ks().into_iter().map(move |k| (i, k)))
        .collect();
    let cases = par_cases(&items, |ev, (i, k)| {
        let e = &corpus[*i];
        let direct = ev.apply(
            p.union_phi.value(),
            &[p.e0.0.clone(), e.clone(), k.clone()],
            fuel,
        );
        let two = ev.apply(p.e0.value(), &[e.clone(), k.clone()], fuel);
        let one = ev.apply(&union_body(e), &[k.clone()], fuel);
        let check = match (compare(&direct, &two), compare(&two, &one)) {
            (Check::Fail(d), _) => Check::Fail(format!("φ vs φ²: {d}")),
            (_, Check::Fail(d)) => Check::Fail(format!("φ² vs s11: {d}")),
            (Check::Unknown, _) | (_, Check::Unknown) => Check::Unknown,
            _ => Check::Pass,
        };
        (format!("e#{i} k={}", abbrev(k)), check)
    });
    Sweep::from_cases("union.fixed_point", cases)
}

fn limit_codes(pool: &CodePool) -> Vec<Nat> {
    pool.certs().iter().map(|c| c.index().clone()).collect()
}

/// `φ_{e1*}(e2, a, m) = φ(e1*, e2, a, m)` with `e2 = d1*`.
pub fn sweep_complement_fixed_point(pool: &CodePool, ms: u64, fuel: u64) -> Sweep {
    let p = programs();
    let codes = limit_codes(pool);
    let items: Vec<(usize, u64)> = (0..codes.len())
        .flat_map(|a| (0..ms).map(move |m| (a, m)))
        .collect();
    let cases = par_cases(&items, |ev, &(a, m)| {
        let args = [p.d1.0.clone(), codes[a].clone(), nat(m)];
        let lhs = ev.apply(p.e1.value(), &args, fuel);
        let mut full = vec![p.e1.0.clone()];
        full.extend(args);
        let rhs = ev.apply(p.compl_phi.value(), &full, fuel);
        (format!("a#{a} m={m}"), compare(&lhs, &rhs))
    });
    Sweep::from_cases("complement.fixed_point", cases)
}

/// `φ_{d1*}(d2, a, t, s) = φ'(d1*, d2, a, t, s)` with `d2 = e1*`.
pub fn sweep_complement_prime_fixed_point(pool: &CodePool, ts: u64, fuel: u64) -> Sweep {
    let p = programs();
    let codes = limit_codes(pool);
    let items: Vec<(usize, u64, u64)> = (0..codes.len())
        .flat_map(|a| (0..ts).flat_map(move |t| (0..ts).map(move |s| (a, t, s))))
        .collect();
    let cases = par_cases(&items, |ev, &(a, t, s)| {
        let args = [p.e1.0.clone(), codes[a].clone(), nat(t), nat(s)];
        let lhs = ev.apply(p.d1.value(), &args, fuel);
        let mut full = vec![p.d1.0.clone()];
        full.extend(args);
        let rhs = ev.apply(p.compl_phi_prime.value(), &full, fuel);
        (format!("a#{a} t={t} s={s}"), compare(&lhs, &rhs))
    });
    Sweep::from_cases("complement.prime_fixed_point", cases)
}

/// `φ_{g(a)}(m) = u3(f(a, (m)_1))` for pooled `a` and `m < ms`.
pub fn sweep_complement_g(pool: &CodePool, ms: u64, fuel: u64) -> Sweep {
    let codes = limit_codes(pool);
    let per_code: Vec<Vec<(String, Check)>> = codes
        .par_iter()
        .enumerate()
        .map_init(Evaluator::default, |ev, (a, code)| {
            let g = complement_g(code);
            let mut rhs: HashMap<Nat, Nat> = HashMap::new();
            (0..ms)
                .map(|m| {
                    let m1 = tuple_subscript_usize(&nat(m), 1);
                    let want = rhs
                        .entry(m1.clone())
                        .or_insert_with(|| u3_index(&complement_f(code, &m1)));
                    (
                        format!("a#{a} m={m}"),
                        expect(&ev.apply(&g, &[nat(m)], fuel), want),
                    )
                })
                .collect()
        })
        .collect();
    Sweep::from_cases("complement.g", per_code.into_iter().flatten().collect())
}

/// The `f` equation and `u2(φ_e(⟨t,s⟩)) = φ_{f(a,t)}(s)`, over pooled `a` and
/// `t, s < ts` where `x = φ_{(a)_1}(⟨t,s⟩)` halts. The second also compares
/// with the complement of the certified child.
pub fn sweep_complement_f_children(pool: &CodePool, ts: u64, fuel: u64) -> (Sweep, Sweep) {
    let certs = pool.certs();
    let items: Vec<(usize, u64)> = (0..certs.len())
        .flat_map(|a| (0..ts).map(move |t| (a, t)))
        .collect();
    type Row = (String, Check, Check);
    let rows: Vec<Vec<Row>> = items
        .par_iter()
        .map_init(
            || (Evaluator::default(), HashMap::<Nat, (Nat, Nat)>::new()),
            |(ev, rhs), &(a, t)| {
                let c = &certs[a];
                let f = complement_f(c.index(), &nat(t));
                let mut out = Vec::new();
                for s in 0..ts {
                    let case = format!("{c} t={t} s={s}");
                    let x = match complement_x(ev, c.index(), &nat(t), &nat(s), fuel) {
                        Outcome::Halted(x) => x,
                        Outcome::Undefined => continue,
                        Outcome::OutOfFuel => {
                            out.push((case, Check::Unknown, Check::Unknown));
                            continue;
                        }
                    };
                    let lhs = ev.apply(&f, &[nat(s)], fuel);
                    let (cb_rhs, u2) = rhs
                        .entry(x.clone())
                        .or_insert_with(|| (complement_f_rhs(&x), u2_index(&x)));
                    let cb = expect(&lhs, cb_rhs);
                    let mut g = expect(&lhs, u2);
                    if g == Check::Pass {
                        if let Some(child) = c.child(&nat(t), &nat(s)) {
                            if complement(&child).index() != u2 {
                                g = Check::Fail("differs from the certified complement".into());
                            }
                        }
                    }
                    out.push((case, cb, g));
                }
                out
            },
        )
        .collect();
    let mut cb = Sweep::new("complement.f");
    let mut g = Sweep::new("complement.children");
    for (case, c1, c2) in rows.into_iter().flatten() {
        cb.record(|| case.clone(), c1);
        g.record(|| case, c2);
    }
    (cb, g)
}

/// `u2` on singleton codes is `u3(h(e))`, and on other codes `⟨1, g(a)⟩`.
pub fn sweep_u2_shape(pool: &CodePool) -> Sweep {
    let mut s = Sweep::new("complement.u2_shape");
    for c in pool.certs() {
        let a = c.index();
        let want = match unpair(a) {
            Some((tag, e)) if tag.is_zero() => u3_index(co_singleton_h(&e).value()),
            _ => pair(&nat(1), &complement_g(a)),
        };
        let check = if u2_index(a) == want && *complement(c).index() == want {
            Check::Pass
        } else {
            Check::Fail("u2 disagrees with its case split".into())
        };
        s.record(|| c.to_string(), check);
    }
    s
}
