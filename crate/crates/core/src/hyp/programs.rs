//! The fixed programs behind the closure functions `u1`, `u2`, `u3`.
//!
//! All of them are built once, on first use, from the kernel builders and
//! the Recursion Theorem. The numeric functions below (`g0`, `h`, `u3`, …)
//! only specialize and pair; they never run a program.

use std::sync::OnceLock;

use crate::coding::{cantor_fst, cantor_snd, pair, tuple_subscript_usize};
use crate::kernel::build::*;
use crate::kernel::{
    compile, kleene_fix, smn as specialize, Evaluator, Index, Outcome, Program, Term,
};
use crate::nat::{nat, Nat};

pub struct Programs {
    /// `(a, k) ↦ a`; `g0(a)` specializes it.
    pub konst: Index,
    /// `(e, t) ↦ ⟨0, r(e,t)⟩`; `h(e)` specializes it.
    pub co_singleton: Index,
    /// The 3-ary transformer whose fixed point is `e0*`.
    pub union_phi: Index,
    pub e0: Index,
    /// The 4-ary transformer whose fixed point is `e1*`.
    pub compl_phi: Index,
    /// The 5-ary transformer whose fixed point is `d1*`.
    pub compl_phi_prime: Index,
    pub e1: Index,
    pub d1: Index,
}

fn index(p: Program) -> Index {
    compile(&p).expect("fixed programs are well formed")
}

/// `g0(v)` as a term.
fn t_g0(konst: &Index, v: Term) -> Term {
    smn(1, big(konst.0.clone()), vec![v])
}

/// `u3(v) = ⟨1, s11(e0*, v)⟩` as a term.
fn t_u3(e0: &Index, v: Term) -> Term {
    tuple(vec![konst(1), smn(1, big(e0.0.clone()), vec![v])])
}

fn build() -> Programs {
    let konst_prog = index(program(2, proj(0)));

    // r(e,t) = t if t ≠ e, t+1 otherwise; eq is 1 on equality
    let r = ifz(eq(proj(1), proj(0)), proj(1), succ(proj(1)));
    let co_singleton = index(program(2, tuple(vec![konst(0), r])));

    // φ(e0, e, k) = φ_{g0(φ_e((k)_0^0))}(⟨(k)_0^1, (k)_1⟩)
    let k0 = || sub_at(proj(2), 0);
    let union_phi = index(program(
        3,
        eval(
            t_g0(&konst_prog, eval(proj(1), vec![cfst(k0())])),
            vec![tuple(vec![csnd(k0()), sub_at(proj(2), 1)])],
        ),
    ));
    let e0 = kleene_fix(&union_phi, 2);

    // φ(e1, e2, a, m) = u3(s31(e2, e1, a, (m)_1))
    let compl_phi = index(program(
        4,
        t_u3(
            &e0,
            smn(1, proj(1), vec![proj(0), proj(2), sub_at(proj(3), 1)]),
        ),
    ));
    let e1 = kleene_fix(&compl_phi, 3);

    // φ'(d1, d2, a, t, s) with x = φ_{(a)_1}(⟨t,s⟩):
    //   u3(h((x)_1)) if (x)_0 = 0, ⟨1, s21(d2, d1, x)⟩ otherwise
    let head = program(
        3,
        ifz(
            sub_at(proj(2), 0),
            t_u3(
                &e0,
                smn(1, big(co_singleton.0.clone()), vec![sub_at(proj(2), 1)]),
            ),
            tuple(vec![konst(1), smn(1, proj(1), vec![proj(0), proj(2)])]),
        ),
    );
    let x = eval(sub_at(proj(2), 1), vec![tuple(vec![proj(3), proj(4)])]);
    let compl_phi_prime = index(program(5, compose(head, vec![proj(0), proj(1), x])));
    let d1 = kleene_fix(&compl_phi_prime, 4);

    Programs {
        konst: konst_prog,
        co_singleton,
        union_phi,
        e0,
        compl_phi,
        compl_phi_prime,
        e1,
        d1,
    }
}

pub fn programs() -> &'static Programs {
    static P: OnceLock<Programs> = OnceLock::new();
    P.get_or_init(build)
}

fn s(code: &Index, fixed: &[Nat]) -> Nat {
    specialize(code, fixed.len(), fixed).0
}

/// `φ_{g0(a)}(k) = a` for every `k`.
pub fn g0(a: &Nat) -> Nat {
    s(&programs().konst, &[a.clone()])
}

pub fn f0(a: &Nat) -> Nat {
    pair(&nat(1), &g0(a))
}

pub fn co_singleton_r(e: &Nat, t: &Nat) -> Nat {
    if t == e {
        t + Nat::ONE
    } else {
        t.clone()
    }
}

pub fn co_singleton_h(e: &Nat) -> Index {
    Index(s(&programs().co_singleton, &[e.clone()]))
}

/// `s11(e0*, e)`.
pub fn union_body(e: &Nat) -> Nat {
    s(&programs().e0, &[e.clone()])
}

pub fn u3_index(e: &Nat) -> Nat {
    pair(&nat(1), &union_body(e))
}

/// `g(a) = s21(e1*, d1*, a)`.
pub fn complement_g(a: &Nat) -> Nat {
    let p = programs();
    s(&p.e1, &[p.d1.0.clone(), a.clone()])
}

/// `f(a,t) = s31(d1*, e1*, a, t)`.
pub fn complement_f(a: &Nat, t: &Nat) -> Nat {
    let p = programs();
    s(&p.d1, &[p.e1.0.clone(), a.clone(), t.clone()])
}

/// Total on all naturals; a complement code only for codes in `I`.
pub fn u2_index(a: &Nat) -> Nat {
    if tuple_subscript_usize(a, 0).is_zero() {
        u3_index(co_singleton_h(&tuple_subscript_usize(a, 1)).value())
    } else {
        pair(&nat(1), &complement_g(a))
    }
}

/// The right-hand side of the defining equation of the union transformer,
/// computed directly: `φ_{g0(φ_e((k)_0^0))}(⟨(k)_0^1, (k)_1⟩)`.
pub fn union_phi_reference(ev: &mut Evaluator<'_>, e: &Nat, k: &Nat, fuel: u64) -> Outcome {
    let k0 = tuple_subscript_usize(k, 0);
    let v = match ev.apply(e, &[cantor_fst(&k0)], fuel) {
        Outcome::Halted(v) => v,
        other => return other,
    };
    ev.apply(
        &g0(&v),
        &[pair(&cantor_snd(&k0), &tuple_subscript_usize(k, 1))],
        fuel,
    )
}

/// `x(a,t,s) = φ_{(a)_1}(⟨t,s⟩)`.
pub fn complement_x(ev: &mut Evaluator<'_>, a: &Nat, t: &Nat, s: &Nat, fuel: u64) -> Outcome {
    ev.apply(&tuple_subscript_usize(a, 1), &[pair(t, s)], fuel)
}

/// The case split on the right of the `f` equation, given `x`.
pub fn complement_f_rhs(x: &Nat) -> Nat {
    if tuple_subscript_usize(x, 0).is_zero() {
        u3_index(co_singleton_h(&tuple_subscript_usize(x, 1)).value())
    } else {
        pair(&nat(1), &complement_g(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::eval;

    const F: u64 = 100_000;

    fn run(e: &Nat, args: &[Nat]) -> Outcome {
        Evaluator::default().apply(e, args, F)
    }

    #[test]
    fn g0_is_constant() {
        for a in [0u64, 1, 17, 99] {
            for k in [0u64, 5, 1000] {
                assert_eq!(run(&g0(&nat(a)), &[nat(k)]), Outcome::Halted(nat(a)));
            }
        }
    }

    #[test]
    fn h_enumerates_singletons() {
        assert_eq!(co_singleton_r(&nat(3), &nat(3)), nat(4));
        assert_eq!(co_singleton_r(&nat(3), &nat(5)), nat(5));
        for t in 0..10u64 {
            let want = pair(&nat(0), &co_singleton_r(&nat(4), &nat(t)));
            assert_eq!(
                eval(&co_singleton_h(&nat(4)), &[nat(t)], F),
                Ok(Outcome::Halted(want))
            );
        }
    }

    #[test]
    fn union_fixed_point_equation() {
        // e enumerates 10, 11, 12, … ; check φ(e0*, e, k) = φ_{s11(e0*, e)}(k)
        let e = compile(&program(1, add(proj(0), konst(10)))).unwrap().0;
        let p = programs();
        let mut ev = Evaluator::default();
        for i in 0..4u64 {
            for t in 0..3u64 {
                for sv in 0..3u64 {
                    let k = pair(&crate::coding::cantor_pair(&nat(i), &nat(t)), &nat(sv));
                    let direct =
                        ev.apply(&p.union_phi.0, &[p.e0.0.clone(), e.clone(), k.clone()], F);
                    let two = ev.apply(&p.e0.0, &[e.clone(), k.clone()], F);
                    let one = ev.apply(&union_body(&e), &[k.clone()], F);
                    let reference = union_phi_reference(&mut ev, &e, &k, F);
                    assert_eq!(direct, Outcome::Halted(nat(10 + i)));
                    assert_eq!(two, direct);
                    assert_eq!(one, direct);
                    assert_eq!(reference, direct);
                }
            }
        }
    }

    #[test]
    fn u2_on_singleton_codes() {
        let a = pair(&nat(0), &nat(3));
        assert_eq!(u2_index(&a), u3_index(co_singleton_h(&nat(3)).value()));
    }
}
