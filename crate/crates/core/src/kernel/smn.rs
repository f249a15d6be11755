//! Program specialization and the Recursion Theorem.
//!
//! `s^m_n(e, a0..a(m-1))` substitutes the fixed values into the program
//! coded by `e`: `Proj(i)` with `i < m` becomes `Const(a_i)` and the rest
//! shift down by `m`. The specialized program takes exactly as many steps
//! as the original on the combined argument list.

use super::index::{compile, decode_nat, Index};
use super::term::{build, Program, Term};
use crate::nat::Nat;

/// `s^m_n(e, fixed)` with `m = fixed.len()` and `n` read off the program.
/// Indices of programs with fewer than `m` parameters specialize to the
/// nowhere-defined program.
pub fn smn(e: &Index, m: usize, fixed: &[Nat]) -> Index {
    assert_eq!(
        m,
        fixed.len(),
        "smn: m must equal the number of fixed arguments"
    );
    let p = decode_nat(e.value());
    if p.is_nowhere_defined() || p.arity < m {
        return nowhere();
    }
    Index(specialize_program(&p, p.arity - m, fixed))
}

/// The `Smn` node: the code is interpreted at arity `fixed.len() + rest`.
pub(crate) fn specialize_nat(code: &Nat, rest: usize, fixed: &[Nat]) -> Nat {
    let p = decode_nat(code);
    if p.is_nowhere_defined() || p.arity != fixed.len() + rest {
        return nowhere().0;
    }
    specialize_program(&p, rest, fixed)
}

fn nowhere() -> Index {
    compile(&Program::nowhere_defined()).expect("nowhere-defined program compiles")
}

fn specialize_program(p: &Program, rest: usize, fixed: &[Nat]) -> Nat {
    let body = substitute(&p.body, fixed);
    compile(&Program::new(rest, body))
        .expect("substitution preserves well-formedness")
        .0
}

fn substitute(t: &Term, fixed: &[Nat]) -> Term {
    let m = fixed.len();
    let s = |x: &Term| Box::new(substitute(x, fixed));
    let all = |xs: &[Term]| xs.iter().map(|x| substitute(x, fixed)).collect();
    match t {
        Term::Proj(i) if *i < m => Term::Const(fixed[*i].clone()),
        Term::Proj(i) => Term::Proj(i - m),
        Term::Const(_) | Term::Undefined => t.clone(),
        Term::Succ(x) => Term::Succ(s(x)),
        Term::Pred(x) => Term::Pred(s(x)),
        Term::CantorFst(x) => Term::CantorFst(s(x)),
        Term::CantorSnd(x) => Term::CantorSnd(s(x)),
        Term::OracleQuery(x) => Term::OracleQuery(s(x)),
        // the search variable sits above every parameter, so it shifts too
        Term::Minimize(x) => Term::Minimize(s(x)),
        Term::Add(a, b) => Term::Add(s(a), s(b)),
        Term::Mul(a, b) => Term::Mul(s(a), s(b)),
        Term::Eq(a, b) => Term::Eq(s(a), s(b)),
        Term::TupleSub(a, b) => Term::TupleSub(s(a), s(b)),
        Term::CantorPair(a, b) => Term::CantorPair(s(a), s(b)),
        Term::IfZero {
            cond,
            then,
            otherwise,
        } => Term::IfZero {
            cond: s(cond),
            then: s(then),
            otherwise: s(otherwise),
        },
        Term::Tuple(xs) => Term::Tuple(all(xs)),
        // the head is its own scope
        Term::Compose { head, args } => Term::Compose {
            head: head.clone(),
            args: all(args),
        },
        Term::Eval { arity, code, args } => Term::Eval {
            arity: *arity,
            code: s(code),
            args: all(args),
        },
        Term::Smn {
            rest,
            code,
            fixed: fx,
        } => Term::Smn {
            rest: *rest,
            code: s(code),
            fixed: all(fx),
        },
    }
}

/// A fixed point of the transformer `d`: an index `e*` of arity `n` with
/// `φ_{e*}(x̄) ≃ φ_d(e*, x̄)`.
///
/// `b(y, x̄) = φ_d(s^1_n(y, y), x̄)` and `e* = s^1_n(b, b)`; running `e*`
/// rebuilds itself through the `Smn` node and hands itself to `d`.
pub fn kleene_fix(d: &Index, n: usize) -> Index {
    use build::*;
    let mut args = vec![build::smn(n, proj(0), vec![proj(0)])];
    args.extend((1..=n).map(proj));
    let b = compile(&program(n + 1, eval(big(d.0.clone()), args)))
        .expect("fixed-point scaffold compiles");
    let bv = b.0.clone();
    self::smn(&b, 1, &[bv])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::eval::{eval, Outcome};
    use crate::kernel::term::build::*;
    use crate::nat::nat;

    fn idx(arity: usize, body: Term) -> Index {
        compile(&program(arity, body)).unwrap()
    }

    #[test]
    fn specialized_addition() {
        let add2 = idx(2, add(proj(0), proj(1)));
        let e = super::smn(&add2, 1, &[nat(3)]);
        assert_eq!(eval(&e, &[nat(4)], 100), Ok(Outcome::Halted(nat(7))));
    }

    #[test]
    fn zero_specialization_is_identity_on_compiled_indices() {
        let e = idx(2, mul(proj(0), succ(proj(1))));
        assert_eq!(super::smn(&e, 0, &[]), e);
    }

    #[test]
    fn fuel_is_preserved_exactly() {
        let e = idx(
            3,
            ifz(proj(0), add(proj(1), proj(2)), mu(eq(proj(3), proj(2)))),
        );
        for a in 0..3u64 {
            let s = super::smn(&e, 1, &[nat(a)]);
            for x in 0..4u64 {
                for y in 0..4u64 {
                    for f in 0..30 {
                        assert_eq!(
                            eval(&s, &[nat(x), nat(y)], f),
                            eval(&e, &[nat(a), nat(x), nat(y)], f)
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn too_few_parameters_gives_nowhere_defined() {
        let e = idx(1, proj(0));
        let s = super::smn(&e, 2, &[nat(1), nat(2)]);
        assert!(decode_nat(s.value()).is_nowhere_defined());
    }

    #[test]
    fn successor_transformer() {
        let d = idx(2, succ(proj(1)));
        let e = kleene_fix(&d, 1);
        for x in 0..10 {
            assert_eq!(eval(&e, &[nat(x)], 1000), Ok(Outcome::Halted(nat(x + 1))));
        }
    }

    #[test]
    fn quine() {
        let d = idx(2, proj(0));
        let e = kleene_fix(&d, 1);
        for x in 0..5 {
            assert_eq!(eval(&e, &[nat(x)], 1000), Ok(Outcome::Halted(e.0.clone())));
        }
    }

    #[test]
    fn self_application_diverges() {
        let d = idx(2, build::eval(proj(0), vec![proj(1)]));
        let e = kleene_fix(&d, 1);
        for f in [10, 1000, 20_000] {
            assert_eq!(eval(&e, &[nat(3)], f), Ok(Outcome::OutOfFuel));
        }
    }

    #[test]
    fn runtime_smn_node_matches_library_smn() {
        let add2 = idx(2, add(proj(0), proj(1)));
        let viaprog = idx(1, build::smn(1, big(add2.0.clone()), vec![proj(0)]));
        for a in 0..5 {
            let got = eval(&viaprog, &[nat(a)], 100).unwrap();
            assert_eq!(got, Outcome::Halted(super::smn(&add2, 1, &[nat(a)]).0));
        }
    }
}
