//! Laws of the programming system and of the operator layer, checked on
//! generated and hand-picked corpora.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::coding::pair;
use crate::fixpoint::{
    exhaustive_least_fixed_point, lfp_finite, random_nested_pairs, Operator, StageSet,
};
use crate::formula::{
    builtin_info, check_positive, f_psi_bit, parse, FiniteSet, PsiConfig, ThreeVal, BUILTINS,
};
use crate::hyp::{compare, Check, Sweep};
use crate::kernel::build::*;
use crate::kernel::{compile, kleene_fix, Evaluator, Index, Outcome, Program, Term};
use crate::nat::{nat, Nat};

fn gen_leaf(rng: &mut ChaCha8Rng, arity: usize) -> Term {
    if arity > 0 && rng.gen_bool(0.6) {
        proj(rng.gen_range(0..arity))
    } else {
        konst(rng.gen_range(0..6))
    }
}

/// A random term over the first `arity` arguments, inside `ctx >= arity`
/// arguments in scope (searches append their variable). A search body
/// never mentions its own variable, so it is zero at `y = 0` or `y = 1`
/// and every search halts. About one in forty nodes is nowhere defined.
fn gen_term(rng: &mut ChaCha8Rng, arity: usize, depth: u32) -> Term {
    gen_in(rng, arity, arity, depth)
}

fn gen_in(rng: &mut ChaCha8Rng, arity: usize, ctx: usize, depth: u32) -> Term {
    if depth == 0 {
        return gen_leaf(rng, arity);
    }
    let d = depth - 1;
    let sub = |rng: &mut ChaCha8Rng| gen_in(rng, arity, ctx, d);
    match rng.gen_range(0..40) {
        0..=5 => gen_leaf(rng, arity),
        6..=8 => succ(sub(rng)),
        9..=10 => pred(sub(rng)),
        11..=13 => add(sub(rng), sub(rng)),
        14..=15 => mul(sub(rng), gen_leaf(rng, arity)),
        16..=17 => eq(sub(rng), sub(rng)),
        18..=21 => ifz(sub(rng), sub(rng), sub(rng)),
        22..=23 => tuple((0..rng.gen_range(0..3)).map(|_| sub(rng)).collect()),
        24..=25 => sub_at(sub(rng), rng.gen_range(0..2)),
        26..=27 => cpair(sub(rng), sub(rng)),
        28 => cfst(sub(rng)),
        29 => csnd(sub(rng)),
        30..=31 => {
            let inner = rng.gen_range(1..3);
            let head = program(inner, gen_term(rng, inner, d));
            compose(head, (0..inner).map(|_| sub(rng)).collect())
        }
        32..=33 => {
            // least y with [y = t] = 0, where t does not depend on y
            let t = gen_in(rng, arity, ctx + 1, d);
            mu(eq(proj(ctx), t))
        }
        34..=35 => {
            let code =
                compile(&program(1, gen_term(rng, 1, d))).expect("generated terms are well formed");
            eval(big(code.into_nat()), vec![sub(rng)])
        }
        36..=37 => {
            let code =
                compile(&program(2, gen_term(rng, 2, d))).expect("generated terms are well formed");
            eval(smn(1, big(code.into_nat()), vec![sub(rng)]), vec![sub(rng)])
        }
        38 => sub(rng),
        _ => Term::Undefined,
    }
}

/// `n` random programs of arity 1 to 4, reproducible from the seed.
pub fn program_corpus(n: usize, seed: u64) -> Vec<Program> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let arity = 1 + i % 4;
            program(arity, gen_term(&mut rng, arity, 4))
        })
        .collect()
}

/// `φ_{s^m_n(e, ā)}(x̄) = φ_e(ā, x̄)` on `programs` generated programs, with
/// `samples` argument vectors below 50 for each.
pub fn sweep_smn(programs: usize, samples: usize, seed: u64, fuel: u64) -> Sweep {
    let corpus = program_corpus(programs, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut items = Vec::new();
    for (i, p) in corpus.iter().enumerate() {
        for _ in 0..samples {
            let m = rng.gen_range(0..=p.arity);
            let args: Vec<Nat> = (0..p.arity).map(|_| nat(rng.gen_range(0..50))).collect();
            items.push((i, m, args));
        }
    }
    let codes: Vec<Index> = corpus
        .iter()
        .map(|p| compile(p).expect("generated terms are well formed"))
        .collect();
    let cases = items
        .par_iter()
        .map_init(Evaluator::default, |ev, (i, m, args)| {
            let e = &codes[*i];
            let (fixed, rest) = args.split_at(*m);
            let lhs = ev.apply(crate::kernel::smn(e, *m, fixed).value(), rest, fuel);
            let rhs = ev.apply(e.value(), args, fuel);
            (
                format!("program#{i} m={m} args={args:?}"),
                compare(&lhs, &rhs),
            )
        })
        .collect();
    Sweep::from_cases("kernel.smn", cases)
}

/// A program transformer `d` of arity `n + 1` whose fixed point has arity `n`.
#[derive(Clone, Debug)]
pub struct Transformer {
    pub name: String,
    pub n: usize,
    pub d: Program,
}

fn tr(name: &str, n: usize, body: Term) -> Transformer {
    Transformer {
        name: name.to_string(),
        n,
        d: program(n + 1, body),
    }
}

/// Hand-written transformers (including the quine `d(e, x) = e` and
/// recursive definitions through `eval`) followed by `generated` random
/// ones that use their own index as data.
pub fn transformer_corpus(generated: usize, seed: u64) -> Vec<Transformer> {
    let me = || proj(0);
    let x = || proj(1);
    let mut out = vec![
        tr("quine", 1, me()),
        tr("constant", 1, konst(7)),
        tr("successor", 1, succ(x())),
        tr("self-and-argument", 1, tuple(vec![me(), x()])),
        tr(
            "double",
            1,
            ifz(x(), konst(0), add(eval(me(), vec![pred(x())]), konst(2))),
        ),
        tr(
            "factorial",
            1,
            ifz(x(), konst(1), mul(x(), eval(me(), vec![pred(x())]))),
        ),
        tr(
            "triangle",
            1,
            ifz(x(), konst(0), add(x(), eval(me(), vec![pred(x())]))),
        ),
        tr(
            "parity",
            1,
            ifz(
                x(),
                konst(0),
                ifz(eval(me(), vec![pred(x())]), konst(1), konst(0)),
            ),
        ),
        tr("self-test", 1, eq(me(), me())),
        tr("partial", 1, ifz(x(), Term::Undefined, x())),
        tr(
            "unbounded-search",
            1,
            mu(ifz(eq(proj(2), succ(x())), konst(1), konst(0))),
        ),
        tr(
            "self-specialization",
            1,
            ifz(x(), konst(5), eval(smn(0, me(), vec![pred(x())]), vec![])),
        ),
        tr("plus", 2, add(proj(1), proj(2))),
        tr(
            "times",
            2,
            ifz(
                proj(2),
                konst(0),
                add(proj(1), eval(me(), vec![proj(1), pred(proj(2))])),
            ),
        ),
        tr(
            "ackermann-like",
            2,
            ifz(
                proj(1),
                succ(proj(2)),
                ifz(proj(2), eval(me(), vec![pred(proj(1)), konst(1)]), konst(3)),
            ),
        ),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xf1f);
    for i in 0..generated {
        out.push(tr(&format!("generated#{i}"), 1, gen_term(&mut rng, 2, 3)));
    }
    out
}

/// `φ_{e*}(x̄) = φ_d(e*, x̄)` for `e* = kleene_fix(d)` with arguments below
/// 8, and `φ_{e*}(x) = e*` for the quine.
pub fn sweep_recursion(generated: usize, seed: u64, fuel: u64) -> Sweep {
    let corpus = transformer_corpus(generated, seed);
    let rows: Vec<Vec<(String, Check)>> = corpus
        .par_iter()
        .map_init(Evaluator::default, |ev, t| {
            let d = compile(&t.d).expect("transformers are well formed");
            let fix = kleene_fix(&d, t.n);
            let points: Vec<Vec<Nat>> = match t.n {
                1 => (0..8).map(|x| vec![nat(x)]).collect(),
                _ => (0..4)
                    .flat_map(|a| (0..4).map(move |b| vec![nat(a), nat(b)]))
                    .collect(),
            };
            let mut out = Vec::new();
            for xs in points {
                let lhs = ev.apply(fix.value(), &xs, fuel);
                let mut full = vec![fix.0.clone()];
                full.extend(xs.iter().cloned());
                let rhs = ev.apply(d.value(), &full, fuel);
                let mut check = compare(&lhs, &rhs);
                if t.name == "quine"
                    && check == Check::Pass
                    && lhs != Outcome::Halted(fix.0.clone())
                {
                    check = Check::Fail("the quine does not return its own index".into());
                }
                out.push((format!("{} x={xs:?}", t.name), check));
            }
            out
        })
        .collect();
    Sweep::from_cases("kernel.recursion", rows.into_iter().flatten().collect())
}

/// `Φ_psi(A) ⊆ Φ_psi(B)` for random `A ⊆ B ⊆ [0, universe)`, read at the
/// definite-True level.
pub fn sweep_monotonicity(universe: u64, trials: usize, seed: u64) -> Sweep {
    let op = Operator::new(crate::formula::builtin("psi").expect("builtin"))
        .expect("psi has one free variable");
    let cases = random_nested_pairs(universe, trials, seed)
        .into_iter()
        .enumerate()
        .map(|(i, (a, b))| {
            let check = match (op.apply(&a, universe), op.apply(&b, universe)) {
                (Ok(fa), Ok(fb)) if fa.is_subset(&fb) => Check::Pass,
                (Ok(fa), Ok(fb)) => {
                    Check::Fail(format!("lost {:?}", fa.difference(&fb).collect::<Vec<_>>()))
                }
                (Err(e), _) | (_, Err(e)) => Check::Fail(e.to_string()),
            };
            (format!("trial#{i} |A|={} |B|={}", a.len(), b.len()), check)
        })
        .collect();
    Sweep::from_cases("operator.monotonicity", cases)
}

/// Codes the `f_psi_bit` samples are drawn from: base codes, limit codes of
/// small enumerators, and plain numbers.
fn bit_universe() -> (Vec<Nat>, Vec<Nat>) {
    let enumerators = [
        program(1, tuple(vec![konst(0), konst(2)])),
        program(1, tuple(vec![konst(0), cfst(proj(0))])),
        program(
            1,
            ifz(
                csnd(proj(0)),
                tuple(vec![konst(0), konst(1)]),
                tuple(vec![konst(0), konst(3)]),
            ),
        ),
        program(1, tuple(vec![konst(0), sub_at(proj(0), 1)])),
        program(1, Term::Undefined),
    ];
    let mut codes: Vec<Nat> = (0..4).map(|e| pair(&nat(0), &nat(e))).collect();
    codes.extend(
        enumerators
            .iter()
            .map(|p| pair(&nat(1), compile(p).expect("well formed").value())),
    );
    codes.extend((0..3).map(nat));
    let members: Vec<Nat> = codes
        .iter()
        .flat_map(|a| (0..4).map(move |x| pair(a, &nat(x))))
        .collect();
    (codes, members)
}

/// `f_psi(A)` at bit `m` is monotone in `A`: a true bit stays true and a
/// false bit was already false, for `A ⊆ A'` drawn around pair codes.
pub fn sweep_f_psi_bit(samples: usize, bound: u64, seed: u64, fuel: u64) -> Sweep {
    let (codes, members) = bit_universe();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xb17);
    let items: Vec<(FiniteSet, FiniteSet, Nat)> = (0..samples)
        .map(|_| {
            let big: FiniteSet = members
                .iter()
                .filter(|_| rng.gen_bool(0.6))
                .cloned()
                .collect();
            let small: FiniteSet = big
                .0
                .iter()
                .filter(|_| rng.gen_bool(0.5))
                .cloned()
                .collect();
            let a = &codes[rng.gen_range(0..codes.len())];
            (small, big, pair(a, &nat(rng.gen_range(0..4))))
        })
        .collect();
    let cfg = PsiConfig::boxed(bound, fuel);
    let cases = items
        .par_iter()
        .enumerate()
        .map(|(i, (small, big, m))| {
            let lo = f_psi_bit(small, m, &cfg);
            let hi = f_psi_bit(big, m, &cfg);
            let check = match (lo, hi) {
                (ThreeVal::True, ThreeVal::False | ThreeVal::Unknown)
                | (ThreeVal::Unknown, ThreeVal::False) => {
                    Check::Fail(format!("{lo} on the smaller set, {hi} on the larger"))
                }
                _ => Check::Pass,
            };
            (format!("sample#{i}"), check)
        })
        .collect();
    Sweep::from_cases("operator.f_psi_bit", cases)
}

#[derive(Clone, Copy, Debug)]
pub struct LfpCase {
    pub source: &'static str,
    pub universe: u64,
}

/// Small positive formulas in `x` and `R`.
pub fn lfp_corpus() -> Vec<LfpCase> {
    let c = |source, universe| LfpCase { source, universe };
    vec![
        c("x = 0 \\/ exists y. y + 1 = x /\\ y in R", 12),
        c("x in R", 12),
        c("x = 3", 10),
        c("x = 5 \\/ exists y. x + 1 = y /\\ y in R", 12),
        c(
            "x = 1 \\/ exists y. exists z. x = y + z /\\ y in R /\\ z in R",
            12,
        ),
        c("x = 2 \\/ exists y. x = y * 2 /\\ y in R", 12),
        c("x = 1 \\/ exists y. x = y * 3 /\\ y in R", 12),
        c("x = 0 \\/ forall y. (~(y + 1 = x) \\/ y in R)", 10),
        c("x = 4 \\/ exists y. y in R /\\ x = y + 1", 11),
        c(
            "x = 0 \\/ (exists y. y in R /\\ x = y + 3) \\/ (exists y. y in R /\\ x = y + 5)",
            12,
        ),
        c("x in R /\\ x = 3", 8),
        c("x = 7 \\/ x in R", 9),
        c(
            "x = 6 \\/ exists y. y in R /\\ (x = y + 1 \\/ y = x + 1)",
            12,
        ),
        c(
            "x = 0 \\/ exists y. exists z. y in R /\\ z in R /\\ x = y + z + 1",
            12,
        ),
        c("x = 1 \\/ exists y. y in R /\\ x = y * y", 12),
        c("x = 2 \\/ exists y. y in R /\\ x = y * y", 12),
        c("x = x /\\ forall y. y in R", 8),
        c(
            "x = 0 \\/ exists y. y in R /\\ x = y + 1 /\\ exists z. z in R /\\ z + 2 = x",
            12,
        ),
        c("exists y. x = pair(y, y) /\\ (y = 0 \\/ y in R)", 12),
        c(
            "x = 1 \\/ x = 2 \\/ exists y. exists z. y in R /\\ z in R /\\ x = y * z",
            12,
        ),
    ]
}

/// The iterated least fixed point equals the ⊆-least fixed point found by
/// checking every subset of the universe.
pub fn sweep_lfp_leastness(corpus: &[LfpCase]) -> Sweep {
    let cases = corpus
        .iter()
        .map(|c| {
            let run = || -> Result<(StageSet, Option<StageSet>), String> {
                let op = Operator::new(parse(c.source).map_err(|e| e.to_string())?)
                    .map_err(|e| e.to_string())?;
                let trace =
                    lfp_finite(&op, c.universe, c.universe + 1).map_err(|e| e.to_string())?;
                if trace.stabilized_at.is_none() || trace.undecided > 0 {
                    return Err("iteration did not stabilize on decided stages".into());
                }
                let least =
                    exhaustive_least_fixed_point(&op, c.universe).map_err(|e| e.to_string())?;
                Ok((trace.last().clone(), least))
            };
            let check = match run() {
                Ok((iterated, Some(least))) if iterated == least => Check::Pass,
                Ok((iterated, least)) => {
                    Check::Fail(format!("iterated {iterated:?}, exhaustive {least:?}"))
                }
                Err(e) => Check::Fail(e),
            };
            (format!("N={} {}", c.universe, c.source), check)
        })
        .collect();
    Sweep::from_cases("lfp.leastness", cases)
}

/// Formulas with the relation symbol under a negation or an implication.
pub fn positivity_corpus() -> Vec<&'static str> {
    vec![
        "~(x in R)",
        "x notin R",
        "x in R -> x = 0",
        "(x in R -> x = 1) -> x = 2",
        "exists y. ~(y in R) /\\ x = y",
        "forall y. y in R -> y = x",
        "x = 0 \\/ ~(x + 1 in R)",
        "~~(x in R)",
        "~(x = 0 /\\ x in R)",
        "exists y. y + 1 = x /\\ ~(y in R)",
        "x = 0 \\/ (0 in R -> x = 1)",
        "~(exists y. y in R)",
        "forall y. ~(pair(x, y) in R)",
        "x in R /\\ ~(x * x in R)",
        "exists e. app(e, x) notin R",
        "(x = 1 -> 1 in R) -> x in R",
        "~(forall s. pair(s, x) in R)",
        "exists t. forall s. ~(pair(app(t, s), x) in R)",
        "x = 2 \\/ ~(~(x in R) \\/ x = 3)",
        "forall y. (y in R -> y + 1 in R)",
    ]
}

/// The builtins are positive in their symbol and every corpus formula is
/// rejected.
pub fn sweep_positivity() -> Sweep {
    let mut cases = Vec::new();
    for b in BUILTINS {
        let info = builtin_info(b.name).expect("listed builtin");
        let f = parse(info.source).expect("builtin sources parse");
        let check = if check_positive(&f, info.symbol) {
            Check::Pass
        } else {
            Check::Fail("rejected".into())
        };
        cases.push((format!("accept {}", b.name), check));
    }
    for src in positivity_corpus() {
        let check = match parse(src) {
            Ok(f) if check_positive(&f, "R") => Check::Fail("accepted".into()),
            Ok(_) => Check::Pass,
            Err(e) => Check::Fail(format!("does not parse: {e}")),
        };
        cases.push((format!("reject {src}"), check));
    }
    Sweep::from_cases("positivity.corpus", cases)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clean(s: &Sweep) {
        assert_eq!(
            (s.failed, s.unknown),
            (0, 0),
            "{}: {:?}",
            s.name,
            s.failures
        );
        assert!(s.cases > 0);
    }

    #[test]
    fn corpora_are_reproducible() {
        assert_eq!(program_corpus(30, 4), program_corpus(30, 4));
        assert_ne!(program_corpus(30, 4), program_corpus(30, 5));
        assert!(transformer_corpus(5, 1).len() >= 20);
    }

    #[test]
    fn small_law_sweeps_pass() {
        clean(&sweep_smn(40, 3, 1, 100_000));
        clean(&sweep_recursion(5, 1, 100_000));
        clean(&sweep_positivity());
        clean(&sweep_f_psi_bit(20, 6, 1, 100_000));
    }

    #[test]
    fn leastness_on_a_few_formulas() {
        let corpus: Vec<LfpCase> = lfp_corpus()
            .into_iter()
            .take(4)
            .map(|c| LfpCase { universe: 6, ..c })
            .collect();
        clean(&sweep_lfp_leastness(&corpus));
    }

    #[test]
    fn monotonicity_on_a_small_universe() {
        let s = sweep_monotonicity(8, 10, 2);
        clean(&s);
        assert_eq!(s.cases, 10);
    }
}
