use std::collections::BTreeSet;

use posfix::coding::pair;
use posfix::fixpoint::{
    exhaustive_least_fixed_point, find_fixed_point_violations, lfp_finite, Operator, Side, StageSet,
};
use posfix::formula::{
    builtin, check_positive, eval_bounded, parse, psi_decide, Env, EvalMode, FiniteSet, PsiConfig,
    ThreeVal, BUILTINS,
};
use posfix::verify::{lfp_corpus, positivity_corpus};
use posfix::{nat, Nat};
use proptest::prelude::*;

const N: u64 = 16;

fn env(x: u64) -> Env {
    Env::from([("x".to_string(), nat(x))])
}

fn finite(a: &BTreeSet<u64>) -> FiniteSet {
    FiniteSet::from_u64s(a.iter().copied())
}

fn subset(limit: u64) -> impl Strategy<Value = BTreeSet<u64>> {
    proptest::collection::btree_set(0..limit, 0..limit as usize)
}

#[test]
fn every_formula_prints_and_reparses() {
    let mut sources: Vec<String> = lfp_corpus().iter().map(|c| c.source.to_string()).collect();
    sources.extend(positivity_corpus().iter().map(|s| s.to_string()));
    for src in sources {
        let f = parse(&src).unwrap();
        assert_eq!(parse(&f.to_string()).unwrap(), f, "{src}");
    }
    for name in BUILTINS.map(|b| b.name) {
        let f = builtin(name).unwrap();
        assert_eq!(parse(&f.to_string()).unwrap(), f, "{name}");
    }
}

#[test]
fn positivity_classification() {
    for b in BUILTINS {
        assert!(
            check_positive(&builtin(b.name).unwrap(), b.symbol),
            "{}",
            b.name
        );
    }
    for src in positivity_corpus() {
        assert!(!check_positive(&parse(src).unwrap(), "R"), "{src}");
    }
    assert!(check_positive(&parse("~(x = 1) \\/ x in R").unwrap(), "R"));
}

#[test]
fn conservative_quantifiers_only_decide_with_evidence() {
    let e = Env::new();
    let some = parse("exists y. y in R").unwrap();
    let all = parse("forall y. y in R").unwrap();
    let mode = EvalMode::ConservativeOmega(N);
    assert_eq!(
        eval_bounded(&some, &e, &FiniteSet::from_u64s([9]), mode).unwrap(),
        ThreeVal::True
    );
    assert_eq!(
        eval_bounded(&some, &e, &FiniteSet::empty(), mode).unwrap(),
        ThreeVal::Unknown
    );
    assert_eq!(
        eval_bounded(&all, &e, &FiniteSet::from_u64s([0, 1]), mode).unwrap(),
        ThreeVal::False
    );
    assert_eq!(
        eval_bounded(&all, &e, &FiniteSet::from_u64s(0..N), mode).unwrap(),
        ThreeVal::Unknown
    );
    let finite_mode = EvalMode::FiniteUniverse(N);
    assert_eq!(
        eval_bounded(&some, &e, &FiniteSet::empty(), finite_mode).unwrap(),
        ThreeVal::False
    );
    assert_eq!(
        eval_bounded(&all, &e, &FiniteSet::from_u64s(0..N), finite_mode).unwrap(),
        ThreeVal::True
    );
}

#[test]
fn psi_base_codes_are_decided_by_shape() {
    let cfg = PsiConfig::conservative(64, 100_000);
    let empty = FiniteSet::empty();
    for e in 0..6u64 {
        for x in 0..6u64 {
            let y = pair(&pair(&Nat::ZERO, &nat(e)), &nat(x));
            assert_eq!(
                psi_decide(&y, &empty, &cfg).0,
                ThreeVal::from(e == x),
                "e={e} x={x}"
            );
        }
    }
    // not a pair code, and a pair whose tag is 2
    assert_eq!(psi_decide(&nat(5), &empty, &cfg).0, ThreeVal::False);
    let bad_tag = pair(&pair(&nat(2), &nat(0)), &nat(0));
    assert_eq!(psi_decide(&bad_tag, &empty, &cfg).0, ThreeVal::False);
}

#[test]
fn fixed_point_violations_near_zero() {
    let cfg = PsiConfig::conservative(64, 100_000);
    // <<0,0>,0> = 42 is the smallest base code with e = x
    let scan = find_fixed_point_violations(&FiniteSet::empty(), 64, &cfg);
    let ys: Vec<(Nat, Side)> = scan
        .violations
        .iter()
        .map(|v| (v.y.clone(), v.side))
        .collect();
    assert_eq!(ys, vec![(nat(42), Side::PsiTrueButNotInQ)]);

    let scan = find_fixed_point_violations(&FiniteSet::from_u64s([42]), 64, &cfg);
    assert!(scan.violations.is_empty());

    let scan = find_fixed_point_violations(&FiniteSet::from_u64s(0..64), 64, &cfg);
    assert!(scan
        .violations
        .iter()
        .any(|v| v.y == nat(5) && v.side == Side::InQButPsiFalse));
    assert!(scan.violations.iter().all(|v| v.y != nat(42)));
}

#[test]
fn successor_closure_stages() {
    let op = Operator::new(parse("x = 0 \\/ exists y. y + 1 = x /\\ y in R").unwrap()).unwrap();
    let t = lfp_finite(&op, 5, 6).unwrap();
    assert_eq!(t.stages.len(), 6);
    assert_eq!(t.stabilized_at, Some(5));
    for (i, s) in t.stages.iter().enumerate() {
        assert_eq!(*s, (0..i as u64).collect::<StageSet>());
    }
    let id = lfp_finite(&Operator::new(parse("x in R").unwrap()).unwrap(), 5, 6).unwrap();
    assert_eq!((id.stabilized_at, id.last().is_empty()), (Some(0), true));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn finite_evaluation_matches_rust(a in subset(N), x in 0..N) {
        let r = finite(&a);
        let mode = EvalMode::FiniteUniverse(N);
        let shift = parse("x in R \\/ exists y. y in R /\\ x = y + 2").unwrap();
        let want = a.contains(&x) || (x >= 2 && a.contains(&(x - 2)));
        prop_assert_eq!(eval_bounded(&shift, &env(x), &r, mode).unwrap(), ThreeVal::from(want));

        let guarded = parse("forall y. (~(y + 1 = x) \\/ y in R)").unwrap();
        let want = x == 0 || a.contains(&(x - 1));
        prop_assert_eq!(eval_bounded(&guarded, &env(x), &r, mode).unwrap(), ThreeVal::from(want));

        let sums = parse("exists y. exists z. y in R /\\ z in R /\\ x = y + z").unwrap();
        let want = a.iter().any(|&y| y <= x && a.contains(&(x - y)));
        prop_assert_eq!(eval_bounded(&sums, &env(x), &r, mode).unwrap(), ThreeVal::from(want));
    }

    #[test]
    fn arithmetic_progressions_are_least_fixed_points(c in 0u64..6, k in 1u64..4) {
        let src = format!("x = {c} \\/ exists y. y in R /\\ x = y + {k}");
        let op = Operator::new(parse(&src).unwrap()).unwrap();
        let n = 12;
        let want: StageSet = (0..).map(|j| c + j * k).take_while(|&v| v < n).collect();
        let t = lfp_finite(&op, n, n + 1).unwrap();
        prop_assert_eq!(t.last(), &want);
        prop_assert_eq!(t.stabilized_at, Some(want.len()));
        prop_assert_eq!(exhaustive_least_fixed_point(&op, n).unwrap(), Some(want));
    }

    #[test]
    fn corpus_operators_are_monotone(i in 0usize..20, b in subset(10), keep in any::<u64>()) {
        let case = &lfp_corpus()[i];
        let op = Operator::new(parse(case.source).unwrap()).unwrap();
        let a: StageSet = b.iter().copied().filter(|v| keep >> v & 1 == 1).collect();
        let (fa, fb) = (op.apply(&a, 10).unwrap(), op.apply(&b, 10).unwrap());
        prop_assert!(fa.is_subset(&fb), "{}: F({:?}) = {:?}, F({:?}) = {:?}", case.source, a, fa, b, fb);
    }
}
