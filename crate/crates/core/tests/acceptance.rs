//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Limits below are fixed; the run uses the default
//! configuration (fuel 10^5, B 64, N 32, X 64, seed 0).

use std::process::ExitCode;
use std::time::{Duration, Instant};

use posfix::hyp::{
    shipped_pool, sweep_co_singleton_cover, sweep_co_singleton_values, sweep_complement_f_children,
    sweep_complement_fixed_point, sweep_complement_g, sweep_complement_prime_fixed_point,
    sweep_g0_constant, sweep_union_fixed_point, union_corpus, Sweep,
};
use posfix::verify::claims::{reduction_sweep, SMN_PROGRAMS, SMN_SAMPLES};
use posfix::verify::{
    lfp_corpus, positivity_corpus, program_corpus, sweep_closure_algebra, sweep_closure_bounded,
    sweep_closure_programs, sweep_closure_structural, sweep_f_psi_bit, sweep_lfp_leastness,
    sweep_monotonicity, sweep_positivity, sweep_recursion, sweep_smn, transformer_corpus,
    verify_claims, RunConfig,
};

const FUEL: u64 = 100_000;
const SEED: u64 = 0;

const SMN_LIMIT: Duration = Duration::from_secs(10);
const RECURSION_LIMIT: Duration = Duration::from_secs(5);
const G0_LIMIT: Duration = Duration::from_secs(5);
const CO_SINGLETON_LIMIT: Duration = Duration::from_secs(5);
const COMPLEMENT_LIMIT: Duration = Duration::from_secs(30);
const CLOSURE_LIMIT: Duration = Duration::from_secs(30);
const REDUCTION_LIMIT: Duration = Duration::from_secs(30);
const MONOTONICITY_LIMIT: Duration = Duration::from_secs(10);
const LFP_LIMIT: Duration = Duration::from_secs(60);
const POSITIVITY_LIMIT: Duration = Duration::from_secs(1);
/// The second identical run may take at most this multiple of the first.
const DETERMINISM_FACTOR: u32 = 2;
const DETERMINISM_LIMIT: Duration = Duration::from_secs(120);

const RECURSION_GENERATED: usize = 10;
const MONOTONICITY_TRIALS: usize = 200;
const MONOTONICITY_UNIVERSE: u64 = 32;
const F_PSI_BIT_BOUND: u64 = 16;
const HORIZON: u64 = 64;
const CLOSURE_BOUNDED_B: u64 = 4;
const MAX_NORM: u32 = 3;
const LFP_MAX_UNIVERSE: u64 = 12;

struct Outcome {
    ok: bool,
    detail: String,
}

fn clean(sweeps: &[&Sweep]) -> Outcome {
    let mut ok = true;
    let mut parts = vec![];
    for s in sweeps {
        ok &= s.failed == 0 && s.unknown == 0 && s.cases > 0;
        parts.push(format!(
            "{} {}/{} ({} failed, {} unknown)",
            s.name, s.passed, s.cases, s.failed, s.unknown
        ));
        for f in s.failures.iter().take(3) {
            parts.push(format!("  {}: {}", f.case, f.detail));
        }
    }
    Outcome {
        ok,
        detail: parts.join("; "),
    }
}

fn with(mut o: Outcome, cond: bool, what: &str) -> Outcome {
    if !cond {
        o.ok = false;
        o.detail = format!("{what}; {}", o.detail);
    }
    o
}

fn criterion(n: u32, name: &str, limit: Duration, run: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let mut o = run();
    let took = start.elapsed();
    if took > limit {
        o.ok = false;
        o.detail = format!(
            "took {:.2}s, limit {:.0}s; {}",
            took.as_secs_f64(),
            limit.as_secs_f64(),
            o.detail
        );
    }
    println!(
        "{} {n:>2} {name} ({:.2}s / {:.0}s): {}",
        if o.ok { "PASS" } else { "FAIL" },
        took.as_secs_f64(),
        limit.as_secs_f64(),
        o.detail
    );
    o.ok
}

fn main() -> ExitCode {
    let pool = shipped_pool();
    let mut all = true;

    all &= criterion(1, "s-m-n law", SMN_LIMIT, || {
        let programs = program_corpus(SMN_PROGRAMS, SEED).len();
        let s = sweep_smn(SMN_PROGRAMS, SMN_SAMPLES, SEED, FUEL);
        with(clean(&[&s]), programs >= 200, "fewer than 200 programs")
    });

    all &= criterion(2, "recursion theorem", RECURSION_LIMIT, || {
        let corpus = transformer_corpus(RECURSION_GENERATED, SEED);
        let has_quine = corpus.iter().any(|t| t.name == "quine");
        let s = sweep_recursion(RECURSION_GENERATED, SEED, FUEL);
        let o = with(
            clean(&[&s]),
            corpus.len() >= 20,
            "fewer than 20 transformers",
        );
        with(o, has_quine, "no quine transformer")
    });

    all &= criterion(3, "g0(a) is the constant a", G0_LIMIT, || {
        let s = sweep_g0_constant(100, FUEL);
        with(clean(&[&s]), s.cases == 10_000, "expected 10^4 cases")
    });

    all &= criterion(
        4,
        "co-singleton values and coverage",
        CO_SINGLETON_LIMIT,
        || {
            let fa = sweep_co_singleton_values(100, FUEL);
            let fb = sweep_co_singleton_cover(100, 50, FUEL);
            with(
                clean(&[&fa, &fb]),
                fa.cases == 10_000,
                "expected 10^4 value cases",
            )
        },
    );

    all &= criterion(
        5,
        "union and complement construction identities",
        COMPLEMENT_LIMIT,
        || {
            let corpus = union_corpus(&pool);
            let ca = sweep_complement_g(&pool, 50, FUEL);
            let (cb, g) = sweep_complement_f_children(&pool, 20, FUEL);
            let d = sweep_complement_fixed_point(&pool, 50, FUEL);
            let e = sweep_complement_prime_fixed_point(&pool, 20, FUEL);
            let h = sweep_union_fixed_point(&corpus, FUEL);
            let o = with(
                clean(&[&ca, &cb, &d, &e, &g, &h]),
                pool.len() >= 10,
                "pool has fewer than 10 codes",
            );
            with(o, pool.max_norm() <= MAX_NORM, "pool norm above 3")
        },
    );

    all &= criterion(6, "closure semantics", CLOSURE_LIMIT, || {
        let st = sweep_closure_structural(&pool, HORIZON);
        let pr = sweep_closure_programs(&pool, HORIZON, FUEL);
        let bd = sweep_closure_bounded(&pool, HORIZON, CLOSURE_BOUNDED_B, FUEL);
        let al = sweep_closure_algebra(40, MAX_NORM, HORIZON, SEED);
        clean(&[&st, &pr, &bd, &al])
    });

    all &= criterion(7, "reduction identity", REDUCTION_LIMIT, || {
        let report = posfix::hyp::reduction_identity_check(&pool, HORIZON, FUEL);
        let s = reduction_sweep(&report);
        with(
            clean(&[&s]),
            report.mismatches.is_empty(),
            "mismatches present",
        )
    });

    all &= criterion(8, "monotonicity", MONOTONICITY_LIMIT, || {
        let m = sweep_monotonicity(MONOTONICITY_UNIVERSE, MONOTONICITY_TRIALS, SEED);
        let f = sweep_f_psi_bit(MONOTONICITY_TRIALS, F_PSI_BIT_BOUND, SEED, FUEL);
        let o = with(
            clean(&[&m, &f]),
            m.cases == MONOTONICITY_TRIALS as u64,
            "expected 200 operator trials",
        );
        with(
            o,
            f.cases == MONOTONICITY_TRIALS as u64,
            "expected 200 f_psi_bit samples",
        )
    });

    all &= criterion(9, "lfp leastness", LFP_LIMIT, || {
        let corpus = lfp_corpus();
        let small = corpus.iter().all(|c| c.universe <= LFP_MAX_UNIVERSE);
        let s = sweep_lfp_leastness(&corpus);
        let o = with(clean(&[&s]), corpus.len() >= 20, "fewer than 20 formulas");
        with(o, small, "universe above 12")
    });

    all &= criterion(10, "positivity checker", POSITIVITY_LIMIT, || {
        let s = sweep_positivity();
        with(
            clean(&[&s]),
            positivity_corpus().len() >= 20,
            "fewer than 20 rejections",
        )
    });

    all &= criterion(11, "determinism", DETERMINISM_LIMIT, || {
        let cfg = RunConfig {
            seed: SEED,
            ..RunConfig::default()
        };
        let t0 = Instant::now();
        let a = verify_claims(&cfg).to_json();
        let first = t0.elapsed();
        let t1 = Instant::now();
        let b = verify_claims(&cfg).to_json();
        let second = t1.elapsed();
        let detail = format!(
            "{} bytes, runs {:.2}s and {:.2}s",
            a.len(),
            first.as_secs_f64(),
            second.as_secs_f64()
        );
        let o = Outcome {
            ok: a == b,
            detail: if a == b {
                detail
            } else {
                format!("outputs differ; {detail}")
            },
        };
        with(
            o,
            second <= first * DETERMINISM_FACTOR,
            "second run over twice the first",
        )
    });

    if all {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: FAILED");
        ExitCode::FAILURE
    }
}
