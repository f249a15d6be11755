//! `verify-claims`: every equation sweep, the closure and reduction checks,
//! and the laws of the layers underneath.

use crate::hyp::{
    in_i_report, reduction_identity_check, shipped_pool, sweep_co_singleton_cover,
    sweep_co_singleton_values, sweep_complement_f_children, sweep_complement_fixed_point,
    sweep_complement_g, sweep_complement_prime_fixed_point, sweep_g0_constant, sweep_u2_shape,
    sweep_union_fixed_point, sweep_union_specialized, sweep_union_transformer, union_corpus, Check,
    CodePool, InIFailure, ReductionReport, Sweep,
};

use super::closure::{
    sweep_closure_algebra, sweep_closure_bounded, sweep_closure_programs, sweep_closure_structural,
};
use super::laws::{
    lfp_corpus, sweep_f_psi_bit, sweep_lfp_leastness, sweep_monotonicity, sweep_positivity,
    sweep_recursion, sweep_smn, LfpCase,
};
use super::{Report, RunConfig, SuiteReport};

pub const G0_RANGE: u64 = 100;
pub const CO_SINGLETON_RANGE: u64 = 100;
pub const CO_SINGLETON_COVER: u64 = 50;
pub const COMPLEMENT_M_RANGE: u64 = 50;
pub const COMPLEMENT_TS_RANGE: u64 = 20;
pub const SMN_PROGRAMS: usize = 200;
pub const SMN_SAMPLES: usize = 5;
pub const GENERATED_TRANSFORMERS: usize = 10;
pub const MONOTONICITY_TRIALS: usize = 200;
/// The bounded membership check and the `f_psi_bit` probe cost grows with
/// the square of their quantifier bound; both use `min(B, cap)`.
pub const BOUNDED_CHECK_CAP: u64 = 4;
pub const F_PSI_BIT_CAP: u64 = 16;
pub const ALGEBRA_EXPRESSIONS: usize = 40;
pub const LFP_UNIVERSE_CAP: u64 = 12;

/// Every pool certificate passes the check against its programs.
pub fn sweep_in_i(pool: &CodePool, fuel: u64) -> Sweep {
    let cases = pool
        .certs()
        .iter()
        .map(|c| {
            let check = match in_i_report(c, fuel) {
                Ok(()) => Check::Pass,
                Err(InIFailure::OutOfFuel { .. }) => Check::Unknown,
                Err(e) => Check::Fail(e.to_string()),
            };
            (c.to_string(), check)
        })
        .collect();
    Sweep::from_cases("hyp.in_i", cases)
}

pub fn reduction_sweep(report: &ReductionReport) -> Sweep {
    let mut s = Sweep::new("reduction.identity");
    let bad = report.mismatches.len() as u64;
    for i in 0..report.checked - bad {
        s.record(|| format!("#{i}"), Check::Pass);
    }
    for m in &report.mismatches {
        let check = if m.got.is_definite() {
            Check::Fail(format!("recipe {}, psi {}", m.expected, m.got))
        } else {
            Check::Unknown
        };
        s.record(|| format!("{} x={}", m.code, m.x), check);
    }
    s
}

pub fn verify_claims(cfg: &RunConfig) -> Report {
    let f = cfg.fuel;
    let pool = shipped_pool();
    let corpus = union_corpus(&pool);
    let mut suites = vec![
        SuiteReport::timed(|| sweep_smn(SMN_PROGRAMS, SMN_SAMPLES, cfg.seed, f)),
        SuiteReport::timed(|| sweep_recursion(GENERATED_TRANSFORMERS, cfg.seed, f)),
        SuiteReport::timed(|| sweep_g0_constant(G0_RANGE, f)),
        SuiteReport::timed(|| sweep_co_singleton_values(CO_SINGLETON_RANGE, f)),
        SuiteReport::timed(|| sweep_co_singleton_cover(CO_SINGLETON_RANGE, CO_SINGLETON_COVER, f)),
        SuiteReport::timed(|| sweep_union_transformer(&corpus, f)),
        SuiteReport::timed(|| sweep_union_specialized(&corpus, f)),
        SuiteReport::timed(|| sweep_union_fixed_point(&corpus, f)),
        SuiteReport::timed(|| sweep_complement_fixed_point(&pool, COMPLEMENT_M_RANGE, f)),
        SuiteReport::timed(|| sweep_complement_prime_fixed_point(&pool, COMPLEMENT_TS_RANGE, f)),
        SuiteReport::timed(|| sweep_complement_g(&pool, COMPLEMENT_M_RANGE, f)),
    ];
    let start = std::time::Instant::now();
    let (f_eq, children) = sweep_complement_f_children(&pool, COMPLEMENT_TS_RANGE, f);
    let half = start.elapsed() / 2;
    suites.push(SuiteReport {
        sweep: f_eq,
        wall: half,
    });
    suites.push(SuiteReport {
        sweep: children,
        wall: half,
    });
    suites.extend([
        SuiteReport::timed(|| sweep_u2_shape(&pool)),
        SuiteReport::timed(|| sweep_in_i(&pool, f)),
        SuiteReport::timed(|| sweep_closure_structural(&pool, cfg.horizon)),
        SuiteReport::timed(|| sweep_closure_programs(&pool, cfg.horizon, f)),
        SuiteReport::timed(|| {
            sweep_closure_bounded(&pool, cfg.horizon, cfg.bound.min(BOUNDED_CHECK_CAP), f)
        }),
        SuiteReport::timed(|| sweep_closure_algebra(ALGEBRA_EXPRESSIONS, 3, cfg.horizon, cfg.seed)),
        SuiteReport::timed(|| reduction_sweep(&reduction_identity_check(&pool, cfg.horizon, f))),
        SuiteReport::timed(|| sweep_monotonicity(cfg.universe, MONOTONICITY_TRIALS, cfg.seed)),
        SuiteReport::timed(|| {
            sweep_f_psi_bit(
                MONOTONICITY_TRIALS,
                cfg.bound.min(F_PSI_BIT_CAP),
                cfg.seed,
                f,
            )
        }),
        SuiteReport::timed(|| {
            let corpus: Vec<LfpCase> = lfp_corpus()
                .into_iter()
                .map(|c| LfpCase {
                    universe: c.universe.min(cfg.universe).min(LFP_UNIVERSE_CAP),
                    ..c
                })
                .collect();
            sweep_lfp_leastness(&corpus)
        }),
        SuiteReport::timed(sweep_positivity),
    ]);
    Report::new("verify-claims", cfg, suites, vec![])
}
