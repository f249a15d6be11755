//! Checking certificates against the programs they describe.

use std::collections::{HashMap, HashSet};

use crate::coding::{pair, unpair};
use crate::kernel::{Evaluator, Outcome};
use crate::nat::{nat, Nat};

use super::cert::HypCert;

/// Raw arguments sampled at every limit node, on top of the norm
/// representatives.
pub const SAMPLED_ARGS: u64 = 8;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum InIFailure {
    #[error("singleton certificate does not carry a code ⟨0,i⟩")]
    BadSingleton,
    #[error("{kind} certificate does not carry a code ⟨1,E⟩")]
    NotLimit { kind: &'static str },
    #[error("φ_E({k}) is undefined")]
    Undefined { k: Nat },
    #[error("φ_E({k}) ran out of fuel")]
    OutOfFuel { k: Nat },
    #[error("φ_E({k}) is not the code of the expected {expected}")]
    WrongChild { k: Nat, expected: &'static str },
    #[error("child at {k} has norm {child}, not below {norm}")]
    NormNotDecreasing { k: Nat, child: u32, norm: u32 },
    #[error("recorded norm {recorded}, children give {computed}")]
    NormMismatch { recorded: u32, computed: u32 },
}

/// Checks that the code of `c` is in `I` with the recorded norm: at every
/// limit node the program is run on the norm representatives and on a
/// sample of raw arguments, and each result must be the code of the
/// certificate predicted for that argument, recursively.
pub fn in_i_report(c: &HypCert, fuel: u64) -> Result<(), InIFailure> {
    let mut ev = Evaluator::default();
    let mut seen = HashSet::new();
    check(&mut ev, c, fuel, &mut seen)
}

#[allow(non_snake_case)]
pub fn in_I_check(c: &HypCert, fuel: u64) -> bool {
    in_i_report(c, fuel).is_ok()
}

fn check(
    ev: &mut Evaluator<'_>,
    c: &HypCert,
    fuel: u64,
    seen: &mut HashSet<Nat>,
) -> Result<(), InIFailure> {
    if !seen.insert(c.index().clone()) {
        return Ok(());
    }
    let decoded = unpair(c.index());
    if c.is_singleton() {
        return match decoded {
            Some((tag, _)) if tag.is_zero() && c.norm() == 0 => Ok(()),
            _ => Err(InIFailure::BadSingleton),
        };
    }
    let e = match decoded {
        Some((tag, e)) if tag == Nat::ONE => e,
        _ => return Err(InIFailure::NotLimit { kind: c.kind() }),
    };
    let mut reps = Vec::new();
    for t in c.t_norm_reps() {
        for s in c.s_norm_reps(&t) {
            reps.push(pair(&t, &s));
        }
    }
    let n_reps = reps.len();
    reps.extend((0..SAMPLED_ARGS).map(nat));
    let mut computed = 0;
    for (i, k) in reps.into_iter().enumerate() {
        let child = c.child_at(&k).expect("limit certificates have children");
        match ev.apply(&e, &[k.clone()], fuel) {
            Outcome::Halted(v) if v == *child.index() => {}
            Outcome::Halted(_) => {
                return Err(InIFailure::WrongChild {
                    k,
                    expected: child.kind(),
                })
            }
            Outcome::Undefined => return Err(InIFailure::Undefined { k }),
            Outcome::OutOfFuel => return Err(InIFailure::OutOfFuel { k }),
        }
        if child.norm() >= c.norm() {
            return Err(InIFailure::NormNotDecreasing {
                k,
                child: child.norm(),
                norm: c.norm(),
            });
        }
        if i < n_reps {
            computed = computed.max(child.norm() + 1);
        }
        check(ev, &child, fuel, seen)?;
    }
    if computed != c.norm() {
        return Err(InIFailure::NormMismatch {
            recorded: c.norm(),
            computed,
        });
    }
    Ok(())
}

/// The stage at which `a` enters `I` when every `∀k` is read over
/// `k < k_bound`: `⟨0,e⟩` enters at 1, `⟨1,e⟩` one after its latest child.
/// `None` if `a` is not a code, a run does not halt within `fuel`, or the
/// stage exceeds `stages`. Uses only the programs, never a certificate.
pub fn in_i_stage_finite(a: &Nat, stages: u32, k_bound: u64, fuel: u64) -> Option<u32> {
    let mut ev = Evaluator::default();
    let mut memo = HashMap::new();
    stage(&mut ev, a, stages, k_bound, fuel, &mut memo)
}

fn stage(
    ev: &mut Evaluator<'_>,
    a: &Nat,
    stages: u32,
    k_bound: u64,
    fuel: u64,
    memo: &mut HashMap<Nat, Option<u32>>,
) -> Option<u32> {
    if stages == 0 {
        return None;
    }
    if let Some(&s) = memo.get(a) {
        return s.filter(|&s| s <= stages);
    }
    let (tag, e) = unpair(a)?;
    let r = if tag.is_zero() {
        Some(1)
    } else if tag == Nat::ONE {
        let mut best = 0;
        let mut ok = true;
        for k in 0..k_bound {
            let Outcome::Halted(v) = ev.apply(&e, &[nat(k)], fuel) else {
                ok = false;
                break;
            };
            match stage(ev, &v, stages - 1, k_bound, fuel, memo) {
                Some(s) => best = best.max(s),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        ok.then_some(best + 1)
    } else {
        None
    };
    if r.is_some() {
        memo.insert(a.clone(), r);
    }
    r
}
