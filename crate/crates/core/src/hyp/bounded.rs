//! Membership in `H(a)` computed from the programs alone, with every
//! quantifier cut at a bound.

use std::collections::HashMap;

use crate::coding::{pair, unpair};
use crate::formula::ThreeVal;
use crate::kernel::{Evaluator, Outcome};
use crate::nat::{nat, Nat};

/// `x ∈ H(a)` with `t, s < bound` and at most `depth` nested limit codes.
///
/// - `⟨0,e⟩` is decided exactly; non-codes are `False`.
/// - A row `∀s` is `False` as soon as one child is definitely `False` or
///   undefined.
/// - A row is `True` when all its children below `bound` are `True` and
///   their codes repeat with a period of at most `bound/2`. This is a
///   heuristic: it reads the visible period as the whole row.
/// - `∃t` is `True` on a true row; it is never `False` for a limit code.
pub fn hset_member_bounded(a: &Nat, x: &Nat, depth: u32, bound: u64, fuel: u64) -> ThreeVal {
    BoundedHset::new(bound, fuel).member(a, x, depth)
}

/// [`hset_member_bounded`] with its program runs cached across queries.
pub struct BoundedHset {
    ev: Evaluator<'static>,
    bound: u64,
    fuel: u64,
    runs: HashMap<(Nat, u64, u64), Outcome>,
    memo: HashMap<(Nat, Nat, u32), ThreeVal>,
}

fn periodic(vals: &[Nat]) -> bool {
    (1..=vals.len() / 2).any(|p| (p..vals.len()).all(|i| vals[i] == vals[i - p]))
}

impl BoundedHset {
    pub fn new(bound: u64, fuel: u64) -> Self {
        BoundedHset {
            ev: Evaluator::default(),
            bound,
            fuel,
            runs: HashMap::new(),
            memo: HashMap::new(),
        }
    }

    pub fn member(&mut self, a: &Nat, x: &Nat, depth: u32) -> ThreeVal {
        match unpair(a) {
            Some((tag, e)) if tag.is_zero() => (e == *x).into(),
            Some((tag, e)) if tag == Nat::ONE => {
                if depth == 0 {
                    return ThreeVal::Unknown;
                }
                let key = (a.clone(), x.clone(), depth);
                if let Some(&v) = self.memo.get(&key) {
                    return v;
                }
                let v = self.limit(&e, x, depth);
                self.memo.insert(key, v);
                v
            }
            _ => ThreeVal::False,
        }
    }

    fn limit(&mut self, e: &Nat, x: &Nat, depth: u32) -> ThreeVal {
        for t in 0..self.bound {
            if self.row(e, t, x, depth) == ThreeVal::True {
                return ThreeVal::True;
            }
        }
        ThreeVal::Unknown
    }

    fn row(&mut self, e: &Nat, t: u64, x: &Nat, depth: u32) -> ThreeVal {
        let mut vals = Vec::with_capacity(self.bound as usize);
        let mut all_true = true;
        for s in 0..self.bound {
            let out = match self.runs.get(&(e.clone(), t, s)) {
                Some(o) => o.clone(),
                None => {
                    let o = self.ev.apply(e, &[pair(&nat(t), &nat(s))], self.fuel);
                    self.runs.insert((e.clone(), t, s), o.clone());
                    o
                }
            };
            let v = match out {
                Outcome::Halted(v) => v,
                Outcome::Undefined => return ThreeVal::False,
                Outcome::OutOfFuel => return ThreeVal::Unknown,
            };
            match self.member(&v, x, depth - 1) {
                ThreeVal::False => return ThreeVal::False,
                ThreeVal::Unknown => all_true = false,
                ThreeVal::True => {}
            }
            vals.push(v);
        }
        if all_true && periodic(&vals) {
            ThreeVal::True
        } else {
            ThreeVal::Unknown
        }
    }
}
