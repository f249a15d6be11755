//! Number-theoretic codings: the Cantor pairing bijection and the
//! length-tagged sequence code built on top of it.
//!
//! `⟨x0,…,x(n-1)⟩ = C(n, C(x0, C(x1, …, C(x(n-1), 0)…)))`, so the empty
//! tuple is `0` and every tuple code is decodable without knowing its length
//! in advance. Not every natural is a tuple code; [`decode_tuple`] returns
//! `None` for those and [`tuple_subscript`] returns `0`.

use std::cell::RefCell;
use std::collections::HashMap;

use dashu_int::ops::{BitTest, SquareRoot};

use crate::nat::{nat, to_usize, Nat};

/// Tuples longer than this are never materialized by [`decode_tuple`].
pub const MAX_MATERIALIZED_LEN: usize = 1 << 20;

/// Pairs whose code is at least this long are remembered per thread, in both
/// directions. Codes of this size are nearly always split again soon after
/// they are built, and the square root dominates the cost of a split.
const MEMO_MIN_BITS: usize = 1 << 14;
const MEMO_MAX_BITS: usize = 1 << 31;

#[derive(Default)]
struct PairMemo {
    split: HashMap<Nat, (Nat, Nat)>,
    pair: HashMap<(Nat, Nat), Nat>,
    bits: usize,
}

impl PairMemo {
    fn insert(&mut self, i: &Nat, t: &Nat, n: &Nat) {
        let cost = 2 * (n.bit_len() + i.bit_len() + t.bit_len());
        if self.bits + cost > MEMO_MAX_BITS / 8 {
            self.split.clear();
            self.pair.clear();
            self.bits = 0;
        }
        self.bits += cost;
        self.split.insert(n.clone(), (i.clone(), t.clone()));
        self.pair.insert((i.clone(), t.clone()), n.clone());
    }
}

thread_local! {
    static MEMO: RefCell<PairMemo> = RefCell::new(PairMemo::default());
}

/// `C(i, t) = (i+t)(i+t+1)/2 + t`.
pub fn cantor_pair(i: &Nat, t: &Nat) -> Nat {
    let w = i + t;
    let big = w.bit_len() * 2 >= MEMO_MIN_BITS;
    if big {
        let hit = MEMO.with(|m| m.borrow().pair.get(&(i.clone(), t.clone())).cloned());
        if let Some(n) = hit {
            return n;
        }
    }
    let n = ((w.sqr() + &w) >> 1) + t;
    if big {
        MEMO.with(|m| m.borrow_mut().insert(i, t, &n));
    }
    n
}

/// Inverse of [`cantor_pair`].
pub fn cantor_split(n: &Nat) -> (Nat, Nat) {
    if let Ok(small) = u64::try_from(n) {
        if small < (1 << 52) {
            let (i, t) = split_small(small);
            return (nat(i), nat(t));
        }
    }
    let big = n.bit_len() >= MEMO_MIN_BITS;
    if big {
        if let Some(it) = MEMO.with(|m| m.borrow().split.get(n).cloned()) {
            return it;
        }
    }
    let root = ((n << 3) + Nat::ONE).sqrt();
    let w = (root - Nat::ONE) >> 1;
    let tri = (w.sqr() + &w) >> 1;
    let t = n - tri;
    let i = w - &t;
    if big {
        MEMO.with(|m| m.borrow_mut().insert(&i, &t, n));
    }
    (i, t)
}

fn split_small(n: u64) -> (u64, u64) {
    let mut w = (((8 * n + 1) as f64).sqrt() as u64).saturating_sub(1) / 2;
    // correct the float estimate
    while w * (w + 1) / 2 > n {
        w -= 1;
    }
    while (w + 1) * (w + 2) / 2 <= n {
        w += 1;
    }
    let t = n - w * (w + 1) / 2;
    (w - t, t)
}

pub fn cantor_fst(n: &Nat) -> Nat {
    cantor_split(n).0
}

pub fn cantor_snd(n: &Nat) -> Nat {
    cantor_split(n).1
}

pub fn encode_tuple(xs: &[Nat]) -> Nat {
    let body = xs
        .iter()
        .rev()
        .fold(Nat::ZERO, |acc, x| cantor_pair(x, &acc));
    cantor_pair(&nat(xs.len() as u64), &body)
}

/// `⟨a, b⟩`, the two-element case used throughout the HYP coding.
pub fn pair(a: &Nat, b: &Nat) -> Nat {
    let inner = cantor_pair(b, &Nat::ZERO);
    let body = cantor_pair(a, &inner);
    cantor_pair(&nat(2), &body)
}

/// Recovers the entries of a tuple code, or `None` if `n` is not one.
pub fn decode_tuple(n: &Nat) -> Option<Vec<Nat>> {
    let (len, mut body) = cantor_split(n);
    let len = to_usize(&len).filter(|&l| l <= MAX_MATERIALIZED_LEN)?;
    let mut out = Vec::with_capacity(len.min(64));
    while out.len() < len {
        if body.is_zero() {
            // C(0, 0) = 0, so an exhausted body is a tail of zeros
            out.resize(len, Nat::ZERO);
            break;
        }
        let (head, rest) = cantor_split(&body);
        out.push(head);
        body = rest;
    }
    body.is_zero().then_some(out)
}

/// Decodes `n` as a two-element tuple.
pub fn unpair(n: &Nat) -> Option<(Nat, Nat)> {
    let (len, body) = cantor_split(n);
    if len != nat(2) {
        return None;
    }
    let (a, rest) = cantor_split(&body);
    let (b, tail) = cantor_split(&rest);
    tail.is_zero().then_some((a, b))
}

/// Length of the tuple coded by `n`, if `n` is a tuple code.
pub fn tuple_len(n: &Nat) -> Option<Nat> {
    let (len, mut body) = cantor_split(n);
    let mut seen = 0u64;
    while !body.is_zero() {
        if nat(seen) >= len {
            return None;
        }
        body = cantor_split(&body).1;
        seen += 1;
    }
    Some(len)
}

/// `(x)_i`: the `i`-th entry of the tuple coded by `x`, counting from 0, or
/// `0` when `x` is not a tuple code or `i` is out of range.
pub fn tuple_subscript(x: &Nat, i: &Nat) -> Nat {
    let (len, mut body) = cantor_split(x);
    let mut k = 0u64;
    let mut found = None;
    while !body.is_zero() {
        if nat(k) >= len {
            return Nat::ZERO;
        }
        let (head, rest) = cantor_split(&body);
        if found.is_none() && nat(k) == *i {
            found = Some(head);
        }
        body = rest;
        k += 1;
    }
    if i < &len {
        found.unwrap_or(Nat::ZERO)
    } else {
        Nat::ZERO
    }
}

pub fn tuple_subscript_usize(x: &Nat, i: usize) -> Nat {
    tuple_subscript(x, &nat(i as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    /// Enumerates ω² along anti-diagonals (t increasing within a diagonal),
    /// independent of the closed form.
    fn diagonal_walk(limit: usize) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        let mut w = 0u64;
        while out.len() < limit {
            for t in 0..=w {
                out.push((w - t, t));
            }
            w += 1;
        }
        out.truncate(limit);
        out
    }

    #[test]
    fn cantor_pair_matches_enumeration_order() {
        for (n, (i, t)) in diagonal_walk(5000).into_iter().enumerate() {
            assert_eq!(cantor_pair(&nat(i), &nat(t)), nat(n as u64));
        }
        assert_eq!(cantor_pair(&nat(0), &nat(0)), nat(0));
    }

    #[test]
    fn cantor_pair_injective_on_box() {
        let mut seen = HashSet::new();
        for i in 0..20u64 {
            for t in 0..20u64 {
                seen.insert(cantor_pair(&nat(i), &nat(t)));
            }
        }
        assert_eq!(seen.len(), 400);
    }

    #[test]
    fn cantor_round_trips_below_ten_thousand() {
        for n in 0..10_000u64 {
            let (i, t) = cantor_split(&nat(n));
            assert_eq!(cantor_pair(&i, &t), nat(n));
        }
        assert_eq!(
            cantor_split(&cantor_pair(&nat(4), &nat(11))),
            (nat(4), nat(11))
        );
    }

    #[test]
    fn cantor_large_path_agrees_with_small_path() {
        let big = Nat::from(3u8).pow(400);
        let (i, t) = cantor_split(&big);
        assert_eq!(cantor_pair(&i, &t), big);
        let n = nat((1 << 52) + 12345);
        let (i, t) = cantor_split(&n);
        assert_eq!(cantor_pair(&i, &t), n);
    }

    #[test]
    fn tuple_basics() {
        assert_eq!(encode_tuple(&[]), nat(0));
        assert_eq!(decode_tuple(&nat(0)), Some(vec![]));
        let x = encode_tuple(&[nat(7), nat(9)]);
        assert_eq!(decode_tuple(&x), Some(vec![nat(7), nat(9)]));
        assert_ne!(
            encode_tuple(&[nat(0), nat(5)]),
            encode_tuple(&[nat(1), nat(5)])
        );
        assert_eq!(pair(&nat(7), &nat(9)), x);
        assert_eq!(unpair(&x), Some((nat(7), nat(9))));
    }

    #[test]
    fn small_pair_codes() {
        // hand-computed: C(2, C(0, C(e, 0)))
        assert_eq!(pair(&nat(0), &nat(0)), nat(3));
        assert_eq!(pair(&nat(0), &nat(1)), nat(12));
        assert_eq!(pair(&nat(1), &nat(0)), nat(7));
    }

    #[test]
    fn subscript_cases() {
        let x = encode_tuple(&[nat(7), nat(9)]);
        assert_eq!(tuple_subscript(&x, &nat(1)), nat(9));
        assert_eq!(tuple_subscript(&x, &nat(0)), nat(7));
        assert_eq!(tuple_subscript(&x, &nat(5)), nat(0));
        assert_eq!(tuple_subscript(&encode_tuple(&[]), &nat(0)), nat(0));
        let zeros = encode_tuple(&[nat(0), nat(0), nat(4), nat(0), nat(0)]);
        assert_eq!(tuple_subscript(&zeros, &nat(2)), nat(4));
        assert_eq!(tuple_subscript(&zeros, &nat(4)), nat(0));
    }

    #[test]
    fn non_tuples_are_detected() {
        // C(1, C(5, 3)) has a nonzero tail after its single entry
        let n = cantor_pair(&nat(1), &cantor_pair(&nat(5), &nat(3)));
        assert_eq!(decode_tuple(&n), None);
        assert_eq!(tuple_len(&n), None);
        assert_eq!(tuple_subscript(&n, &nat(0)), nat(0));
        assert_eq!(unpair(&n), None);
    }

    #[test]
    fn tuple_round_trips_below_ten_thousand() {
        for n in 0..10_000u64 {
            let n = nat(n);
            if let Some(xs) = decode_tuple(&n) {
                assert_eq!(encode_tuple(&xs), n);
                assert_eq!(tuple_len(&n), Some(nat(xs.len() as u64)));
                for (i, x) in xs.iter().enumerate() {
                    assert_eq!(&tuple_subscript_usize(&n, i), x);
                }
            } else {
                assert_eq!(tuple_len(&n), None);
            }
        }
    }

    proptest! {
        #[test]
        fn tuple_round_trip(xs in proptest::collection::vec(0u64..1_000_000, 0..6)) {
            let xs: Vec<Nat> = xs.into_iter().map(nat).collect();
            let code = encode_tuple(&xs);
            prop_assert_eq!(decode_tuple(&code), Some(xs.clone()));
            for (i, x) in xs.iter().enumerate() {
                prop_assert_eq!(&tuple_subscript_usize(&code, i), x);
            }
            prop_assert_eq!(tuple_subscript_usize(&code, xs.len()), Nat::ZERO);
        }

        #[test]
        fn cantor_round_trip(i in 0u64..u32::MAX as u64, t in 0u64..u32::MAX as u64) {
            let n = cantor_pair(&nat(i), &nat(t));
            prop_assert_eq!(cantor_split(&n), (nat(i), nat(t)));
        }
    }
}
