//! Unbounded naturals.
//!
//! Program indices and the codes built from them grow quickly (every tuple
//! level multiplies the bit length), so every value in the workbench is an
//! arbitrary-precision unsigned integer.

pub use dashu_int::UBig as Nat;

use std::str::FromStr;

/// Shorthand constructor used all over the crate and its tests.
pub fn nat(n: u64) -> Nat {
    Nat::from(n)
}

pub fn bits(n: &Nat) -> usize {
    use dashu_int::ops::BitTest;
    n.bit_len()
}

pub fn to_usize(n: &Nat) -> Option<usize> {
    usize::try_from(n).ok()
}

pub fn to_u64(n: &Nat) -> Option<u64> {
    u64::try_from(n).ok()
}

/// Parses a decimal natural. Leading `+`, signs and radix prefixes are rejected.
pub fn parse_nat(s: &str) -> Option<Nat> {
    let s = s.trim();
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    Nat::from_str(s).ok()
}

/// Serde adapter writing naturals as decimal strings (JSON numbers cannot
/// hold program indices).
pub mod dec {
    use super::{parse_nat, Nat};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &Nat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Nat, D::Error> {
        let s = String::deserialize(d)?;
        parse_nat(&s).ok_or_else(|| D::Error::custom(format!("not a decimal natural: {s:?}")))
    }

    pub mod vec {
        use super::{parse_nat, Nat};
        use serde::{de::Error, Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(ns: &[Nat], s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(ns.iter().map(|n| n.to_string()))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Nat>, D::Error> {
            let v = Vec::<String>::deserialize(d)?;
            v.iter()
                .map(|s| {
                    parse_nat(s)
                        .ok_or_else(|| D::Error::custom(format!("not a decimal natural: {s:?}")))
                })
                .collect()
        }
    }
}
