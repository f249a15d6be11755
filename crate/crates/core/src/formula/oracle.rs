//! Set oracles: the interpretation of a relation symbol.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::three_val::ThreeVal;
use crate::kernel::{Evaluator, Index, Outcome};
use crate::nat::Nat;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Descriptor {
    FiniteSet {
        #[serde(with = "crate::nat::dec::vec")]
        members: Vec<Nat>,
    },
    Program {
        index: Index,
        fuel: u64,
    },
    Certificate {
        pool_size: usize,
        horizon: u64,
    },
    Function {
        name: String,
    },
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Descriptor::FiniteSet { members } => {
                f.write_str("{")?;
                for (i, m) in members.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{m}")?;
                }
                f.write_str("}")
            }
            Descriptor::Program { index, fuel } => write!(f, "program {index:?} @ fuel {fuel}"),
            Descriptor::Certificate { pool_size, horizon } => {
                write!(
                    f,
                    "certificate pool of {pool_size} codes, horizon {horizon}"
                )
            }
            Descriptor::Function { name } => f.write_str(name),
        }
    }
}

pub trait SetOracle: Sync {
    fn member(&self, x: &Nat) -> ThreeVal;

    /// `⟨a,x⟩ ∈ self`. Oracles over pairs override this to skip encoding.
    fn member_pair(&self, a: &Nat, x: &Nat) -> ThreeVal {
        self.member(&crate::coding::pair(a, x))
    }

    fn descriptor(&self) -> Descriptor;
}

/// An exact finite set.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FiniteSet(pub BTreeSet<Nat>);

impl FiniteSet {
    pub fn empty() -> Self {
        FiniteSet::default()
    }

    pub fn from_u64s(xs: impl IntoIterator<Item = u64>) -> Self {
        FiniteSet(xs.into_iter().map(Nat::from).collect())
    }

    pub fn contains(&self, x: &Nat) -> bool {
        self.0.contains(x)
    }

    pub fn is_subset(&self, other: &FiniteSet) -> bool {
        self.0.is_subset(&other.0)
    }
}

impl FromIterator<Nat> for FiniteSet {
    fn from_iter<I: IntoIterator<Item = Nat>>(it: I) -> Self {
        FiniteSet(it.into_iter().collect())
    }
}

impl SetOracle for FiniteSet {
    fn member(&self, x: &Nat) -> ThreeVal {
        self.0.contains(x).into()
    }

    fn descriptor(&self) -> Descriptor {
        Descriptor::FiniteSet {
            members: self.0.iter().cloned().collect(),
        }
    }
}

/// `{x : φ_e(x)↓ ≠ 0}` within a fuel budget: a run out of fuel is Unknown,
/// definite divergence is non-membership.
#[derive(Clone, Debug)]
pub struct ProgramSet {
    pub index: Index,
    pub fuel: u64,
}

impl SetOracle for ProgramSet {
    fn member(&self, x: &Nat) -> ThreeVal {
        let mut ev = Evaluator::default();
        match ev.apply(self.index.value(), std::slice::from_ref(x), self.fuel) {
            Outcome::Halted(v) => (!v.is_zero()).into(),
            Outcome::Undefined => ThreeVal::False,
            Outcome::OutOfFuel => ThreeVal::Unknown,
        }
    }

    fn descriptor(&self) -> Descriptor {
        Descriptor::Program {
            index: self.index.clone(),
            fuel: self.fuel,
        }
    }
}

/// A membership function given as a closure.
pub struct FnSet<F> {
    pub name: String,
    pub f: F,
}

impl<F: Fn(&Nat) -> ThreeVal + Sync> SetOracle for FnSet<F> {
    fn member(&self, x: &Nat) -> ThreeVal {
        (self.f)(x)
    }

    fn descriptor(&self) -> Descriptor {
        Descriptor::Function {
            name: self.name.clone(),
        }
    }
}

impl<T: SetOracle + ?Sized> SetOracle for &T {
    fn member(&self, x: &Nat) -> ThreeVal {
        (**self).member(x)
    }

    fn member_pair(&self, a: &Nat, x: &Nat) -> ThreeVal {
        (**self).member_pair(a, x)
    }

    fn descriptor(&self) -> Descriptor {
        (**self).descriptor()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::build::*;
    use crate::kernel::compile;
    use crate::nat::nat;

    #[test]
    fn finite_sets_are_exact() {
        let s = FiniteSet::from_u64s([1, 3]);
        for x in 0..10 {
            assert!(s.member(&nat(x)).is_definite());
        }
        assert_eq!(s.member(&nat(3)), ThreeVal::True);
    }

    #[test]
    fn program_sets() {
        let even = compile(&program(1, eq(mul(csnd(proj(0)), konst(0)), konst(0)))).unwrap();
        let s = ProgramSet {
            index: even,
            fuel: 100,
        };
        assert_eq!(s.member(&nat(4)), ThreeVal::True);
        let looping = compile(&program(1, mu(konst(1)))).unwrap();
        let s = ProgramSet {
            index: looping,
            fuel: 100,
        };
        assert_eq!(s.member(&nat(4)), ThreeVal::Unknown);
        let undef = compile(&program(1, crate::kernel::Term::Undefined)).unwrap();
        let s = ProgramSet {
            index: undef,
            fuel: 100,
        };
        assert_eq!(s.member(&nat(4)), ThreeVal::False);
    }
}
