//! Fuel-bounded evaluation.
//!
//! Every node visit costs one unit of fuel; `Minimize` additionally pays one
//! unit per probe. Fuel is shared by the whole computation, nested `Eval`
//! calls included, so a run either halts, hits a definitely undefined node,
//! or exhausts its budget.

use std::collections::HashMap;
use std::rc::Rc;

use serde::{Deserialize, Serialize};

use super::index::{decode_nat, Index};
use super::smn::specialize_nat;
use super::term::{Program, Term};
use crate::coding::{cantor_pair, cantor_split, encode_tuple, tuple_subscript};
use crate::nat::{bits, Nat};

/// Intermediate values wider than this abort the run as resource exhaustion
/// (reported as `OutOfFuel`): fuel alone does not bound the size of
/// repeated squaring.
pub const MAX_VALUE_BITS: usize = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "OutcomeRepr", from = "OutcomeRepr")]
pub enum Outcome {
    Halted(Nat),
    OutOfFuel,
    Undefined,
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
enum OutcomeRepr {
    Halted {
        #[serde(with = "crate::nat::dec")]
        value: Nat,
    },
    OutOfFuel,
    Undefined,
}

impl From<Outcome> for OutcomeRepr {
    fn from(o: Outcome) -> Self {
        match o {
            Outcome::Halted(value) => OutcomeRepr::Halted { value },
            Outcome::OutOfFuel => OutcomeRepr::OutOfFuel,
            Outcome::Undefined => OutcomeRepr::Undefined,
        }
    }
}

impl From<OutcomeRepr> for Outcome {
    fn from(o: OutcomeRepr) -> Self {
        match o {
            OutcomeRepr::Halted { value } => Outcome::Halted(value),
            OutcomeRepr::OutOfFuel => Outcome::OutOfFuel,
            OutcomeRepr::Undefined => Outcome::Undefined,
        }
    }
}

impl Outcome {
    pub fn halted(&self) -> Option<&Nat> {
        match self {
            Outcome::Halted(v) => Some(v),
            _ => None,
        }
    }

    pub fn into_halted(self) -> Option<Nat> {
        match self {
            Outcome::Halted(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_definite(&self) -> bool {
        !matches!(self, Outcome::OutOfFuel)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("program expects {expected} arguments, got {got}")]
    ArityMismatch { expected: usize, got: usize },
}

/// An oracle answering `OracleQuery` nodes.
pub type Oracle<'a> = &'a (dyn Fn(&Nat) -> bool + Sync);

pub fn empty_oracle(_: &Nat) -> bool {
    false
}

enum Stop {
    Fuel,
    Undef,
}

type Step = Result<Nat, Stop>;

/// A reusable evaluator. Decoded programs and s-m-n results are memoized
/// across runs; both are pure functions of their inputs, so reuse never
/// changes an outcome.
pub struct Evaluator<'o> {
    oracle: Oracle<'o>,
    decoded: HashMap<Nat, Rc<Program>>,
    specialized: HashMap<(Nat, usize, Vec<Nat>), Nat>,
    fuel: u64,
}

impl Default for Evaluator<'static> {
    fn default() -> Self {
        Evaluator::new(&empty_oracle)
    }
}

impl<'o> Evaluator<'o> {
    pub fn new(oracle: Oracle<'o>) -> Self {
        Evaluator {
            oracle,
            decoded: HashMap::new(),
            specialized: HashMap::new(),
            fuel: 0,
        }
    }

    pub fn eval(&mut self, e: &Index, args: &[Nat], fuel: u64) -> Result<Outcome, EvalError> {
        self.eval_counted(e, args, fuel).map(|(o, _)| o)
    }

    /// Like [`Evaluator::eval`], also returning the fuel consumed.
    pub fn eval_counted(
        &mut self,
        e: &Index,
        args: &[Nat],
        fuel: u64,
    ) -> Result<(Outcome, u64), EvalError> {
        let p = self.decode(e.value());
        self.run_program(&p, args, fuel)
    }

    pub fn eval_program(
        &mut self,
        p: &Program,
        args: &[Nat],
        fuel: u64,
    ) -> Result<Outcome, EvalError> {
        self.run_program(p, args, fuel).map(|(o, _)| o)
    }

    fn run_program(
        &mut self,
        p: &Program,
        args: &[Nat],
        fuel: u64,
    ) -> Result<(Outcome, u64), EvalError> {
        if p.is_nowhere_defined() {
            // the canonical undefined program answers every arity
            return Ok((Outcome::Undefined, 0));
        }
        if p.arity != args.len() {
            return Err(EvalError::ArityMismatch {
                expected: p.arity,
                got: args.len(),
            });
        }
        self.fuel = fuel;
        let r = self.run(&p.body, args);
        let used = fuel - self.fuel;
        let out = match r {
            Ok(v) => Outcome::Halted(v),
            Err(Stop::Fuel) => Outcome::OutOfFuel,
            Err(Stop::Undef) => Outcome::Undefined,
        };
        Ok((out, used))
    }

    /// Applies the program coded by `code` at the given arity. Never errors:
    /// an arity mismatch inside a computation is divergence.
    pub fn apply(&mut self, code: &Nat, args: &[Nat], fuel: u64) -> Outcome {
        let p = self.decode(code);
        if p.arity != args.len() {
            return Outcome::Undefined;
        }
        self.run_program(&p, args, fuel)
            .map_or(Outcome::Undefined, |(o, _)| o)
    }

    fn decode(&mut self, code: &Nat) -> Rc<Program> {
        if let Some(p) = self.decoded.get(code) {
            return p.clone();
        }
        let p = Rc::new(decode_nat(code));
        self.decoded.insert(code.clone(), p.clone());
        p
    }

    fn specialize(&mut self, code: Nat, rest: usize, fixed: Vec<Nat>) -> Nat {
        let key = (code, rest, fixed);
        if let Some(v) = self.specialized.get(&key) {
            return v.clone();
        }
        let v = specialize_nat(&key.0, rest, &key.2);
        self.specialized.insert(key, v.clone());
        v
    }

    fn tick(&mut self) -> Result<(), Stop> {
        if self.fuel == 0 {
            return Err(Stop::Fuel);
        }
        self.fuel -= 1;
        Ok(())
    }

    fn run(&mut self, t: &Term, env: &[Nat]) -> Step {
        stacker::maybe_grow(64 * 1024, 4 * 1024 * 1024, || self.step(t, env))
    }

    fn many(&mut self, ts: &[Term], env: &[Nat]) -> Result<Vec<Nat>, Stop> {
        ts.iter().map(|t| self.run(t, env)).collect()
    }

    fn step(&mut self, t: &Term, env: &[Nat]) -> Step {
        self.tick()?;
        let v = match t {
            Term::Const(n) => n.clone(),
            Term::Proj(i) => env[*i].clone(),
            Term::Succ(x) => self.run(x, env)? + Nat::ONE,
            Term::Pred(x) => {
                let v = self.run(x, env)?;
                if v.is_zero() {
                    v
                } else {
                    v - Nat::ONE
                }
            }
            Term::Add(a, b) => self.run(a, env)? + self.run(b, env)?,
            Term::Mul(a, b) => {
                let x = self.run(a, env)?;
                let y = self.run(b, env)?;
                if bits(&x) + bits(&y) > MAX_VALUE_BITS {
                    return Err(Stop::Fuel);
                }
                x * y
            }
            Term::Eq(a, b) => {
                let x = self.run(a, env)?;
                let y = self.run(b, env)?;
                Nat::from((x == y) as u8)
            }
            Term::IfZero {
                cond,
                then,
                otherwise,
            } => {
                if self.run(cond, env)?.is_zero() {
                    self.run(then, env)?
                } else {
                    self.run(otherwise, env)?
                }
            }
            Term::Tuple(xs) => encode_tuple(&self.many(xs, env)?),
            Term::TupleSub(x, i) => {
                let x = self.run(x, env)?;
                let i = self.run(i, env)?;
                tuple_subscript(&x, &i)
            }
            Term::CantorPair(a, b) => {
                let x = self.run(a, env)?;
                let y = self.run(b, env)?;
                cantor_pair(&x, &y)
            }
            Term::CantorFst(x) => cantor_split(&self.run(x, env)?).0,
            Term::CantorSnd(x) => cantor_split(&self.run(x, env)?).1,
            Term::Compose { head, args } => {
                let vals = self.many(args, env)?;
                self.run(&head.body, &vals)?
            }
            Term::Minimize(body) => {
                let mut local = env.to_vec();
                local.push(Nat::ZERO);
                loop {
                    self.tick()?;
                    if self.run(body, &local)?.is_zero() {
                        break local.pop().unwrap_or_default();
                    }
                    let last = local.last_mut().expect("search slot");
                    *last += Nat::ONE;
                }
            }
            Term::Eval { arity, code, args } => {
                let code = self.run(code, env)?;
                let vals = self.many(args, env)?;
                let p = self.decode(&code);
                if p.arity != *arity || p.is_nowhere_defined() {
                    return Err(Stop::Undef);
                }
                self.run(&p.body, &vals)?
            }
            Term::Smn { rest, code, fixed } => {
                let code = self.run(code, env)?;
                let vals = self.many(fixed, env)?;
                self.specialize(code, *rest, vals)
            }
            Term::OracleQuery(x) => {
                let q = self.run(x, env)?;
                Nat::from((self.oracle)(&q) as u8)
            }
            Term::Undefined => return Err(Stop::Undef),
        };
        if bits(&v) > MAX_VALUE_BITS {
            return Err(Stop::Fuel);
        }
        Ok(v)
    }
}

/// `φ_e(args)` within `fuel` steps, with the empty oracle.
pub fn eval(e: &Index, args: &[Nat], fuel: u64) -> Result<Outcome, EvalError> {
    Evaluator::default().eval(e, args, fuel)
}

/// `φ_e^X(args)` where `X` is the set whose characteristic function is `oracle`.
pub fn eval_oracle(
    e: &Index,
    args: &[Nat],
    oracle: Oracle<'_>,
    fuel: u64,
) -> Result<Outcome, EvalError> {
    Evaluator::new(oracle).eval(e, args, fuel)
}
