//! An acceptable programming system: structured programs, their indices,
//! fuel-bounded evaluation, s-m-n and the Recursion Theorem.

pub mod asm;
pub mod eval;
pub mod index;
pub mod smn;
pub mod term;

pub use eval::{eval, eval_oracle, EvalError, Evaluator, Outcome};
pub use index::{compile, decode_index, try_decode, CompileError, Index};
pub use smn::{kleene_fix, smn};
pub use term::{build, Program, StructError, Term};
