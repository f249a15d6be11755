//! The formula language: syntax, positivity, bounded evaluation and the
//! builtin formulas.

pub mod ast;
pub mod builtins;
pub mod eval;
pub mod oracle;
pub mod parse;
pub mod positivity;
pub mod psi;
pub mod three_val;

pub use ast::{Expr, Formula};
pub use builtins::{builtin, builtin_info, Builtin, UnknownBuiltin, BUILTINS};
pub use eval::{
    eval_bounded, eval_in, Env, EvalMode, FormulaEvalError, Interp, Structure, DEFAULT_APP_FUEL,
};
pub use oracle::{Descriptor, FiniteSet, FnSet, ProgramSet, SetOracle};
pub use parse::{parse, parse_term, ParseError};
pub use positivity::{check_positive, normalize_atoms, positivity_violation, Clause, Violation};
pub use psi::{
    f_psi_bit, psi_atom, psi_decide, psi_decide_at, psi_shape, psi_shape_eval, recheck, Cover,
    Discipline, PsiConfig, PsiEvidence, PsiShape, Refuter,
};
pub use three_val::ThreeVal;
