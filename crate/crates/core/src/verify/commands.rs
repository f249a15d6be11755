//! The `eval`, `lfp` and `compile` commands, minus argument parsing.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::Serialize;

use crate::fixpoint::{default_stage_cap, lfp_finite, FixpointError, Operator, StageTrace};
use crate::formula::{
    builtin, parse, parse_term, psi_decide, Descriptor, Discipline, Env, EvalMode, Expr, FiniteSet,
    Formula, FormulaEvalError, Interp, ParseError, ProgramSet, PsiConfig, PsiEvidence, SetOracle,
    Structure, ThreeVal, UnknownBuiltin,
};
use crate::hyp::{shipped_pool, QStar};
use crate::kernel::asm::{self, AsmError};
use crate::kernel::{compile, decode_index, CompileError, Index, Outcome};
use crate::nat::{bits, parse_nat, Nat};

use super::{ConfigError, UnknownDemo};

#[derive(Debug, thiserror::Error)]
pub enum CommandError {
    #[error("formula: {0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Builtin(#[from] UnknownBuiltin),
    #[error("oracle `{0}`: expected `empty`, `{{n,…}}`, `program:<index>` or `certificates`")]
    Oracle(String),
    #[error("binding `{0}`: expected `name=term`")]
    Binding(String),
    #[error("binding `{name}` has no value: {outcome}")]
    BindingValue { name: String, outcome: String },
    #[error(transparent)]
    Eval(#[from] FormulaEvalError),
    #[error(transparent)]
    Fixpoint(#[from] FixpointError),
    #[error("assembly: {0}")]
    Asm(#[from] AsmError),
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error("`{0}` is not a natural number")]
    NotANumber(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Demo(#[from] UnknownDemo),
}

/// The interpretation of the relation symbols in `eval`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleSpec {
    Empty,
    Finite(Vec<Nat>),
    Program(Nat),
    /// `Q*` over the shipped certificate pool.
    Certificates,
}

impl FromStr for OracleSpec {
    type Err = CommandError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_oracle(s)
    }
}

pub fn parse_oracle(s: &str) -> Result<OracleSpec, CommandError> {
    let bad = || CommandError::Oracle(s.to_string());
    let t = s.trim();
    if t == "empty" {
        return Ok(OracleSpec::Empty);
    }
    if t == "certificates" {
        return Ok(OracleSpec::Certificates);
    }
    if let Some(n) = t.strip_prefix("program:") {
        return parse_nat(n).map(OracleSpec::Program).ok_or_else(bad);
    }
    let inner = t
        .strip_prefix('{')
        .and_then(|r| r.strip_suffix('}'))
        .ok_or_else(bad)?;
    if inner.trim().is_empty() {
        return Ok(OracleSpec::Finite(vec![]));
    }
    let xs = inner
        .split(',')
        .map(parse_nat)
        .collect::<Option<Vec<_>>>()
        .ok_or_else(bad)?;
    Ok(OracleSpec::Finite(xs))
}

impl OracleSpec {
    pub fn build(&self, cfg_fuel: u64, horizon: u64) -> Box<dyn SetOracle> {
        match self {
            OracleSpec::Empty => Box::new(FiniteSet::empty()),
            OracleSpec::Finite(xs) => Box::new(xs.iter().cloned().collect::<FiniteSet>()),
            OracleSpec::Program(e) => Box::new(ProgramSet {
                index: Index(e.clone()),
                fuel: cfg_fuel,
            }),
            OracleSpec::Certificates => Box::new(QStar::new(&shipped_pool(), horizon)),
        }
    }
}

/// `name=term`, e.g. `y=pair(pair(0,2),2)`.
pub fn parse_binding(s: &str) -> Result<(String, Expr), CommandError> {
    let (name, term) = s
        .split_once('=')
        .ok_or_else(|| CommandError::Binding(s.to_string()))?;
    let name = name.trim();
    if name.is_empty()
        || !name
            .chars()
            .all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
    {
        return Err(CommandError::Binding(s.to_string()));
    }
    Ok((name.to_string(), parse_term(term)?))
}

/// `builtin:<name>` or formula text.
pub fn formula_source(src: &str) -> Result<(Formula, Option<String>), CommandError> {
    match src.trim().strip_prefix("builtin:") {
        Some(name) => Ok((builtin(name.trim())?, Some(name.trim().to_string()))),
        None => Ok((parse(src)?, None)),
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QuantifierMode {
    /// Quantifiers range over ω; a bounded search that finds nothing is
    /// Unknown.
    #[default]
    Conservative,
    /// Quantifiers range over `[0, B)` and that range is the whole universe.
    Finite,
}

impl FromStr for QuantifierMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "conservative" => Ok(QuantifierMode::Conservative),
            "finite" => Ok(QuantifierMode::Finite),
            other => Err(format!(
                "unknown mode `{other}` (expected conservative or finite)"
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EvalReport {
    pub formula: String,
    pub mode: QuantifierMode,
    pub bound: u64,
    pub oracle: Descriptor,
    #[serde(with = "dec_map")]
    pub bindings: BTreeMap<String, Nat>,
    pub verdict: ThreeVal,
    /// For the builtin `psi`: how the shape-directed decision was reached.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evidence: Option<PsiEvidence>,
}

mod dec_map {
    use std::collections::BTreeMap;

    use serde::Serializer;

    use crate::nat::Nat;

    pub fn serialize<S: Serializer>(m: &BTreeMap<String, Nat>, s: S) -> Result<S::Ok, S::Error> {
        s.collect_map(m.iter().map(|(k, v)| (k, v.to_string())))
    }
}

impl EvalReport {
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.formula);
        for (k, v) in &self.bindings {
            out += &format!("  {k} = {}\n", crate::hyp::abbrev(v));
        }
        out += &format!(
            "  oracle: {}\n  mode: {:?}, bound {}\n",
            self.oracle, self.mode, self.bound
        );
        out += &format!("verdict: {}\n", self.verdict);
        if let Some(e) = &self.evidence {
            out += &format!(
                "evidence: {}\n",
                serde_json::to_string(e).expect("evidence serializes")
            );
        }
        out
    }

    /// `0` for a definite verdict, `2` for Unknown.
    pub fn exit_code(&self) -> i32 {
        if self.verdict.is_definite() {
            super::EXIT_PASS
        } else {
            super::EXIT_UNKNOWN
        }
    }
}

pub fn cmd_eval(
    src: &str,
    bindings: &[String],
    oracle: &OracleSpec,
    mode: QuantifierMode,
    bound: u64,
    fuel: u64,
    horizon: u64,
) -> Result<EvalReport, CommandError> {
    if bound == 0 {
        return Err(ConfigError { field: "bound" }.into());
    }
    let (f, builtin_name) = formula_source(src)?;
    let r = oracle.build(fuel, horizon);
    let structure = Structure::uniform(r.as_ref());
    let eval_mode = match mode {
        QuantifierMode::Conservative => EvalMode::ConservativeOmega(bound),
        QuantifierMode::Finite => EvalMode::FiniteUniverse(bound),
    };
    let mut interp = Interp::new(&structure, eval_mode, fuel)?;
    let mut env = Env::new();
    for b in bindings {
        let (name, term) = parse_binding(b)?;
        match interp.eval_term(&term, &env)? {
            Outcome::Halted(v) => {
                env.insert(name, v);
            }
            other => {
                return Err(CommandError::BindingValue {
                    name,
                    outcome: format!("{other:?}"),
                })
            }
        }
    }
    let verdict = interp.eval(&f, &env)?;
    let evidence = match (builtin_name.as_deref(), env.get("y")) {
        (Some("psi"), Some(y)) => {
            let discipline = match mode {
                QuantifierMode::Conservative => Discipline::Conservative,
                QuantifierMode::Finite => Discipline::Box,
            };
            Some(
                psi_decide(
                    y,
                    r.as_ref(),
                    &PsiConfig {
                        bound,
                        fuel,
                        discipline,
                    },
                )
                .1,
            )
        }
        _ => None,
    };
    Ok(EvalReport {
        formula: f.to_string(),
        mode,
        bound,
        oracle: r.descriptor(),
        bindings: env,
        verdict,
        evidence,
    })
}

/// Least-fixed-point stages of a positive formula over `[0, n)`.
pub fn cmd_lfp(src: &str, n: u64, fuel: u64) -> Result<StageTrace, CommandError> {
    if n == 0 {
        return Err(ConfigError { field: "universe" }.into());
    }
    let (f, _) = formula_source(src)?;
    let mut op = Operator::new(f)?;
    op.app_fuel = fuel;
    Ok(lfp_finite(&op, n, default_stage_cap(n))?)
}

pub fn lfp_text(t: &StageTrace) -> String {
    let mut out = String::new();
    for (i, s) in t.stages.iter().enumerate() {
        out += &format!("stage {i}: {s:?}\n");
    }
    out += &match t.stabilized_at {
        Some(i) => format!("stable from stage {i} ({} points undecided)\n", t.undecided),
        None => format!("not stable after {} applications\n", t.stage_cap),
    };
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompileReport {
    pub index: Index,
    pub arity: usize,
    pub bits: usize,
    pub program: String,
}

impl CompileReport {
    fn of(index: Index) -> Self {
        let p = decode_index(&index);
        CompileReport {
            arity: p.arity,
            bits: bits(index.value()),
            program: asm::render(&p),
            index,
        }
    }

    pub fn to_text(&self) -> String {
        format!(
            "{}\n; arity {}, {} bits\n{}\n",
            self.index, self.arity, self.bits, self.program
        )
    }
}

/// Assembly text to its index.
pub fn cmd_compile(src: &str) -> Result<CompileReport, CommandError> {
    Ok(CompileReport::of(compile(&asm::parse(src)?)?))
}

/// An index back to assembly text; numbers that are not program indices
/// decode to the nowhere-defined program.
pub fn cmd_decode(index: &str) -> Result<CompileReport, CommandError> {
    let n = parse_nat(index).ok_or_else(|| CommandError::NotANumber(index.to_string()))?;
    Ok(CompileReport::of(Index(n)))
}
