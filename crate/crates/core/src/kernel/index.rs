//! Gödel numbering of programs.
//!
//! A program is serialized to a canonical, prefix-free byte string that
//! starts with a fixed nonzero marker byte; the index is that string read as
//! a big-endian natural. The size of an index is therefore linear in the
//! size of the program (constants included), which keeps nested s-m-n and
//! recursion-theorem constructions tractable.
//!
//! Decoding is total: anything that is not the exact serialization of a
//! well-formed program decodes to [`Program::nowhere_defined`].

use std::fmt;

use serde::{Deserialize, Serialize};

use super::term::{Program, StructError, Term};
use crate::nat::Nat;

const MARKER: u8 = 0xA7;

/// Terms nested deeper than this are rejected by `compile` and never
/// produced by `decode_index`.
pub const MAX_DEPTH: usize = 1024;

mod tag {
    pub const CONST: u8 = 0;
    pub const PROJ: u8 = 1;
    pub const SUCC: u8 = 2;
    pub const PRED: u8 = 3;
    pub const ADD: u8 = 4;
    pub const MUL: u8 = 5;
    pub const EQ: u8 = 6;
    pub const IFZ: u8 = 7;
    pub const TUPLE: u8 = 8;
    pub const TSUB: u8 = 9;
    pub const CPAIR: u8 = 10;
    pub const CFST: u8 = 11;
    pub const CSND: u8 = 12;
    pub const COMPOSE: u8 = 13;
    pub const MU: u8 = 14;
    pub const EVAL: u8 = 15;
    pub const SMN: u8 = 16;
    pub const ORACLE: u8 = 17;
    pub const UNDEF: u8 = 18;
}

/// A program index: the `e` in `φ_e`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Index(#[serde(with = "crate::nat::dec")] pub Nat);

impl Index {
    pub fn value(&self) -> &Nat {
        &self.0
    }

    pub fn into_nat(self) -> Nat {
        self.0
    }
}

impl From<Nat> for Index {
    fn from(n: Nat) -> Self {
        Index(n)
    }
}

impl fmt::Debug for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bits = crate::nat::bits(&self.0);
        if bits <= 128 {
            write!(f, "Index({})", self.0)
        } else {
            write!(f, "Index(<{bits} bits>)")
        }
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CompileError {
    #[error(transparent)]
    Struct(#[from] StructError),
    #[error("term nesting exceeds {MAX_DEPTH}")]
    TooDeep,
}

pub fn compile(p: &Program) -> Result<Index, CompileError> {
    p.check()?;
    let mut out = vec![MARKER];
    put_varint(&mut out, p.arity);
    write_term(&mut out, &p.body, 0)?;
    Ok(Index(Nat::from_be_bytes(&out)))
}

pub fn decode_index(e: &Index) -> Program {
    decode_nat(&e.0)
}

pub(crate) fn decode_nat(e: &Nat) -> Program {
    try_decode(e).unwrap_or_else(Program::nowhere_defined)
}

/// `Some` exactly when `e` is the index of a well-formed program.
pub fn try_decode(e: &Nat) -> Option<Program> {
    let bytes = e.to_be_bytes();
    let mut r = Reader {
        buf: &bytes,
        pos: 0,
    };
    if r.byte()? != MARKER {
        return None;
    }
    let arity = r.varint()?;
    let body = r.term(0)?;
    if r.pos != bytes.len() {
        return None;
    }
    let p = Program { arity, body };
    p.check().ok()?;
    Some(p)
}

fn put_varint(out: &mut Vec<u8>, mut n: usize) {
    loop {
        let b = (n & 0x7f) as u8;
        n >>= 7;
        if n == 0 {
            out.push(b);
            return;
        }
        out.push(b | 0x80);
    }
}

fn put_nat(out: &mut Vec<u8>, n: &Nat) {
    if n.is_zero() {
        put_varint(out, 0);
        return;
    }
    let bytes = n.to_be_bytes();
    put_varint(out, bytes.len());
    out.extend_from_slice(&bytes);
}

fn write_term(out: &mut Vec<u8>, t: &Term, depth: usize) -> Result<(), CompileError> {
    if depth > MAX_DEPTH {
        return Err(CompileError::TooDeep);
    }
    let d = depth + 1;
    match t {
        Term::Const(n) => {
            out.push(tag::CONST);
            put_nat(out, n);
        }
        Term::Proj(i) => {
            out.push(tag::PROJ);
            put_varint(out, *i);
        }
        Term::Succ(x) => unary(out, tag::SUCC, x, d)?,
        Term::Pred(x) => unary(out, tag::PRED, x, d)?,
        Term::CantorFst(x) => unary(out, tag::CFST, x, d)?,
        Term::CantorSnd(x) => unary(out, tag::CSND, x, d)?,
        Term::OracleQuery(x) => unary(out, tag::ORACLE, x, d)?,
        Term::Minimize(x) => unary(out, tag::MU, x, d)?,
        Term::Add(a, b) => binary(out, tag::ADD, a, b, d)?,
        Term::Mul(a, b) => binary(out, tag::MUL, a, b, d)?,
        Term::Eq(a, b) => binary(out, tag::EQ, a, b, d)?,
        Term::TupleSub(a, b) => binary(out, tag::TSUB, a, b, d)?,
        Term::CantorPair(a, b) => binary(out, tag::CPAIR, a, b, d)?,
        Term::IfZero {
            cond,
            then,
            otherwise,
        } => {
            out.push(tag::IFZ);
            write_term(out, cond, d)?;
            write_term(out, then, d)?;
            write_term(out, otherwise, d)?;
        }
        Term::Tuple(xs) => {
            out.push(tag::TUPLE);
            put_varint(out, xs.len());
            for x in xs {
                write_term(out, x, d)?;
            }
        }
        Term::Compose { head, args } => {
            out.push(tag::COMPOSE);
            put_varint(out, head.arity);
            write_term(out, &head.body, d)?;
            for x in args {
                write_term(out, x, d)?;
            }
        }
        Term::Eval { arity, code, args } => {
            out.push(tag::EVAL);
            put_varint(out, *arity);
            write_term(out, code, d)?;
            for x in args {
                write_term(out, x, d)?;
            }
        }
        Term::Smn { rest, code, fixed } => {
            out.push(tag::SMN);
            put_varint(out, *rest);
            put_varint(out, fixed.len());
            write_term(out, code, d)?;
            for x in fixed {
                write_term(out, x, d)?;
            }
        }
        Term::Undefined => out.push(tag::UNDEF),
    }
    Ok(())
}

fn unary(out: &mut Vec<u8>, tag: u8, x: &Term, depth: usize) -> Result<(), CompileError> {
    out.push(tag);
    write_term(out, x, depth)
}

fn binary(
    out: &mut Vec<u8>,
    tag: u8,
    a: &Term,
    b: &Term,
    depth: usize,
) -> Result<(), CompileError> {
    out.push(tag);
    write_term(out, a, depth)?;
    write_term(out, b, depth)
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn byte(&mut self) -> Option<u8> {
        let b = *self.buf.get(self.pos)?;
        self.pos += 1;
        Some(b)
    }

    /// Minimal LEB128 only, so that every index has one spelling.
    fn varint(&mut self) -> Option<usize> {
        let mut value: usize = 0;
        let mut shift = 0u32;
        loop {
            let b = self.byte()?;
            let low = (b & 0x7f) as usize;
            if shift >= usize::BITS || (low << shift) >> shift != low {
                return None;
            }
            value |= low << shift;
            if b & 0x80 == 0 {
                if b == 0 && shift > 0 {
                    return None;
                }
                return Some(value);
            }
            shift += 7;
        }
    }

    fn nat(&mut self) -> Option<Nat> {
        let len = self.varint()?;
        if len == 0 {
            return Some(Nat::ZERO);
        }
        let end = self.pos.checked_add(len)?;
        let bytes = self.buf.get(self.pos..end)?;
        if bytes[0] == 0 {
            return None;
        }
        self.pos = end;
        Some(Nat::from_be_bytes(bytes))
    }

    fn boxed(&mut self, depth: usize) -> Option<Box<Term>> {
        self.term(depth).map(Box::new)
    }

    fn terms(&mut self, n: usize, depth: usize) -> Option<Vec<Term>> {
        // counts come from untrusted input; do not preallocate
        let mut v = Vec::new();
        for _ in 0..n {
            v.push(self.term(depth)?);
        }
        Some(v)
    }

    fn term(&mut self, depth: usize) -> Option<Term> {
        if depth > MAX_DEPTH {
            return None;
        }
        let d = depth + 1;
        let t = match self.byte()? {
            tag::CONST => Term::Const(self.nat()?),
            tag::PROJ => Term::Proj(self.varint()?),
            tag::SUCC => Term::Succ(self.boxed(d)?),
            tag::PRED => Term::Pred(self.boxed(d)?),
            tag::CFST => Term::CantorFst(self.boxed(d)?),
            tag::CSND => Term::CantorSnd(self.boxed(d)?),
            tag::ORACLE => Term::OracleQuery(self.boxed(d)?),
            tag::MU => Term::Minimize(self.boxed(d)?),
            tag::ADD => Term::Add(self.boxed(d)?, self.boxed(d)?),
            tag::MUL => Term::Mul(self.boxed(d)?, self.boxed(d)?),
            tag::EQ => Term::Eq(self.boxed(d)?, self.boxed(d)?),
            tag::TSUB => Term::TupleSub(self.boxed(d)?, self.boxed(d)?),
            tag::CPAIR => Term::CantorPair(self.boxed(d)?, self.boxed(d)?),
            tag::IFZ => Term::IfZero {
                cond: self.boxed(d)?,
                then: self.boxed(d)?,
                otherwise: self.boxed(d)?,
            },
            tag::TUPLE => {
                let n = self.varint()?;
                Term::Tuple(self.terms(n, d)?)
            }
            tag::COMPOSE => {
                let k = self.varint()?;
                let body = self.term(d)?;
                let args = self.terms(k, d)?;
                Term::Compose {
                    head: Box::new(Program { arity: k, body }),
                    args,
                }
            }
            tag::EVAL => {
                let arity = self.varint()?;
                let code = self.boxed(d)?;
                let args = self.terms(arity, d)?;
                Term::Eval { arity, code, args }
            }
            tag::SMN => {
                let rest = self.varint()?;
                let m = self.varint()?;
                let code = self.boxed(d)?;
                let fixed = self.terms(m, d)?;
                Term::Smn { rest, code, fixed }
            }
            tag::UNDEF => Term::Undefined,
            _ => return None,
        };
        Some(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::term::build::*;
    use crate::nat::nat;

    fn round_trip(p: Program) {
        let e = compile(&p).unwrap();
        assert_eq!(decode_index(&e), p);
        assert_eq!(compile(&decode_index(&e)).unwrap(), e);
    }

    #[test]
    fn const_and_proj_round_trip() {
        round_trip(program(1, konst(5)));
        round_trip(program(0, konst(5)));
        round_trip(program(2, proj(0)));
        round_trip(program(3, big(Nat::from(7u8).pow(300))));
        round_trip(program(1, konst(0)));
    }

    #[test]
    fn compound_round_trip() {
        let head = program(2, mul(proj(0), proj(1)));
        let body = ifz(
            eq(proj(0), konst(3)),
            compose(head, vec![succ(proj(1)), pred(proj(0))]),
            tuple(vec![
                cpair(proj(0), proj(1)),
                sub_at(proj(1), 1),
                cfst(konst(9)),
            ]),
        );
        round_trip(program(2, body));
        round_trip(program(1, mu(eq(proj(1), proj(0)))));
        round_trip(program(1, eval(konst(17), vec![proj(0), oracle(proj(0))])));
        round_trip(program(2, smn(1, proj(0), vec![proj(1)])));
        round_trip(program(4, Term::Undefined));
    }

    #[test]
    fn compile_rejects_ill_formed() {
        assert!(matches!(
            compile(&program(1, proj(1))),
            Err(CompileError::Struct(StructError::ProjOutOfRange { .. }))
        ));
        let mut t = konst(0);
        for _ in 0..(MAX_DEPTH + 5) {
            t = succ(t);
        }
        assert_eq!(compile(&program(0, t)), Err(CompileError::TooDeep));
    }

    #[test]
    fn decoding_is_total() {
        for n in 0..5000u64 {
            let p = decode_index(&Index(nat(n)));
            // small numbers never carry the marker byte in front of a body
            assert!(p.is_nowhere_defined(), "{n}");
        }
        let junk = Index(Nat::from(12345678901234567890u64) * Nat::from(99991u32));
        let _ = decode_index(&junk);
    }

    #[test]
    fn non_canonical_spellings_are_rejected() {
        let e = compile(&program(1, konst(5))).unwrap();
        let mut bytes = e.0.to_be_bytes().into_vec();
        bytes.push(0);
        assert!(try_decode(&Nat::from_be_bytes(&bytes)).is_none());
        // arity 1 spelled with a redundant continuation byte
        let padded = [MARKER, 0x81, 0x00, tag::CONST, 0];
        assert!(try_decode(&Nat::from_be_bytes(&padded)).is_none());
        // constant with a leading zero byte
        let lead = [MARKER, 0, tag::CONST, 2, 0, 5];
        assert!(try_decode(&Nat::from_be_bytes(&lead)).is_none());
    }

    #[test]
    fn compile_is_injective_on_a_sample() {
        let progs = vec![
            program(0, konst(0)),
            program(1, konst(0)),
            program(1, proj(0)),
            program(2, proj(0)),
            program(2, proj(1)),
            program(1, succ(proj(0))),
            program(1, pred(proj(0))),
            program(2, add(proj(0), proj(1))),
            program(2, add(proj(1), proj(0))),
            program(0, Term::Undefined),
        ];
        let idx: std::collections::HashSet<_> = progs.iter().map(|p| compile(p).unwrap()).collect();
        assert_eq!(idx.len(), progs.len());
    }
}
