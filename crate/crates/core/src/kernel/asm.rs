//! Textual assembly for programs: one node per line, s-expression style.
//!
//! ```text
//! (program 2
//!   (add
//!     (proj 0)
//!     (succ
//!       (proj 1))))
//! ```
//!
//! See `docs/assembly.md` for the full grammar. Comments run from `;` to the
//! end of the line.

use std::fmt::Write;

use super::term::{Program, Term};
use crate::nat::{parse_nat, Nat};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {msg}")]
pub struct AsmError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

pub fn render(p: &Program) -> String {
    let mut out = String::new();
    write_program(&mut out, p, 0);
    out
}

fn write_program(out: &mut String, p: &Program, indent: usize) {
    let _ = write!(out, "(program {}", p.arity);
    newline(out, indent + 1);
    write_term(out, &p.body, indent + 1);
    out.push(')');
}

fn newline(out: &mut String, indent: usize) {
    out.push('\n');
    for _ in 0..indent {
        out.push_str("  ");
    }
}

fn write_term(out: &mut String, t: &Term, indent: usize) {
    let (head, kids): (String, Vec<&Term>) = match t {
        Term::Const(n) => {
            let _ = write!(out, "(const {n})");
            return;
        }
        Term::Proj(i) => {
            let _ = write!(out, "(proj {i})");
            return;
        }
        Term::Undefined => return out.push_str("(undefined)"),
        Term::Succ(x) => ("succ".into(), vec![x]),
        Term::Pred(x) => ("pred".into(), vec![x]),
        Term::CantorFst(x) => ("fst".into(), vec![x]),
        Term::CantorSnd(x) => ("snd".into(), vec![x]),
        Term::OracleQuery(x) => ("oracle".into(), vec![x]),
        Term::Minimize(x) => ("mu".into(), vec![x]),
        Term::Add(a, b) => ("add".into(), vec![a, b]),
        Term::Mul(a, b) => ("mul".into(), vec![a, b]),
        Term::Eq(a, b) => ("eq".into(), vec![a, b]),
        Term::TupleSub(a, b) => ("sub".into(), vec![a, b]),
        Term::CantorPair(a, b) => ("pair".into(), vec![a, b]),
        Term::IfZero {
            cond,
            then,
            otherwise,
        } => ("ifz".into(), vec![cond, then, otherwise]),
        Term::Tuple(xs) => ("tuple".into(), xs.iter().collect()),
        Term::Eval { arity, code, args } => {
            let mut v: Vec<&Term> = vec![code];
            v.extend(args);
            (format!("eval {arity}"), v)
        }
        Term::Smn { rest, code, fixed } => {
            let mut v: Vec<&Term> = vec![code];
            v.extend(fixed);
            (format!("smn {rest}"), v)
        }
        Term::Compose { head, args } => {
            out.push_str("(compose");
            newline(out, indent + 1);
            write_program(out, head, indent + 1);
            for a in args {
                newline(out, indent + 1);
                write_term(out, a, indent + 1);
            }
            out.push(')');
            return;
        }
    };
    let _ = write!(out, "({head}");
    for k in kids {
        newline(out, indent + 1);
        write_term(out, k, indent + 1);
    }
    out.push(')');
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Open,
    Close,
    Atom(String),
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    end: (usize, usize),
}

fn lex(src: &str) -> Lexer {
    let mut toks = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        let here = (line, col);
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {}
            ';' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    col += 1;
                }
                continue;
            }
            '(' => toks.push((Tok::Open, here.0, here.1)),
            ')' => toks.push((Tok::Close, here.0, here.1)),
            _ => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    s.push(c);
                    chars.next();
                    col += 1;
                }
                toks.push((Tok::Atom(s), here.0, here.1));
                continue;
            }
        }
        chars.next();
        col += 1;
    }
    Lexer {
        toks,
        pos: 0,
        end: (line, col),
    }
}

impl Lexer {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, AsmError> {
        let (line, col) = self
            .toks
            .get(self.pos)
            .map(|t| (t.1, t.2))
            .unwrap_or(self.end);
        Err(AsmError {
            line,
            col,
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn expect(&mut self, want: Tok) -> Result<(), AsmError> {
        match self.peek() {
            Some(t) if *t == want => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => {
                let t = t.clone();
                self.err(format!("expected {want:?}, found {t:?}"))
            }
            None => self.err(format!("expected {want:?}, found end of input")),
        }
    }

    fn atom(&mut self) -> Result<String, AsmError> {
        match self.peek() {
            Some(Tok::Atom(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err("expected an atom"),
        }
    }

    fn number(&mut self) -> Result<Nat, AsmError> {
        let at = self.pos;
        let s = self.atom()?;
        parse_nat(&s).ok_or_else(|| {
            let t = &self.toks[at];
            AsmError {
                line: t.1,
                col: t.2,
                msg: format!("expected a natural, found {s:?}"),
            }
        })
    }

    fn small(&mut self) -> Result<usize, AsmError> {
        let at = self.pos;
        let n = self.number()?;
        usize::try_from(&n).map_err(|_| {
            let t = &self.toks[at];
            AsmError {
                line: t.1,
                col: t.2,
                msg: "number too large".into(),
            }
        })
    }

    fn program(&mut self) -> Result<Program, AsmError> {
        self.expect(Tok::Open)?;
        let kw = self.atom()?;
        if kw != "program" {
            self.pos -= 1;
            return self.err(format!("expected `program`, found `{kw}`"));
        }
        let arity = self.small()?;
        let body = self.term()?;
        self.expect(Tok::Close)?;
        Ok(Program { arity, body })
    }

    fn rest_terms(&mut self) -> Result<Vec<Term>, AsmError> {
        let mut v = Vec::new();
        while matches!(self.peek(), Some(Tok::Open | Tok::Atom(_))) {
            v.push(self.term()?);
        }
        Ok(v)
    }

    fn fixed<const N: usize>(&mut self, name: &str) -> Result<[Box<Term>; N], AsmError> {
        let v = self.rest_terms()?;
        let got = v.len();
        let arr: Result<[Term; N], _> = v.try_into();
        match arr {
            Ok(a) => Ok(a.map(Box::new)),
            Err(_) => self.err(format!("`{name}` takes {N} operands, found {got}")),
        }
    }

    fn term(&mut self) -> Result<Term, AsmError> {
        if let Some(Tok::Atom(_)) = self.peek() {
            // bare numerals are constants
            return Ok(Term::Const(self.number()?));
        }
        self.expect(Tok::Open)?;
        let kw_at = self.pos;
        let kw = self.atom()?;
        let t = match kw.as_str() {
            "const" => Term::Const(self.number()?),
            "proj" => Term::Proj(self.small()?),
            "undefined" => Term::Undefined,
            "succ" => Term::Succ(self.fixed::<1>(&kw)?.into_iter().next().unwrap()),
            "pred" => Term::Pred(self.fixed::<1>(&kw)?.into_iter().next().unwrap()),
            "fst" => Term::CantorFst(self.fixed::<1>(&kw)?.into_iter().next().unwrap()),
            "snd" => Term::CantorSnd(self.fixed::<1>(&kw)?.into_iter().next().unwrap()),
            "oracle" => Term::OracleQuery(self.fixed::<1>(&kw)?.into_iter().next().unwrap()),
            "mu" => Term::Minimize(self.fixed::<1>(&kw)?.into_iter().next().unwrap()),
            "add" | "mul" | "eq" | "sub" | "pair" => {
                let [a, b] = self.fixed::<2>(&kw)?;
                match kw.as_str() {
                    "add" => Term::Add(a, b),
                    "mul" => Term::Mul(a, b),
                    "eq" => Term::Eq(a, b),
                    "sub" => Term::TupleSub(a, b),
                    _ => Term::CantorPair(a, b),
                }
            }
            "ifz" => {
                let [cond, then, otherwise] = self.fixed::<3>(&kw)?;
                Term::IfZero {
                    cond,
                    then,
                    otherwise,
                }
            }
            "tuple" => Term::Tuple(self.rest_terms()?),
            "eval" => {
                let arity = self.small()?;
                let code = Box::new(self.term()?);
                let args = self.rest_terms()?;
                Term::Eval { arity, code, args }
            }
            "smn" => {
                let rest = self.small()?;
                let code = Box::new(self.term()?);
                let fixed = self.rest_terms()?;
                Term::Smn { rest, code, fixed }
            }
            "compose" => {
                let head = Box::new(self.program()?);
                let args = self.rest_terms()?;
                Term::Compose { head, args }
            }
            other => {
                self.pos = kw_at;
                return self.err(format!("unknown node `{other}`"));
            }
        };
        self.expect(Tok::Close)?;
        Ok(t)
    }
}

/// Parses one `(program …)` form. Structural well-formedness is checked by
/// `compile`, not here.
pub fn parse(src: &str) -> Result<Program, AsmError> {
    let mut lx = lex(src);
    let p = lx.program()?;
    if lx.pos != lx.toks.len() {
        return lx.err("trailing input after program");
    }
    Ok(p)
}
