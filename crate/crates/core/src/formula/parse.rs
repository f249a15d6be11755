//! Concrete syntax for formulas. The grammar is documented in
//! `docs/formula-grammar.md`; ASCII and Unicode spellings are interchangeable.

use super::ast::{Expr, Formula};
use crate::nat::parse_nat;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    /// Character offset into the input.
    pub offset: usize,
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Eq,
    Neq,
    Plus,
    Star,
    Not,
    Or,
    And,
    Implies,
    In,
    NotIn,
    Exists,
    Forall,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) | Tok::Num(s) => format!("`{s}`"),
        other => format!("{other:?}"),
    }
}

struct Token {
    tok: Tok,
    offset: usize,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<(Vec<Token>, (usize, usize, usize)), ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let start = (i, line, col);
        let mut adv = 1;
        let tok = match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => None,
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '.' => Some(Tok::Dot),
            '=' => Some(Tok::Eq),
            '≠' => Some(Tok::Neq),
            '+' => Some(Tok::Plus),
            '*' | '·' => Some(Tok::Star),
            '~' | '¬' => Some(Tok::Not),
            '∨' | '|' => Some(Tok::Or),
            '∧' | '&' => Some(Tok::And),
            '→' => Some(Tok::Implies),
            '∈' => Some(Tok::In),
            '∉' => Some(Tok::NotIn),
            '∃' => Some(Tok::Exists),
            '∀' => Some(Tok::Forall),
            '!' if chars.get(i + 1) == Some(&'=') => {
                adv = 2;
                Some(Tok::Neq)
            }
            '\\' if chars.get(i + 1) == Some(&'/') => {
                adv = 2;
                Some(Tok::Or)
            }
            '/' if chars.get(i + 1) == Some(&'\\') => {
                adv = 2;
                Some(Tok::And)
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                adv = 2;
                Some(Tok::Implies)
            }
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                adv = j - i;
                Some(Tok::Num(chars[i..j].iter().collect()))
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len()
                    && (chars[j].is_alphanumeric() || chars[j] == '_' || chars[j] == '\'')
                {
                    j += 1;
                }
                adv = j - i;
                let word: String = chars[i..j].iter().collect();
                Some(match word.as_str() {
                    "exists" => Tok::Exists,
                    "forall" => Tok::Forall,
                    "in" => Tok::In,
                    "notin" => Tok::NotIn,
                    "not" => Tok::Not,
                    "and" => Tok::And,
                    "or" => Tok::Or,
                    _ => Tok::Ident(word),
                })
            }
            other => {
                return Err(ParseError {
                    offset: i,
                    line,
                    col,
                    msg: format!("unexpected character {other:?}"),
                })
            }
        };
        if let Some(tok) = tok {
            out.push(Token {
                tok,
                offset: start.0,
                line: start.1,
                col: start.2,
            });
        }
        i += adv;
        col += adv;
    }
    Ok((out, (i, line, col)))
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    end: (usize, usize, usize),
    /// The error that got furthest into the input, kept across backtracking.
    best: Option<ParseError>,
}

type PResult<T> = Result<T, ParseError>;

fn is_var(s: &str) -> bool {
    s.chars()
        .next()
        .is_some_and(|c| c.is_lowercase() || c == '_')
        && !matches!(s, "pair" | "app")
}

fn is_rel(s: &str) -> bool {
    s.chars().next().is_some_and(|c| c.is_uppercase())
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|t| &t.tok)
    }

    fn error<T>(&mut self, msg: impl Into<String>) -> PResult<T> {
        let (offset, line, col) = self
            .toks
            .get(self.pos)
            .map(|t| (t.offset, t.line, t.col))
            .unwrap_or(self.end);
        let e = ParseError {
            offset,
            line,
            col,
            msg: msg.into(),
        };
        if self.best.as_ref().is_none_or(|b| b.offset <= e.offset) {
            self.best = Some(e.clone());
        }
        Err(e)
    }

    fn found(&self) -> String {
        self.peek()
            .map(describe)
            .unwrap_or_else(|| "end of input".into())
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok, what: &str) -> PResult<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            let found = self.found();
            self.error(format!("expected {what}, found {found}"))
        }
    }

    fn formula(&mut self) -> PResult<Formula> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Implies) {
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> PResult<Formula> {
        let mut f = self.conjunction()?;
        while self.eat(&Tok::Or) {
            f = Formula::or(f, self.conjunction()?);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let mut f = self.unary()?;
        while self.eat(&Tok::And) {
            f = Formula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> PResult<Formula> {
        match self.peek() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::Exists) | Some(Tok::Forall) => self.quantified(),
            Some(Tok::LParen) => {
                let save = self.pos;
                self.pos += 1;
                if let Ok(f) = self.formula() {
                    if self.eat(&Tok::RParen) {
                        return Ok(f);
                    }
                    let found = self.found();
                    let _ = self.error::<()>(format!("expected `)`, found {found}"));
                }
                // not a parenthesized formula; maybe a parenthesized term
                self.pos = save;
                self.atom()
            }
            _ => self.atom(),
        }
    }

    fn quantified(&mut self) -> PResult<Formula> {
        let universal = self.peek() == Some(&Tok::Forall);
        self.pos += 1;
        let mut vars = Vec::new();
        loop {
            match self.peek() {
                Some(Tok::Ident(s)) if is_var(s) => {
                    vars.push(s.clone());
                    self.pos += 1;
                    self.eat(&Tok::Comma);
                }
                _ => break,
            }
        }
        if vars.is_empty() {
            let found = self.found();
            return self.error(format!("expected a bound variable, found {found}"));
        }
        self.eat(&Tok::Dot);
        let mut body = self.formula()?;
        for v in vars.into_iter().rev() {
            body = if universal {
                Formula::Forall(v, Box::new(body))
            } else {
                Formula::Exists(v, Box::new(body))
            };
        }
        Ok(body)
    }

    fn atom(&mut self) -> PResult<Formula> {
        let lhs = self.term()?;
        match self.peek() {
            Some(Tok::Eq) => {
                self.pos += 1;
                Ok(Formula::Eq(lhs, self.term()?))
            }
            Some(Tok::Neq) => {
                self.pos += 1;
                Ok(Formula::not(Formula::Eq(lhs, self.term()?)))
            }
            Some(Tok::In) | Some(Tok::NotIn) => {
                let negated = self.peek() == Some(&Tok::NotIn);
                self.pos += 1;
                let rel = match self.peek() {
                    Some(Tok::Ident(s)) if is_rel(s) => s.clone(),
                    _ => {
                        let found = self.found();
                        return self.error(format!("expected a relation name, found {found}"));
                    }
                };
                self.pos += 1;
                let m = Formula::Mem(lhs, rel);
                Ok(if negated { Formula::not(m) } else { m })
            }
            _ => {
                let found = self.found();
                self.error(format!(
                    "expected `=`, `!=` or `in` after a term, found {found}"
                ))
            }
        }
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut t = self.product()?;
        while self.eat(&Tok::Plus) {
            t = Expr::Add(Box::new(t), Box::new(self.product()?));
        }
        Ok(t)
    }

    fn product(&mut self) -> PResult<Expr> {
        let mut t = self.term_atom()?;
        while self.eat(&Tok::Star) {
            t = Expr::Mul(Box::new(t), Box::new(self.term_atom()?));
        }
        Ok(t)
    }

    fn args(&mut self) -> PResult<Vec<Expr>> {
        self.expect(Tok::LParen, "`(`")?;
        let mut v = Vec::new();
        if self.eat(&Tok::RParen) {
            return Ok(v);
        }
        loop {
            v.push(self.term()?);
            if self.eat(&Tok::RParen) {
                return Ok(v);
            }
            self.expect(Tok::Comma, "`,` or `)`")?;
        }
    }

    fn term_atom(&mut self) -> PResult<Expr> {
        let tok = self.peek().cloned();
        match tok {
            Some(Tok::Num(s)) => {
                self.pos += 1;
                match parse_nat(&s) {
                    Some(n) => Ok(Expr::Const(n)),
                    None => self.error("bad numeral"),
                }
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            Some(Tok::Ident(s)) if s == "S" && self.peek2() == Some(&Tok::LParen) => {
                self.pos += 1;
                let mut a = self.args()?;
                if a.len() != 1 {
                    self.pos -= 1;
                    return self.error("`S` takes one argument");
                }
                Ok(Expr::Succ(Box::new(a.remove(0))))
            }
            Some(Tok::Ident(s)) if s == "pair" => {
                self.pos += 1;
                Ok(Expr::Pair(self.args()?))
            }
            Some(Tok::Ident(s)) if s == "app" => {
                self.pos += 1;
                let mut a = self.args()?;
                if a.len() != 2 {
                    self.pos -= 1;
                    return self.error("`app` takes two arguments");
                }
                let k = a.pop().expect("two args");
                let e = a.pop().expect("two args");
                Ok(Expr::app(e, k))
            }
            Some(Tok::Ident(s)) if is_var(&s) => {
                self.pos += 1;
                Ok(Expr::Var(s))
            }
            _ => {
                let found = self.found();
                self.error(format!("expected a term, found {found}"))
            }
        }
    }
}

pub fn parse(src: &str) -> Result<Formula, ParseError> {
    let (toks, end) = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end,
        best: None,
    };
    match p.formula() {
        Ok(f) if p.pos == p.toks.len() => Ok(f),
        Ok(_) => {
            let found = p.found();
            let e = p.error::<()>(format!("unexpected {found} after formula"));
            Err(p.best.take().unwrap_or_else(|| e.unwrap_err()))
        }
        Err(e) => Err(p.best.take().unwrap_or(e)),
    }
}

pub fn parse_term(src: &str) -> Result<Expr, ParseError> {
    let (toks, end) = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end,
        best: None,
    };
    let t = p.term()?;
    if p.pos != p.toks.len() {
        let found = p.found();
        return p.error(format!("unexpected {found} after term"));
    }
    Ok(t)
}
