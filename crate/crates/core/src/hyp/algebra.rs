//! Boolean combinations of finite sets, and their codes.
//!
//! Grammar, loosest first:
//!
//! ```text
//! expr  := inter (("∪" | "|") inter)*
//! inter := unary (("∩" | "&") unary)*
//! unary := ("~" | "¬") unary | atom ("ᶜ" | "^c")*
//! atom  := "{" nat ("," nat)* "}" | "(" expr ")"
//! ```

use std::fmt;

use super::cert::{complement, u1, union_of, Cert};
use crate::nat::{parse_nat, Nat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetExpr {
    /// Non-empty, sorted, without repeats.
    Finite(Vec<Nat>),
    Union(Vec<SetExpr>),
    Inter(Vec<SetExpr>),
    Complement(Box<SetExpr>),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("at byte {pos}: expected {expected}")]
    Expected { pos: usize, expected: &'static str },
    #[error("at byte {pos}: the empty set is written as a complement, e.g. {{0}} & ~{{0}}")]
    EmptyBraces { pos: usize },
    #[error("at byte {pos}: trailing input")]
    Trailing { pos: usize },
}

impl SetExpr {
    pub fn parse(src: &str) -> Result<SetExpr, AlgebraError> {
        let mut p = Parser { src, pos: 0 };
        let e = p.expr()?;
        p.ws();
        if p.pos != src.len() {
            return Err(AlgebraError::Trailing { pos: p.pos });
        }
        Ok(e)
    }

    pub fn contains(&self, x: &Nat) -> bool {
        match self {
            SetExpr::Finite(xs) => xs.binary_search(x).is_ok(),
            SetExpr::Union(es) => es.iter().any(|e| e.contains(x)),
            SetExpr::Inter(es) => es.iter().all(|e| e.contains(x)),
            SetExpr::Complement(e) => !e.contains(x),
        }
    }
}

impl fmt::Display for SetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |f: &mut fmt::Formatter<'_>, es: &[SetExpr], op: &str| {
            f.write_str("(")?;
            for (i, e) in es.iter().enumerate() {
                if i > 0 {
                    write!(f, " {op} ")?;
                }
                write!(f, "{e}")?;
            }
            f.write_str(")")
        };
        match self {
            SetExpr::Finite(xs) => {
                f.write_str("{")?;
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str("}")
            }
            SetExpr::Union(es) => join(f, es, "|"),
            SetExpr::Inter(es) => join(f, es, "&"),
            SetExpr::Complement(e) => write!(f, "~{e}"),
        }
    }
}

/// The certified code of a Boolean combination of finite sets.
/// Intersections go through De Morgan.
pub fn build_arithmetical(e: &SetExpr) -> Cert {
    match e {
        SetExpr::Finite(xs) if xs.len() == 1 => u1(xs[0].clone()),
        SetExpr::Finite(xs) => {
            union_of(&xs.iter().cloned().map(u1).collect::<Vec<_>>()).expect("non-empty")
        }
        SetExpr::Union(es) => {
            union_of(&es.iter().map(build_arithmetical).collect::<Vec<_>>()).expect("non-empty")
        }
        SetExpr::Inter(es) => {
            let parts: Vec<Cert> = es
                .iter()
                .map(|e| complement(&build_arithmetical(e)))
                .collect();
            complement(&union_of(&parts).expect("non-empty"))
        }
        SetExpr::Complement(e) => complement(&build_arithmetical(e)),
    }
}

struct Parser<'s> {
    src: &'s str,
    pos: usize,
}

impl Parser<'_> {
    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn ws(&mut self) {
        let t = self.rest().trim_start();
        self.pos = self.src.len() - t.len();
    }

    fn eat(&mut self, toks: &[&str]) -> bool {
        self.ws();
        for t in toks {
            if self.rest().starts_with(t) {
                self.pos += t.len();
                return true;
            }
        }
        false
    }

    fn expected(&self, expected: &'static str) -> AlgebraError {
        AlgebraError::Expected {
            pos: self.pos,
            expected,
        }
    }

    fn expr(&mut self) -> Result<SetExpr, AlgebraError> {
        let mut es = vec![self.inter()?];
        while self.eat(&["∪", "|"]) {
            es.push(self.inter()?);
        }
        Ok(if es.len() == 1 {
            es.pop().unwrap()
        } else {
            SetExpr::Union(es)
        })
    }

    fn inter(&mut self) -> Result<SetExpr, AlgebraError> {
        let mut es = vec![self.unary()?];
        while self.eat(&["∩", "&"]) {
            es.push(self.unary()?);
        }
        Ok(if es.len() == 1 {
            es.pop().unwrap()
        } else {
            SetExpr::Inter(es)
        })
    }

    fn unary(&mut self) -> Result<SetExpr, AlgebraError> {
        if self.eat(&["~", "¬"]) {
            return Ok(SetExpr::Complement(Box::new(self.unary()?)));
        }
        let mut e = self.atom()?;
        while self.eat(&["ᶜ", "^c"]) {
            e = SetExpr::Complement(Box::new(e));
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<SetExpr, AlgebraError> {
        if self.eat(&["("]) {
            let e = self.expr()?;
            if !self.eat(&[")"]) {
                return Err(self.expected("`)`"));
            }
            return Ok(e);
        }
        if !self.eat(&["{"]) {
            return Err(self.expected("`{` or `(`"));
        }
        let open = self.pos - 1;
        if self.eat(&["}"]) {
            return Err(AlgebraError::EmptyBraces { pos: open });
        }
        let mut xs = vec![self.number()?];
        while self.eat(&[","]) {
            xs.push(self.number()?);
        }
        if !self.eat(&["}"]) {
            return Err(self.expected("`,` or `}`"));
        }
        xs.sort();
        xs.dedup();
        Ok(SetExpr::Finite(xs))
    }

    fn number(&mut self) -> Result<Nat, AlgebraError> {
        self.ws();
        let len = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        let n = parse_nat(&self.rest()[..len]).ok_or_else(|| self.expected("a natural number"))?;
        self.pos += len;
        Ok(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nat::nat;

    fn members(e: &SetExpr) -> Vec<u64> {
        (0..12).filter(|&x| e.contains(&nat(x))).collect()
    }

    #[test]
    fn parses_and_evaluates() {
        let e = SetExpr::parse("{1,3} ∪ {5}").unwrap();
        assert_eq!(members(&e), vec![1, 3, 5]);
        let e = SetExpr::parse("~{1,3} & ({1,2} | {3,4})").unwrap();
        assert_eq!(members(&e), vec![2, 4]);
        let e = SetExpr::parse("{2}ᶜ ∩ {2,3}^c").unwrap();
        assert_eq!(members(&e).len(), 10);
        assert_eq!(
            SetExpr::parse("{3,1,1}").unwrap(),
            SetExpr::Finite(vec![nat(1), nat(3)])
        );
    }

    #[test]
    fn errors() {
        assert_eq!(
            SetExpr::parse("{}"),
            Err(AlgebraError::EmptyBraces { pos: 0 })
        );
        assert!(matches!(
            SetExpr::parse("{1} {2}"),
            Err(AlgebraError::Trailing { .. })
        ));
        assert!(matches!(
            SetExpr::parse("{1,"),
            Err(AlgebraError::Expected { .. })
        ));
        assert!(matches!(
            SetExpr::parse("(1)"),
            Err(AlgebraError::Expected { .. })
        ));
    }

    #[test]
    fn codes_match_the_expression() {
        assert_eq!(
            build_arithmetical(&SetExpr::parse("{0}").unwrap()).index(),
            &nat(3)
        );
        for src in ["{1,3} | {5}", "~{4}", "~({1} | {2})", "{1,2} & {2,3}"] {
            let e = SetExpr::parse(src).unwrap();
            let c = build_arithmetical(&e);
            for x in 0..12u64 {
                assert_eq!(c.member(&nat(x)), e.contains(&nat(x)), "{src} at {x}");
            }
        }
    }

    #[test]
    fn display_round_trips() {
        let e = SetExpr::parse("~{1,3} & ({1,2} | {3,4}ᶜ)").unwrap();
        assert_eq!(SetExpr::parse(&e.to_string()).unwrap(), e);
    }
}
