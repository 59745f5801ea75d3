//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := factor ("*" factor)*
//! factor := base ("^" nat)?
//! base   := nat | ident | "(" expr ")" | "-" factor
//! ```
//!
//! Multiplication is always explicit; `2x` is a syntax error.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Monomial, PolyError, Polynomial};

const MAX_NESTING: usize = 256;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, PolyError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let digits = &text[start..i];
                out.push((start, Tok::Num(digits.parse().expect("ascii digits"))));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(syntax(start, format!("unexpected character `{ch}`")));
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

fn syntax(position: usize, message: String) -> PolyError {
    PolyError::Syntax { position, message }
}

type Terms = BTreeMap<Monomial, BigInt>;

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    end: usize,
    vars: Vec<String>,
    depth: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn expr(&mut self) -> Result<Terms, PolyError> {
        let mut acc = self.term()?;
        loop {
            let negate = match self.peek() {
                Some(Tok::Plus) => false,
                Some(Tok::Minus) => true,
                _ => return Ok(acc),
            };
            self.pos += 1;
            let rhs = self.term()?;
            for (m, c) in rhs {
                let slot = acc.entry(m).or_insert_with(BigInt::zero);
                if negate {
                    *slot -= c;
                } else {
                    *slot += c;
                }
            }
            acc.retain(|_, c| !c.is_zero());
        }
    }

    fn term(&mut self) -> Result<Terms, PolyError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            let rhs = self.factor()?;
            acc = multiply(&acc, &rhs);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Terms, PolyError> {
        let base = self.base()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let at = self.offset();
        let exponent = match self.peek() {
            Some(Tok::Num(n)) => u32::try_from(n).map_err(|_| PolyError::BadExponent { position: at })?,
            _ => return Err(PolyError::BadExponent { position: at }),
        };
        self.pos += 1;
        Ok(power(&base, exponent, self.vars.len()))
    }

    fn base(&mut self) -> Result<Terms, PolyError> {
        let at = self.offset();
        let tok = self.peek().cloned();
        match tok {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let mut t = Terms::new();
                if !n.is_zero() {
                    t.insert(Monomial::one(self.vars.len()), n);
                }
                Ok(t)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let idx = self.vars.iter().position(|v| *v == name).expect("pre-scanned identifier");
                let mut exps = vec![0; self.vars.len()];
                exps[idx] = 1;
                let mut t = Terms::new();
                t.insert(Monomial(exps), BigInt::one());
                Ok(t)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                self.depth += 1;
                if self.depth > MAX_NESTING {
                    return Err(syntax(at, "expression nested too deeply".into()));
                }
                let inner = self.expr()?;
                self.depth -= 1;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(syntax(self.offset(), "expected `)`".into()));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(Tok::Minus) => {
                self.pos += 1;
                self.depth += 1;
                if self.depth > MAX_NESTING {
                    return Err(syntax(at, "expression nested too deeply".into()));
                }
                let inner = self.factor()?;
                self.depth -= 1;
                Ok(inner.into_iter().map(|(m, c)| (m, -c)).collect())
            }
            Some(t) => Err(syntax(at, format!("unexpected {}", describe(&t)))),
            None => Err(syntax(at, "unexpected end of input".into())),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(n) => format!("number `{n}`"),
        Tok::Ident(s) => format!("identifier `{s}`"),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Star => "`*`".into(),
        Tok::Caret => "`^`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
    }
}

fn multiply(a: &Terms, b: &Terms) -> Terms {
    let mut out = Terms::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            *out.entry(ma.times(mb)).or_insert_with(BigInt::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn power(base: &Terms, mut exponent: u32, nvars: usize) -> Terms {
    let mut acc = Terms::new();
    acc.insert(Monomial::one(nvars), BigInt::one());
    let mut sq = base.clone();
    while exponent > 0 {
        if exponent & 1 == 1 {
            acc = multiply(&acc, &sq);
        }
        exponent >>= 1;
        if exponent > 0 {
            sq = multiply(&sq, &sq);
        }
    }
    acc
}

/// Parses and fully expands `text`. Variables are ordered by first
/// appearance in the text (after dropping any that cancel out).
pub fn parse(text: &str) -> Result<Polynomial, PolyError> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(PolyError::Empty);
    }
    let mut vars: Vec<String> = Vec::new();
    for (_, t) in &toks {
        if let Tok::Ident(name) = t {
            if !vars.contains(name) {
                vars.push(name.clone());
            }
        }
    }
    let mut parser = Parser { toks: &toks, pos: 0, end: text.len(), vars, depth: 0 };
    let terms = parser.expr()?;
    if parser.pos != toks.len() {
        let (at, t) = &toks[parser.pos];
        return Err(syntax(*at, format!("unexpected {}", describe(t))));
    }
    Ok(Polynomial::canonical(parser.vars, terms))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_input() {
        assert_eq!(parse(""), Err(PolyError::Empty));
        assert_eq!(parse("   "), Err(PolyError::Empty));
    }

    #[test]
    fn implicit_multiplication_is_rejected() {
        match parse("2x") {
            Err(PolyError::Syntax { position, .. }) => assert_eq!(position, 1),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse("(x)(y)"), Err(PolyError::Syntax { position: 3, .. })));
    }

    #[test]
    fn exponent_must_be_literal() {
        assert_eq!(parse("x^-1"), Err(PolyError::BadExponent { position: 2 }));
        assert_eq!(parse("x^y"), Err(PolyError::BadExponent { position: 2 }));
        assert_eq!(parse("x^(2)"), Err(PolyError::BadExponent { position: 2 }));
        assert_eq!(parse("x^"), Err(PolyError::BadExponent { position: 2 }));
        assert_eq!(parse("x^99999999999"), Err(PolyError::BadExponent { position: 2 }));
    }

    #[test]
    fn chained_caret_is_rejected() {
        assert!(matches!(parse("x^2^3"), Err(PolyError::Syntax { position: 3, .. })));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        assert!(matches!(parse("x + "), Err(PolyError::Syntax { position: 4, .. })));
        assert!(matches!(parse("(x + 1"), Err(PolyError::Syntax { position: 6, .. })));
        assert!(matches!(parse("x $ 1"), Err(PolyError::Syntax { position: 2, .. })));
        assert!(matches!(parse(")"), Err(PolyError::Syntax { position: 0, .. })));
    }

    #[test]
    fn unary_minus_binds_looser_than_caret() {
        let p = parse("-x^2").unwrap();
        assert_eq!(p.evaluate_i64(&[3]).unwrap(), BigInt::from(-9));
        let q = parse("(-x)^2").unwrap();
        assert_eq!(q.evaluate_i64(&[3]).unwrap(), BigInt::from(9));
        let r = parse("--x").unwrap();
        assert_eq!(r.print_canonical(), "x");
    }

    #[test]
    fn identifiers_and_big_literals() {
        let p = parse("alpha_1 * beta2 - 123456789012345678901234567890").unwrap();
        assert_eq!(p.variables(), ["alpha_1", "beta2"]);
        assert_eq!(p.print_canonical(), "alpha_1*beta2 - 123456789012345678901234567890");
    }

    #[test]
    fn variable_order_is_first_appearance() {
        let p = parse("y*x + x").unwrap();
        assert_eq!(p.variables(), ["y", "x"]);
        assert_eq!(p.print_canonical(), "y*x + x");
    }

    #[test]
    fn deep_nesting_is_an_error_not_a_crash() {
        let text = format!("{}x{}", "(".repeat(1000), ")".repeat(1000));
        assert!(matches!(parse(&text), Err(PolyError::Syntax { .. })));
        let ok = format!("{}x{}", "(".repeat(100), ")".repeat(100));
        assert!(parse(&ok).is_ok());
    }
}
