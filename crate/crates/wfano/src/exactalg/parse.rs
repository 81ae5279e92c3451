//! Recursive-descent parser for the ASCII polynomial grammar:
//!
//! ```text
//! expr        := term (('+'|'-') term)*
//! term        := factor ('*' factor)*
//! factor      := coefficient | var | var '^' uint | '(' expr ')'
//! coefficient := int | int '/' uint
//! ```
//!
//! Whitespace is ignored. Implicit multiplication is a syntax error. Variables
//! must come from the declared table.

use std::sync::Arc;

use num_traits::Zero;

use super::poly::{QPoly, VarTable};
use crate::{Int, Rat};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: expected {expected}")]
    Syntax { pos: usize, expected: &'static str },
    #[error("unknown variable `{name}` at byte {pos}")]
    UnknownVariable { pos: usize, name: String },
    #[error("division by zero in rational literal at byte {pos}")]
    ZeroDenominator { pos: usize },
    #[error("exponent too large at byte {pos}")]
    ExponentOverflow { pos: usize },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Int),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'+' => {
                toks.push((i, Tok::Plus));
                i += 1;
            }
            b'-' => {
                toks.push((i, Tok::Minus));
                i += 1;
            }
            b'*' => {
                toks.push((i, Tok::Star));
                i += 1;
            }
            b'^' => {
                toks.push((i, Tok::Caret));
                i += 1;
            }
            b'/' => {
                toks.push((i, Tok::Slash));
                i += 1;
            }
            b'(' => {
                toks.push((i, Tok::LParen));
                i += 1;
            }
            b')' => {
                toks.push((i, Tok::RParen));
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: Int = text[start..i].parse().expect("digit run parses");
                toks.push((start, Tok::Num(n)));
            }
            _ if b.is_ascii_alphabetic() || b == b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                toks.push((start, Tok::Ident(text[start..i].to_string())));
            }
            _ => {
                return Err(ParseError::Syntax { pos: i, expected: "token" });
            }
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    table: &'a Arc<VarTable>,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&(usize, Tok)> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<(usize, Tok)> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> usize {
        self.peek().map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn expr(&mut self) -> Result<QPoly, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some((_, Tok::Plus)) => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Some((_, Tok::Minus)) => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<QPoly, ParseError> {
        let mut acc = self.factor(true)?;
        while let Some((_, Tok::Star)) = self.peek() {
            self.bump();
            acc = acc.mul(&self.factor(false)?);
        }
        Ok(acc)
    }

    /// `leading` allows a signed integer literal at the start of a term.
    fn factor(&mut self, leading: bool) -> Result<QPoly, ParseError> {
        let pos = self.here();
        match self.bump() {
            Some((_, Tok::LParen)) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some((_, Tok::RParen)) => Ok(inner),
                    _ => Err(ParseError::Syntax { pos: self.here(), expected: "`)`" }),
                }
            }
            Some((p, Tok::Ident(name))) => {
                let idx = self
                    .table
                    .index_of(&name)
                    .ok_or(ParseError::UnknownVariable { pos: p, name: name.clone() })?;
                if let Some((_, Tok::Caret)) = self.peek() {
                    self.bump();
                    let epos = self.here();
                    match self.bump() {
                        Some((_, Tok::Num(n))) => {
                            let e: u32 = n
                                .try_into()
                                .map_err(|_| ParseError::ExponentOverflow { pos: epos })?;
                            Ok(QPoly::var(self.table.clone(), idx).pow(e))
                        }
                        _ => Err(ParseError::Syntax { pos: epos, expected: "exponent" }),
                    }
                } else {
                    Ok(QPoly::var(self.table.clone(), idx))
                }
            }
            Some((_, Tok::Num(n))) => self.coefficient_tail(n),
            Some((p, Tok::Minus)) if leading || true => {
                // A '-' in factor position must introduce a signed integer literal.
                let _ = leading;
                match self.bump() {
                    Some((_, Tok::Num(n))) => self.coefficient_tail(-n),
                    _ => Err(ParseError::Syntax { pos: p, expected: "digits after `-`" }),
                }
            }
            _ => Err(ParseError::Syntax { pos, expected: "factor" }),
        }
    }

    fn coefficient_tail(&mut self, n: Int) -> Result<QPoly, ParseError> {
        if let Some((_, Tok::Slash)) = self.peek() {
            self.bump();
            let dpos = self.here();
            match self.bump() {
                Some((_, Tok::Num(d))) => {
                    if d.is_zero() {
                        return Err(ParseError::ZeroDenominator { pos: dpos });
                    }
                    Ok(QPoly::constant(self.table.clone(), Rat::new(n, d)))
                }
                _ => Err(ParseError::Syntax { pos: dpos, expected: "denominator" }),
            }
        } else {
            Ok(QPoly::constant(self.table.clone(), Rat::from(n)))
        }
    }
}

/// Parse `text` over the given variable table.
pub fn parse_poly(text: &str, table: &Arc<VarTable>) -> Result<QPoly, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, table, end: text.len() };
    let poly = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(ParseError::Syntax { pos: p.here(), expected: "`+`, `-`, `*` or end of input" });
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::poly::WeightedDegree;

    #[test]
    fn parses_spade_member() {
        let t = VarTable::ambient([1, 1, 2, 3, 3]);
        let p = parse_poly("t*w + z^3 + x^4*z + x^6", &t).unwrap();
        assert_eq!(p.num_terms(), 4);
        assert_eq!(p.weighted_degree().unwrap(), WeightedDegree::Homogeneous(6));
    }

    #[test]
    fn zero_and_cancellation() {
        let t = VarTable::ambient([1, 1, 2, 3, 3]);
        assert!(parse_poly("0", &t).unwrap().is_zero());
        assert!(parse_poly("x - x", &t).unwrap().is_zero());
    }

    #[test]
    fn rejects_implicit_multiplication() {
        let t = VarTable::ambient([1, 1, 2, 3, 3]);
        let err = parse_poly("x y", &t).unwrap_err();
        assert!(matches!(err, ParseError::Syntax { pos: 2, .. }));
    }

    #[test]
    fn rejects_unknown_variable() {
        let t = VarTable::ambient([1, 1, 2, 3, 3]);
        let err = parse_poly("x + q", &t).unwrap_err();
        assert!(matches!(err, ParseError::UnknownVariable { pos: 4, .. }));
    }

    #[test]
    fn rejects_zero_denominator() {
        let t = VarTable::ambient([1, 1, 2, 3, 3]);
        let err = parse_poly("1/0*x", &t).unwrap_err();
        assert!(matches!(err, ParseError::ZeroDenominator { .. }));
    }

    #[test]
    fn rational_coefficients_and_parens() {
        let t = VarTable::ambient([1, 1, 2, 3, 3]);
        let p = parse_poly("1/2*(x + y)*(x - y)", &t).unwrap();
        let q = parse_poly("1/2*x^2 - 1/2*y^2", &t).unwrap();
        assert_eq!(p, q);
    }
}
