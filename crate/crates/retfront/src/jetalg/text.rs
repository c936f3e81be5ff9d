//! Plain-text polynomial grammar.
//!
//! Terms are joined by `+`/`-`; a term is a product of an optional exact
//! rational coefficient (`3`, `1/2`) and powered variables (`x1^2`, `y`,
//! `q2`). `*` between factors is optional, parentheses group subexpressions:
//! `x^3 + (t + q2^2)*x^2 + q1*x + z`.

use super::{JetError, JetPoly, RingContext};
use num::BigRational;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(input: &str) -> Result<Vec<Tok>, JetError> {
    let mut toks = Vec::new();
    let chars: Vec<char> = input.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                toks.push(Tok::Plus);
                i += 1;
            }
            '-' | '\u{2212}' => {
                toks.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                toks.push(Tok::Star);
                i += 1;
            }
            '^' => {
                toks.push(Tok::Caret);
                i += 1;
            }
            '(' => {
                toks.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                toks.push(Tok::RParen);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                // Rational p/q: only when a digit follows the slash.
                if i + 1 < chars.len() && chars[i] == '/' && chars[i + 1].is_ascii_digit() {
                    i += 1;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                let text: String = chars[start..i].iter().collect();
                let val = BigRational::from_str(&text)
                    .map_err(|e| JetError::Parse(format!("bad number `{}`: {}", text, e)))?;
                toks.push(Tok::Num(val));
            }
            'a'..='z' | 'A'..='Z' => {
                let start = i;
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                toks.push(Tok::Ident(chars[start..i].iter().collect()));
            }
            _ => return Err(JetError::Parse(format!("unexpected character `{}`", c))),
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    ctx: &'a RingContext,
    trunc: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<JetPoly, JetError> {
        let mut negate = false;
        while let Some(t) = self.peek() {
            match t {
                Tok::Plus => {
                    self.pos += 1;
                }
                Tok::Minus => {
                    negate = !negate;
                    self.pos += 1;
                }
                _ => break,
            }
        }
        let mut acc = self.product()?;
        if negate {
            acc = acc.neg();
        }
        while let Some(t) = self.peek() {
            match t {
                Tok::Plus | Tok::Minus => {
                    let minus = matches!(t, Tok::Minus);
                    self.pos += 1;
                    // Fold consecutive signs.
                    let mut neg = minus;
                    while let Some(t2) = self.peek() {
                        match t2 {
                            Tok::Plus => self.pos += 1,
                            Tok::Minus => {
                                neg = !neg;
                                self.pos += 1;
                            }
                            _ => break,
                        }
                    }
                    let rhs = self.product()?;
                    acc = if neg { acc.sub(&rhs)? } else { acc.add(&rhs)? };
                }
                Tok::RParen => break,
                other => {
                    return Err(JetError::Parse(format!("unexpected token {:?}", other)));
                }
            }
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<JetPoly, JetError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let rhs = self.power()?;
                    acc = acc.mul_truncated(&rhs)?;
                }
                // Implicit multiplication by juxtaposition.
                Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    let rhs = self.power()?;
                    acc = acc.mul_truncated(&rhs)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<JetPoly, JetError> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.pos += 1;
            let e = match self.bump() {
                Some(Tok::Num(n)) if n.is_integer() && !num::Signed::is_negative(&n) => {
                    use num::ToPrimitive;
                    n.to_integer().to_usize().ok_or_else(|| {
                        JetError::Parse("exponent out of range".to_string())
                    })?
                }
                other => {
                    return Err(JetError::Parse(format!(
                        "expected nonnegative integer exponent, got {:?}",
                        other
                    )))
                }
            };
            let mut acc = JetPoly::one(*self.ctx, self.trunc);
            for _ in 0..e {
                acc = acc.mul_truncated(&base)?;
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<JetPoly, JetError> {
        match self.bump() {
            Some(Tok::Num(n)) => Ok(JetPoly::constant(*self.ctx, self.trunc, n)),
            Some(Tok::Ident(name)) => {
                let v = self.ctx.parse_var(&name)?;
                JetPoly::variable(*self.ctx, self.trunc, v)
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(JetError::Parse("missing `)`".to_string())),
                }
            }
            Some(Tok::Minus) => Ok(self.atom()?.neg()),
            other => Err(JetError::Parse(format!("unexpected token {:?}", other))),
        }
    }
}

/// Parse a polynomial in the given context, truncated at `trunc`.
pub fn parse_poly(input: &str, ctx: &RingContext, trunc: usize) -> Result<JetPoly, JetError> {
    let toks = tokenize(input)?;
    if toks.is_empty() {
        return Err(JetError::Parse("empty input".to_string()));
    }
    let mut p = Parser { toks, pos: 0, ctx, trunc };
    let poly = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(JetError::Parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(poly)
}

impl JetPoly {
    /// Parse from the plain-text grammar.
    pub fn parse(input: &str, ctx: &RingContext, trunc: usize) -> Result<JetPoly, JetError> {
        parse_poly(input, ctx, trunc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render_round_trip() {
        let ctx = RingContext::new(1, 1, 1, 2);
        let p = parse_poly("x^3 - 1/2*x*y + t*y^2 + q1*x + z", &ctx, 5).unwrap();
        let q = parse_poly(&p.to_string(), &ctx, 5).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn parens_and_implicit_mul() {
        let ctx = RingContext::new(1, 0, 1, 2);
        let a = parse_poly("x^3 + (t + q2^2)*x^2 + q1*x + z", &ctx, 5).unwrap();
        let b = parse_poly("x^3 + t*x^2 + q2^2 x^2 + q1 x + z", &ctx, 5).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn q_and_z_aliases_resolve_to_params() {
        let ctx = RingContext::new(0, 1, 0, 3);
        let a = parse_poly("q1*y + q2*y^2 + z", &ctx, 4).unwrap();
        let b = parse_poly("u1*y1 + u2*y1^2 + u3", &ctx, 4).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn truncation_discards_high_terms() {
        let ctx = RingContext::new(0, 1, 0, 0);
        let p = parse_poly("y^2 + y^5", &ctx, 3).unwrap();
        assert_eq!(p.to_string(), "y1^2");
    }

    #[test]
    fn rejects_garbage() {
        let ctx = RingContext::new(1, 0, 0, 0);
        assert!(parse_poly("x^", &ctx, 3).is_err());
        assert!(parse_poly("w + 1", &ctx, 3).is_err());
        assert!(parse_poly("(x", &ctx, 3).is_err());
        assert!(parse_poly("", &ctx, 3).is_err());
    }
}
