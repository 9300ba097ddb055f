//! Recursive-descent parser for expressions over Q(eta).
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | 'eta' | '(' expr ')'
//! ```
//!
//! This accepts everything [`EtaScalar`]'s `Display` produces.

use num_bigint::BigInt;

use super::{EtaScalar, Field, Rational};
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, bytes: src.as_bytes(), pos: 0 }
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {} in {:?}", self.pos, self.src))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<EtaScalar> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc.plus(&self.term()?);
            } else if self.eat(b'-') {
                acc = acc.minus(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<EtaScalar> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = acc.times(&self.unary()?);
            } else if self.eat(b'/') {
                let rhs = self.unary()?;
                acc = acc.divided_by(&rhs)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<EtaScalar> {
        if self.eat(b'-') {
            Ok(self.unary()?.negated())
        } else if self.eat(b'+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<EtaScalar> {
        let base = self.atom()?;
        if self.eat(b'^') {
            self.skip_ws();
            let k = self.integer()?;
            let k: u32 = k.try_into().map_err(|_| self.err("exponent too large"))?;
            let mut acc = EtaScalar::one();
            for _ in 0..k {
                acc = acc.times(&base);
            }
            Ok(acc)
        } else {
            Ok(base)
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        Ok(self.src[start..self.pos].parse().expect("digits parse"))
    }

    fn atom(&mut self) -> Result<EtaScalar> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(EtaScalar::from_rational(&Rational::from_integer(n)))
            }
            Some(b'e') if self.src[self.pos..].starts_with("eta") => {
                self.pos += 3;
                Ok(EtaScalar::eta())
            }
            _ => Err(self.err("unexpected token")),
        }
    }

    fn finish(mut self, value: EtaScalar) -> Result<EtaScalar> {
        if self.peek().is_some() {
            return Err(self.err("trailing input"));
        }
        Ok(value)
    }
}

/// Parses an element of Q(eta), e.g. `"(eta^2 - 4)/(2)"`.
pub fn parse_eta_scalar(s: &str) -> Result<EtaScalar> {
    let mut p = Parser::new(s);
    let v = p.expr()?;
    p.finish(v)
}

/// Parses a rational constant such as `"-1/3"` or `"7"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    parse_eta_scalar(s)?
        .as_rational()
        .ok_or_else(|| Error::Parse(format!("{s:?} is not a rational constant")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rational("1/3").unwrap(), ratio(1, 3));
        assert_eq!(parse_rational(" -7 ").unwrap(), ratio(-7, 1));
        assert!(parse_rational("eta").is_err());
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_eta_scalar("eta +").is_err());
        assert!(parse_eta_scalar("(eta").is_err());
        assert!(parse_eta_scalar("x").is_err());
        assert!(parse_eta_scalar("1/0").is_err());
    }

    #[test]
    fn nested_expression() {
        let v = parse_eta_scalar("(eta/2)*(eta/2) + 1").unwrap();
        assert_eq!(v.to_string(), "(eta^2 + 4)/(4)");
    }
}
