//! Parser for group-ring expressions.
//!
//! Grammar (whitespace insignificant, factors multiply in written order
//! under the group law):
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := [integer '*'?] factor ('*' factor)* | integer
//! factor := ('x'|'y'|'z') ['^' ['-'] integer]
//! ```
//!
//! The leading sign is accepted so that the canonical renderer round-trips.

use alloc::string::String;
use alloc::string::ToString;
use core::fmt;

use num_bigint::BigInt;

use crate::group::GroupElement;
use crate::ring::IntElement;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at byte {}: {}", self.offset, self.message)
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor {
            bytes: text.as_bytes(),
            pos: 0,
        }
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

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek()?;
        self.pos += 1;
        Some(b)
    }

    fn error(&self, message: &str) -> ParseError {
        ParseError {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected an integer"));
        }
        let digits = core::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        digits
            .parse::<BigInt>()
            .map_err(|_| self.error("malformed integer"))
    }

    /// `('x'|'y'|'z') ['^' ['-'] integer]`
    fn factor(&mut self) -> Result<GroupElement, ParseError> {
        let gen = match self.bump() {
            Some(b'x') => GroupElement::x(),
            Some(b'y') => GroupElement::y(),
            Some(b'z') => GroupElement::z(),
            _ => {
                return Err(ParseError {
                    offset: self.pos.saturating_sub(1),
                    message: "expected generator x, y or z".to_string(),
                })
            }
        };
        if self.peek() == Some(b'^') {
            self.bump();
            let negative = if self.peek() == Some(b'-') {
                self.bump();
                true
            } else {
                false
            };
            let n = self.integer()?;
            let e: i64 = n
                .try_into()
                .map_err(|_| self.error("exponent out of range"))?;
            Ok(gen.pow(if negative { -e } else { e }))
        } else {
            Ok(gen)
        }
    }

    fn term(&mut self) -> Result<(BigInt, GroupElement), ParseError> {
        let mut coeff = BigInt::from(1);
        let mut monomial;
        match self.peek() {
            Some(b) if b.is_ascii_digit() => {
                coeff = self.integer()?;
                if self.peek() == Some(b'*') {
                    self.bump();
                    monomial = self.factor()?;
                } else if matches!(self.peek(), Some(b'x') | Some(b'y') | Some(b'z')) {
                    monomial = self.factor()?;
                } else {
                    // bare integer term
                    return Ok((coeff, GroupElement::IDENTITY));
                }
            }
            Some(b'x') | Some(b'y') | Some(b'z') => {
                monomial = self.factor()?;
            }
            _ => return Err(self.error("expected a term")),
        }
        while self.peek() == Some(b'*') {
            self.bump();
            let f = self.factor()?;
            monomial = monomial.mul(f);
        }
        Ok((coeff, monomial))
    }
}

/// Parses UTF-8 text into an exact-integer ring element in normal form.
pub fn parse_poly(text: &str) -> Result<IntElement, ParseError> {
    let mut cur = Cursor::new(text);
    let mut out = IntElement::zero();
    let mut sign = BigInt::from(1);
    match cur.peek() {
        Some(b'-') => {
            cur.bump();
            sign = BigInt::from(-1);
        }
        Some(b'+') => {
            cur.bump();
        }
        Some(_) => {}
        None => return Err(cur.error("empty expression")),
    }
    loop {
        let (coeff, monomial) = cur.term()?;
        out.add_term(monomial, coeff * &sign);
        match cur.peek() {
            None => break,
            Some(b'+') => {
                cur.bump();
                sign = BigInt::from(1);
            }
            Some(b'-') => {
                cur.bump();
                sign = BigInt::from(-1);
            }
            Some(_) => return Err(cur.error("expected '+' or '-'")),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupElement as G;
    use crate::ring::format_canonical;

    #[test]
    fn parses_stencil() {
        let f = parse_poly("2 - x^-1 - y^-1").unwrap();
        let expect = IntElement::from_int_terms([
            (G::IDENTITY, 2),
            (G::new(-1, 0, 0), -1),
            (G::new(0, -1, 0), -1),
        ]);
        assert_eq!(f, expect);
    }

    #[test]
    fn defining_relation_cancels() {
        let f = parse_poly("x*y - y*x*z").unwrap();
        assert!(f.is_zero());
    }

    #[test]
    fn four_term_example() {
        let f = parse_poly("3 + x + y + z").unwrap();
        assert_eq!(f.len(), 4);
        assert_eq!(f.l1_norm_int(), num_bigint::BigInt::from(6));
    }

    #[test]
    fn errors_carry_offsets() {
        let err = parse_poly("2 + @").unwrap_err();
        assert_eq!(err.offset, 4);
        let err = parse_poly("x^").unwrap_err();
        assert!(err.offset >= 2);
    }

    #[test]
    fn round_trip_canonical() {
        for text in ["2 - x^-1 - y^-1", "3+x+y+z", "5y^3*x^2*z^-7 - 4 + x*y*x*y"] {
            let f = parse_poly(text).unwrap();
            let again = parse_poly(&format_canonical(&f)).unwrap();
            assert_eq!(f, again);
        }
    }
}
