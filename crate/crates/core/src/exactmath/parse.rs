//! Text syntax for polynomials: `3/2*x1^2*x2 - x3 + 1`.

use std::str::FromStr;

use num::{BigInt, One, Zero};

use super::scalar::{Monomial, Rational, Scalar};
use crate::error::{Error, Result};

struct Cursor<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor {
            src,
            bytes: src.as_bytes(),
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

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::parse(format!("column {} of `{}`", self.pos + 1, self.src), message)
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        self.src[start..self.pos]
            .parse()
            .map_err(|_| self.err("integer out of range"))
    }

    fn small(&mut self) -> Result<u32> {
        let n = self.integer()?;
        u32::try_from(n).map_err(|_| self.err("exponent or index too large"))
    }
}

fn factor(cur: &mut Cursor, coeff: &mut Rational, mono: &mut Monomial) -> Result<()> {
    match cur.peek() {
        Some(b'x') => {
            cur.pos += 1;
            let idx = cur.small()?;
            if idx == 0 {
                return Err(cur.err("variables are numbered from x1"));
            }
            let e = if cur.eat(b'^') { cur.small()? } else { 1 };
            let mut exps = vec![0; idx as usize];
            exps[idx as usize - 1] = e;
            *mono = mono.mul(&Monomial::new(exps));
            Ok(())
        }
        Some(c) if c.is_ascii_digit() => {
            let num = cur.integer()?;
            let den = if cur.eat(b'/') { cur.integer()? } else { BigInt::one() };
            if den.is_zero() {
                return Err(cur.err("zero denominator"));
            }
            *coeff *= Rational::new(num, den);
            Ok(())
        }
        Some(_) => Err(cur.err("expected a rational or a variable x<i>")),
        None => Err(cur.err("unexpected end of input")),
    }
}

/// Parse the polynomial text syntax.
pub fn parse_scalar(src: &str) -> Result<Scalar> {
    let mut cur = Cursor::new(src);
    let mut terms = Vec::new();
    let mut first = true;
    loop {
        let mut sign = Rational::one();
        if cur.eat(b'-') {
            sign = -sign;
        } else if !cur.eat(b'+') && !first {
            return Err(cur.err("expected `+` or `-` between terms"));
        }
        first = false;
        let mut coeff = sign;
        let mut mono = Monomial::one();
        factor(&mut cur, &mut coeff, &mut mono)?;
        while cur.eat(b'*') {
            factor(&mut cur, &mut coeff, &mut mono)?;
        }
        terms.push((mono, coeff));
        if cur.peek().is_none() {
            break;
        }
    }
    Ok(Scalar::from_terms(terms))
}

impl FromStr for Scalar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Scalar> {
        parse_scalar(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::scalar::rat;

    #[test]
    fn parses_rational_coefficients() {
        let p: Scalar = "3/2*x1^2*x2 - x3 + 1".parse().unwrap();
        assert_eq!(p.to_string(), "3/2*x1^2*x2 - x3 + 1");
        assert_eq!(p.coefficient(&Monomial::new(vec![2, 1])), rat(3, 2));
    }

    #[test]
    fn combines_like_terms() {
        let p: Scalar = "x1 + x1 - 2*x1".parse().unwrap();
        assert!(p.is_zero());
        let q: Scalar = "x2*x1*x1".parse().unwrap();
        assert_eq!(q.to_string(), "x1^2*x2");
    }

    #[test]
    fn leading_minus_and_spaces() {
        let p: Scalar = " - 1/3 * x2 ".parse().unwrap();
        assert_eq!(p.to_string(), "-1/3*x2");
    }

    #[test]
    fn rejects_garbage_with_location() {
        let err = "x1 + y2".parse::<Scalar>().unwrap_err();
        match err {
            Error::Parse { location, .. } => assert!(location.contains("column 6")),
            other => panic!("unexpected {other:?}"),
        }
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("x0".parse::<Scalar>().is_err());
        assert!("".parse::<Scalar>().is_err());
        assert!("x1 x2".parse::<Scalar>().is_err());
    }
}
