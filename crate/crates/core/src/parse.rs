//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := base ('^' nonneg-integer)?
//! base   := rational | name | '(' expr ')'
//! ```
//!
//! The optional leading sign lets canonical output such as `-x - 2` parse back.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::ParseError;
use crate::multipoly::MultiPoly;
use crate::{QPoly, Rational};

const MAX_EXPONENT: u32 = 10_000;

pub fn parse_polynomial<S: AsRef<str>>(text: &str, variables: &[S]) -> Result<QPoly, ParseError> {
    let names: Vec<&str> = variables.iter().map(|s| s.as_ref()).collect();
    let mut parser = Parser { src: text.as_bytes(), pos: 0, names: &names };
    let poly = parser.expr()?;
    parser.skip_ws();
    if parser.pos < parser.src.len() {
        return Err(parser.error(format!("unexpected {:?}", parser.src[parser.pos] as char)));
    }
    Ok(poly)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    names: &'a [&'a str],
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError { pos: self.pos, message: message.into() }
    }

    fn nvars(&self) -> usize {
        self.names.len()
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<QPoly, ParseError> {
        let negate = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let first = self.term()?;
        let mut acc = if negate { -&first } else { first };
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == b'+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<QPoly, ParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let rhs = self.factor()?;
            acc = &acc * &rhs;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<QPoly, ParseError> {
        let base = self.base()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        let caret = self.pos;
        self.pos += 1;
        match self.peek() {
            Some(b'-') => Err(ParseError { pos: caret, message: "negative exponent '^-'".into() }),
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                let digits = self.digits();
                let e: u32 = std::str::from_utf8(digits)
                    .ok()
                    .and_then(|s| s.parse().ok())
                    .filter(|&e| e <= MAX_EXPONENT)
                    .ok_or(ParseError { pos: start, message: "exponent too large".into() })?;
                Ok(base.pow(e))
            }
            _ => Err(self.error("expected a nonnegative integer exponent")),
        }
    }

    fn digits(&mut self) -> &[u8] {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn parse_int(&self, digits: &[u8], at: usize) -> Result<BigInt, ParseError> {
        BigInt::parse_bytes(digits, 10).ok_or(ParseError { pos: at, message: "bad integer".into() })
    }

    fn base(&mut self) -> Result<QPoly, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                let num = self.digits().to_vec();
                let num = self.parse_int(&num, start)?;
                let value = if self.src.get(self.pos) == Some(&b'/')
                    && self.src.get(self.pos + 1).is_some_and(|c| c.is_ascii_digit())
                {
                    self.pos += 1;
                    let dstart = self.pos;
                    let den = self.digits().to_vec();
                    let den = self.parse_int(&den, dstart)?;
                    if den.is_zero() {
                        return Err(ParseError { pos: dstart, message: "zero denominator".into() });
                    }
                    Rational::new(num, den)
                } else {
                    Rational::from_integer(num)
                };
                Ok(MultiPoly::constant(self.nvars(), value))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                match self.names.iter().position(|n| *n == name) {
                    Some(i) => Ok(MultiPoly::var(self.nvars(), i)),
                    None => Err(ParseError { pos: start, message: format!("unknown variable {name:?}") }),
                }
            }
            Some(c) => Err(self.error(format!("unexpected {:?}", c as char))),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipoly::default_names;
    use num_traits::FromPrimitive;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n).unwrap()
    }

    #[test]
    fn parses_example_polynomial() {
        let f = parse_polynomial("x^2*y^2 + 3*x*y + 6*x + 3*y + 1", &["x", "y"]).unwrap();
        let expected = MultiPoly::from_terms(
            2,
            [(vec![2, 2], q(1)), (vec![1, 1], q(3)), (vec![1, 0], q(6)), (vec![0, 1], q(3)), (vec![0, 0], q(1))],
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn parses_powers_of_sums() {
        let f = parse_polynomial("(x+y)^2", &["x", "y"]).unwrap();
        assert_eq!(f.to_text(&default_names(2)), "x^2 + 2*x*y + y^2");
        let g = parse_polynomial("1/2*x - 3/4", &["x"]).unwrap();
        assert_eq!(g.coeff(&[0]), Rational::new((-3).into(), 4.into()));
    }

    #[test]
    fn rejects_bad_input() {
        let e = parse_polynomial("x^-1", &["x"]).unwrap_err();
        assert_eq!(e.pos, 1);
        assert!(e.message.contains("^-"));
        let e = parse_polynomial("x + w", &["x"]).unwrap_err();
        assert_eq!(e.pos, 4);
        assert!(parse_polynomial("x +", &["x"]).is_err());
        assert!(parse_polynomial("(x", &["x"]).is_err());
        assert!(parse_polynomial("x y", &["x", "y"]).is_err());
        assert!(parse_polynomial("1/0", &["x"]).is_err());
    }

    proptest! {
        #[test]
        fn canonical_text_reparses(terms in proptest::collection::vec(
            (proptest::collection::vec(0u32..4, 2), -30i64..30, 1i64..5), 0..6)
        ) {
            let f: QPoly = MultiPoly::from_terms(2, terms.into_iter().map(|(e, n, d)| (e, Rational::new(n.into(), d.into()))));
            let names = default_names(2);
            let text = f.to_text(&names);
            let g = parse_polynomial(&text, &names).unwrap();
            prop_assert_eq!(g.to_text(&names), text);
            prop_assert_eq!(g, f);
        }
    }
}
