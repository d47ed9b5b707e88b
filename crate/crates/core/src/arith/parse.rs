//! A small expression language for germs.
//!
//! ```text
//! expr  = term (('+' | '-') term)*
//! term  = unary (('*' | '/') unary)*
//! unary = '-' unary | power
//! power = atom ('^' '-'? integer)?
//! atom  = integer | 't' | 'g' | 'l' | '(' expr ')' | 'O(t' ('^' '-'? integer)? ')'
//! ```
//!
//! Integers are reduced mod `p`, `g` is the field's named generator and `l`
//! the family parameter. Polynomials parse as exact germs; divisions and
//! negative powers first truncate the divisor to the working precision.

use super::{CoeffField, LaurentGerm};
use crate::error::{Error, Result};

struct Parser<'a, F: CoeffField> {
    src: &'a [u8],
    pos: usize,
    field: &'a F,
    precision: i64,
}

fn perr(position: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        position,
        message: message.into(),
    }
}

impl<F: CoeffField> Parser<'_, F> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(perr(self.pos, format!("expected `{}`", c as char)))
        }
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(perr(start, "expected an integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| perr(start, "integer out of range"))
    }

    fn signed_integer(&mut self) -> Result<i64> {
        let neg = self.eat(b'-');
        let n = self.integer()?;
        Ok(if neg { -n } else { n })
    }

    fn invert(&self, g: &LaurentGerm<F>, at: usize) -> Result<LaurentGerm<F>> {
        let g = if g.is_exact() && g.terms().len() > 1 {
            g.truncate(self.precision)
        } else {
            g.clone()
        };
        g.invert_unit().map_err(|e| perr(at, e.to_string()))
    }

    fn expr(&mut self) -> Result<LaurentGerm<F>> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                let rhs = self.term()?;
                acc = acc.add(&rhs)?;
            } else if self.eat(b'-') {
                let rhs = self.term()?;
                acc = acc.sub(&rhs)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<LaurentGerm<F>> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                let rhs = self.unary()?;
                acc = acc.mul(&rhs)?;
            } else if self.peek() == Some(b'/') {
                let at = self.pos;
                self.pos += 1;
                let rhs = self.unary()?;
                acc = acc.mul(&self.invert(&rhs, at)?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<LaurentGerm<F>> {
        if self.eat(b'-') {
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<LaurentGerm<F>> {
        let start = self.pos;
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let n = self.signed_integer()?;
        if n < 0 {
            self.invert(&base, start)?.pow(-n)
        } else {
            base.pow(n)
        }
        .map_err(|e| perr(start, e.to_string()))
    }

    fn atom(&mut self) -> Result<LaurentGerm<F>> {
        let at = match self.peek() {
            Some(c) => c,
            None => return Err(perr(self.pos, "unexpected end of input")),
        };
        let field = self.field.clone();
        match at {
            b'0'..=b'9' => {
                let n = self.integer()?;
                Ok(LaurentGerm::constant(field.clone(), field.from_int(n)))
            }
            b't' => {
                self.pos += 1;
                Ok(LaurentGerm::var(field))
            }
            b'g' => {
                self.pos += 1;
                let g = field.generator();
                Ok(LaurentGerm::constant(field, g))
            }
            b'l' => {
                let here = self.pos;
                self.pos += 1;
                let l = field
                    .parameter()
                    .ok_or_else(|| perr(here, "`l` needs a field with a parameter"))?;
                Ok(LaurentGerm::constant(field, l))
            }
            b'(' => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                Ok(inner)
            }
            b'O' => {
                self.pos += 1;
                self.expect(b'(')?;
                self.expect(b't')?;
                let n = if self.eat(b'^') { self.signed_integer()? } else { 1 };
                self.expect(b')')?;
                Ok(LaurentGerm::big_o(field, n))
            }
            c => Err(perr(self.pos, format!("unexpected `{}`", c as char))),
        }
    }
}

/// Parse a germ. `precision` bounds the series produced by divisions.
pub fn parse_germ<F: CoeffField>(field: &F, src: &str, precision: i64) -> Result<LaurentGerm<F>> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
        field,
        precision,
    };
    if p.peek().is_none() {
        return Err(perr(0, "empty expression"));
    }
    let g = p.expr()?;
    if let Some(c) = p.peek() {
        return Err(perr(p.pos, format!("unexpected `{}`", c as char)));
    }
    Ok(g)
}

/// Parse a field element: an expression without `t`.
pub fn parse_scalar<F: CoeffField>(field: &F, src: &str) -> Result<F::Elem> {
    let g = parse_germ(field, src, 1)?;
    if !g.is_exact() || g.degree().unwrap_or(0) != 0 || g.valuation().unwrap_or(0) != 0 {
        return Err(perr(0, "expected a constant"));
    }
    Ok(g.coeff(0).expect("exact germ"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{FiniteField, RationalFunctionField, EXACT};

    #[test]
    fn parses_polynomials_exactly() {
        let k = FiniteField::new(3, 1).unwrap();
        let g = parse_germ(&k, "t^-3 + 2*t - 5 + t*t", 10).unwrap();
        assert!(g.is_exact());
        assert_eq!(g.to_string(), "t^-3 + 1 + 2*t + t^2");
    }

    #[test]
    fn division_uses_working_precision() {
        let k = FiniteField::new(2, 1).unwrap();
        let g = parse_germ(&k, "1/(1+t)", 6).unwrap();
        assert_eq!(g.precision(), 6);
        assert_eq!(g.to_string(), "1 + t + t^2 + t^3 + t^4 + t^5 + O(t^6)");
        let h = parse_germ(&k, "t^2 + O(t^5)", 6).unwrap();
        assert_eq!(h.precision(), 5);
        assert_eq!(parse_germ(&k, "t/t^3", 6).unwrap().precision(), EXACT);
    }

    #[test]
    fn named_elements() {
        let k = FiniteField::new(2, 3).unwrap();
        let g = parse_scalar(&k, "g^3").unwrap();
        assert_eq!(g, k.gen_pow(3));
        let kl = RationalFunctionField::new(k.clone());
        let x = parse_germ(&kl, "l*t^-5 + t^-3", 10).unwrap();
        assert_eq!(x.valuation(), Some(-5));
        assert!(parse_germ(&k, "l", 10).is_err());
    }

    #[test]
    fn errors_carry_positions() {
        let k = FiniteField::new(5, 1).unwrap();
        match parse_germ(&k, "t^-3 + * 2", 10) {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 7),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_germ(&k, "(t", 10), Err(Error::Parse { position: 2, .. })));
        assert!(matches!(parse_germ(&k, "", 10), Err(Error::Parse { .. })));
        assert!(matches!(parse_germ(&k, "1/O(t^3)", 10), Err(Error::Parse { position: 1, .. })));
    }
}
