//! Reader for polynomial and rational expressions over the atom table:
//! integers, atoms, `+ - * /`, `^` with a non-negative integer exponent, and parentheses.

use crate::atom::Atom;
use crate::poly::Poly;
use crate::ratfn::RatFn;
use crate::SymbolicError;
use num_bigint::BigInt;
use num_rational::BigRational;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, message: &str) -> SymbolicError {
        SymbolicError::Parse { offset: self.pos, message: message.into() }
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

    fn expr(&mut self) -> Result<RatFn, SymbolicError> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == b'+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFn, SymbolicError> {
        let mut acc = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if c == b'*' { &acc * &rhs } else { (acc / rhs)? };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RatFn, SymbolicError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatFn, SymbolicError> {
        let base = self.primary()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let n = self.integer()?;
            let n: u32 = n.try_into().map_err(|_| self.err("exponent too large"))?;
            return Ok(base.pow(n));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt, SymbolicError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(text.parse().expect("digits parse"))
    }

    fn primary(&mut self) -> Result<RatFn, SymbolicError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(Poly::constant(BigRational::from_integer(n)).into())
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii name");
                Atom::parse(name)
                    .map(RatFn::from)
                    .ok_or(SymbolicError::Parse { offset: start, message: format!("unknown symbol '{name}'") })
            }
            _ => Err(self.err("expected a number, symbol or '('")),
        }
    }
}

pub fn parse_ratfn(text: &str) -> Result<RatFn, SymbolicError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

pub fn parse_poly(text: &str) -> Result<Poly, SymbolicError> {
    parse_ratfn(text)?.to_poly().map_err(|_| SymbolicError::NotPolynomial(text.into()))
}

impl std::str::FromStr for Poly {
    type Err = SymbolicError;
    fn from_str(s: &str) -> Result<Poly, SymbolicError> {
        parse_poly(s)
    }
}

impl std::str::FromStr for RatFn {
    type Err = SymbolicError;
    fn from_str(s: &str) -> Result<RatFn, SymbolicError> {
        parse_ratfn(s)
    }
}
