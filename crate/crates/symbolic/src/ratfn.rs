use crate::atom::{Atom, Direction};
use crate::poly::{Monomial, Poly};
use crate::SymbolicError;
use num_rational::BigRational;
use num_traits::Zero;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Quotient of polynomials; equality is decided by cross-multiplication.
#[derive(Debug, Clone)]
pub struct RatFn {
    num: Poly,
    den: Poly,
}

impl RatFn {
    pub fn new(num: Poly, den: Poly) -> Result<RatFn, SymbolicError> {
        if den.is_zero() {
            return Err(SymbolicError::DivisionByZero);
        }
        Ok(RatFn { num, den }.tidy())
    }

    /// Folds a constant denominator into the numerator.
    fn tidy(self) -> RatFn {
        match self.den.as_constant() {
            Some(c) if c != BigRational::from_integer(1.into()) => {
                let inv = BigRational::from_integer(1.into()) / c;
                RatFn { num: self.num.scale(&inv), den: Poly::one() }
            }
            _ => self,
        }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The polynomial `num / den`, if the division is exact.
    pub fn to_poly(&self) -> Result<Poly, SymbolicError> {
        self.num.div_exact(&self.den)
    }

    pub fn recip(&self) -> Result<RatFn, SymbolicError> {
        RatFn::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, n: u32) -> RatFn {
        RatFn { num: self.num.pow(n), den: self.den.pow(n) }
    }

    /// Quotient rule.
    pub fn derive(&self, dir: Direction) -> Result<RatFn, SymbolicError> {
        if self.den.as_constant().is_some() {
            return Ok(RatFn { num: self.num.derive(dir)?, den: self.den.clone() });
        }
        let num = &self.num.derive(dir)? * &self.den - &self.num * &self.den.derive(dir)?;
        Ok(RatFn { num, den: &self.den * &self.den })
    }

    pub fn derive_x(&self) -> Result<RatFn, SymbolicError> {
        self.derive(Direction::X)
    }

    pub fn derive_y(&self) -> Result<RatFn, SymbolicError> {
        self.derive(Direction::Y)
    }

    /// Replaces `a` by `repl` in numerator and denominator.
    pub fn substitute(&self, a: Atom, repl: &RatFn) -> Result<RatFn, SymbolicError> {
        let n = substitute_in_poly(&self.num, a, repl);
        let d = substitute_in_poly(&self.den, a, repl);
        n / d
    }

    /// Rewrites the monomial `m` as `repl` in numerator and denominator.
    pub fn reduce_monomial(&self, m: &Monomial, repl: &Poly) -> Result<RatFn, SymbolicError> {
        RatFn::new(self.num.reduce_monomial(m, repl), self.den.reduce_monomial(m, repl))
    }

    pub fn eval(&self, value: &dyn Fn(Atom) -> BigRational) -> Result<BigRational, SymbolicError> {
        let d = self.den.eval(value);
        if d.is_zero() {
            return Err(SymbolicError::DivisionByZero);
        }
        Ok(self.num.eval(value) / d)
    }
}

/// `p(a = n / d)` written over the common denominator `d^deg`.
pub fn substitute_in_poly(p: &Poly, a: Atom, repl: &RatFn) -> RatFn {
    let parts = p.collect(a);
    let k = parts.len() - 1;
    let mut num_pows = vec![Poly::one()];
    let mut den_pows = vec![Poly::one()];
    for _ in 0..k {
        num_pows.push(num_pows.last().unwrap() * &repl.num);
        den_pows.push(den_pows.last().unwrap() * &repl.den);
    }
    let mut num = Poly::zero();
    for (i, coef) in parts.iter().enumerate() {
        if !coef.is_zero() {
            num = &num + &(coef * &(&num_pows[i] * &den_pows[k - i]));
        }
    }
    RatFn { num, den: den_pows[k].clone() }
}

/// `a^2 - b^2 D`, the polynomial consequence of `a + b sqrt(D) = 0`.
pub fn eliminate_sqrt(a: &RatFn, b: &RatFn, d: &RatFn) -> RatFn {
    &a.pow(2) - &(&b.pow(2) * d)
}

impl From<Poly> for RatFn {
    fn from(p: Poly) -> RatFn {
        RatFn { num: p, den: Poly::one() }
    }
}

impl From<Atom> for RatFn {
    fn from(a: Atom) -> RatFn {
        Poly::atom(a).into()
    }
}

impl PartialEq for RatFn {
    fn eq(&self, other: &RatFn) -> bool {
        (&self.num * &other.den - &other.num * &self.den).is_zero()
    }
}

impl<'a> Add<&'a RatFn> for &'a RatFn {
    type Output = RatFn;
    fn add(self, rhs: &RatFn) -> RatFn {
        if self.den == rhs.den {
            return RatFn { num: &self.num + &rhs.num, den: self.den.clone() };
        }
        RatFn { num: &self.num * &rhs.den + &rhs.num * &self.den, den: &self.den * &rhs.den }
    }
}

impl<'a> Sub<&'a RatFn> for &'a RatFn {
    type Output = RatFn;
    fn sub(self, rhs: &RatFn) -> RatFn {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RatFn> for &'a RatFn {
    type Output = RatFn;
    fn mul(self, rhs: &RatFn) -> RatFn {
        RatFn { num: &self.num * &rhs.num, den: &self.den * &rhs.den }.tidy()
    }
}

impl Div<RatFn> for RatFn {
    type Output = Result<RatFn, SymbolicError>;
    fn div(self, rhs: RatFn) -> Result<RatFn, SymbolicError> {
        RatFn::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl Neg for &RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        RatFn { num: -&self.num, den: self.den.clone() }
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.as_constant().is_some() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}
