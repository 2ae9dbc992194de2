use crate::atom::{Action, Atom, Direction, N_ATOMS};
use crate::SymbolicError;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Exponent vector over the atom table.
pub type Monomial = [u16; N_ATOMS];

pub const ONE_MONOMIAL: Monomial = [0; N_ATOMS];

/// Sparse multivariate polynomial with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigRational>,
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    let mut m = *a;
    for (x, y) in m.iter_mut().zip(b) {
        *x = x.checked_add(*y).expect("exponent overflow");
    }
    m
}

fn mono_div(a: &Monomial, b: &Monomial) -> Option<Monomial> {
    let mut m = *a;
    for (x, y) in m.iter_mut().zip(b) {
        *x = x.checked_sub(*y)?;
    }
    Some(m)
}

fn mono_degree(m: &Monomial) -> u32 {
    m.iter().map(|&e| e as u32).sum()
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn one() -> Poly {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Poly {
        let mut p = Poly::zero();
        p.add_term(ONE_MONOMIAL, c);
        p
    }

    pub fn int(n: i64) -> Poly {
        Poly::constant(rat(n))
    }

    pub fn atom(a: Atom) -> Poly {
        Poly::monomial(a, 1)
    }

    pub fn monomial(a: Atom, e: u16) -> Poly {
        let mut m = ONE_MONOMIAL;
        m[a.index()] = e;
        let mut p = Poly::zero();
        p.add_term(m, BigRational::one());
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, BigRational)>) -> Poly {
        let mut p = Poly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&ONE_MONOMIAL).cloned(),
            _ => None,
        }
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, k)| (*m, k * c)).collect() }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut out = Poly::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                out = &out * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        out
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut s = BTreeSet::new();
        for m in self.terms.keys() {
            for a in Atom::ALL {
                if m[a.index()] > 0 {
                    s.insert(*a);
                }
            }
        }
        s
    }

    pub fn degree_in(&self, a: Atom) -> u16 {
        self.terms.keys().map(|m| m[a.index()]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(mono_degree).max().unwrap_or(0)
    }

    /// Coefficients of `a^0, a^1, ..., a^d` (highest degree last).
    pub fn collect(&self, a: Atom) -> Vec<Poly> {
        let d = self.degree_in(a) as usize;
        let mut out = vec![Poly::zero(); d + 1];
        for (m, c) in &self.terms {
            let e = m[a.index()] as usize;
            let mut rest = *m;
            rest[a.index()] = 0;
            out[e].add_term(rest, c.clone());
        }
        out
    }

    /// Coefficient of `a^e`.
    pub fn coefficient(&self, a: Atom, e: u16) -> Poly {
        self.collect(a).into_iter().nth(e as usize).unwrap_or_default()
    }

    /// Formal derivation with the atom actions of `dir`.
    pub fn derive(&self, dir: Direction) -> Result<Poly, SymbolicError> {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            for a in Atom::ALL {
                let e = m[a.index()];
                if e == 0 {
                    continue;
                }
                let mut rest = *m;
                rest[a.index()] -= 1;
                let k = c * rat(e as i64);
                match a.action(dir) {
                    Action::Zero => {}
                    Action::One => out.add_term(rest, k),
                    Action::Next(b) => {
                        rest[b.index()] += 1;
                        out.add_term(rest, k);
                    }
                    Action::Chain(b, inner) => {
                        rest[b.index()] += 1;
                        rest[inner.index()] += 1;
                        out.add_term(rest, k);
                    }
                    Action::Overflow => return Err(SymbolicError::OrderOverflow(*a)),
                }
            }
        }
        Ok(out)
    }

    pub fn derive_x(&self) -> Result<Poly, SymbolicError> {
        self.derive(Direction::X)
    }

    pub fn derive_y(&self) -> Result<Poly, SymbolicError> {
        self.derive(Direction::Y)
    }

    /// Replaces `a` by the polynomial `repl`.
    pub fn substitute_poly(&self, a: Atom, repl: &Poly) -> Poly {
        let parts = self.collect(a);
        let mut out = Poly::zero();
        let mut power = Poly::one();
        for (i, coef) in parts.iter().enumerate() {
            if i > 0 {
                power = &power * repl;
            }
            if !coef.is_zero() {
                out = &out + &(coef * &power);
            }
        }
        out
    }

    /// Rewrites every occurrence of the monomial `m` as `repl`, as many times as
    /// `m` divides each term.
    pub fn reduce_monomial(&self, m: &Monomial, repl: &Poly) -> Poly {
        assert!(*m != ONE_MONOMIAL, "cannot reduce the unit monomial");
        let mut powers = vec![Poly::one()];
        let mut out = Poly::zero();
        for (t, c) in &self.terms {
            let mut k = 0;
            let mut rest = *t;
            while let Some(r) = mono_div(&rest, m) {
                rest = r;
                k += 1;
            }
            while powers.len() <= k {
                let next = powers.last().unwrap() * repl;
                powers.push(next);
            }
            let mut term = Poly::zero();
            term.add_term(rest, c.clone());
            out = &out + &(&term * &powers[k]);
        }
        out
    }

    /// Rewrites `a^n` as `repl` wherever it divides a term.
    pub fn substitute_power(&self, a: Atom, n: u16, repl: &Poly) -> Poly {
        let mut m = ONE_MONOMIAL;
        m[a.index()] = n;
        self.reduce_monomial(&m, repl)
    }

    fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    /// Exact quotient `self / d`; fails if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Result<Poly, SymbolicError> {
        let (dm, dc) = d.leading().ok_or(SymbolicError::DivisionByZero)?;
        let (dm, dc) = (*dm, dc.clone());
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((rm, rc)) = rem.leading() {
            let qm = mono_div(rm, &dm).ok_or(SymbolicError::NotExact)?;
            let qc = rc / &dc;
            let mut step = Poly::zero();
            step.add_term(qm, qc);
            rem = &rem - &(&step * d);
            quot = &quot + &step;
        }
        Ok(quot)
    }

    /// Positive rational `c` such that `self / c` has coprime integer coefficients.
    pub fn content(&self) -> BigRational {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            return BigRational::zero();
        }
        BigRational::new(num, den)
    }

    /// `lambda` with `self = lambda * other`, if such a nonzero constant exists.
    pub fn ratio_to(&self, other: &Poly) -> Option<BigRational> {
        let (om, oc) = other.leading()?;
        let sc = self.terms.get(om)?;
        let lambda = sc / oc;
        (self - &other.scale(&lambda)).is_zero().then_some(lambda)
    }

    pub fn eval(&self, value: &dyn Fn(Atom) -> BigRational) -> BigRational {
        let vals: Vec<BigRational> = Atom::ALL.iter().map(|&a| value(a)).collect();
        let mut sum = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    t *= num_traits::pow(vals[i].clone(), e as usize);
                }
            }
            sum += t;
        }
        sum
    }

    pub fn eval_f64(&self, value: &dyn Fn(Atom) -> f64) -> f64 {
        let vals: Vec<f64> = Atom::ALL.iter().map(|&a| value(a)).collect();
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut t = c.to_f64().unwrap_or(f64::NAN);
                for (i, &e) in m.iter().enumerate() {
                    if e > 0 {
                        t *= vals[i].powi(e as i32);
                    }
                }
                t
            })
            .sum()
    }
}

impl From<Atom> for Poly {
    fn from(a: Atom) -> Poly {
        Poly::atom(a)
    }
}

impl From<i64> for Poly {
    fn from(n: i64) -> Poly {
        Poly::int(n)
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (big, small) = if self.len() >= rhs.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(mono_mul(ma, mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect() }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly { (&self).$f(&rhs) }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $f(self, rhs: &Poly) -> Poly { (&self).$f(rhs) }
        }
        impl $tr<Poly> for &Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly { self.$f(&rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

pub(crate) fn fmt_rational(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn fmt_monomial(m: &Monomial) -> String {
    let mut parts = Vec::new();
    for a in Atom::ALL {
        match m[a.index()] {
            0 => {}
            1 => parts.push(a.name().to_string()),
            e => parts.push(format!("{}^{}", a.name(), e)),
        }
    }
    parts.join("*")
}

impl fmt::Display for Poly {
    /// Terms by descending total degree, then descending lex order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| mono_degree(b.0).cmp(&mono_degree(a.0)).then(b.0.cmp(a.0)));
        for (i, (m, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let mono = fmt_monomial(m);
            if mono.is_empty() {
                f.write_str(&fmt_rational(&abs))?;
            } else if abs.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{}*{}", fmt_rational(&abs), mono)?;
            }
        }
        Ok(())
    }
}
