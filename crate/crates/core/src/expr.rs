//! Closed-form expressions in one or two real variables.
//!
//! Text is parsed by a small recursive-descent parser, evaluated in `f64`
//! and differentiated symbolically. Constants are exact rationals so that
//! folding during differentiation never loses precision.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Variable values used by [`Expr::eval`].
pub type Bindings = HashMap<String, f64>;

/// Builds a [`Bindings`] map from name/value pairs.
pub fn bind(pairs: &[(&str, f64)]) -> Bindings {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown function `{name}` at offset {offset}")]
    UnknownIdent { name: String, offset: usize },
    #[error("variable `{name}` at offset {offset} is not declared")]
    UndeclaredVar { name: String, offset: usize },
    #[error("variable `{0}` has no binding")]
    Unbound(String),
    #[error("domain error: {0}")]
    Domain(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Neg,
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Tanh,
    Log,
    Exp,
    Sqrt,
}

impl UnaryOp {
    pub const FUNCTIONS: [UnaryOp; 9] = [
        UnaryOp::Sin,
        UnaryOp::Cos,
        UnaryOp::Tan,
        UnaryOp::Sinh,
        UnaryOp::Cosh,
        UnaryOp::Tanh,
        UnaryOp::Log,
        UnaryOp::Exp,
        UnaryOp::Sqrt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            UnaryOp::Neg => "-",
            UnaryOp::Sin => "sin",
            UnaryOp::Cos => "cos",
            UnaryOp::Tan => "tan",
            UnaryOp::Sinh => "sinh",
            UnaryOp::Cosh => "cosh",
            UnaryOp::Tanh => "tanh",
            UnaryOp::Log => "log",
            UnaryOp::Exp => "exp",
            UnaryOp::Sqrt => "sqrt",
        }
    }

    fn from_name(name: &str) -> Option<UnaryOp> {
        UnaryOp::FUNCTIONS.into_iter().find(|op| op.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Const(BigRational),
    Var(String),
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
    /// Power with a constant rational exponent.
    Pow(Box<Expr>, BigRational),
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Expr {
    pub fn parse(text: &str, vars: &[&str]) -> Result<Expr, ExprError> {
        let mut p = Parser { src: text.as_bytes(), pos: 0 };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(p.syntax("unexpected trailing input"));
        }
        check_vars(text, &e, vars)?;
        Ok(e)
    }

    pub fn constant(value: BigRational) -> Expr {
        Expr::Const(value)
    }

    pub fn integer(n: i64) -> Expr {
        Expr::Const(int(n))
    }

    pub fn var(name: &str) -> Expr {
        Expr::Var(name.to_string())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Const(c) if c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Expr::Const(c) if c.is_one())
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Const(_) => {}
            Expr::Var(v) => {
                out.insert(v.clone());
            }
            Expr::Unary(_, a) | Expr::Pow(a, _) => a.collect_vars(out),
            Expr::Binary(_, a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// Renames variables according to `map`; names absent from the map are kept.
    pub fn rename(&self, map: &HashMap<&str, &str>) -> Expr {
        match self {
            Expr::Const(_) => self.clone(),
            Expr::Var(v) => Expr::Var(map.get(v.as_str()).map_or(v.clone(), |s| s.to_string())),
            Expr::Unary(op, a) => Expr::Unary(*op, Box::new(a.rename(map))),
            Expr::Pow(a, r) => Expr::Pow(Box::new(a.rename(map)), r.clone()),
            Expr::Binary(op, a, b) => Expr::Binary(*op, Box::new(a.rename(map)), Box::new(b.rename(map))),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var(_) => 1,
            Expr::Unary(_, a) | Expr::Pow(a, _) => 1 + a.depth(),
            Expr::Binary(_, a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    pub fn eval(&self, b: &Bindings) -> Result<f64, ExprError> {
        match self {
            Expr::Const(c) => Ok(rat_to_f64(c)),
            Expr::Var(v) => b.get(v).copied().ok_or_else(|| ExprError::Unbound(v.clone())),
            Expr::Unary(op, a) => apply_unary(*op, a.eval(b)?),
            Expr::Binary(op, l, r) => {
                let (x, y) = (l.eval(b)?, r.eval(b)?);
                match op {
                    BinaryOp::Add => Ok(x + y),
                    BinaryOp::Sub => Ok(x - y),
                    BinaryOp::Mul => Ok(x * y),
                    BinaryOp::Div => {
                        if y == 0.0 {
                            Err(ExprError::Domain("division by zero".into()))
                        } else {
                            Ok(x / y)
                        }
                    }
                }
            }
            Expr::Pow(a, r) => pow_f64(a.eval(b)?, r),
        }
    }

    /// Rebuilds the tree through the folding constructors.
    pub fn folded(&self) -> Expr {
        match self {
            Expr::Const(_) | Expr::Var(_) => self.clone(),
            Expr::Unary(op, a) => unary(*op, a.folded()),
            Expr::Binary(op, l, r) => {
                let (l, r) = (l.folded(), r.folded());
                match op {
                    BinaryOp::Add => add(l, r),
                    BinaryOp::Sub => sub(l, r),
                    BinaryOp::Mul => mul(l, r),
                    BinaryOp::Div => div(l, r),
                }
            }
            Expr::Pow(a, e) => pow(a.folded(), e.clone()),
        }
    }

    /// Symbolic derivative with respect to `var`, with constant folding.
    pub fn differentiate(&self, var: &str) -> Expr {
        match self {
            Expr::Const(_) => Expr::integer(0),
            Expr::Var(v) => Expr::integer(if v == var { 1 } else { 0 }),
            Expr::Unary(op, a) => {
                let da = a.differentiate(var);
                if da.is_zero() {
                    return Expr::integer(0);
                }
                let a = a.folded();
                let outer = match op {
                    UnaryOp::Neg => return neg(da),
                    UnaryOp::Sin => unary(UnaryOp::Cos, a),
                    UnaryOp::Cos => neg(unary(UnaryOp::Sin, a)),
                    UnaryOp::Tan => add(Expr::integer(1), pow(unary(UnaryOp::Tan, a), int(2))),
                    UnaryOp::Sinh => unary(UnaryOp::Cosh, a),
                    UnaryOp::Cosh => unary(UnaryOp::Sinh, a),
                    UnaryOp::Tanh => sub(Expr::integer(1), pow(unary(UnaryOp::Tanh, a), int(2))),
                    UnaryOp::Log => return div(da, a),
                    UnaryOp::Exp => unary(UnaryOp::Exp, a),
                    UnaryOp::Sqrt => {
                        return div(da, mul(Expr::integer(2), unary(UnaryOp::Sqrt, a)));
                    }
                };
                mul(outer, da)
            }
            Expr::Binary(op, l, r) => {
                let (dl, dr) = (l.differentiate(var), r.differentiate(var));
                let (l, r) = (l.folded(), r.folded());
                match op {
                    BinaryOp::Add => add(dl, dr),
                    BinaryOp::Sub => sub(dl, dr),
                    BinaryOp::Mul => add(mul(dl, r), mul(l, dr)),
                    BinaryOp::Div => {
                        if dr.is_zero() {
                            div(dl, r)
                        } else {
                            div(sub(mul(dl, r.clone()), mul(l, dr)), pow(r, int(2)))
                        }
                    }
                }
            }
            Expr::Pow(a, e) => {
                let da = a.differentiate(var);
                if da.is_zero() {
                    return Expr::integer(0);
                }
                let lowered = pow(a.folded(), e - BigRational::one());
                mul(mul(Expr::Const(e.clone()), lowered), da)
            }
        }
    }
}

fn rat_to_f64(c: &BigRational) -> f64 {
    c.to_f64().unwrap_or(f64::NAN)
}

fn apply_unary(op: UnaryOp, x: f64) -> Result<f64, ExprError> {
    Ok(match op {
        UnaryOp::Neg => -x,
        UnaryOp::Sin => x.sin(),
        UnaryOp::Cos => x.cos(),
        UnaryOp::Tan => {
            if x.cos().abs() < 1e-12 {
                return Err(ExprError::Domain(format!("tan at pole {x}")));
            }
            x.tan()
        }
        UnaryOp::Sinh => x.sinh(),
        UnaryOp::Cosh => x.cosh(),
        UnaryOp::Tanh => x.tanh(),
        UnaryOp::Log => {
            if x <= 0.0 {
                return Err(ExprError::Domain(format!("log of non-positive {x}")));
            }
            x.ln()
        }
        UnaryOp::Exp => x.exp(),
        UnaryOp::Sqrt => {
            if x < 0.0 {
                return Err(ExprError::Domain(format!("sqrt of negative {x}")));
            }
            x.sqrt()
        }
    })
}

fn pow_f64(base: f64, e: &BigRational) -> Result<f64, ExprError> {
    if e.is_integer() {
        if base == 0.0 && e.is_negative() {
            return Err(ExprError::Domain("zero to a negative power".into()));
        }
        return Ok(match e.to_integer().to_i32() {
            Some(n) => base.powi(n),
            None => base.powf(rat_to_f64(e)),
        });
    }
    if base == 0.0 {
        return if e.is_negative() { Err(ExprError::Domain("zero to a negative power".into())) } else { Ok(0.0) };
    }
    let ef = rat_to_f64(e);
    if base > 0.0 {
        return Ok(base.powf(ef));
    }
    if e.denom().is_even() {
        return Err(ExprError::Domain(format!("even root of negative {base}")));
    }
    let mag = (-base).powf(ef);
    Ok(if e.numer().is_odd() { -mag } else { mag })
}

// Smart constructors: constant folding is the only simplification.

pub fn neg(a: Expr) -> Expr {
    match a {
        Expr::Const(c) => Expr::Const(-c),
        Expr::Unary(UnaryOp::Neg, inner) => *inner,
        other => Expr::Unary(UnaryOp::Neg, Box::new(other)),
    }
}

pub fn unary(op: UnaryOp, a: Expr) -> Expr {
    if op == UnaryOp::Neg {
        return neg(a);
    }
    if let Expr::Const(c) = &a {
        let folded = if c.is_zero() {
            match op {
                UnaryOp::Sin | UnaryOp::Tan | UnaryOp::Sinh | UnaryOp::Tanh | UnaryOp::Sqrt => Some(0),
                UnaryOp::Cos | UnaryOp::Cosh | UnaryOp::Exp => Some(1),
                _ => None,
            }
        } else if c.is_one() {
            match op {
                UnaryOp::Log => Some(0),
                UnaryOp::Sqrt => Some(1),
                _ => None,
            }
        } else {
            None
        };
        if let Some(n) = folded {
            return Expr::integer(n);
        }
    }
    Expr::Unary(op, Box::new(a))
}

pub fn add(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x + y),
        (a, b) if a.is_zero() => b,
        (a, b) if b.is_zero() => a,
        (a, b) => Expr::Binary(BinaryOp::Add, Box::new(a), Box::new(b)),
    }
}

pub fn sub(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x - y),
        (a, b) if b.is_zero() => a,
        (a, b) if a.is_zero() => neg(b),
        (a, b) => Expr::Binary(BinaryOp::Sub, Box::new(a), Box::new(b)),
    }
}

pub fn mul(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x * y),
        (a, b) if a.is_zero() || b.is_zero() => Expr::integer(0),
        (a, b) if a.is_one() => b,
        (a, b) if b.is_one() => a,
        (a, b) => Expr::Binary(BinaryOp::Mul, Box::new(a), Box::new(b)),
    }
}

pub fn div(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Expr::Const(x), Expr::Const(y)) if !y.is_zero() => Expr::Const(x / y),
        (a, b) if b.is_one() => a,
        (a, _) if a.is_zero() => Expr::integer(0),
        (a, b) => Expr::Binary(BinaryOp::Div, Box::new(a), Box::new(b)),
    }
}

pub fn pow(a: Expr, e: BigRational) -> Expr {
    if e.is_zero() {
        return Expr::integer(1);
    }
    if e.is_one() {
        return a;
    }
    if let Expr::Const(c) = &a {
        if e.is_integer() {
            if let Some(n) = e.to_integer().to_i32() {
                if !(c.is_zero() && n < 0) {
                    return Expr::Const(num_traits::pow::Pow::pow(c, n));
                }
            }
        }
    }
    Expr::Pow(Box::new(a), e)
}

fn check_vars(text: &str, e: &Expr, vars: &[&str]) -> Result<(), ExprError> {
    for name in e.free_vars() {
        if !vars.contains(&name.as_str()) {
            let offset = find_ident(text, &name).unwrap_or(0);
            return Err(ExprError::UndeclaredVar { name, offset });
        }
    }
    Ok(())
}

fn find_ident(text: &str, name: &str) -> Option<usize> {
    let bytes = text.as_bytes();
    let is_ident = |c: u8| c.is_ascii_alphanumeric() || c == b'_';
    text.match_indices(name).map(|(i, _)| i).find(|&i| {
        let before = i == 0 || !is_ident(bytes[i - 1]);
        let end = i + name.len();
        let after = end >= bytes.len() || !is_ident(bytes[end]);
        before && after
    })
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn syntax(&self, message: &str) -> ExprError {
        ExprError::Syntax { offset: self.pos, message: message.to_string() }
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

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(b'+') => BinaryOp::Add,
                Some(b'-') => BinaryOp::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(b'*') => BinaryOp::Mul,
                Some(b'/') => BinaryOp::Div,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.eat(b'-') {
            let inner = self.unary()?;
            return Ok(Expr::Unary(UnaryOp::Neg, Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let e = self.ratnum()?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    /// Exponent literal: integer, integer/integer or decimal, optionally negated.
    fn ratnum(&mut self) -> Result<BigRational, ExprError> {
        let negative = self.eat(b'-');
        self.skip_ws();
        let (value, is_int) = self.number()?;
        let mut value = value;
        if is_int {
            let save = self.pos;
            if self.eat(b'/') {
                self.skip_ws();
                if self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                    let (den, den_int) = self.number()?;
                    if !den_int {
                        return Err(self.syntax("exponent denominator must be an integer"));
                    }
                    if den.is_zero() {
                        return Err(self.syntax("zero exponent denominator"));
                    }
                    value /= den;
                } else {
                    self.pos = save;
                }
            }
        }
        Ok(if negative { -value } else { value })
    }

    fn number(&mut self) -> Result<(BigRational, bool), ExprError> {
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.syntax("expected a number"));
        }
        let int_part = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let mut digits = int_part.to_string();
        let mut scale = 0u32;
        let mut is_int = true;
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            let frac_start = self.pos;
            while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                self.pos += 1;
            }
            if self.pos == frac_start {
                return Err(self.syntax("expected digits after decimal point"));
            }
            digits.push_str(std::str::from_utf8(&self.src[frac_start..self.pos]).unwrap());
            scale = (self.pos - frac_start) as u32;
            is_int = false;
        }
        let n: BigInt = digits.parse().expect("digit string");
        let d = num_traits::pow::Pow::pow(BigInt::from(10), scale);
        Ok((BigRational::new(n, d), is_int))
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => Ok(Expr::Const(self.number()?.0)),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.src.get(self.pos).is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string();
                if self.peek() == Some(b'(') {
                    let op = UnaryOp::from_name(&name).ok_or(ExprError::UnknownIdent { name, offset: start })?;
                    self.pos += 1;
                    let inner = self.expr()?;
                    if !self.eat(b')') {
                        return Err(self.syntax("expected `)`"));
                    }
                    return Ok(Expr::Unary(op, Box::new(inner)));
                }
                if UnaryOp::from_name(&name).is_some() {
                    return Err(ExprError::Syntax {
                        offset: self.pos,
                        message: format!("function `{name}` requires an argument"),
                    });
                }
                Ok(Expr::Var(name))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.syntax("expected `)`"));
                }
                Ok(inner)
            }
            Some(_) => Err(self.syntax("unexpected character")),
            None => Err(self.syntax("unexpected end of input")),
        }
    }
}

/// Exact decimal rendering when the denominator is of the form 2^a 5^b.
fn decimal_string(c: &BigRational) -> Option<String> {
    let mut d = c.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let ten = BigInt::from(10);
    let mut scale = 0u32;
    while !d.is_one() {
        if d.is_multiple_of(&two) {
            d /= &two;
        } else if d.is_multiple_of(&five) {
            d /= &five;
        } else {
            return None;
        }
        scale += 1;
    }
    let abs = c.abs();
    let scaled = (abs * BigRational::from_integer(num_traits::pow::Pow::pow(ten.clone(), scale))).to_integer();
    let mut digits = scaled.to_string();
    let sign = if c.is_negative() { "-" } else { "" };
    if scale == 0 {
        return Some(format!("{sign}{digits}"));
    }
    let scale = scale as usize;
    if digits.len() <= scale {
        digits = format!("{}{}", "0".repeat(scale + 1 - digits.len()), digits);
    }
    let (ip, fp) = digits.split_at(digits.len() - scale);
    let fp = fp.trim_end_matches('0');
    Some(if fp.is_empty() { format!("{sign}{ip}") } else { format!("{sign}{ip}.{fp}") })
}

fn render_exponent(e: &BigRational) -> String {
    if e.is_integer() {
        e.to_integer().to_string()
    } else {
        format!("{}/{}", e.numer(), e.denom())
    }
}

// Precedence levels: 1 additive, 2 multiplicative, 3 unary minus, 4 power/atom.
fn level(e: &Expr) -> u8 {
    match e {
        Expr::Binary(BinaryOp::Add | BinaryOp::Sub, ..) => 1,
        Expr::Binary(BinaryOp::Mul | BinaryOp::Div, ..) => 2,
        Expr::Unary(UnaryOp::Neg, _) => 3,
        Expr::Const(c) if c.is_negative() || decimal_string(c).is_none() => 0,
        _ => 4,
    }
}

/// Whether the unparenthesized rendering of `e` ends in `^n`, which a following `/digit` would extend.
fn ends_with_pow(e: &Expr) -> bool {
    match e {
        Expr::Pow(..) => true,
        Expr::Unary(UnaryOp::Neg, a) => {
            let l = level(a);
            !(l != 0 && l < 3) && ends_with_pow(a)
        }
        Expr::Binary(op, _, r) => {
            let rmin = if matches!(op, BinaryOp::Add | BinaryOp::Sub) { 2 } else { 3 };
            let rl = level(r);
            !(rl != 0 && rl < rmin) && ends_with_pow(r)
        }
        _ => false,
    }
}

fn write_wrapped(f: &mut fmt::Formatter<'_>, e: &Expr, wrap: bool) -> fmt::Result {
    if wrap {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => match decimal_string(c) {
                Some(s) if !c.is_negative() => write!(f, "{s}"),
                Some(s) => write!(f, "({s})"),
                None => write!(f, "({}/{})", c.numer(), c.denom()),
            },
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Unary(UnaryOp::Neg, a) => {
                write!(f, "-")?;
                let l = level(a);
                write_wrapped(f, a, l != 0 && l < 3)
            }
            Expr::Unary(op, a) => write!(f, "{}({a})", op.name()),
            Expr::Pow(a, e) => {
                let l = level(a);
                write_wrapped(f, a, l != 0 && (l < 4 || matches!(**a, Expr::Pow(..))))?;
                write!(f, "^{}", render_exponent(e))
            }
            Expr::Binary(op, l, r) => {
                let (sym, lmin, rmin) = match op {
                    BinaryOp::Add => ("+", 1, 2),
                    BinaryOp::Sub => ("-", 1, 2),
                    BinaryOp::Mul => ("*", 2, 3),
                    BinaryOp::Div => ("/", 2, 3),
                };
                let ll = level(l);
                let lwrap = (ll != 0 && ll < lmin) || (*op == BinaryOp::Div && ends_with_pow(l));
                write_wrapped(f, l, lwrap)?;
                write!(f, "{sym}")?;
                let rl = level(r);
                write_wrapped(f, r, rl != 0 && rl < rmin)
            }
        }
    }
}
