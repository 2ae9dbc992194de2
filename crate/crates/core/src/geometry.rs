//! Metric vector algebra and soliton residuals.
//!
//! All residuals take jets (values and derivatives at a point) rather than
//! functions, so analytic, symbolic and sampled sources share one code path.
//! The curvature convention is `H = num / (2 W^3)` for a graph `z = u(x, y)`
//! with upward normal `N = (-u_x, -u_y, 1) / W`, and every raw residual is
//! stated with the matching factor 2 on the velocity side.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Threshold below which a Lorentzian square norm counts as zero.
pub const NULL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("zero vector has no causal character")]
    ZeroVector,
    #[error("degenerate cylinder: <n, n>_L = {0:e}")]
    Degenerate(f64),
    #[error("ruling is not lightlike: <w, w>_L = {0:e}")]
    NotLightlike(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vector3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vector3 {
    pub const E1: Vector3 = Vector3::new(1.0, 0.0, 0.0);
    pub const E2: Vector3 = Vector3::new(0.0, 1.0, 0.0);
    pub const E3: Vector3 = Vector3::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vector3 { x, y, z }
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Vector3::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn norm(self) -> f64 {
        inner(Metric::Euclidean, self, self).sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl Add for Vector3 {
    type Output = Vector3;
    fn add(self, o: Vector3) -> Vector3 {
        Vector3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vector3 {
    type Output = Vector3;
    fn sub(self, o: Vector3) -> Vector3 {
        Vector3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vector3 {
    type Output = Vector3;
    fn mul(self, s: f64) -> Vector3 {
        Vector3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Neg for Vector3 {
    type Output = Vector3;
    fn neg(self) -> Vector3 {
        Vector3::new(-self.x, -self.y, -self.z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Euclidean,
    /// `dx^2 + dy^2 - dz^2`.
    Lorentzian,
}

pub fn inner(m: Metric, a: Vector3, b: Vector3) -> f64 {
    let zz = a.z * b.z;
    match m {
        Metric::Euclidean => a.x * b.x + a.y * b.y + zz,
        Metric::Lorentzian => a.x * b.x + a.y * b.y - zz,
    }
}

/// The vector `x` with `inner(m, x, c) = det[a b c]` for every `c`.
pub fn cross(m: Metric, a: Vector3, b: Vector3) -> Vector3 {
    let e = Vector3::new(a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x);
    match m {
        Metric::Euclidean => e,
        Metric::Lorentzian => Vector3::new(e.x, e.y, -e.z),
    }
}

pub fn det3(a: Vector3, b: Vector3, c: Vector3) -> f64 {
    a.x * (b.y * c.z - b.z * c.y) - a.y * (b.x * c.z - b.z * c.x) + a.z * (b.x * c.y - b.y * c.x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CausalCharacter {
    Spacelike,
    Timelike,
    Lightlike,
}

pub fn causal_character(a: Vector3) -> Result<CausalCharacter, GeometryError> {
    if a == Vector3::default() {
        return Err(GeometryError::ZeroVector);
    }
    let q = inner(Metric::Lorentzian, a, a);
    Ok(if q.abs() <= NULL_TOL {
        CausalCharacter::Lightlike
    } else if q > 0.0 {
        CausalCharacter::Spacelike
    } else {
        CausalCharacter::Timelike
    })
}

/// Second-order jet of a graph `z = u(x, y)` at `(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Jet2 {
    pub x: f64,
    pub y: f64,
    pub u: f64,
    pub ux: f64,
    pub uy: f64,
    pub uxx: f64,
    pub uxy: f64,
    pub uyy: f64,
}

/// Value and first two derivatives of a one-variable function at `t`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FuncJet {
    pub t: f64,
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

impl FuncJet {
    pub const fn new(t: f64, value: f64, d1: f64, d2: f64) -> Self {
        FuncJet { t, value, d1, d2 }
    }

    /// Jet of a constant function.
    pub const fn constant(t: f64, value: f64) -> Self {
        FuncJet::new(t, value, 0.0, 0.0)
    }
}

/// A curve point with its first and second derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CurveJet {
    pub s: f64,
    pub pos: Vector3,
    pub d1: Vector3,
    pub d2: Vector3,
}

impl Jet2 {
    /// Jet of `u = f(x) + g(y)`.
    pub fn translation(f: &FuncJet, g: &FuncJet) -> Jet2 {
        Jet2 { x: f.t, y: g.t, u: f.value + g.value, ux: f.d1, uy: g.d1, uxx: f.d2, uxy: 0.0, uyy: g.d2 }
    }

    /// Jet of `u = f(x) + g(y + c x)`; `g` is sampled at `y + c x`.
    pub fn affine_translation(f: &FuncJet, g: &FuncJet, c: f64) -> Jet2 {
        Jet2 {
            x: f.t,
            y: g.t - c * f.t,
            u: f.value + g.value,
            ux: f.d1 + c * g.d1,
            uy: g.d1,
            uxx: f.d2 + c * c * g.d2,
            uxy: c * g.d2,
            uyy: g.d2,
        }
    }

    /// Jet of `u = f(x) g(y)`.
    pub fn product(f: &FuncJet, g: &FuncJet) -> Jet2 {
        Jet2 {
            x: f.t,
            y: g.t,
            u: f.value * g.value,
            ux: f.d1 * g.value,
            uy: f.value * g.d1,
            uxx: f.d2 * g.value,
            uxy: f.d1 * g.d1,
            uyy: f.value * g.d2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphInvariants {
    pub normal: Vector3,
    pub w: f64,
    pub h: f64,
}

fn graph_numerator(j: &Jet2) -> f64 {
    (1.0 + j.uy * j.uy) * j.uxx - 2.0 * j.ux * j.uy * j.uxy + (1.0 + j.ux * j.ux) * j.uyy
}

pub fn graph_invariants(j: &Jet2) -> GraphInvariants {
    let w = (1.0 + j.ux * j.ux + j.uy * j.uy).sqrt();
    GraphInvariants {
        normal: Vector3::new(-j.ux / w, -j.uy / w, 1.0 / w),
        w,
        h: graph_numerator(j) / (2.0 * w * w * w),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ResidualMode {
    /// Left side minus right side of the graph equation.
    #[default]
    Raw,
    /// `H - <N, v>`.
    Normalized,
}

pub fn residual_graph(j: &Jet2, v: Vector3, mode: ResidualMode) -> f64 {
    let w2 = 1.0 + j.ux * j.ux + j.uy * j.uy;
    let raw = graph_numerator(j) - 2.0 * w2 * (-v.x * j.ux - v.y * j.uy + v.z);
    match mode {
        ResidualMode::Raw => raw,
        ResidualMode::Normalized => raw / (2.0 * w2 * w2.sqrt()),
    }
}

/// Raw residual of the graph `z = f(x) + g(y)`.
pub fn residual_translation(f: &FuncJet, g: &FuncJet, v: Vector3) -> f64 {
    let (f1, f2, g1, g2) = (f.d1, f.d2, g.d1, g.d2);
    (1.0 + g1 * g1) * f2 + (1.0 + f1 * f1) * g2 - 2.0 * (1.0 + f1 * f1 + g1 * g1) * (-v.x * f1 - v.y * g1 + v.z)
}

/// Raw residual of `X(x, y) = (x, y - c x, f(x) + g(y))`.
pub fn residual_affine_translation(f: &FuncJet, g: &FuncJet, c: f64, v: Vector3) -> f64 {
    let (f1, f2, g1, g2) = (f.d1, f.d2, g.d1, g.d2);
    let s = f1 + c * g1;
    (1.0 + g1 * g1) * f2 + (1.0 + c * c + f1 * f1) * g2 - 2.0 * (-v.x * s - v.y * g1 + v.z) * (1.0 + g1 * g1 + s * s)
}

/// Raw residual of `X(x, y) = (x, y + f(x), h(x) + g(y))`.
pub fn residual_space_translation(f: &FuncJet, h: &FuncJet, g: &FuncJet, v: Vector3) -> f64 {
    let (f1, f2, h1, h2, g1, g2) = (f.d1, f.d2, h.d1, h.d2, g.d1, g.d2);
    let t = f1 * g1 - h1;
    (h2 - f2 * g1) * (1.0 + g1 * g1) + (1.0 + f1 * f1 + h1 * h1) * g2
        - 2.0 * (v.x * t - v.y * g1 + v.z) * (1.0 + g1 * g1 + t * t)
}

/// Raw residual of the graph `z = f(x) g(y)`.
pub fn residual_homothetical(f: &FuncJet, g: &FuncJet, v: Vector3) -> f64 {
    let (f0, f1, f2) = (f.value, f.d1, f.d2);
    let (g0, g1, g2) = (g.value, g.d1, g.d2);
    (1.0 + f0 * f0 * g1 * g1) * g0 * f2 - 2.0 * f0 * g0 * f1 * f1 * g1 * g1 + (1.0 + g0 * g0 * f1 * f1) * f0 * g2
        - 2.0 * (1.0 + f1 * f1 * g0 * g0 + f0 * f0 * g1 * g1) * (-v.x * f1 * g0 - v.y * f0 * g1 + v.z)
}

/// Homothetical data after the change of variables `p(f) = f'`, `q(g) = g'`;
/// `dp` and `dq` are the derivatives of `p` and `q` with respect to `f` and `g`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PqJet {
    pub f: f64,
    pub g: f64,
    pub p: f64,
    pub dp: f64,
    pub q: f64,
    pub dq: f64,
}

impl PqJet {
    /// Builds the data from ordinary jets; requires `f' != 0` and `g' != 0`.
    pub fn from_jets(f: &FuncJet, g: &FuncJet) -> PqJet {
        PqJet { f: f.value, g: g.value, p: f.d1, dp: f.d2 / f.d1, q: g.d1, dq: g.d2 / g.d1 }
    }
}

pub fn residual_homothetical_pq(d: &PqJet, v: Vector3) -> f64 {
    let PqJet { f, g, p, dp, q, dq } = *d;
    (1.0 + f * f * q * q) * g * p * dp - 2.0 * f * g * p * p * q * q + (1.0 + g * g * p * p) * f * q * dq
        - 2.0 * (1.0 + p * p * g * g + f * f * q * q) * (-v.x * p * g - v.y * f * q + v.z)
}

/// Residual of the soliton equation for the cylinder `alpha(s) + t w` in
/// Lorentz-Minkowski space. The signs `epsilon` and `epsilon_1` are computed
/// from the data; `epsilon_1 = <alpha', alpha'>_L`, which equals `+-1` for an
/// arc-length curve and keeps the residual valid for graph charts.
pub fn residual_lorentz_cylinder(c: &CurveJet, w: Vector3, v: Vector3) -> Result<f64, GeometryError> {
    let l = Metric::Lorentzian;
    let n = cross(l, c.d1, w);
    let nn = inner(l, n, n);
    if nn.abs() < NULL_TOL {
        return Err(GeometryError::Degenerate(nn));
    }
    let eps = nn.signum();
    let eps1 = inner(l, c.d1, c.d1);
    let ww = inner(l, w, w);
    let aw = inner(l, c.d1, w);
    Ok(ww * inner(l, n, c.d2) - 2.0 * eps * (eps1 * ww - aw * aw) * inner(l, n, v))
}

/// `<alpha' x_L w, v>_L`, the soliton condition for lightlike rulings.
pub fn lightlike_ruling_condition(c: &CurveJet, w: Vector3, v: Vector3) -> Result<f64, GeometryError> {
    let l = Metric::Lorentzian;
    let ww = inner(l, w, w);
    if w == Vector3::default() || ww.abs() > NULL_TOL {
        return Err(GeometryError::NotLightlike(ww));
    }
    Ok(inner(l, cross(l, c.d1, w), v))
}
