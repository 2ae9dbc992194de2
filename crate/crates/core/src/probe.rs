//! Least-squares residual probes over ansatz families.
//!
//! A probe fits polynomial or spline generating functions to one of the
//! separable surface charts by minimizing the mean square of the normalized
//! soliton residual on a fixed midpoint grid. A small best objective shows a
//! near-solution inside the family; a large one is an empirical lower bound
//! for that family only.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{
    residual_affine_translation, residual_homothetical, residual_space_translation, residual_translation, FuncJet,
    Vector3,
};

/// Resolution of the tensor midpoint grid.
pub const DEFAULT_GRID: usize = 64;
/// Weight of the curvature-floor penalty.
pub const PENALTY_WEIGHT: f64 = 1e3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProbeError {
    #[error("invalid ansatz: {0}")]
    Spec(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Family {
    /// Chebyshev expansion on the function's interval.
    Polynomial { degree: usize },
    /// Natural cubic spline through uniformly spaced knot values.
    CubicSpline { knots: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Structure {
    /// `z = f(x) + g(y)`.
    Translation,
    /// `z = f(x) + g(y + c x)`; `c = None` makes `c` a free parameter.
    AffineTranslation { c: Option<f64> },
    /// `X = (x, y + f(x), h(x) + g(y))`.
    SpaceTranslation,
    /// `z = f(x) g(y)`.
    Homothetical,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VelocitySpec {
    Fixed(Vector3),
    /// Unit velocity in spherical coordinates.
    Free,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnsatzSpec {
    pub family: Family,
    pub structure: Structure,
    pub x_domain: [f64; 2],
    pub y_domain: [f64; 2],
    pub velocity: VelocitySpec,
    /// Minimum `|f''|` and `|g''|` at the domain center, enforced by a penalty.
    #[serde(default)]
    pub curvature_floor: Option<f64>,
    /// Maximum `W = sqrt(1 + |grad u|^2)` over the grid, enforced by a penalty.
    #[serde(default)]
    pub slope_cap: Option<f64>,
}

impl AnsatzSpec {
    fn validate(&self) -> Result<(), ProbeError> {
        match self.family {
            Family::Polynomial { degree } if degree < 1 => return Err(ProbeError::Spec("degree must be >= 1".into())),
            Family::CubicSpline { knots } if knots < 3 => return Err(ProbeError::Spec("need at least 3 knots".into())),
            _ => {}
        }
        for d in [self.x_domain, self.y_domain] {
            if !(d[1] > d[0]) || !d[0].is_finite() || !d[1].is_finite() {
                return Err(ProbeError::Spec(format!("degenerate interval {d:?}")));
            }
        }
        if let Some(f) = self.curvature_floor {
            if !(f >= 0.0) {
                return Err(ProbeError::Spec("curvature floor must be non-negative".into()));
            }
        }
        if let Some(c) = self.slope_cap {
            if !(c >= 1.0) {
                return Err(ProbeError::Spec("slope cap must be >= 1".into()));
            }
        }
        Ok(())
    }
}

/// A one-variable function family with linear dependence on its coefficients.
#[derive(Debug, Clone)]
struct Basis {
    family: Family,
    with_constant: bool,
    /// Spline only: maps knot values to knot second derivatives (row major).
    second: Vec<f64>,
}

impl Basis {
    fn new(family: Family, with_constant: bool) -> Basis {
        let second = match family {
            Family::CubicSpline { knots } => natural_spline_map(knots),
            Family::Polynomial { .. } => Vec::new(),
        };
        Basis { family, with_constant, second }
    }

    fn len(&self) -> usize {
        match self.family {
            Family::Polynomial { degree } => degree + usize::from(self.with_constant),
            Family::CubicSpline { knots } => knots,
        }
    }

    /// Value, first and second derivative at `t` for the interval `[lo, hi]`.
    fn eval(&self, coeffs: &[f64], lo: f64, hi: f64, t: f64) -> (f64, f64, f64) {
        match self.family {
            Family::Polynomial { degree } => {
                let s = (2.0 * t - lo - hi) / (hi - lo);
                let a = 2.0 / (hi - lo);
                let (mut t0, mut t1) = (1.0, s);
                let (mut d0, mut d1) = (0.0, 1.0);
                let (mut e0, mut e1) = (0.0, 0.0);
                let offset = usize::from(self.with_constant);
                let (mut v, mut dv, mut ddv) = (0.0, 0.0, 0.0);
                if self.with_constant {
                    v += coeffs[0];
                }
                for k in 1..=degree {
                    let c = coeffs[k - 1 + offset];
                    v += c * t1;
                    dv += c * d1;
                    ddv += c * e1;
                    let t2 = 2.0 * s * t1 - t0;
                    let d2 = 2.0 * t1 + 2.0 * s * d1 - d0;
                    let e2 = 4.0 * d1 + 2.0 * s * e1 - e0;
                    (t0, t1, d0, d1, e0, e1) = (t1, t2, d1, d2, e1, e2);
                }
                (v, a * dv, a * a * ddv)
            }
            Family::CubicSpline { knots } => {
                let n = knots;
                let dx = (hi - lo) / (n - 1) as f64;
                let i = (((t - lo) / dx).floor() as isize).clamp(0, n as isize - 2) as usize;
                let m = |j: usize| -> f64 { (0..n).map(|k| self.second[j * n + k] * coeffs[k]).sum() };
                let (mi, mj) = (m(i) / (dx * dx), m(i + 1) / (dx * dx));
                let (yi, yj) = (coeffs[i], coeffs[i + 1]);
                let b = (t - (lo + i as f64 * dx)) / dx;
                let a = 1.0 - b;
                let v = a * yi + b * yj + ((a * a * a - a) * mi + (b * b * b - b) * mj) * dx * dx / 6.0;
                let dv = (yj - yi) / dx - (3.0 * a * a - 1.0) / 6.0 * dx * mi + (3.0 * b * b - 1.0) / 6.0 * dx * mj;
                (v, dv, a * mi + b * mj)
            }
        }
    }

    /// Coefficients reproducing `f` on `[lo, hi]`: Chebyshev interpolation for
    /// polynomials, knot sampling for splines.
    fn fit(&self, f: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> Vec<f64> {
        match self.family {
            Family::Polynomial { degree } => {
                let n = degree + 1;
                let nodes: Vec<f64> = (0..n).map(|j| (PI * (j as f64 + 0.5) / n as f64).cos()).collect();
                let vals: Vec<f64> = nodes.iter().map(|s| f(0.5 * (lo + hi) + 0.5 * (hi - lo) * s)).collect();
                let coef = |k: usize| -> f64 {
                    let sum: f64 = nodes.iter().zip(&vals).map(|(s, v)| v * (k as f64 * s.acos()).cos()).sum();
                    sum * 2.0 / n as f64 * if k == 0 { 0.5 } else { 1.0 }
                };
                let start = if self.with_constant { 0 } else { 1 };
                (start..=degree).map(coef).collect()
            }
            Family::CubicSpline { knots } => {
                let dx = (hi - lo) / (knots - 1) as f64;
                (0..knots).map(|i| f(lo + i as f64 * dx)).collect()
            }
        }
    }
}

/// Linear map from knot values to second derivatives of the natural cubic spline.
fn natural_spline_map(n: usize) -> Vec<f64> {
    // Interior rows: M[i-1] + 4 M[i] + M[i+1] = 6 (y[i+1] - 2 y[i] + y[i-1]) / dx^2,
    // here with dx = 1; the evaluator rescales by the knot spacing.
    let mut out = vec![0.0; n * n];
    let m = n - 2;
    for col in 0..n {
        let y: Vec<f64> = (0..n).map(|k| if k == col { 1.0 } else { 0.0 }).collect();
        let rhs: Vec<f64> = (1..n - 1).map(|i| 6.0 * (y[i + 1] - 2.0 * y[i] + y[i - 1])).collect();
        // Thomas algorithm for the constant tridiagonal (1, 4, 1).
        let mut c = vec![0.0; m];
        let mut d = vec![0.0; m];
        for i in 0..m {
            let denom = 4.0 - if i > 0 { c[i - 1] } else { 0.0 };
            c[i] = 1.0 / denom;
            d[i] = (rhs[i] - if i > 0 { d[i - 1] } else { 0.0 }) / denom;
        }
        let mut sol = vec![0.0; m];
        for i in (0..m).rev() {
            sol[i] = d[i] - if i + 1 < m { c[i] * sol[i + 1] } else { 0.0 };
        }
        for i in 0..m {
            out[(i + 1) * n + col] = sol[i];
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Slot {
    start: usize,
    len: usize,
}

impl Slot {
    fn of<'a>(&self, p: &'a [f64]) -> &'a [f64] {
        &p[self.start..self.start + self.len]
    }
}

/// Parameter layout and quadrature grid for one ansatz.
#[derive(Debug, Clone)]
pub struct Objective {
    pub spec: AnsatzSpec,
    pub grid: usize,
    xs: Vec<f64>,
    ys: Vec<f64>,
    basis: Basis,
    f: Slot,
    g: Slot,
    h: Option<Slot>,
    c: Option<usize>,
    v: Option<usize>,
    dim: usize,
}

/// Unit vector from polar angle `theta` and azimuth `phi`.
pub fn unit_velocity(theta: f64, phi: f64) -> Vector3 {
    Vector3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos())
}

fn midpoints(d: [f64; 2], n: usize) -> Vec<f64> {
    let h = (d[1] - d[0]) / n as f64;
    (0..n).map(|i| d[0] + (i as f64 + 0.5) * h).collect()
}

pub fn build_objective(spec: &AnsatzSpec, grid: usize) -> Result<Objective, ProbeError> {
    spec.validate()?;
    if grid == 0 {
        return Err(ProbeError::Spec("grid must be positive".into()));
    }
    let with_constant = matches!(spec.structure, Structure::Homothetical);
    let basis = Basis::new(spec.family, with_constant);
    let n = basis.len();
    let mut next = 0;
    let mut slot = |len: usize| {
        let s = Slot { start: next, len };
        next += len;
        s
    };
    let f = slot(n);
    let g = slot(n);
    let h = matches!(spec.structure, Structure::SpaceTranslation).then(|| slot(n));
    let c = matches!(spec.structure, Structure::AffineTranslation { c: None }).then(|| slot(1).start);
    let v = matches!(spec.velocity, VelocitySpec::Free).then(|| slot(2).start);
    Ok(Objective {
        spec: *spec,
        grid,
        xs: midpoints(spec.x_domain, grid),
        ys: midpoints(spec.y_domain, grid),
        basis,
        f,
        g,
        h,
        c,
        v,
        dim: next,
    })
}

/// Parameter vector split into its named parts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Unpacked {
    pub f: Vec<f64>,
    pub g: Vec<f64>,
    pub h: Option<Vec<f64>>,
    pub c: Option<f64>,
    pub velocity: Vector3,
}

impl Objective {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coefficients_per_function(&self) -> usize {
        self.basis.len()
    }

    pub fn velocity(&self, p: &[f64]) -> Vector3 {
        match (self.spec.velocity, self.v) {
            (VelocitySpec::Fixed(v), _) => v,
            (VelocitySpec::Free, Some(i)) => unit_velocity(p[i], p[i + 1]),
            (VelocitySpec::Free, None) => unreachable!("free velocity has a slot"),
        }
    }

    pub fn shear(&self, p: &[f64]) -> f64 {
        match self.spec.structure {
            Structure::AffineTranslation { c: Some(c) } => c,
            Structure::AffineTranslation { c: None } => p[self.c.expect("free shear has a slot")],
            _ => 0.0,
        }
    }

    pub fn unpack(&self, p: &[f64]) -> Unpacked {
        Unpacked {
            f: self.f.of(p).to_vec(),
            g: self.g.of(p).to_vec(),
            h: self.h.map(|s| s.of(p).to_vec()),
            c: self.c.map(|i| p[i]),
            velocity: self.velocity(p),
        }
    }

    /// Interval on which `g` is evaluated for the current parameters.
    fn g_domain(&self, p: &[f64]) -> [f64; 2] {
        let [x0, x1] = self.spec.x_domain;
        let [y0, y1] = self.spec.y_domain;
        let c = self.shear(p);
        [y0 + (c * x0).min(c * x1), y1 + (c * x0).max(c * x1)]
    }

    fn jet(&self, slot: Slot, p: &[f64], dom: [f64; 2], t: f64) -> FuncJet {
        let (v, d1, d2) = self.basis.eval(slot.of(p), dom[0], dom[1], t);
        FuncJet::new(t, v, d1, d2)
    }

    pub fn f_jet(&self, p: &[f64], x: f64) -> FuncJet {
        self.jet(self.f, p, self.spec.x_domain, x)
    }

    pub fn g_jet(&self, p: &[f64], t: f64) -> FuncJet {
        self.jet(self.g, p, self.g_domain(p), t)
    }

    pub fn h_jet(&self, p: &[f64], x: f64) -> Option<FuncJet> {
        self.h.map(|s| self.jet(s, p, self.spec.x_domain, x))
    }

    /// Normalized residual `H - <N, v>` and `W^2` at one grid node.
    fn node_residual(&self, p: &[f64], v: Vector3, fj: &FuncJet, gj: &FuncJet, hj: Option<&FuncJet>) -> (f64, f64) {
        let (f1, g1) = (fj.d1, gj.d1);
        let (raw, w2) = match self.spec.structure {
            Structure::Translation => (residual_translation(fj, gj, v), 1.0 + f1 * f1 + g1 * g1),
            Structure::AffineTranslation { .. } => {
                let c = self.shear(p);
                let s = f1 + c * g1;
                (residual_affine_translation(fj, gj, c, v), 1.0 + g1 * g1 + s * s)
            }
            Structure::SpaceTranslation => {
                let h = hj.expect("space translation has h");
                let t = f1 * g1 - h.d1;
                (residual_space_translation(fj, h, gj, v), 1.0 + g1 * g1 + t * t)
            }
            Structure::Homothetical => {
                let (a, b) = (f1 * gj.value, fj.value * g1);
                (residual_homothetical(fj, gj, v), 1.0 + a * a + b * b)
            }
        };
        (raw / (2.0 * w2 * w2.sqrt()), w2)
    }

    /// Mean square of the normalized residual over the grid.
    pub fn residual_mean_square(&self, p: &[f64]) -> f64 {
        self.grid_stats(p).0
    }

    /// Largest `W` over the grid.
    pub fn max_slope_factor(&self, p: &[f64]) -> f64 {
        self.grid_stats(p).1
    }

    fn grid_stats(&self, p: &[f64]) -> (f64, f64) {
        let v = self.velocity(p);
        let fjs: Vec<FuncJet> = self.xs.iter().map(|&x| self.f_jet(p, x)).collect();
        let hjs: Option<Vec<FuncJet>> = self.h.map(|_| self.xs.iter().map(|&x| self.h_jet(p, x).unwrap()).collect());
        let mut sum = 0.0;
        let mut w2max: f64 = 1.0;
        match self.spec.structure {
            Structure::AffineTranslation { .. } => {
                let c = self.shear(p);
                for (fj, &x) in fjs.iter().zip(&self.xs) {
                    for &y in &self.ys {
                        let gj = self.g_jet(p, y + c * x);
                        let (r, w2) = self.node_residual(p, v, fj, &gj, None);
                        sum += r * r;
                        w2max = w2max.max(w2);
                    }
                }
            }
            _ => {
                let gjs: Vec<FuncJet> = self.ys.iter().map(|&y| self.g_jet(p, y)).collect();
                for (i, fj) in fjs.iter().enumerate() {
                    let hj = hjs.as_ref().map(|h| &h[i]);
                    for gj in &gjs {
                        let (r, w2) = self.node_residual(p, v, fj, gj, hj);
                        sum += r * r;
                        w2max = w2max.max(w2);
                    }
                }
            }
        }
        (sum / (self.grid * self.grid) as f64, w2max.sqrt())
    }

    /// `(f'', g'')` at the center of the domain. For products the pair is taken
    /// on the balanced representative `|f(c)| = |g(c)|` of the orbit
    /// `(lambda f, g / lambda)`, which leaves the surface unchanged.
    pub fn center_curvatures(&self, p: &[f64]) -> (f64, f64) {
        let xc = 0.5 * (self.spec.x_domain[0] + self.spec.x_domain[1]);
        let yc = 0.5 * (self.spec.y_domain[0] + self.spec.y_domain[1]);
        let c = self.shear(p);
        let (fj, gj) = (self.f_jet(p, xc), self.g_jet(p, yc + c * xc));
        if matches!(self.spec.structure, Structure::Homothetical) && fj.value != 0.0 && gj.value != 0.0 {
            let lambda = (gj.value.abs() / fj.value.abs()).sqrt();
            return (lambda * fj.d2, gj.d2 / lambda);
        }
        (fj.d2, gj.d2)
    }

    pub fn penalty(&self, p: &[f64]) -> f64 {
        self.penalty_with(p, || self.max_slope_factor(p))
    }

    fn penalty_with(&self, p: &[f64], max_w: impl FnOnce() -> f64) -> f64 {
        let mut total = 0.0;
        if let Some(floor) = self.spec.curvature_floor {
            let (a, b) = self.center_curvatures(p);
            let short = |x: f64| (floor - x.abs()).max(0.0);
            total += short(a).powi(2) + short(b).powi(2);
        }
        if let Some(cap) = self.spec.slope_cap {
            total += (max_w() - cap).max(0.0).powi(2);
        }
        PENALTY_WEIGHT * total
    }

    /// The quantity minimized: mean square residual plus penalty.
    pub fn value(&self, p: &[f64]) -> f64 {
        let (ms, max_w) = self.grid_stats(p);
        let v = ms + self.penalty_with(p, || max_w);
        if v.is_finite() {
            v
        } else {
            f64::MAX
        }
    }

    /// Parameters whose functions reproduce `f`, `g` (and `h`) on the domain.
    /// Shear and velocity slots are filled from `shear` and `velocity_angles`.
    pub fn fit_params(
        &self,
        f: &dyn Fn(f64) -> f64,
        g: &dyn Fn(f64) -> f64,
        h: Option<&dyn Fn(f64) -> f64>,
        shear: f64,
        velocity_angles: (f64, f64),
    ) -> Vec<f64> {
        let mut p = vec![0.0; self.dim];
        if let Some(i) = self.c {
            p[i] = shear;
        }
        if let Some(i) = self.v {
            p[i] = velocity_angles.0;
            p[i + 1] = velocity_angles.1;
        }
        let [x0, x1] = self.spec.x_domain;
        p[self.f.start..self.f.start + self.f.len].copy_from_slice(&self.basis.fit(f, x0, x1));
        let gd = self.g_domain(&p);
        p[self.g.start..self.g.start + self.g.len].copy_from_slice(&self.basis.fit(g, gd[0], gd[1]));
        if let (Some(slot), Some(h)) = (self.h, h) {
            p[slot.start..slot.start + slot.len].copy_from_slice(&self.basis.fit(h, x0, x1));
        }
        p
    }

    /// A seeded pseudo-random starting point.
    pub fn random_init(&self, rng: &mut impl Rng) -> Vec<f64> {
        let mut p: Vec<f64> = (0..self.dim).map(|_| rng.random_range(-0.5..0.5)).collect();
        if let Some(i) = self.c {
            p[i] = rng.random_range(-1.0..1.0);
        }
        if let Some(i) = self.v {
            p[i] = rng.random_range(0.0..PI);
            p[i + 1] = rng.random_range(0.0..2.0 * PI);
        }
        if self.spec.curvature_floor.is_some() {
            // start on the feasible side of the floor
            let scale = 2.0 * self.spec.curvature_floor.unwrap_or(0.0);
            let (a, b) = self.center_curvatures(&p);
            if a.abs() < scale || b.abs() < scale {
                let xc = 0.5 * (self.spec.x_domain[0] + self.spec.x_domain[1]);
                let yc = 0.5 * (self.spec.y_domain[0] + self.spec.y_domain[1]);
                let (sa, sb) = (rng.random_range(0.5..1.5), rng.random_range(0.5..1.5));
                let (fa, fb) = (rng.random_range(0.5..1.5), rng.random_range(0.5..1.5));
                let fit = self.fit_params(
                    &|x| fa + sa * (x - xc).powi(2),
                    &|y| fb + sb * (y - yc).powi(2),
                    None,
                    0.0,
                    (0.0, 0.0),
                );
                for k in 0..self.dim {
                    if (self.f.start..self.g.start + self.g.len).contains(&k) {
                        p[k] = fit[k] + 0.1 * p[k];
                    }
                }
            }
        }
        p
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NmConfig {
    pub max_evals: usize,
    /// Stop once every vertex is within this max-norm distance of the best one.
    pub diameter_tol: f64,
    /// Number of times the simplex is rebuilt around the best point.
    pub reinit_rounds: usize,
}

impl Default for NmConfig {
    fn default() -> Self {
        NmConfig { max_evals: 20_000, diameter_tol: 1e-12, reinit_rounds: 3 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub restart: usize,
    pub iteration: usize,
    pub objective: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeResult {
    pub best_params: Vec<f64>,
    /// Best mean square residual, without the penalty term.
    pub best_objective: f64,
    /// Penalty at the best point (zero without a curvature floor).
    pub best_penalty: f64,
    pub evaluations: usize,
    pub restart_index: usize,
    pub restart_minima: Vec<f64>,
    pub trace: Vec<TracePoint>,
}

impl ProbeResult {
    /// CSV with columns `restart,iteration,objective`.
    pub fn trace_csv(&self) -> String {
        let mut s = String::from("restart,iteration,objective\n");
        for t in &self.trace {
            s.push_str(&format!("{},{},{:.16e}\n", t.restart, t.iteration, t.objective));
        }
        s
    }
}

fn initial_simplex(x0: &[f64]) -> Vec<Vec<f64>> {
    let mut s = vec![x0.to_vec()];
    for i in 0..x0.len() {
        let mut x = x0.to_vec();
        x[i] = if x[i] != 0.0 { 1.05 * x[i] } else { 0.00025 };
        s.push(x);
    }
    s
}

/// Nelder-Mead with reflection 1, expansion 2, contraction 1/2 and shrink 1/2.
/// The evaluation budget is split evenly over the initial round and the
/// re-initialization rounds; each round also ends when the simplex diameter
/// drops below `diameter_tol`.
pub fn nelder_mead(obj: &dyn Fn(&[f64]) -> f64, init: &[f64], cfg: &NmConfig, restart: usize) -> ProbeResult {
    let n = init.len();
    let rounds = cfg.reinit_rounds + 1;
    let per_round = (cfg.max_evals / rounds).max(n + 2);
    let mut evals = 0usize;
    let mut iteration = 0usize;
    let mut trace = Vec::new();
    let mut best_x = init.to_vec();
    let mut best_f = obj(init);
    evals += 1;
    trace.push(TracePoint { restart, iteration, objective: best_f });

    for _round in 0..rounds {
        if evals >= cfg.max_evals {
            break;
        }
        let round_start = evals;
        let mut xs = initial_simplex(&best_x);
        let mut fs: Vec<f64> = Vec::with_capacity(n + 1);
        fs.push(best_f);
        for x in &xs[1..] {
            fs.push(obj(x));
            evals += 1;
        }
        loop {
            let mut idx: Vec<usize> = (0..=n).collect();
            idx.sort_by(|&a, &b| fs[a].total_cmp(&fs[b]));
            xs = idx.iter().map(|&i| xs[i].clone()).collect();
            fs = idx.iter().map(|&i| fs[i]).collect();
            if fs[0] < best_f {
                best_f = fs[0];
                best_x = xs[0].clone();
                trace.push(TracePoint { restart, iteration, objective: best_f });
            }
            let diameter = xs[1..]
                .iter()
                .map(|x| x.iter().zip(&xs[0]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
                .fold(0.0, f64::max);
            if diameter < cfg.diameter_tol || evals - round_start >= per_round || evals >= cfg.max_evals {
                break;
            }
            iteration += 1;
            let mut xbar = vec![0.0; n];
            for x in &xs[..n] {
                for (b, xi) in xbar.iter_mut().zip(x) {
                    *b += xi / n as f64;
                }
            }
            let along = |t: f64| -> Vec<f64> { xbar.iter().zip(&xs[n]).map(|(b, w)| b + t * (b - w)).collect() };
            let xr = along(1.0);
            let fr = obj(&xr);
            evals += 1;
            if fr < fs[0] {
                let xe = along(2.0);
                let fe = obj(&xe);
                evals += 1;
                if fe < fr {
                    (xs[n], fs[n]) = (xe, fe);
                } else {
                    (xs[n], fs[n]) = (xr, fr);
                }
                continue;
            }
            if fr < fs[n - 1] {
                (xs[n], fs[n]) = (xr, fr);
                continue;
            }
            let accepted = if fr < fs[n] {
                let xc = along(0.5);
                let fc = obj(&xc);
                evals += 1;
                (fc <= fr).then_some((xc, fc))
            } else {
                let xcc = along(-0.5);
                let fcc = obj(&xcc);
                evals += 1;
                (fcc < fs[n]).then_some((xcc, fcc))
            };
            if let Some((x, f)) = accepted {
                (xs[n], fs[n]) = (x, f);
                continue;
            }
            for i in 1..=n {
                let xi: Vec<f64> = xs[i].iter().zip(&xs[0]).map(|(a, b)| b + 0.5 * (a - b)).collect();
                fs[i] = obj(&xi);
                xs[i] = xi;
                evals += 1;
            }
        }
    }
    ProbeResult {
        best_params: best_x,
        best_objective: best_f,
        best_penalty: 0.0,
        evaluations: evals,
        restart_index: restart,
        restart_minima: vec![best_f],
        trace,
    }
}

/// Runs Nelder-Mead on the objective from `init` and reports the residual
/// part and the penalty part of the best point separately.
pub fn minimize(obj: &Objective, init: &[f64], cfg: &NmConfig, restart: usize) -> ProbeResult {
    let f = |p: &[f64]| obj.value(p);
    let mut r = nelder_mead(&f, init, cfg, restart);
    r.best_penalty = obj.penalty(&r.best_params);
    r.best_objective = obj.residual_mean_square(&r.best_params);
    r.restart_minima = vec![r.best_objective];
    r
}

/// Deterministic generator for restart `index` under `seed`.
pub fn restart_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Best of `restarts` seeded Nelder-Mead runs; restarts run in parallel and
/// are merged in index order.
pub fn probe_run(spec: &AnsatzSpec, restarts: usize, seed: u64, cfg: &NmConfig) -> Result<ProbeResult, ProbeError> {
    if restarts == 0 {
        return Err(ProbeError::Spec("restarts must be >= 1".into()));
    }
    let obj = build_objective(spec, DEFAULT_GRID)?;
    let runs: Vec<ProbeResult> = (0..restarts)
        .into_par_iter()
        .map(|i| {
            let init = obj.random_init(&mut restart_rng(seed, i));
            minimize(&obj, &init, cfg, i)
        })
        .collect();
    let ranked = |r: &ProbeResult| r.best_objective + r.best_penalty;
    let mut best = 0;
    for (i, r) in runs.iter().enumerate() {
        if ranked(r) < ranked(&runs[best]) {
            best = i;
        }
    }
    let b = &runs[best];
    Ok(ProbeResult {
        best_params: b.best_params.clone(),
        best_objective: b.best_objective,
        best_penalty: b.best_penalty,
        evaluations: runs.iter().map(|r| r.evaluations).sum(),
        restart_index: best,
        restart_minima: runs.iter().map(|r| r.best_objective).collect(),
        trace: runs.iter().flat_map(|r| r.trace.iter().copied()).collect(),
    })
}
