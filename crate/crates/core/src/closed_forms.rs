//! Explicit soliton profiles as analytic jets, plus the rotational ODE field.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{CurveJet, FuncJet, Jet2, Vector3};

/// Distance to a zero of the cosine below which a grim reaper is at its pole.
pub const POLE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClosedFormError {
    #[error("outside the domain: {0}")]
    Domain(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrimReaperParams {
    pub k: f64,
    pub a: f64,
    pub b: f64,
    pub theta: f64,
}

impl GrimReaperParams {
    /// Profile for velocity `(0, 0, v3)` and tilt `theta`: `k = 2 v3 cos(theta)`.
    pub fn for_velocity(v3: f64, theta: f64) -> Self {
        GrimReaperParams { k: 2.0 * v3 * theta.cos(), a: 0.0, b: 0.0, theta }
    }

    /// Vertical speed `k / (2 cos(theta))` at which the profile translates.
    pub fn speed(&self) -> f64 {
        self.k / (2.0 * self.theta.cos())
    }
}

/// `u = -(1/k) log cos(k s + a) + b`.
pub fn grim_reaper_jet(p: &GrimReaperParams, s: f64) -> Result<FuncJet, ClosedFormError> {
    if p.k == 0.0 {
        return Err(ClosedFormError::Parameter("k must be nonzero".into()));
    }
    let arg = p.k * s + p.a;
    let c = arg.cos();
    if arg.abs() >= std::f64::consts::FRAC_PI_2 || c < POLE_TOL {
        return Err(ClosedFormError::Domain(format!("k s + a = {arg} is not inside (-pi/2, pi/2)")));
    }
    let t = arg.tan();
    Ok(FuncJet::new(s, -c.ln() / p.k + p.b, t, p.k * (1.0 + t * t)))
}

/// The tilted grim reaper `z = x tan(theta) + u(y) / cos(theta)`.
pub fn tilted_grim_reaper_jet(p: &GrimReaperParams, x: f64, y: f64) -> Result<Jet2, ClosedFormError> {
    let ct = p.theta.cos();
    if ct.abs() < POLE_TOL {
        return Err(ClosedFormError::Parameter("cos(theta) must be nonzero".into()));
    }
    let g = grim_reaper_jet(p, y)?;
    Ok(Jet2 {
        x,
        y,
        u: x * p.theta.tan() + g.value / ct,
        ux: p.theta.tan(),
        uy: g.d1 / ct,
        uxx: 0.0,
        uxy: 0.0,
        uyy: g.d2 / ct,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LorentzCase {
    /// `u = -(1/2) log cosh(-2s + a) + b`, where `|u'| < 1`.
    SpacelikeCosh,
    /// `u = (1/2) log sinh(2s + a) + b`, where `|u'| > 1`.
    SpacelikeSinh,
    /// `u = (1/2) log cos(2s + a) + b`.
    TimelikeCos,
}

impl LorentzCase {
    pub const ALL: [LorentzCase; 3] =
        [LorentzCase::SpacelikeCosh, LorentzCase::SpacelikeSinh, LorentzCase::TimelikeCos];

    pub fn name(self) -> &'static str {
        match self {
            LorentzCase::SpacelikeCosh => "spacelike-cosh",
            LorentzCase::SpacelikeSinh => "spacelike-sinh",
            LorentzCase::TimelikeCos => "timelike-cos",
        }
    }

    pub fn parse(s: &str) -> Option<LorentzCase> {
        LorentzCase::ALL.into_iter().find(|c| c.name() == s)
    }

    /// Ruling direction of the cylinder carrying this profile.
    pub fn ruling(self) -> Vector3 {
        match self {
            LorentzCase::SpacelikeCosh | LorentzCase::SpacelikeSinh => Vector3::E1,
            LorentzCase::TimelikeCos => Vector3::E3,
        }
    }

    /// Velocity at which the profile translates.
    pub fn velocity(self) -> Vector3 {
        match self {
            LorentzCase::SpacelikeCosh | LorentzCase::SpacelikeSinh => Vector3::E3,
            LorentzCase::TimelikeCos => Vector3::E2,
        }
    }

    /// Right side of the profile equation `u'' = F(u', v)` for this ruling type.
    ///
    /// Spacelike rulings `w = e1`, chart `(0, s, u(s))`:
    /// `u'' = +-2 (1 - u'^2)(v2 u' - v3)` with the sign of `1 - u'^2`.
    /// Timelike rulings `w = e3`, chart `(s, u(s), 0)`: `u'' = 2 (1 + u'^2)(v1 u' - v2)`.
    pub fn ode_rhs(self, u1: f64, v: Vector3) -> f64 {
        match self {
            LorentzCase::SpacelikeCosh | LorentzCase::SpacelikeSinh => {
                let d = 1.0 - u1 * u1;
                2.0 * d.signum() * d * (v.y * u1 - v.z)
            }
            LorentzCase::TimelikeCos => 2.0 * (1.0 + u1 * u1) * (v.x * u1 - v.y),
        }
    }

    /// The generating curve of the cylinder through the profile jet.
    pub fn curve(self, j: &FuncJet) -> CurveJet {
        match self {
            LorentzCase::SpacelikeCosh | LorentzCase::SpacelikeSinh => CurveJet {
                s: j.t,
                pos: Vector3::new(0.0, j.t, j.value),
                d1: Vector3::new(0.0, 1.0, j.d1),
                d2: Vector3::new(0.0, 0.0, j.d2),
            },
            LorentzCase::TimelikeCos => CurveJet {
                s: j.t,
                pos: Vector3::new(j.t, j.value, 0.0),
                d1: Vector3::new(1.0, j.d1, 0.0),
                d2: Vector3::new(0.0, j.d2, 0.0),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LorentzProfileParams {
    pub case: LorentzCase,
    pub a: f64,
    pub b: f64,
}

pub fn lorentz_profile_jet(p: &LorentzProfileParams, s: f64) -> Result<FuncJet, ClosedFormError> {
    match p.case {
        LorentzCase::SpacelikeCosh => {
            let t = -2.0 * s + p.a;
            let d1 = t.tanh();
            Ok(FuncJet::new(s, -0.5 * t.cosh().ln() + p.b, d1, -2.0 * (1.0 - d1 * d1)))
        }
        LorentzCase::SpacelikeSinh => {
            let t = 2.0 * s + p.a;
            if t <= 0.0 {
                return Err(ClosedFormError::Domain(format!("sinh argument {t} must be positive")));
            }
            let d1 = 1.0 / t.tanh();
            Ok(FuncJet::new(s, 0.5 * t.sinh().ln() + p.b, d1, 2.0 * (1.0 - d1 * d1)))
        }
        LorentzCase::TimelikeCos => {
            let t = 2.0 * s + p.a;
            if t.abs() >= std::f64::consts::FRAC_PI_2 || t.cos() < POLE_TOL {
                return Err(ClosedFormError::Domain(format!("cos argument {t} is not inside (-pi/2, pi/2)")));
            }
            let d1 = -t.tan();
            Ok(FuncJet::new(s, 0.5 * t.cos().ln() + p.b, d1, -2.0 * (1.0 + d1 * d1)))
        }
    }
}

/// `u = (1/c) log(cos(c y) / cos(c x))`, the minimal Scherk graph.
pub fn scherk_jet(c: f64, x: f64, y: f64) -> Result<Jet2, ClosedFormError> {
    if c == 0.0 {
        return Err(ClosedFormError::Parameter("c must be nonzero".into()));
    }
    let (cx, cy) = ((c * x).cos(), (c * y).cos());
    if cx <= 0.0 || cy <= 0.0 {
        return Err(ClosedFormError::Domain(format!("cos(c x) = {cx}, cos(c y) = {cy} must be positive")));
    }
    let (tx, ty) = ((c * x).tan(), (c * y).tan());
    Ok(Jet2 {
        x,
        y,
        u: (cy / cx).ln() / c,
        ux: tx,
        uy: -ty,
        uxx: c * (1.0 + tx * tx),
        uxy: 0.0,
        uyy: -c * (1.0 + ty * ty),
    })
}

/// Profile state of a rotational graph `z = u(r)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BowlState {
    pub r: f64,
    pub u: f64,
    pub du: f64,
}

/// `(u', u'')` from `u'' / (1 + u'^2) + u' / r = 2 v3`.
///
/// For `u(x, y) = U(r)` the graph numerator equals `W^3 div(grad u / W)`, which is
/// `U'' + (1 + U'^2) U' / r`, and the velocity side is `2 (1 + U'^2) v3` for
/// `v = (0, 0, v3)`.
pub fn bowl_ode_field(s: &BowlState, v3: f64) -> Result<(f64, f64), ClosedFormError> {
    if s.r <= 0.0 {
        return Err(ClosedFormError::Domain("the field is singular at r = 0; start from the series".into()));
    }
    let q = 1.0 + s.du * s.du;
    Ok((s.du, q * (2.0 * v3 - s.du / s.r)))
}

/// Series solution near the axis: `u' = v3 r + v3^3 r^3 / 4`, `u = u0 + v3 r^2 / 2 + v3^3 r^4 / 16`.
pub fn bowl_series_start(u0: f64, r0: f64, v3: f64) -> Result<BowlState, ClosedFormError> {
    if !(r0 > 0.0 && r0 <= 1e-3) {
        return Err(ClosedFormError::Parameter(format!("r0 = {r0} must lie in (0, 1e-3]")));
    }
    let v33 = v3 * v3 * v3;
    Ok(BowlState { r: r0, u: u0 + v3 * r0 * r0 / 2.0 + v33 * r0.powi(4) / 16.0, du: v3 * r0 + v33 * r0.powi(3) / 4.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{graph_invariants, residual_graph, residual_lorentz_cylinder, ResidualMode};
    use std::f64::consts::FRAC_PI_4;

    fn gr(k: f64) -> GrimReaperParams {
        GrimReaperParams { k, a: 0.0, b: 0.0, theta: 0.0 }
    }

    #[test]
    fn grim_reaper_values() {
        assert_eq!(grim_reaper_jet(&gr(1.0), 0.0).unwrap(), FuncJet::new(0.0, 0.0, 0.0, 1.0));
        let j = grim_reaper_jet(&gr(1.0), FRAC_PI_4).unwrap();
        assert!((j.value - 0.5 * 2f64.ln()).abs() < 1e-15);
        assert!((j.value - 0.346574).abs() < 1e-6);
        assert!(grim_reaper_jet(&gr(2.0), FRAC_PI_4).is_err());
        assert!(grim_reaper_jet(&gr(0.0), 0.1).is_err());
    }

    #[test]
    fn k2_grim_reaper_solves_graph_equation() {
        for i in 0..1000 {
            let s = -0.78 + 1.56 * i as f64 / 999.0;
            let j = grim_reaper_jet(&gr(2.0), s).unwrap();
            let jet = Jet2::translation(&j, &FuncJet::constant(0.0, 0.0));
            assert!(residual_graph(&jet, Vector3::E3, ResidualMode::Normalized).abs() <= 1e-10);
        }
    }

    #[test]
    fn tilted_grim_reaper_solves_graph_equation() {
        let p = GrimReaperParams { a: 0.2, b: -1.0, ..GrimReaperParams::for_velocity(1.5, 0.7) };
        let v = Vector3::new(0.0, 0.0, p.speed());
        assert!((p.speed() - 1.5).abs() < 1e-15);
        for i in 0..50 {
            let y = -0.5 + i as f64 / 49.0;
            let j = tilted_grim_reaper_jet(&p, 0.3, y).unwrap();
            assert!(residual_graph(&j, v, ResidualMode::Normalized).abs() < 1e-12);
        }
    }

    #[test]
    fn lorentz_profiles_at_origin() {
        let cosh = LorentzProfileParams { case: LorentzCase::SpacelikeCosh, a: 0.0, b: 0.0 };
        assert_eq!(lorentz_profile_jet(&cosh, 0.0).unwrap(), FuncJet::new(0.0, 0.0, 0.0, -2.0));
        let cos = LorentzProfileParams { case: LorentzCase::TimelikeCos, a: 0.0, b: 0.0 };
        assert_eq!(lorentz_profile_jet(&cos, 0.0).unwrap(), FuncJet::new(0.0, 0.0, 0.0, -2.0));
        let sinh = LorentzProfileParams { case: LorentzCase::SpacelikeSinh, a: 0.0, b: 0.0 };
        assert!(lorentz_profile_jet(&sinh, 0.0).is_err());
        assert!(lorentz_profile_jet(&cos, 1.0).is_err());
    }

    #[test]
    fn lorentz_profiles_match_closed_form_derivatives() {
        // central differences of the value column as an independent check
        let h = 1e-5;
        for case in LorentzCase::ALL {
            let p = LorentzProfileParams { case, a: 0.3, b: 0.1 };
            let s = 0.2;
            let u = |s| lorentz_profile_jet(&p, s).unwrap().value;
            let j = lorentz_profile_jet(&p, s).unwrap();
            assert!((j.d1 - (u(s + h) - u(s - h)) / (2.0 * h)).abs() < 1e-8);
            assert!((j.d2 - (u(s + h) - 2.0 * u(s) + u(s - h)) / (h * h)).abs() < 1e-4);
        }
    }

    #[test]
    fn spacelike_cosh_solves_profile_ode_on_grid() {
        let p = LorentzProfileParams { case: LorentzCase::SpacelikeCosh, a: 0.0, b: 0.0 };
        for i in 0..1000 {
            let s = -2.0 + 4.0 * i as f64 / 999.0;
            let j = lorentz_profile_jet(&p, s).unwrap();
            assert!((j.d2 - LorentzCase::SpacelikeCosh.ode_rhs(j.d1, Vector3::E3)).abs() <= 1e-10);
        }
    }

    #[test]
    fn timelike_profile_against_cylinder_residual() {
        let p = LorentzProfileParams { case: LorentzCase::TimelikeCos, a: 0.1, b: 0.0 };
        for i in 0..100 {
            let s = -0.7 + 1.3 * i as f64 / 99.0;
            let j = lorentz_profile_jet(&p, s).unwrap();
            let c = LorentzCase::TimelikeCos.curve(&j);
            let w = LorentzCase::TimelikeCos.ruling();
            let down = residual_lorentz_cylinder(&c, w, -Vector3::E2).unwrap();
            assert!(down.abs() < 1e-10);
            let up = residual_lorentz_cylinder(&c, w, Vector3::E2).unwrap();
            assert!((up + 4.0 * (1.0 + j.d1 * j.d1)).abs() < 1e-10);
        }
    }

    #[test]
    fn scherk_values() {
        let j = scherk_jet(1.0, 0.0, 0.0).unwrap();
        assert_eq!((j.u, j.ux, j.uy), (0.0, 0.0, 0.0));
        let j = scherk_jet(1.0, 0.5, 0.5).unwrap();
        assert_eq!(j.u, 0.0);
        assert_eq!(j.ux, 0.5f64.tan());
        assert_eq!(j.uy, -(0.5f64.tan()));
        assert!(graph_invariants(&scherk_jet(1.0, 0.3, 0.2).unwrap()).h.abs() < 1e-12);
        assert!(scherk_jet(1.0, 2.0, 0.0).is_err());
    }

    #[test]
    fn bowl_field_values() {
        let s = BowlState { r: 1.0, u: 0.0, du: 1.0 };
        assert_eq!(bowl_ode_field(&s, 1.0).unwrap(), (1.0, 2.0));
        let s = BowlState { r: 0.37, u: 4.0, du: 0.0 };
        assert_eq!(bowl_ode_field(&s, -0.6).unwrap().1, -1.2);
        assert!(bowl_ode_field(&BowlState { r: 0.0, u: 0.0, du: 0.0 }, 1.0).is_err());
    }

    #[test]
    fn bowl_series_values() {
        let s = bowl_series_start(0.0, 1e-3, 1.0).unwrap();
        assert!((s.u - 5e-7).abs() < 1e-12);
        assert!((s.du - 1e-3).abs() < 1e-9);
        let s = bowl_series_start(2.0, 1e-3, 0.0).unwrap();
        assert_eq!((s.u, s.du), (2.0, 0.0));
        assert!((bowl_series_start(0.0, 1e-3, -1.0).unwrap().du + 1e-3).abs() < 1e-9);
        assert!(bowl_series_start(0.0, 2e-3, 1.0).is_err());
    }
}
