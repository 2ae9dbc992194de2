//! Explicit Runge-Kutta integration: classical RK4 with a fixed step and the
//! Dormand-Prince 5(4) pair with adaptive steps.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::closed_forms::{bowl_ode_field, bowl_series_start, BowlState};

/// Default blow-up cap for profile equations.
pub const BLOW_UP_CAP: f64 = 1e6;
/// Start radius of the bowl shooting, away from the axis singularity.
pub const BOWL_R0: f64 = 1e-3;
/// Sample spacing of the bowl trajectory.
pub const BOWL_DR: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OdeError {
    #[error("invalid step: {0}")]
    Step(String),
    #[error("invalid interval: t0 = {t0}, t1 = {t1}")]
    Interval { t0: f64, t1: f64 },
    #[error("tolerance {0:e} outside [1e-14, 1e-3]")]
    Tolerance(f64),
    #[error("initial state has dimension {got}, system expects {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("{0}")]
    Setup(String),
}

/// A first-order system `y' = f(t, y)`.
pub trait OdeSystem {
    fn dim(&self) -> usize;
    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]);
    /// Optional early termination, checked after every accepted step.
    fn should_stop(&self, _t: f64, _y: &[f64]) -> bool {
        false
    }
}

/// An [`OdeSystem`] from a closure.
pub struct FnSystem<F> {
    dim: usize,
    f: F,
}

pub fn system<F: Fn(f64, &[f64], &mut [f64])>(dim: usize, f: F) -> FnSystem<F> {
    FnSystem { dim, f }
}

impl<F: Fn(f64, &[f64], &mut [f64])> OdeSystem for FnSystem<F> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]) {
        (self.f)(t, y, dy)
    }
}

/// Adds a stop predicate to a system.
pub struct WithStop<S, P> {
    pub inner: S,
    pub pred: P,
}

impl<S: OdeSystem, P: Fn(f64, &[f64]) -> bool> OdeSystem for WithStop<S, P> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]) {
        self.inner.rhs(t, y, dy)
    }
    fn should_stop(&self, t: f64, y: &[f64]) -> bool {
        self.inner.should_stop(t, y) || (self.pred)(t, y)
    }
}

/// Stop once any component exceeds `cap` in magnitude.
pub fn with_blow_up_cap<S: OdeSystem>(inner: S, cap: f64) -> WithStop<S, impl Fn(f64, &[f64]) -> bool> {
    WithStop { inner, pred: move |_t: f64, y: &[f64]| y.iter().any(|v| v.abs() > cap) }
}

/// The time-reversed system `z'(tau) = -f(-tau, z)`, so that integrating it
/// from `-t1` to `-t0` runs the original system backwards.
pub struct Reversed<S>(pub S);

impl<S: OdeSystem> OdeSystem for Reversed<S> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]) {
        self.0.rhs(-t, y, dy);
        dy.iter_mut().for_each(|d| *d = -*d);
    }
    fn should_stop(&self, t: f64, y: &[f64]) -> bool {
        self.0.should_stop(-t, y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    SpanEnd,
    StopPredicate,
    StepUnderflow,
    /// A step produced a non-finite state; the trajectory ends at the last finite one.
    BlowUp,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub y: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub termination: Termination,
    pub accepted: usize,
    pub rejected: usize,
}

impl Trajectory {
    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trajectory holds the initial sample")
    }
}

fn check_setup<S: OdeSystem>(sys: &S, t0: f64, y0: &[f64], t1: f64) -> Result<(), OdeError> {
    if y0.len() != sys.dim() {
        return Err(OdeError::Dimension { expected: sys.dim(), got: y0.len() });
    }
    if !(t1 > t0) || !t0.is_finite() || !t1.is_finite() {
        return Err(OdeError::Interval { t0, t1 });
    }
    if y0.iter().any(|v| !v.is_finite()) {
        return Err(OdeError::Setup("initial state is not finite".into()));
    }
    Ok(())
}

fn axpy(out: &mut [f64], y: &[f64], h: f64, terms: &[(f64, &[f64])]) {
    for i in 0..y.len() {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        out[i] = y[i] + h * acc;
    }
}

pub fn integrate_rk4<S: OdeSystem>(sys: &S, t0: f64, y0: &[f64], t1: f64, h: f64) -> Result<Trajectory, OdeError> {
    check_setup(sys, t0, y0, t1)?;
    if !(h > 0.0) || !h.is_finite() {
        return Err(OdeError::Step(format!("h = {h} must be positive")));
    }
    let n = y0.len();
    let steps = ((t1 - t0) / h - 1e-9).ceil().max(1.0) as usize;
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) =
        (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let mut y = y0.to_vec();
    let mut samples = vec![Sample { t: t0, y: y.clone() }];
    let mut termination = Termination::SpanEnd;
    for i in 0..steps {
        let t = t0 + i as f64 * h;
        let step = if i + 1 == steps { t1 - t } else { h };
        sys.rhs(t, &y, &mut k1);
        axpy(&mut tmp, &y, step / 2.0, &[(1.0, &k1)]);
        sys.rhs(t + step / 2.0, &tmp, &mut k2);
        axpy(&mut tmp, &y, step / 2.0, &[(1.0, &k2)]);
        sys.rhs(t + step / 2.0, &tmp, &mut k3);
        axpy(&mut tmp, &y, step, &[(1.0, &k3)]);
        sys.rhs(t + step, &tmp, &mut k4);
        axpy(&mut tmp, &y, step / 6.0, &[(1.0, &k1), (2.0, &k2), (2.0, &k3), (1.0, &k4)]);
        if tmp.iter().any(|v| !v.is_finite()) {
            termination = Termination::BlowUp;
            break;
        }
        std::mem::swap(&mut y, &mut tmp);
        let t_new = if i + 1 == steps { t1 } else { t0 + (i + 1) as f64 * h };
        samples.push(Sample { t: t_new, y: y.clone() });
        if sys.should_stop(t_new, &y) {
            termination = Termination::StopPredicate;
            break;
        }
    }
    let accepted = samples.len() - 1;
    Ok(Trajectory { samples, termination, accepted, rejected: 0 })
}

// Dormand-Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Fifth-order weights minus embedded fourth-order weights.
const E: [f64; 7] =
    [71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0];

/// Adaptive integration with per-step error `max_i |e_i| <= tol (1 + |y_i|)`.
pub fn integrate_adaptive<S: OdeSystem>(
    sys: &S,
    t0: f64,
    y0: &[f64],
    t1: f64,
    tol: f64,
) -> Result<Trajectory, OdeError> {
    check_setup(sys, t0, y0, t1)?;
    if !(1e-14..=1e-3).contains(&tol) {
        return Err(OdeError::Tolerance(tol));
    }
    let n = y0.len();
    let span = t1 - t0;
    let min_h = 1e-14 * span;
    let mut k: Vec<Vec<f64>> = vec![vec![0.0; n]; 7];
    let mut stage = vec![0.0; n];
    let mut y = y0.to_vec();
    let mut t = t0;
    let mut h = span;
    let mut samples = vec![Sample { t, y: y.clone() }];
    let (mut accepted, mut rejected) = (0, 0);
    let termination = loop {
        if t >= t1 {
            break Termination::SpanEnd;
        }
        let last = t + h >= t1;
        if last {
            h = t1 - t;
        }
        sys.rhs(t, &y, &mut k[0]);
        for s in 1..7 {
            for i in 0..n {
                let mut acc = 0.0;
                for (j, kj) in k.iter().enumerate().take(s) {
                    acc += A[s][j] * kj[i];
                }
                stage[i] = y[i] + h * acc;
            }
            let (done, rest) = k.split_at_mut(s);
            let _ = done;
            sys.rhs(t + C[s] * h, &stage, &mut rest[0]);
        }
        // stage now holds the fifth-order solution (row 6 of A equals the weights)
        let mut err: f64 = 0.0;
        for i in 0..n {
            let mut e = 0.0;
            for (j, kj) in k.iter().enumerate() {
                e += E[j] * kj[i];
            }
            let scale = tol * (1.0 + y[i].abs().max(stage[i].abs()));
            err = err.max((h * e).abs() / scale);
        }
        if !err.is_finite() || stage.iter().any(|v| !v.is_finite()) {
            if h / 10.0 < min_h {
                break Termination::BlowUp;
            }
            h /= 10.0;
            rejected += 1;
            continue;
        }
        if err <= 1.0 {
            t = if last { t1 } else { t + h };
            y.copy_from_slice(&stage);
            samples.push(Sample { t, y: y.clone() });
            accepted += 1;
            if sys.should_stop(t, &y) {
                break Termination::StopPredicate;
            }
        } else {
            rejected += 1;
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
        if h < min_h && t < t1 {
            break Termination::StepUnderflow;
        }
    };
    Ok(Trajectory { samples, termination, accepted, rejected })
}

/// Shoots the rotational profile from the axis: series start at `r = 1e-3`,
/// then adaptive integration between uniformly spaced samples `dr = 1e-3`.
/// Sample states are `[u, u']` at `t = r`.
pub fn shoot_bowl(u0: f64, v3: f64, rmax: f64, tol: f64) -> Result<Trajectory, OdeError> {
    if !(rmax > BOWL_R0) {
        return Err(OdeError::Interval { t0: BOWL_R0, t1: rmax });
    }
    let start = bowl_series_start(u0, BOWL_R0, v3).map_err(|e| OdeError::Setup(e.to_string()))?;
    let field = system(2, move |r, y: &[f64], dy: &mut [f64]| {
        let (du, ddu) = bowl_ode_field(&BowlState { r, u: y[0], du: y[1] }, v3).unwrap_or((f64::NAN, f64::NAN));
        dy[0] = du;
        dy[1] = ddu;
    });
    let sys = with_blow_up_cap(field, BLOW_UP_CAP);
    let n = ((rmax - BOWL_R0) / BOWL_DR).round() as usize;
    let grid = |i: usize| if i == n { rmax } else { BOWL_R0 + i as f64 * BOWL_DR };
    let mut samples = vec![Sample { t: BOWL_R0, y: vec![start.u, start.du] }];
    let (mut accepted, mut rejected) = (0, 0);
    let mut termination = Termination::SpanEnd;
    for i in 0..n {
        let (a, b) = (grid(i), grid(i + 1));
        let y = samples.last().unwrap().y.clone();
        let seg = integrate_adaptive(&sys, a, &y, b, tol)?;
        accepted += seg.accepted;
        rejected += seg.rejected;
        if seg.termination != Termination::SpanEnd {
            termination = seg.termination;
            samples.push(seg.last().clone());
            break;
        }
        samples.push(Sample { t: b, y: seg.last().y.clone() });
    }
    Ok(Trajectory { samples, termination, accepted, rejected })
}

/// Pointwise defect `u'' / (1 + u'^2) + u' / r - 2 v3` of a bowl trajectory,
/// with `u''` from five-point differences of the sampled slopes. Returns
/// `(r, defect)` for every sample that has two uniform neighbours on each side.
pub fn bowl_residuals(traj: &Trajectory, v3: f64) -> Vec<(f64, f64)> {
    let s = &traj.samples;
    let mut out = Vec::new();
    for i in 2..s.len().saturating_sub(2) {
        let h = s[i + 1].t - s[i].t;
        let uniform = (s[i + 2].t - s[i - 2].t - 4.0 * h).abs() < 1e-9 * h;
        if !uniform {
            continue;
        }
        let d = |j: usize| s[j].y[1];
        let ddu = (-d(i + 2) + 8.0 * d(i + 1) - 8.0 * d(i - 1) + d(i - 2)) / (12.0 * h);
        let du = d(i);
        let r = s[i].t;
        out.push((r, ddu / (1.0 + du * du) + du / r - 2.0 * v3));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grim() -> impl OdeSystem {
        system(2, |_t, y: &[f64], dy: &mut [f64]| {
            dy[0] = y[1];
            dy[1] = 2.0 * (1.0 + y[1] * y[1]);
        })
    }

    fn grim_exact(s: f64) -> f64 {
        -0.5 * (2.0 * s).cos().ln()
    }

    #[test]
    fn rk4_exponential() {
        let sys = system(1, |_t, y: &[f64], dy: &mut [f64]| dy[0] = y[0]);
        let tr = integrate_rk4(&sys, 0.0, &[1.0], 1.0, 1e-3).unwrap();
        assert!((tr.last().y[0] - std::f64::consts::E).abs() < 1e-10);
        assert_eq!(tr.last().t, 1.0);
        assert_eq!(tr.termination, Termination::SpanEnd);
    }

    #[test]
    fn rk4_grim_reaper() {
        let tr = integrate_rk4(&grim(), 0.0, &[0.0, 0.0], 0.5, 1e-4).unwrap();
        let exact = grim_exact(0.5);
        assert!((exact - 0.3078132352).abs() < 1e-10);
        assert!((tr.last().y[0] - exact).abs() < 1e-8);
    }

    #[test]
    fn rk4_stops_before_pole() {
        let sys = with_blow_up_cap(grim(), BLOW_UP_CAP);
        let tr = integrate_rk4(&sys, 0.0, &[0.0, 0.0], 1.0, 1e-5).unwrap();
        assert_eq!(tr.termination, Termination::StopPredicate);
        // the discrete pole sits within one step of the exact one
        assert!((tr.last().t - std::f64::consts::FRAC_PI_4).abs() < 1e-5);
        assert!(tr.last().y[1].abs() > BLOW_UP_CAP);
    }

    #[test]
    fn rk4_without_cap_reports_blow_up() {
        let tr = integrate_rk4(&grim(), 0.0, &[0.0, 0.0], 1.0, 1e-3).unwrap();
        assert!(matches!(tr.termination, Termination::BlowUp | Termination::SpanEnd));
        assert!(tr.samples.iter().all(|s| s.y.iter().all(|v| v.is_finite())));
    }

    #[test]
    fn adaptive_grim_reaper_and_lorentz_profile() {
        let tr = integrate_adaptive(&grim(), 0.0, &[0.0, 0.0], 0.5, 1e-10).unwrap();
        assert!((tr.last().y[0] - grim_exact(0.5)).abs() < 1e-8);
        let lor = system(2, |_t, y: &[f64], dy: &mut [f64]| {
            dy[0] = y[1];
            dy[1] = -2.0 * (1.0 - y[1] * y[1]);
        });
        let tr = integrate_adaptive(&lor, 0.0, &[0.0, 0.0], 1.0, 1e-10).unwrap();
        let exact = -0.5 * 2f64.cosh().ln();
        assert!((exact + 0.6625013737).abs() < 1e-10);
        assert!((tr.last().y[0] - exact).abs() < 1e-8);
    }

    #[test]
    fn adaptive_constant_is_one_step() {
        let sys = system(3, |_t, _y: &[f64], dy: &mut [f64]| dy.fill(0.0));
        let tr = integrate_adaptive(&sys, 0.0, &[1.0, -2.0, 3.5], 10.0, 1e-8).unwrap();
        assert_eq!(tr.accepted, 1);
        assert_eq!(tr.last().y, vec![1.0, -2.0, 3.5]);
    }

    #[test]
    fn adaptive_rejects_bad_tolerance() {
        assert!(matches!(integrate_adaptive(&grim(), 0.0, &[0.0, 0.0], 0.5, 1e-2), Err(OdeError::Tolerance(_))));
        assert!(matches!(integrate_adaptive(&grim(), 0.0, &[0.0, 0.0], 0.5, 1e-15), Err(OdeError::Tolerance(_))));
        assert!(matches!(integrate_rk4(&grim(), 0.0, &[0.0], 0.5, 0.1), Err(OdeError::Dimension { .. })));
        assert!(matches!(integrate_rk4(&grim(), 1.0, &[0.0, 0.0], 0.5, 0.1), Err(OdeError::Interval { .. })));
    }

    #[test]
    fn adaptive_underflow_at_pole() {
        let tr = integrate_adaptive(&grim(), 0.0, &[0.0, 0.0], 1.0, 1e-8).unwrap();
        assert!(matches!(tr.termination, Termination::StepUnderflow | Termination::BlowUp));
        assert!((tr.last().t - std::f64::consts::FRAC_PI_4).abs() < 1e-6);
    }

    #[test]
    fn reversal_returns_to_start() {
        let tol = 1e-10;
        let fwd = integrate_adaptive(&grim(), 0.0, &[0.0, 0.0], 0.5, tol).unwrap();
        let back = integrate_adaptive(&Reversed(grim()), -0.5, &fwd.last().y, 0.0, tol).unwrap();
        let end = &back.last().y;
        let fwd_err = (fwd.last().y[0] - grim_exact(0.5)).abs().max(1e-10);
        assert!(end[0].abs() <= 10.0 * fwd_err && end[1].abs() <= 10.0 * fwd_err, "{end:?} {fwd_err}");
    }

    #[test]
    fn bowl_plane_and_convexity() {
        let tr = shoot_bowl(1.5, 0.0, 1.0, 1e-9).unwrap();
        assert!(tr.samples.iter().all(|s| s.y == vec![1.5, 0.0]));
        let tr = shoot_bowl(0.0, 1.0, 2.0, 1e-9).unwrap();
        assert_eq!(tr.termination, Termination::SpanEnd);
        assert_eq!(tr.last().t, 2.0);
        for w in tr.samples.windows(2) {
            assert!(w[1].y[1] > w[0].y[1] && w[1].y[0] > w[0].y[0]);
        }
        assert!(tr.samples.iter().all(|s| s.y[1] > 0.0));
    }

    #[test]
    fn bowl_near_axis_matches_paraboloid() {
        let tr = shoot_bowl(0.0, 1.0, 0.5, 1e-9).unwrap();
        for s in tr.samples.iter().filter(|s| s.t <= 0.05) {
            assert!((s.y[0] - s.t * s.t / 2.0).abs() <= 1e-5);
        }
        let first = &tr.samples[0];
        assert!((first.y[1] - first.t).abs() <= 1e-8);
    }

    #[test]
    fn bowl_residual_contract() {
        let tol = 1e-7;
        let tr = shoot_bowl(0.0, 1.0, 2.0, tol).unwrap();
        let res = bowl_residuals(&tr, 1.0);
        assert!(res.len() > 1900);
        let worst = res.iter().map(|r| r.1.abs()).fold(0.0, f64::max);
        assert!(worst <= 10.0 * tol, "{worst}");
    }
}
