//! Wronskians of three functions of one variable.

use soliton_core::expr::{bind, Expr, ExprError};

/// Determinant of the rows (values, first derivatives, second derivatives).
pub fn wronskian_from_jets(jets: [[f64; 3]; 3]) -> f64 {
    let [[a0, a1, a2], [b0, b1, b2], [c0, c1, c2]] = jets;
    a0 * (b1 * c2 - b2 * c1) - b0 * (a1 * c2 - a2 * c1) + c0 * (a1 * b2 - a2 * b1)
}

/// Wronskian from samples, with five-point central differences of step `h`.
pub fn wronskian_numeric(fns: [&dyn Fn(f64) -> f64; 3], s: f64, h: f64) -> f64 {
    let jet = |f: &dyn Fn(f64) -> f64| {
        let (m2, m1, z, p1, p2) = (f(s - 2.0 * h), f(s - h), f(s), f(s + h), f(s + 2.0 * h));
        let d1 = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
        let d2 = (-m2 + 16.0 * m1 - 30.0 * z + 16.0 * p1 - p2) / (12.0 * h * h);
        [z, d1, d2]
    };
    wronskian_from_jets([jet(fns[0]), jet(fns[1]), jet(fns[2])])
}

/// Wronskian of three closed-form expressions in `var`, differentiated exactly.
pub fn wronskian_exprs(exprs: [&Expr; 3], var: &str, s: f64) -> Result<f64, ExprError> {
    let mut jets = [[0.0; 3]; 3];
    for (jet, e) in jets.iter_mut().zip(exprs) {
        let d1 = e.differentiate(var);
        let d2 = d1.differentiate(var);
        for (slot, d) in jet.iter_mut().zip([e, &d1, &d2]) {
            *slot = d.eval(&bind(&[(var, s)]))?;
        }
    }
    Ok(wronskian_from_jets(jets))
}

/// Closed form of the Wronskian of `{1, s^2, sign * s sqrt(m0 + m1 s^2)}`.
pub fn claim2_wronskian(m0: f64, m1: f64, s: f64, sign: f64) -> f64 {
    -sign * 2.0 * m0 * m0 / (m0 + m1 * s * s).powf(1.5)
}
