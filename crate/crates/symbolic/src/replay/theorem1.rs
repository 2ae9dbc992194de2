use super::{poly, ratfn};
use crate::atom::Atom;
use crate::poly::Poly;
use crate::ratfn::RatFn;
use crate::report::{Check, Compare, Report};
use crate::SymbolicError;

/// `(1+g1^2) f2 + (1+c^2+f1^2) g2 - 2(-v1(f1+c g1) - v2 g1 + v3)(1+g1^2+(f1+c g1)^2)`,
/// the soliton equation of `z = f(x) + g(y)` over the chart `(x, y - cx)`.
pub fn affine_translation_equation() -> Poly {
    poly("(1+g1^2)*f2+(1+c^2+f1^2)*g2-2*(-v1*(f1+c*g1)-v2*g1+v3)*(1+g1^2+(f1+c*g1)^2)")
}

pub fn replay_theorem1() -> Result<Report, SymbolicError> {
    let mut r = Report::new("Theorem 1: affine translation solitons");
    let divisor = ratfn("(1+g1^2)*(1+c^2+f1^2)");
    let lhs = (RatFn::from(poly("(1+g1^2)*f2+(1+c^2+f1^2)*g2")) / divisor.clone())?;
    let rhs = (RatFn::from(poly("2*(-v1*(f1+c*g1)-v2*g1+v3)*(1+g1^2+(f1+c*g1)^2)")) / divisor)?;

    let separated = lhs.derive_x()?.derive_y()?;
    r.push(Check::compare("d_y d_x of the separated side", &Poly::zero(), &separated.to_poly()?, Compare::Value));

    let mixed = rhs.derive_x()?.derive_y()?;
    let clear = ratfn("(1+g1^2)^2*(1+c^2+f1^2)^2/(f2*g2)");
    let numerator = (&mixed * &clear).to_poly()?;
    let p = numerator.collect(Atom::F1);
    r.push(Check::compare("degree in f1", &Poly::int(4), &Poly::int(p.len() as i64 - 1), Compare::Value));
    let note = "common factor of the cleared numerator";

    r.push(Check::compare("P_4", &poly("-v1*g1"), &p[4], Compare::Value).with_note(note));
    r.push(Check::compare("P_3", &Poly::zero(), &p[3], Compare::Value));
    let v1_zero = |q: &Poly| q.substitute_poly(Atom::V1, &Poly::zero());
    r.push(Check::compare("P_2", &poly("c*(-v3*g1^2-2*v2*g1+v3)"), &v1_zero(&p[2]), Compare::Value).with_note(note));
    let c_zero = |q: &Poly| v1_zero(q).substitute_poly(Atom::C, &Poly::zero());
    r.push(Check::compare("P_1", &poly("-g1*(v2*g1^3+3*v2*g1-2*v3)"), &c_zero(&p[1]), Compare::Value).with_note(note));
    for (n, pn) in p.iter().enumerate().filter(|(n, _)| *n != 1) {
        r.push(Check::compare(&format!("P_{n} at c = 0, v1 = 0"), &Poly::zero(), &c_zero(pn), Compare::Value));
    }
    Ok(r)
}
