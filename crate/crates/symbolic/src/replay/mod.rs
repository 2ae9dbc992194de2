//! Mechanical replays of the coefficient-extraction proofs. Each replay builds the
//! relevant soliton equation from atoms, performs the eliminations in the order the
//! argument takes them, and compares every displayed expression exactly.

mod theorem1;
mod theorem2;
mod theorem3;

pub use theorem1::{affine_translation_equation, replay_theorem1};
pub use theorem2::{brackets, replay_theorem2, replay_theorem2_brackets, space_translation_equation, Subcase};
pub use theorem3::{homothetical_equation, replay_theorem3, Theorem3Case};

use crate::atom::Atom;
use crate::poly::Poly;
use crate::ratfn::RatFn;
use crate::report::{Check, Compare, Report};
use crate::SymbolicError;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Parses a built-in expression; the texts are constants of this module.
pub(crate) fn poly(text: &str) -> Poly {
    text.parse().unwrap_or_else(|e| panic!("built-in polynomial {text:?}: {e}"))
}

pub(crate) fn ratfn(text: &str) -> RatFn {
    text.parse().unwrap_or_else(|e| panic!("built-in rational function {text:?}: {e}"))
}

/// Pushes the degree check and the decisive leading coefficient of `full` in `atom`,
/// verbatim and after dividing `full` by its integer content.
pub(crate) fn decisive(report: &mut Report, name: &str, expected: &Poly, full: &Poly, atom: Atom, degree: u16) {
    report.push(Check::compare(
        &format!("degree in {atom}"),
        &Poly::int(degree as i64),
        &Poly::int(full.degree_in(atom) as i64),
        Compare::Value,
    ));
    let lead = full.coefficient(atom, degree);
    report.push(Check::compare(name, expected, &lead, Compare::Value).with_note("verbatim"));
    let content = full.content();
    if content.is_zero() {
        return;
    }
    let inv = BigRational::one() / &content;
    report.push(
        Check::compare(&format!("{name} after content normalization"), expected, &lead.scale(&inv), Compare::Value)
            .with_note(format!("polynomial divided by its content {}", crate::poly::fmt_rational(&content))),
    );
}

/// Every replay, in a fixed order.
pub fn replay_all() -> Result<Vec<Report>, SymbolicError> {
    let mut out = vec![replay_theorem1()?, replay_theorem2_brackets()?];
    for s in Subcase::ALL {
        out.push(replay_theorem2(s)?);
    }
    for c in Theorem3Case::ALL {
        out.push(replay_theorem3(c)?);
    }
    Ok(out)
}
