//! Exact differential-polynomial algebra over the rationals in jet symbols,
//! and mechanical replays of the classification proofs for translating solitons
//! of translation and homothetical type.

pub mod atom;
pub mod parse;
pub mod poly;
pub mod ratfn;
pub mod replay;
pub mod report;
pub mod wronskian;

pub use atom::{Atom, Direction};
pub use poly::Poly;
pub use ratfn::{eliminate_sqrt, RatFn};
pub use report::{Check, Compare, Report, Verdict};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SymbolicError {
    #[error("derivative of {0} exceeds the stored order")]
    OrderOverflow(Atom),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("polynomial division is not exact")]
    NotExact,
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("'{0}' is not a polynomial")]
    NotPolynomial(String),
}
