//! Numerical core for translating solitons of the mean curvature flow.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod closed_forms;
pub mod expr;
pub mod geometry;
pub mod ode;
pub mod probe;
