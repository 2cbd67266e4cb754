//! Planar gradient fields: critical points, degree, flow-induced
//! connection graphs, disc Conley indices, cancellation of critical points
//! and explicit proper gradient homotopies.
#![no_std]
// `!(x > 0.0)` deliberately rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod field;
pub mod flow;
pub mod homotopy;
pub mod invariants;
pub mod math;
pub mod reduction;

pub use field::{GradientField, Potential, PotentialTerm, ScalarField, Sign};
pub use math::{Rect, Sym2, Vec2};
