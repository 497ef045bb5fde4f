//! Exact scalars and dense exact linear algebra over ℤ, ℚ and 𝔽_p.
//!
//! Integer linear algebra (kernels, integral solutions, torsion invariants) goes through the
//! Smith normal form; canonical reduction modulo a lattice uses the Hermite normal form.

mod matrix;
mod scalar;
mod smith;

pub use matrix::{integer_kernel, kernel_basis, rref, solve_linear, ExactMatrix};
pub use scalar::{fmt_q, height, mod_inverse, one, q, qf, zero, BaseRing, Scalar, Q};
pub use smith::{quotient_invariants, smith_normal_form, Lattice, SmithForm};
pub(crate) use smith::IntSystem;
