//! Exact linear algebra over ℚ: scalars, vectors, gl(n) matrices, elimination and inertia.

mod matrix;
mod rational;
mod solve;

pub use matrix::{linear_combination, Matrix, Vector};
pub use rational::Rational;
pub use solve::{
    is_invertible, rank, solve_linear, span_basis, span_membership, symmetric_inertia,
    LinearSolution, RectMatrix, SpanSolver,
};

use crate::error::{Error, Result};

/// Commutator `AB − BA` of two matrices of equal dimension.
pub fn mat_bracket(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(a.commutator(b))
}
