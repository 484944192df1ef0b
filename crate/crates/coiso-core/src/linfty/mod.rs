//! Graded-algebra combinatorics and the Maurer-Cartan obstruction
//! recursion, parameterized over any concrete operator family.
//!
//! Elements are abstract: the recursion only ever adds, scales, measures
//! and asks for degrees, so the same code drives the `Y_alpha` instance and
//! the toy algebras in the tests. Degrees are the unshifted form degrees
//! (deformation unknowns sit in degree 1, i.e. shifted degree 0).

mod recursion;
mod sign;

pub use recursion::{
    check_coherence, compose, obstruction_rhs, FormalSolution, Operator, OperatorFamily,
};
pub use sign::{antisymmetric_koszul_sign, koszul_sign, unshuffles, DegreeVector, Permutation};

/// Interface the recursion needs from concrete graded elements.
pub trait GradedElement: Clone {
    fn degree(&self) -> i64;
    /// `self + c·other`. Panics if degrees are incompatible; mixing degrees
    /// is an operator bug, not a data condition.
    fn add_scaled(&self, other: &Self, c: f64) -> Self;
    fn scale(&self, c: f64) -> Self;
    /// Sup-style magnitude used for residuals.
    fn norm(&self) -> f64;
}
