//! Obstruction theory of the coisotropic 4-manifold `Y_alpha` at desk scale.
//!
//! The library solves, or certifies as unsolvable, the small-divisor
//! homological equations that govern coisotropic deformations of
//! `Y_alpha = H_alpha^{-1}(1/4) ∩ H_3^{-1}(1/2) ⊂ R^6`, reproducing the
//! rational / Liouville / diophantine trichotomy:
//!
//! * rational slope:    obstructed (resonant Fourier modes),
//! * Liouville slope:   obstructed (small divisors blow up),
//! * diophantine slope: unobstructed (formal Maurer-Cartan solution).
//!
//! Layout:
//!
//! * [`arith`]     — exact slope arithmetic: continued fractions, convergents,
//!   small divisors `|1 - e^{2πinα}|`, classification of α.
//! * [`fourier`]   — sparse Fourier series on `(θ1, θ2, θ3)` with radial
//!   profile coefficients and big-integer mode indices.
//! * [`linfty`]    — Koszul signs, unshuffles, operator composition and the
//!   order-by-order Maurer-Cartan obstruction recursion.
//! * [`foliation`] — the foliated complex of `Y_alpha`: `d_F`, the transverse
//!   bracket, the cutoff connection, its curvature and the higher operators.
//! * [`haefliger`] — leaf-space reduction: regular covers, integration over
//!   leaves, coboundary membership in `span{τ - h*τ}`.
//! * [`solver`]    — the homological equations `X_Hα(h) = φ` and
//!   `F = C - C∘R_α`, obstruction witnesses, and the full continuation.
//! * [`probes`]    — seeded random forms for tests and reproducible CLI runs.

pub mod arith;
pub mod error;
pub mod foliation;
pub mod fourier;
pub mod haefliger;
pub mod linfty;
pub mod probes;
pub mod solver;

pub use error::{Error, Result};
