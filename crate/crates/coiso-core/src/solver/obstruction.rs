//! The first obstruction pipeline: Kuranishi class of a closed 1-form,
//! reduced to the leaf space and tested against the holonomy coboundaries.

use super::rotation::solve_rotation;
use super::SolveReport;
use crate::arith::AlphaArith;
use crate::error::{Error, Result};
use crate::foliation::{d_f1, Connection, FoliatedForm, YAlphaFamily};
use crate::haefliger::{regular_cover_reduce, HaefligerClass, RegularCover};
use crate::linfty::GradedElement;

/// Compute `l_2(Γ,Γ)`, integrate it over the leaves, and solve the disk
/// equation: the returned report is the obstructedness verdict.
///
/// * rational slope + rational witness → `ObstructedResonance`;
/// * Liouville slope + Liouville witness → `DivergentSmallDivisor`;
/// * diophantine slope + gauge-normalized Γ → `Solved`.
pub fn first_obstruction(
    gamma: &FoliatedForm,
    arith: &AlphaArith,
    conn: &Connection,
    cover: &RegularCover,
    tol: f64,
) -> Result<(FoliatedForm, HaefligerClass, SolveReport)> {
    let closed = d_f1(gamma, arith)?.norm();
    if closed > tol.max(1e-12) {
        return Err(Error::NotClosed { residual: closed });
    }
    let family = YAlphaFamily::new(arith, conn);
    let two = family.l2(gamma, gamma)?;
    let cls = regular_cover_reduce(&two, cover, arith.spec())?;
    let report = solve_rotation(&cls.representative, arith.spec(), tol)?;
    Ok((two, cls, report))
}
