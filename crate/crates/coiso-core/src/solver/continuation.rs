//! The full Maurer-Cartan continuation: extend an infinitesimal
//! deformation order by order, or report the failing order.

use num_complex::Complex64;

use super::rotation::solve_rotation;
use super::xh::solve_xh_with;
use super::{SolveReport, SolveStatus};
use crate::arith::{classify, AlphaArith, ClassTag, DEFAULT_K_MAX};
use crate::error::{Error, Result};
use crate::foliation::{d_f1, gauge_normalize, Connection, FoliatedForm, YAlphaFamily};
use crate::fourier::SparseFourierSeries;
use crate::haefliger::{regular_cover_reduce, RegularCover};
use crate::linfty::{obstruction_rhs, FormalSolution, GradedElement};

/// Where and how a continuation died.
#[derive(Debug)]
pub struct OrderFailure {
    pub order: usize,
    pub report: SolveReport,
}

/// Result of [`mc_continue`].
#[derive(Debug)]
pub enum McOutcome {
    /// All orders up to K solved. Carries the coefficients (Γ_1 is the
    /// gauge-normalized input), the per-order residuals of the deformation
    /// equation, and the gauge function used on Γ_1.
    Solved {
        solution: FormalSolution<FoliatedForm>,
        residuals: Vec<(usize, f64)>,
        gauge: SparseFourierSeries,
    },
    Obstructed(OrderFailure),
}

impl McOutcome {
    pub fn is_solved(&self) -> bool {
        matches!(self, McOutcome::Solved { .. })
    }
}

/// Drive the deformation equation `Σ (1/k!) l_k(Γ_t,...,Γ_t) = 0` through
/// orders `t^2 .. t^K`.
///
/// For a diophantine slope the input is first gauge-normalized so its
/// `X*_Hα`-component is the `(0,0)`-average; every later coefficient has a
/// vanishing `X*_Hα`-component, so all brackets keep zero average and the
/// `X_Hα` division succeeds. At each order three gates run in sequence:
/// the zero-average condition, the leaf-space coboundary test of the
/// reduced right side, and the upstairs solve. The first failing gate
/// reports the obstruction.
pub fn mc_continue(
    gamma1: &FoliatedForm,
    arith: &AlphaArith,
    conn: &Connection,
    order_cap: usize,
    tol: f64,
) -> Result<McOutcome> {
    if order_cap < 2 {
        return Err(Error::argument("continuation needs K ≥ 2"));
    }
    let closed = d_f1(gamma1, arith)?.norm();
    if closed > tol.max(1e-12) {
        return Err(Error::NotClosed { residual: closed });
    }

    let classification = classify(arith.spec(), 12, DEFAULT_K_MAX)?;
    let (gamma1, gauge) = if classification.tag == ClassTag::Diophantine {
        gauge_normalize(gamma1, arith, tol)?
    } else {
        (
            gamma1.clone(),
            SparseFourierSeries::zero(*gamma1.grid()),
        )
    };

    let family = YAlphaFamily::new(arith, conn);
    let cover = RegularCover::three_charts();
    let mut solution = FormalSolution::new(vec![gamma1]);

    for order in 2..=order_cap {
        let rhs = obstruction_rhs(&family, &solution, order)?;
        let rhs_coeff = rhs
            .as_two()
            .ok_or_else(|| Error::argument("order right side must be a 2-form"))?;

        // gate 1: the (0,0,·) average must vanish at every radial node
        let avg = rhs_coeff.average_00();
        if avg.norm_sup() > tol {
            return Ok(McOutcome::Obstructed(OrderFailure {
                order,
                report: SolveReport {
                    status: SolveStatus::ObstructedZeroMode { residual: avg },
                    stats: Default::default(),
                    rows: Vec::new(),
                    decay: None,
                },
            }));
        }

        // gate 2: the reduced class must be a holonomy coboundary
        let cls = regular_cover_reduce(&rhs, &cover, arith.spec())?;
        let disk_report = solve_rotation(&cls.representative, arith.spec(), tol)?;
        if !disk_report.is_solved() {
            return Ok(McOutcome::Obstructed(OrderFailure {
                order,
                report: disk_report,
            }));
        }

        // gate 3: solve d_F Γ_order = -RHS upstairs, with Γ_order = g·X*_H3
        let phi = rhs_coeff.scale(Complex64::new(-1.0, 0.0));
        let up_report = solve_xh_with(&phi, arith, tol)?;
        match up_report.status {
            SolveStatus::Solved { solution: g } => {
                solution.push(FoliatedForm::One {
                    f: SparseFourierSeries::zero(*g.grid()),
                    g,
                });
            }
            _ => {
                return Ok(McOutcome::Obstructed(OrderFailure {
                    order,
                    report: up_report,
                }));
            }
        }
    }

    // residual table: substitute the formal solution back order by order
    let mut residuals = Vec::new();
    for order in 2..=order_cap {
        residuals.push((order, order_residual(&family, &solution, order)?));
    }

    Ok(McOutcome::Solved {
        solution,
        residuals,
        gauge,
    })
}

/// Residual of the order-`n` deformation equation
/// `l_1(Γ_n) + Σ_{k≥2}(1/k!)Σ_{i_1+..+i_k=n} l_k(Γ_{i_1},..,Γ_{i_k})`.
pub fn order_residual(
    family: &YAlphaFamily<'_>,
    solution: &FormalSolution<FoliatedForm>,
    order: usize,
) -> Result<f64> {
    if order < 2 || order > solution.order() {
        return Err(Error::argument(format!(
            "residual order {order} outside 2..={}",
            solution.order()
        )));
    }
    let rhs = obstruction_rhs(family, solution, order)?;
    let lead = family.l1(solution.gamma(order))?;
    Ok(lead.add_scaled(&rhs, 1.0).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{liouville_constant, AlphaSpec};
    use crate::fourier::RadialGrid;
    use crate::solver::{witness_liouville, witness_rational};

    fn grid() -> RadialGrid {
        RadialGrid::DEFAULT
    }

    #[test]
    fn zero_input_gives_zero_solution() {
        let arith = AlphaArith::new(AlphaSpec::quadratic(-1, 5, 2).unwrap()).unwrap();
        let conn = Connection::cutoff(grid());
        let zero = FoliatedForm::zero(1, grid());
        match mc_continue(&zero, &arith, &conn, 4, 1e-10).unwrap() {
            McOutcome::Solved {
                solution,
                residuals,
                ..
            } => {
                assert_eq!(solution.order(), 4);
                for g in solution.coefficients() {
                    assert_eq!(g.norm(), 0.0);
                }
                for (_, r) in residuals {
                    assert_eq!(r, 0.0);
                }
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn diophantine_random_closed_continues_to_order_four() {
        let arith = AlphaArith::new(AlphaSpec::quadratic(-1, 5, 2).unwrap()).unwrap();
        let conn = Connection::cutoff(grid());
        for seed in 0..3u64 {
            let gamma = crate::probes::random_closed_one_form(
                &mut crate::probes::rng(100 + seed),
                &grid(),
                &arith,
                24,
            )
            .unwrap();
            match mc_continue(&gamma, &arith, &conn, 4, 1e-9).unwrap() {
                McOutcome::Solved { residuals, .. } => {
                    for (order, r) in residuals {
                        assert!(r <= 1e-8, "seed {seed} order {order}: residual {r}");
                    }
                }
                McOutcome::Obstructed(f) => panic!(
                    "seed {seed} obstructed at order {}: {}",
                    f.order,
                    f.report.status.name()
                ),
            }
        }
    }

    #[test]
    fn rational_witness_fails_at_order_two_with_resonance() {
        let arith = AlphaArith::new(AlphaSpec::rational(2, 3).unwrap()).unwrap();
        let conn = Connection::flat(grid());
        let w = witness_rational(2, 3, grid()).unwrap();
        match mc_continue(&w.gamma, &arith, &conn, 4, 1e-10).unwrap() {
            McOutcome::Obstructed(f) => {
                assert_eq!(f.order, 2);
                assert!(matches!(
                    f.report.status,
                    SolveStatus::ObstructedResonance { .. }
                ));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn liouville_witness_fails_at_order_two_with_divergence() {
        let alpha = liouville_constant(10, 4).unwrap();
        let arith = AlphaArith::new(alpha.clone()).unwrap();
        let conn = Connection::flat(grid());
        let w = witness_liouville(&alpha, 3, grid()).unwrap();
        match mc_continue(&w.gamma, &arith, &conn, 4, 1e-10).unwrap() {
            McOutcome::Obstructed(f) => {
                assert_eq!(f.order, 2);
                assert!(matches!(
                    f.report.status,
                    SolveStatus::DivergentSmallDivisor { .. }
                ));
            }
            other => panic!("{other:?}"),
        }
    }
}
