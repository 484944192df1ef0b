//! The homological equation `X_Hα(h) = φ` on `Y_alpha`.

use num_complex::Complex64;
use num_traits::Zero;

use super::{CertRow, DivisorStats, SolveReport, SolveStatus, DIVERGENCE_FLOOR};
use crate::arith::{AlphaArith, AlphaSpec};
use crate::error::{Error, Result};
use crate::fourier::{decay_fit, Axis, DecayVerdict, SparseFourierSeries};

const TAU: f64 = std::f64::consts::TAU;

/// Solve `X_Hα(h) = φ` by Fourier division
/// `h_{p,q,m} = φ_{p,q,m} / (2πi(p + αq))`; the θ3-index rides along
/// untouched.
///
/// Solvability needs the full `(0,0,·)` average of φ to vanish at every
/// radial node (`X_Hα` cannot produce those modes); the `X_Hα`-kernel
/// freedom in `h` is fixed to zero.
pub fn solve_xh(phi: &SparseFourierSeries, alpha: &AlphaSpec, tol: f64) -> Result<SolveReport> {
    let arith = AlphaArith::new(alpha.clone())?;
    solve_xh_with(phi, &arith, tol)
}

pub fn solve_xh_with(
    phi: &SparseFourierSeries,
    arith: &AlphaArith,
    tol: f64,
) -> Result<SolveReport> {
    let mut stats = DivisorStats::default();
    let mut rows = Vec::new();

    let avg = phi.average_00();
    if avg.norm_sup() > tol {
        return Ok(SolveReport {
            status: SolveStatus::ObstructedZeroMode { residual: avg },
            stats,
            rows,
            decay: None,
        });
    }

    let mut resonant = Vec::new();
    let mut solution = SparseFourierSeries::zero(*phi.grid());
    for (idx, coeff) in phi.terms() {
        if idx.p.is_zero() && idx.q.is_zero() {
            continue;
        }
        let size = coeff.max_abs();
        let d = arith.divisor(&idx.p, &idx.q)?;
        if d.is_zero {
            if size > tol {
                resonant.push(idx.clone());
            }
            continue;
        }
        // 1/(2πi·v) = -i/(2π·v)
        let inv = Complex64::new(0.0, -1.0 / (TAU * d.value));
        let out = coeff.scale(inv);
        let out_abs = out.max_abs();
        stats.record(
            idx,
            TAU * d.value.abs(),
            if size > 0.0 { out_abs / size } else { 0.0 },
        );
        rows.push(CertRow {
            index: idx.clone(),
            input_abs: size,
            output_abs: out_abs,
            divisor: TAU * d.value.abs(),
        });
        solution.add_term(idx.clone(), out);
    }

    if !resonant.is_empty() {
        return Ok(SolveReport {
            status: SolveStatus::ObstructedResonance { modes: resonant },
            stats,
            rows,
            decay: None,
        });
    }

    // decay along both angular axes that the divisor involves; divergence
    // is certified only for decaying (smooth) inputs whose output fails
    let d1 = decay_fit(&solution, Axis::Theta1);
    let d2 = decay_fit(&solution, Axis::Theta2);
    let in1 = decay_fit(phi, Axis::Theta1);
    let in2 = decay_fit(phi, Axis::Theta2);
    let non_decaying = (d1.verdict == DecayVerdict::NonDecaying
        && in1.verdict != DecayVerdict::NonDecaying)
        || (d2.verdict == DecayVerdict::NonDecaying && in2.verdict != DecayVerdict::NonDecaying);
    if non_decaying {
        let mut certificate: Vec<CertRow> = rows
            .iter()
            .filter(|r| r.output_abs >= DIVERGENCE_FLOOR)
            .cloned()
            .collect();
        if certificate.is_empty() {
            let mut sorted = rows.clone();
            sorted.sort_by(|a, b| b.output_abs.total_cmp(&a.output_abs));
            certificate = sorted.into_iter().take(3).collect();
        }
        return Ok(SolveReport {
            status: SolveStatus::DivergentSmallDivisor { certificate },
            stats,
            rows,
            decay: Some(d1),
        });
    }

    Ok(SolveReport {
        status: SolveStatus::Solved { solution },
        stats,
        rows,
        decay: Some(d1),
    })
}

/// Bare mode division for internal use (gauge normalization): the input
/// must already be free of `(0,0,·)` modes; exact resonances are hard
/// errors rather than verdicts.
pub fn solve_xh_exact(
    phi: &SparseFourierSeries,
    arith: &AlphaArith,
) -> Result<SparseFourierSeries> {
    let mut solution = SparseFourierSeries::zero(*phi.grid());
    for (idx, coeff) in phi.terms() {
        if idx.p.is_zero() && idx.q.is_zero() {
            return Err(Error::argument(format!(
                "mode {idx} lies in the X_Hα kernel; remove the (0,0,·) average first"
            )));
        }
        let d = arith.divisor(&idx.p, &idx.q)?;
        if d.is_zero {
            if coeff.max_abs() > 1e-13 {
                return Err(Error::argument(format!(
                    "resonant mode {idx} carries a nonzero coefficient"
                )));
            }
            continue;
        }
        let inv = Complex64::new(0.0, -1.0 / (TAU * d.value));
        solution.add_term(idx.clone(), coeff.scale(inv));
    }
    Ok(solution)
}
