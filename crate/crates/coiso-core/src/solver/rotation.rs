//! The circle homological equation `F = C - C∘R_α` on the transverse disk.

use num_traits::Zero;

use super::{CertRow, DivisorStats, SolveReport, SolveStatus, DIVERGENCE_FLOOR};
use crate::arith::{rotation_divisor, AlphaSpec};
use crate::error::{Error, Result};
use crate::fourier::{decay_fit, Axis, DecayVerdict, SparseFourierSeries};

/// Solve `F(r,θ) = C(r,θ) - C(r,θ+α)` by Fourier division
/// `C_n = F_n / (1 - e^{2πinα})`.
///
/// Outcomes, in order of precedence:
/// * a nonzero mean `F_0(r)` obstructs for any α (`ObstructedZeroMode`);
/// * exactly-zero divisors with coefficients above `tol` obstruct
///   (`ObstructedResonance`, rational α);
/// * if the divided series fails the decay check the small divisors have
///   won (`DivergentSmallDivisor`);
/// * otherwise `Solved` with the solution fixed by `C_0 := 0`.
pub fn solve_rotation(
    f: &SparseFourierSeries,
    alpha: &AlphaSpec,
    tol: f64,
) -> Result<SolveReport> {
    for (idx, _) in f.terms() {
        if !idx.q.is_zero() || !idx.m.is_zero() {
            return Err(Error::argument(format!(
                "rotation equation lives on the disk: offending mode {idx}"
            )));
        }
    }

    let mut stats = DivisorStats::default();
    let mut rows = Vec::new();

    let mean = f.average_00();
    if mean.norm_sup() > tol {
        return Ok(SolveReport {
            status: SolveStatus::ObstructedZeroMode { residual: mean },
            stats,
            rows,
            decay: None,
        });
    }

    let mut resonant = Vec::new();
    let mut solution = SparseFourierSeries::zero(*f.grid());
    for (idx, coeff) in f.terms() {
        if idx.p.is_zero() {
            continue; // numerically-zero mean already accepted
        }
        let size = coeff.max_abs();
        let rd = rotation_divisor(alpha, &idx.p)?;
        if rd.is_zero {
            if size > tol {
                resonant.push(idx.clone());
            }
            continue;
        }
        let out = coeff.scale(rd.inverse);
        let out_abs = out.max_abs();
        stats.record(idx, rd.modulus, if size > 0.0 { out_abs / size } else { 0.0 });
        rows.push(CertRow {
            index: idx.clone(),
            input_abs: size,
            output_abs: out_abs,
            divisor: rd.modulus,
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

    // Small-divisor divergence is certified only in the situation the
    // theory is about: a decaying (smooth) input whose divided output does
    // not decay. A non-decaying input is merely a rough finite series; its
    // division succeeds mode-by-mode and nothing is being certified.
    let input_decay = decay_fit(f, Axis::Theta1);
    let decay = decay_fit(&solution, Axis::Theta1);
    if decay.verdict == DecayVerdict::NonDecaying
        && input_decay.verdict != DecayVerdict::NonDecaying
    {
        let mut certificate: Vec<CertRow> = rows
            .iter()
            .filter(|r| r.output_abs >= DIVERGENCE_FLOOR)
            .cloned()
            .collect();
        if certificate.is_empty() {
            // fall back to the largest divided modes
            let mut sorted = rows.clone();
            sorted.sort_by(|a, b| b.output_abs.total_cmp(&a.output_abs));
            certificate = sorted.into_iter().take(3).collect();
        }
        return Ok(SolveReport {
            status: SolveStatus::DivergentSmallDivisor { certificate },
            stats,
            rows,
            decay: Some(decay),
        });
    }

    Ok(SolveReport {
        status: SolveStatus::Solved { solution },
        stats,
        rows,
        decay: Some(decay),
    })
}
