//! Coefficient-decay diagnostics.
//!
//! Smoothness of a function equals rapid decay of its Fourier coefficients:
//! `|c_n| < λ(k)/|n|^k` for every k. At finite truncation we fit
//! `log|c_n|` against `log|n|` and report the exponent, plus a verdict:
//!
//! * `NonDecaying` — the large-`|n|` tail stays above an absolute floor,
//!   the signature of small-divisor blowup;
//! * `RapidDecay`  — the local slope keeps steepening (super-polynomial);
//! * `Polynomial`  — a stable power law;
//! * `Inconclusive` — too few modes to tell.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::series::{Axis, SparseFourierSeries};

/// Tail coefficients above this absolute floor mean "does not decay".
pub const NON_DECAY_FLOOR: f64 = 1e-3;

/// Minimum steepening of local slopes that counts as super-polynomial.
const STEEPENING_MARGIN: f64 = 0.25;

/// Fitted exponents above this also count as rapid decay.
const RAPID_K: f64 = 8.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DecayVerdict {
    Inconclusive,
    RapidDecay,
    Polynomial,
    NonDecaying,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecayReport {
    /// Fitted exponent in `|c_n| ≈ λ / |n|^k`.
    pub k_hat: f64,
    pub lambda_hat: f64,
    pub verdict: DecayVerdict,
    /// Per-magnitude rows `(|n|, |c_n|, fit residual in log space)`.
    pub rows: Vec<(f64, f64, f64)>,
}

impl DecayReport {
    fn inconclusive() -> Self {
        DecayReport {
            k_hat: f64::NAN,
            lambda_hat: f64::NAN,
            verdict: DecayVerdict::Inconclusive,
            rows: Vec::new(),
        }
    }
}

/// Least-squares fit of `log|c_n|` vs `log|n|` along one angular axis.
pub fn decay_fit(series: &SparseFourierSeries, axis: Axis) -> DecayReport {
    if series.nonzero_on_axis(axis) < 5 {
        return DecayReport::inconclusive();
    }
    // Distinct magnitudes |n| >= 1 with their sup coefficient size.
    let pts: Vec<(f64, f64)> = series
        .axis_magnitudes(axis)
        .into_iter()
        .filter(|(n, c)| n.to_f64().map(|v| v >= 1.0).unwrap_or(true) && *c > 0.0)
        .map(|(n, c)| (n.to_f64().unwrap_or(f64::MAX).ln(), c))
        .collect();
    if pts.len() < 2 {
        return DecayReport::inconclusive();
    }

    let logs: Vec<(f64, f64)> = pts.iter().map(|(ln_n, c)| (*ln_n, c.ln())).collect();
    let n = logs.len() as f64;
    let sx: f64 = logs.iter().map(|p| p.0).sum();
    let sy: f64 = logs.iter().map(|p| p.1).sum();
    let sxx: f64 = logs.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = logs.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    let slope = if denom.abs() > 1e-30 {
        (n * sxy - sx * sy) / denom
    } else {
        0.0
    };
    let intercept = (sy - slope * sx) / n;

    let rows: Vec<(f64, f64, f64)> = logs
        .iter()
        .zip(&pts)
        .map(|((x, y), (_, c))| (x.exp(), *c, y - (slope * x + intercept)))
        .collect();

    // Tail floor: the coefficient at the largest tested |n| is the finite
    // proxy for "the terms do not converge to zero".
    let tail_sup = pts.last().map(|(_, c)| *c).unwrap_or(0.0);

    // Local slopes between consecutive magnitudes.
    let mut slopes = Vec::new();
    for w in logs.windows(2) {
        let dx = w[1].0 - w[0].0;
        if dx > 1e-12 {
            slopes.push((w[1].1 - w[0].1) / dx);
        }
    }
    let steepening = match (slopes.first(), slopes.last()) {
        (Some(a), Some(b)) => a - b, // positive when the tail falls faster
        _ => 0.0,
    };

    let k_hat = -slope;
    let verdict = if tail_sup >= NON_DECAY_FLOOR {
        DecayVerdict::NonDecaying
    } else if steepening >= STEEPENING_MARGIN || k_hat >= RAPID_K {
        DecayVerdict::RapidDecay
    } else {
        DecayVerdict::Polynomial
    };

    DecayReport {
        k_hat,
        lambda_hat: intercept.exp(),
        verdict,
        rows,
    }
}
