//! The analytic core: the homological equations `X_Hα(h) = φ` (on
//! `Y_alpha`) and `F = C - C∘R_α` (on the transverse disk), solved by
//! Fourier division; the obstruction witnesses of the rational and
//! Liouville cases; and the order-by-order Maurer-Cartan continuation.
//!
//! Divergence is certified, not proven: a `DivergentSmallDivisor` verdict
//! carries explicit modes whose divided amplitudes do not decay (for the
//! Liouville witness they sit at the convergent denominators with
//! `|G_{q_n}| ≥ 1/(2π)`); the non-existence statement behind it is the
//! small-divisor phenomenon itself.

mod continuation;
mod obstruction;
mod rotation;
mod witness;
mod xh;

pub use continuation::{mc_continue, McOutcome, OrderFailure};
pub use obstruction::first_obstruction;
pub use rotation::solve_rotation;
pub use witness::{witness_liouville, witness_rational, Witness, WitnessTag};
pub use xh::{solve_xh, solve_xh_exact};

use serde_json::{json, Value};

use crate::fourier::json::{big_to_number, series_to_json};
use crate::fourier::{DecayReport, ModeIndex, SparseFourierSeries};

/// Per-mode certificate row: input size, output size, divisor modulus.
#[derive(Clone, Debug)]
pub struct CertRow {
    pub index: ModeIndex,
    pub input_abs: f64,
    pub output_abs: f64,
    pub divisor: f64,
}

/// Divisor statistics across a solve.
#[derive(Clone, Debug, Default)]
pub struct DivisorStats {
    pub min_divisor: Option<f64>,
    pub min_divisor_mode: Option<ModeIndex>,
    pub max_amplification: f64,
    pub modes: usize,
}

impl DivisorStats {
    fn record(&mut self, idx: &ModeIndex, divisor: f64, amplification: f64) {
        self.modes += 1;
        if self.min_divisor.map(|d| divisor < d).unwrap_or(true) {
            self.min_divisor = Some(divisor);
            self.min_divisor_mode = Some(idx.clone());
        }
        self.max_amplification = self.max_amplification.max(amplification);
    }
}

/// Outcome of a homological solve.
#[derive(Clone, Debug)]
pub enum SolveStatus {
    Solved {
        solution: SparseFourierSeries,
    },
    /// The `(0,0)`-average does not vanish: unsolvable for any divisor.
    ObstructedZeroMode {
        residual: SparseFourierSeries,
    },
    /// Exactly-zero divisors carry nonzero coefficients (rational slope).
    ObstructedResonance {
        modes: Vec<ModeIndex>,
    },
    /// Division succeeded mode-by-mode but the output does not decay.
    DivergentSmallDivisor {
        certificate: Vec<CertRow>,
    },
}

impl SolveStatus {
    pub fn name(&self) -> &'static str {
        match self {
            SolveStatus::Solved { .. } => "Solved",
            SolveStatus::ObstructedZeroMode { .. } => "ObstructedZeroMode",
            SolveStatus::ObstructedResonance { .. } => "ObstructedResonance",
            SolveStatus::DivergentSmallDivisor { .. } => "DivergentSmallDivisor",
        }
    }
}

/// Full solve report: status, divisor statistics, per-mode rows and the
/// decay diagnosis of the divided output.
#[derive(Clone, Debug)]
pub struct SolveReport {
    pub status: SolveStatus,
    pub stats: DivisorStats,
    pub rows: Vec<CertRow>,
    pub decay: Option<DecayReport>,
}

impl SolveReport {
    pub fn is_solved(&self) -> bool {
        matches!(self.status, SolveStatus::Solved { .. })
    }

    pub fn solution(&self) -> Option<&SparseFourierSeries> {
        match &self.status {
            SolveStatus::Solved { solution } => Some(solution),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        let status = match &self.status {
            SolveStatus::Solved { solution } => json!({
                "tag": "Solved",
                "solution": series_to_json(solution),
            }),
            SolveStatus::ObstructedZeroMode { residual } => json!({
                "tag": "ObstructedZeroMode",
                "residual": series_to_json(residual),
            }),
            SolveStatus::ObstructedResonance { modes } => json!({
                "tag": "ObstructedResonance",
                "modes": modes.iter().map(mode_to_json).collect::<Vec<_>>(),
            }),
            SolveStatus::DivergentSmallDivisor { certificate } => json!({
                "tag": "DivergentSmallDivisor",
                "certificate": certificate.iter().map(row_to_json).collect::<Vec<_>>(),
            }),
        };
        json!({
            "status": status,
            "stats": {
                "min_divisor": self.stats.min_divisor,
                "min_divisor_mode": self.stats.min_divisor_mode.as_ref().map(mode_to_json),
                "max_amplification": self.stats.max_amplification,
                "modes": self.stats.modes,
            },
            "rows": self.rows.iter().map(row_to_json).collect::<Vec<_>>(),
            "decay": self.decay.as_ref().map(|d| serde_json::to_value(d).unwrap()),
        })
    }

    /// CSV rows `(index, |F_n|, |G_n|, divisor)` for plotting.
    pub fn rows_to_csv(&self) -> String {
        let mut out = String::from("index_p,index_q,index_m,input_abs,output_abs,divisor\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{:e},{:e},{:e}\n",
                r.index.p, r.index.q, r.index.m, r.input_abs, r.output_abs, r.divisor
            ));
        }
        out
    }
}

fn mode_to_json(idx: &ModeIndex) -> Value {
    Value::Array(vec![
        big_to_number(&idx.p),
        big_to_number(&idx.q),
        big_to_number(&idx.m),
    ])
}

fn row_to_json(r: &CertRow) -> Value {
    json!({
        "index": mode_to_json(&r.index),
        "input_abs": r.input_abs,
        "output_abs": r.output_abs,
        "divisor": r.divisor,
    })
}

/// The threshold certified by divergent verdicts: at least one divided
/// mode has `|G| ≥ 1/(2π) - 1e-6` in every witness pipeline.
pub const DIVERGENCE_FLOOR: f64 = 1.0 / std::f64::consts::TAU - 1e-6;
