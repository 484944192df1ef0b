//! Rational / diophantine / Liouville-like classification of the slope.
//!
//! For each convergent we measure the approximation exponent
//! `e_n = -log|α - p_n/q_n| / log q_n`. Badly approximable numbers
//! (quadratics) settle near 2; a Liouville number's exponents grow without
//! bound. The decision rule compares the measured exponents against a
//! threshold `k_max` (default 10): quadratics sit at 2, the factorial
//! witness leaves 10 behind immediately, so the threshold separates them
//! decisively at small depth.
//!
//! For the `Decimal` variant this is explicitly a finite-precision
//! heuristic, and the report says so: Liouville-ness is undecidable from
//! finitely many digits.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde_json::{json, Value};

use super::cf::convergents;
use super::AlphaSpec;
use crate::error::{Error, Result};
use crate::fourier::ratio_ln;

pub const DEFAULT_K_MAX: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassTag {
    Rational,
    Diophantine,
    LiouvilleLike,
}

impl std::fmt::Display for ClassTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ClassTag::Rational => write!(f, "Rational"),
            ClassTag::Diophantine => write!(f, "Diophantine"),
            ClassTag::LiouvilleLike => write!(f, "LiouvilleLike"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub tag: ClassTag,
    /// Estimated diophantine exponent (present iff tag is Diophantine).
    pub k_est: Option<f64>,
    /// Rows `(q_n, measured exponent e_n)`.
    pub evidence: Vec<(BigInt, f64)>,
    /// True when the verdict rests on finitely many digits (Decimal input).
    pub finite_precision_heuristic: bool,
}

impl Classification {
    pub fn to_json(&self) -> Value {
        json!({
            "tag": self.tag.to_string(),
            "k_est": self.k_est,
            "evidence": self.evidence.iter().map(|(q, e)| {
                json!({"q": super::big_to_number(q), "exponent": e})
            }).collect::<Vec<_>>(),
            "finite_precision_heuristic": self.finite_precision_heuristic,
        })
    }
}

/// Classify α from `depth` convergents with Liouville threshold `k_max`.
pub fn classify(alpha: &AlphaSpec, depth: usize, k_max: f64) -> Result<Classification> {
    if depth < 3 {
        return Err(Error::argument("classification needs depth ≥ 3"));
    }
    match alpha {
        AlphaSpec::Rational { .. } => Ok(Classification {
            tag: ClassTag::Rational,
            k_est: None,
            evidence: Vec::new(),
            finite_precision_heuristic: false,
        }),
        AlphaSpec::Liouville { base, .. } => {
            // Exact structure: |α - S_n| < 2·base^{-(n+1)!} with q_n =
            // base^{n!}, so e_n ≈ (n+1)!/n! = n+1, unbounded. No finite
            // fit is needed (or feasible: e_n > 10 first happens at
            // q_n = base^{10!}).
            let ln_b = f64::from(*base).ln();
            let mut evidence = Vec::new();
            let mut fact = 1u64;
            for n in 1..=depth.min(8) as u64 {
                fact *= n;
                let next_fact = fact * (n + 1);
                let e = (next_fact as f64 * ln_b - 2f64.ln()) / (fact as f64 * ln_b);
                evidence.push((BigInt::from(*base).pow(fact as u32), e));
            }
            Ok(Classification {
                tag: ClassTag::LiouvilleLike,
                k_est: None,
                evidence,
                finite_precision_heuristic: false,
            })
        }
        _ => classify_by_fit(alpha, depth, k_max),
    }
}

fn classify_by_fit(alpha: &AlphaSpec, depth: usize, k_max: f64) -> Result<Classification> {
    let convs = convergents(alpha, depth)?;
    // enough digits that |α - p/q| ≈ 1/q² is resolved for the deepest q
    let last_q = &convs.last().expect("depth ≥ 3").q;
    let digits = 2 * super::divisor::decimal_digits(last_q) + 30;
    let ap = alpha.approx(digits)?;

    let mut evidence: Vec<(BigInt, f64)> = Vec::new();
    for c in &convs {
        if c.q < BigInt::from(2) {
            continue;
        }
        let x = BigRational::new(c.p.clone(), c.q.clone());
        let diff = (&ap.value - &x).abs();
        if diff <= ap.err.clone() + ap.err.clone() {
            // approximant cannot resolve this row; stop here
            break;
        }
        let e = -ratio_ln(&diff) / ratio_ln(&BigRational::from(c.q.clone()));
        evidence.push((c.q.clone(), e));
    }
    if evidence.len() < 2 {
        return Err(Error::precision(
            digits,
            "not enough resolvable convergents to classify",
        ));
    }

    let overall_max = evidence.iter().map(|(_, e)| *e).fold(f64::MIN, f64::max);
    if overall_max > k_max {
        return Ok(Classification {
            tag: ClassTag::LiouvilleLike,
            k_est: None,
            evidence,
            finite_precision_heuristic: matches!(alpha, AlphaSpec::Decimal { .. }),
        });
    }
    // Small denominators produce transient exponents (q=2 rows of a
    // quadratic measure near 2.5-3); estimate from the tail half.
    let tail_start = evidence.len() / 2;
    let k_est = evidence[tail_start..]
        .iter()
        .map(|(_, e)| *e)
        .fold(f64::MIN, f64::max)
        .max(2.0);
    Ok(Classification {
        tag: ClassTag::Diophantine,
        k_est: Some(k_est),
        evidence,
        finite_precision_heuristic: matches!(alpha, AlphaSpec::Decimal { .. }),
    })
}
