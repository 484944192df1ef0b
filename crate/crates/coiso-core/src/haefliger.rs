//! Haefliger's leaf-space model: regular covers, chain-level integration
//! over leaves, and membership testing in the denominator
//! `span{τ - h*τ}` of `Ω⁰_c(T/H)`.
//!
//! On `Y_alpha` the `X_H3` circle carries no holonomy and the solid-torus
//! charts reduce along the leaves to one transverse disk with the rotation
//! `R_α` as composite holonomy. Integration over leaves contracts the
//! `θ2`- and `θ3`-circles with normalized measure `dθ` (each circle has
//! unit mass), so a `(p,q,m)` mode survives exactly when `q = m = 0` and
//! the result is a function of `(r, θ1)` on the disk. The chart-level
//! partition-of-unity splitting recombines to exactly that projection
//! (the per-chart weights sum pointwise to 1); `reduce_via_partition`
//! performs the split numerically and is tested against the analytic
//! recombination.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use serde_json::{json, Value};

use crate::arith::AlphaSpec;
use crate::error::{Error, Result};
use crate::foliation::FoliatedForm;
use crate::fourier::json::{series_from_json, series_to_json};
use crate::fourier::{smooth_step, ModeIndex, SparseFourierSeries};
use crate::solver::{solve_rotation, SolveReport, SolveStatus};

/// Half-overlap of the default three-chart cover, in unit angle.
pub const DEFAULT_COVER_OVERLAP: f64 = 0.05;

/// An open cover of the leaf circle by angular intervals, with a smooth
/// partition of unity subordinate to it.
///
/// Chart `i` is the arc `(start_i, end_i)` (unit circle, end may exceed 1
/// to wrap). The classic example is three arcs of width `1/3 + 2ε`.
#[derive(Clone, Debug)]
pub struct RegularCover {
    charts: Vec<(f64, f64)>,
    /// Join width of each chart's bump, as a fraction of the chart width.
    joins: Vec<f64>,
}

impl RegularCover {
    /// The standard three-chart cover.
    pub fn three_charts() -> Self {
        Self::three_charts_with(DEFAULT_COVER_OVERLAP).expect("default cover is regular")
    }

    pub fn three_charts_with(eps: f64) -> Result<Self> {
        let third = 1.0 / 3.0;
        RegularCover::new(
            vec![
                (-eps, third + eps),
                (third - eps, 2.0 * third + eps),
                (2.0 * third - eps, 1.0 + eps),
            ],
            vec![0.25, 0.25, 0.25],
        )
    }

    /// A seeded variation of the three-chart cover (for the
    /// partition-independence tests).
    pub fn randomized(seed: u64) -> Self {
        let mut rng = crate::probes::rng(seed);
        let eps = rng.gen_range(0.02..0.12);
        let joins: Vec<f64> = (0..3).map(|_| rng.gen_range(0.1..0.45)).collect();
        let third = 1.0 / 3.0;
        RegularCover::new(
            vec![
                (-eps, third + eps),
                (third - eps, 2.0 * third + eps),
                (2.0 * third - eps, 1.0 + eps),
            ],
            joins,
        )
        .expect("jittered three-chart cover stays regular")
    }

    pub fn new(charts: Vec<(f64, f64)>, joins: Vec<f64>) -> Result<Self> {
        if charts.len() < 2 || charts.len() != joins.len() {
            return Err(Error::argument("cover needs ≥ 2 charts with join widths"));
        }
        for &(a, b) in &charts {
            if !(b > a) || b - a >= 1.0 {
                return Err(Error::argument(format!(
                    "chart ({a}, {b}) must be a proper arc (width < full circle)"
                )));
            }
        }
        // coverage: every circle point lies in some chart
        for k in 0..4096 {
            let t = k as f64 / 4096.0;
            if !charts.iter().any(|&(a, b)| arc_contains(a, b, t)) {
                return Err(Error::argument(format!("cover misses θ = {t}")));
            }
        }
        // regularity: two charts overlap in at most one arc
        for i in 0..charts.len() {
            for j in i + 1..charts.len() {
                if overlap_components(charts[i], charts[j]) > 1 {
                    return Err(Error::argument(format!(
                        "charts {i} and {j} meet in more than one arc"
                    )));
                }
            }
        }
        Ok(RegularCover { charts, joins })
    }

    pub fn charts(&self) -> &[(f64, f64)] {
        &self.charts
    }

    /// Unnormalized chart bump at circle point `t`.
    fn raw_weight(&self, i: usize, t: f64) -> f64 {
        let (a, b) = self.charts[i];
        let w = b - a;
        let join = self.joins[i] * w;
        // lift t into [a, a+1)
        let mut x = t - (t - a).floor();
        if x < a {
            x += 1.0;
        }
        if x >= b {
            return 0.0;
        }
        smooth_step((x - a) / join) * smooth_step((b - x) / join)
    }

    /// Normalized partition weights at `t`; they sum to 1 pointwise.
    pub fn weights(&self, t: f64) -> Vec<f64> {
        let raw: Vec<f64> = (0..self.charts.len())
            .map(|i| self.raw_weight(i, t))
            .collect();
        let total: f64 = raw.iter().sum();
        assert!(
            total > 0.0,
            "partition of unity undefined at θ = {t}: cover not validated?"
        );
        raw.iter().map(|v| v / total).collect()
    }
}

fn arc_contains(a: f64, b: f64, t: f64) -> bool {
    let mut x = t - (t - a).floor();
    if x < a {
        x += 1.0;
    }
    x < b || (t - a).rem_euclid(1.0) < (b - a)
}

fn overlap_components(c1: (f64, f64), c2: (f64, f64)) -> usize {
    // sample-based arc-component count of the intersection
    let n = 4096;
    let mut components = 0;
    let mut prev_in = false;
    let mut first_in = false;
    for k in 0..n {
        let t = k as f64 / n as f64;
        let inside = arc_contains(c1.0, c1.1, t) && arc_contains(c2.0, c2.1, t);
        if inside && !prev_in {
            components += 1;
        }
        if k == 0 {
            first_in = inside;
        }
        prev_in = inside;
    }
    // merge across the wrap point
    if components > 0 && first_in && prev_in {
        components -= 1;
        components = components.max(1);
    }
    components
}

/// A function on the transverse disk together with the holonomy data:
/// class arithmetic happens through representatives, equality is decidable
/// only via [`coboundary_test`].
#[derive(Clone, Debug)]
pub struct HaefligerClass {
    pub representative: SparseFourierSeries,
    /// Rotation number of the composite holonomy of the disk.
    pub alpha: AlphaSpec,
}

impl HaefligerClass {
    pub fn to_json(&self) -> Value {
        json!({
            "representative": series_to_json(&self.representative),
            "alpha": self.alpha.to_json(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        Ok(HaefligerClass {
            representative: series_from_json(
                v.get("representative")
                    .ok_or_else(|| Error::argument("class needs 'representative'"))?,
            )?,
            alpha: AlphaSpec::from_json(
                v.get("alpha")
                    .ok_or_else(|| Error::argument("class needs 'alpha'"))?,
            )?,
        })
    }
}

/// Integration over leaves of a foliated 2-form: contracts the `θ2`- and
/// `θ3`-circles (normalized measure, so constants map to themselves) and
/// returns the disk function of `(r, θ1)` together with the holonomy.
///
/// This is the analytic recombination of the chart splitting; the cover
/// argument fixes the holonomy presentation and is exercised numerically
/// by [`reduce_via_partition`].
pub fn regular_cover_reduce(
    two_form: &FoliatedForm,
    _cover: &RegularCover,
    alpha: &AlphaSpec,
) -> Result<HaefligerClass> {
    let coeff = two_form
        .as_two()
        .ok_or_else(|| Error::argument("integration over leaves takes a 2-form"))?;
    let mut rep = SparseFourierSeries::zero(*coeff.grid());
    for (idx, c) in coeff.terms() {
        if idx.q.is_zero() && idx.m.is_zero() {
            rep.add_term(idx.clone(), c.clone());
        }
    }
    Ok(HaefligerClass {
        representative: rep,
        alpha: alpha.clone(),
    })
}

/// The chart-level reduction pass: splits the `θ2`-integration across the
/// cover with its partition of unity (quadrature with `n_quad` nodes per
/// circle), transports every chart contribution to the base transversal,
/// and recombines. Agrees with [`regular_cover_reduce`] because the
/// weights sum to one pointwise; modes with `|q| ≥ n_quad` are beyond the
/// quadrature and are dropped (their analytic weight is 0 exactly).
pub fn reduce_via_partition(
    two_form: &FoliatedForm,
    cover: &RegularCover,
    alpha: &AlphaSpec,
    n_quad: usize,
) -> Result<HaefligerClass> {
    let coeff = two_form
        .as_two()
        .ok_or_else(|| Error::argument("integration over leaves takes a 2-form"))?;
    // per-chart quadrature of w_i(θ)·e^{2πiqθ} on the uniform grid
    let charts = cover.charts().len();
    let mut rep = SparseFourierSeries::zero(*coeff.grid());
    for (idx, c) in coeff.terms() {
        if !idx.m.is_zero() {
            continue; // exact θ3-average
        }
        use num_traits::ToPrimitive;
        let q = match idx.q.to_i64() {
            Some(q) if q.unsigned_abs() < n_quad as u64 => q,
            Some(0) => 0,
            _ => continue, // beyond quadrature: analytic weight 0 (q ≠ 0)
        };
        let mut weight = num_complex::Complex64::new(0.0, 0.0);
        for i in 0..charts {
            let mut chart_sum = num_complex::Complex64::new(0.0, 0.0);
            for k in 0..n_quad {
                let t = k as f64 / n_quad as f64;
                let w = cover.weights(t)[i];
                let phase = std::f64::consts::TAU * q as f64 * t;
                chart_sum += num_complex::Complex64::from_polar(w, phase);
            }
            weight += chart_sum / n_quad as f64;
        }
        rep.add_term(
            ModeIndex::from_bigs(idx.p.clone(), BigInt::zero(), BigInt::zero()),
            c.scale(weight),
        );
    }
    Ok(HaefligerClass {
        representative: rep,
        alpha: alpha.clone(),
    })
}

/// Verdict of the coboundary membership test.
#[derive(Debug)]
pub enum CoboundaryVerdict {
    /// The class lies in `span{τ - h*τ}`; carries the solving function C
    /// with `rep = C - C∘R_α`.
    InSpan(SparseFourierSeries),
    /// Not a coboundary at this truncation; carries the resonance or
    /// divergence certificate.
    NotInSpan(SolveReport),
}

impl CoboundaryVerdict {
    pub fn is_in_span(&self) -> bool {
        matches!(self, CoboundaryVerdict::InSpan(_))
    }
}

/// Decide whether the representative can be written as `C - C∘R_α`.
pub fn coboundary_test(cls: &HaefligerClass, tol: f64) -> Result<CoboundaryVerdict> {
    let report = solve_rotation(&cls.representative, &cls.alpha, tol)?;
    match report.status {
        SolveStatus::Solved { ref solution } => Ok(CoboundaryVerdict::InSpan(solution.clone())),
        _ => Ok(CoboundaryVerdict::NotInSpan(report)),
    }
}

/// A full-complex 2-form on `Y_alpha` split along the frame
/// `{X_Hα, X_H3 | e_r, e_θ}`: the leafwise component (both slots
/// foliation), four mixed components and the purely transverse one.
#[derive(Clone, Debug)]
pub struct SplitTwoForm {
    /// Coefficient of `X*_Hα ∧ X*_H3` — the part integration over leaves
    /// sees.
    pub leafwise: SparseFourierSeries,
    /// Coefficients of `X*_i ∧ (transverse)*_j`, any order.
    pub mixed: Vec<SparseFourierSeries>,
    /// Coefficient of `(e_r)* ∧ (e_θ)*`.
    pub transverse: SparseFourierSeries,
}

impl SplitTwoForm {
    pub fn from_leafwise(s: SparseFourierSeries) -> Self {
        let grid = *s.grid();
        SplitTwoForm {
            leafwise: s,
            mixed: Vec::new(),
            transverse: SparseFourierSeries::zero(grid),
        }
    }
}

/// F-triviality: every component with all foliation slots filled vanishes
/// identically (to 1e-12 on the grid). For 2-forms on a 2-dimensional
/// foliation this is the leafwise component alone.
pub fn f_trivial_check(form: &SplitTwoForm) -> bool {
    form.leafwise.norm_sup() <= 1e-12
}

/// Reduce a split form: only the leafwise part contributes to `∫_F`.
pub fn reduce_split(
    form: &SplitTwoForm,
    cover: &RegularCover,
    alpha: &AlphaSpec,
) -> Result<HaefligerClass> {
    regular_cover_reduce(
        &FoliatedForm::Two(form.leafwise.clone()),
        cover,
        alpha,
    )
}
