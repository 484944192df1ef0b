//! The foliated calculus of `Y_alpha`.
//!
//! The null foliation is spanned by `X_Hα = ∂θ1 + α·∂θ2` and `X_H3 = ∂θ3`;
//! foliated forms are written in the dual frame `{X*_Hα, X*_H3}`. On the
//! sparse Fourier representation both vector fields act diagonally:
//! `X_Hα` multiplies the `(p,q,m)` coefficient by `2πi(p + αq)` (through
//! the exact divisor arithmetic, so the resonant lattice is hit exactly)
//! and `X_H3` by `2πim`. Consequently `d_F ∘ d_F = 0` holds to rounding,
//! not merely to truncation.

mod connection;
mod family;

pub use connection::{Connection, Curvature};
pub use family::{bracket_p, l2, l_k, l_k_reduced, YAlphaFamily};

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::arith::AlphaArith;
use crate::error::{Error, Result};
use crate::fourier::{RadialGrid, SparseFourierSeries};
use crate::linfty::GradedElement;

/// Chart geometry of `Y_alpha = H_α^{-1}(1/4) ∩ H_3^{-1}(1/2)`.
///
/// The constraint `r1²/2 + α·r2²/2 = 1/4` determines either radius from the
/// other; computations run on chart 1 (coordinates `(r1, θ1)`), chart 2 is
/// a relabeling through these maps.
pub mod geometry {
    /// r1 ranges over `[0, 1/√2]`.
    pub const R1_MAX: f64 = std::f64::consts::FRAC_1_SQRT_2;

    /// r2 ranges over `[0, 1/√(2α)]`.
    pub fn r2_max(alpha: f64) -> f64 {
        1.0 / (2.0 * alpha).sqrt()
    }

    /// Chart-2 radius of the torus with chart-1 radius `r1`.
    pub fn chart2_radius(alpha: f64, r1: f64) -> f64 {
        ((0.5 - r1 * r1) / alpha).max(0.0).sqrt()
    }

    /// Chart-1 radius of the torus with chart-2 radius `r2`.
    pub fn chart1_radius(alpha: f64, r2: f64) -> f64 {
        (0.5 - alpha * r2 * r2).max(0.0).sqrt()
    }

    /// The chart-2 cutoff `τ̃(r2) = 1 - τ(r1(r2))`: the two flat connection
    /// patches trade places across the seam.
    pub fn tau_tilde(alpha: f64, r2: f64) -> f64 {
        1.0 - crate::fourier::cutoff_eval(chart1_radius(alpha, r2))
    }
}

/// A foliated form of degree 0, 1 or 2 on `Y_alpha`.
///
/// Degree 0 is a function, degree 1 is `f·X*_Hα + g·X*_H3`, degree 2 is
/// `c·X*_Hα ∧ X*_H3`. `Null` is the zero element in degrees where the
/// complex vanishes (≥ 3); it keeps the operator algebra total.
#[derive(Clone, Debug)]
pub enum FoliatedForm {
    Scalar(SparseFourierSeries),
    One {
        f: SparseFourierSeries,
        g: SparseFourierSeries,
    },
    Two(SparseFourierSeries),
    Null { degree: i64, grid: RadialGrid },
}

impl FoliatedForm {
    pub fn zero(degree: i64, grid: RadialGrid) -> Self {
        match degree {
            0 => FoliatedForm::Scalar(SparseFourierSeries::zero(grid)),
            1 => FoliatedForm::One {
                f: SparseFourierSeries::zero(grid),
                g: SparseFourierSeries::zero(grid),
            },
            2 => FoliatedForm::Two(SparseFourierSeries::zero(grid)),
            d => FoliatedForm::Null { degree: d, grid },
        }
    }

    pub fn one(f: SparseFourierSeries, g: SparseFourierSeries) -> Result<Self> {
        f.grid().compatible(g.grid())?;
        Ok(FoliatedForm::One { f, g })
    }

    pub fn grid(&self) -> &RadialGrid {
        match self {
            FoliatedForm::Scalar(h) => h.grid(),
            FoliatedForm::One { f, .. } => f.grid(),
            FoliatedForm::Two(c) => c.grid(),
            FoliatedForm::Null { grid, .. } => grid,
        }
    }

    pub fn form_degree(&self) -> i64 {
        match self {
            FoliatedForm::Scalar(_) => 0,
            FoliatedForm::One { .. } => 1,
            FoliatedForm::Two(_) => 2,
            FoliatedForm::Null { degree, .. } => *degree,
        }
    }

    pub fn as_scalar(&self) -> Option<&SparseFourierSeries> {
        match self {
            FoliatedForm::Scalar(h) => Some(h),
            _ => None,
        }
    }

    pub fn as_one(&self) -> Option<(&SparseFourierSeries, &SparseFourierSeries)> {
        match self {
            FoliatedForm::One { f, g } => Some((f, g)),
            _ => None,
        }
    }

    pub fn as_two(&self) -> Option<&SparseFourierSeries> {
        match self {
            FoliatedForm::Two(c) => Some(c),
            _ => None,
        }
    }

    /// Real-function defect: all components must be Hermitian symmetric.
    pub fn hermitian_defect(&self) -> f64 {
        match self {
            FoliatedForm::Scalar(h) => h.hermitian_defect(),
            FoliatedForm::One { f, g } => f.hermitian_defect().max(g.hermitian_defect()),
            FoliatedForm::Two(c) => c.hermitian_defect(),
            FoliatedForm::Null { .. } => 0.0,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            FoliatedForm::Scalar(h) => json!({"degree": 0, "h": series_to_json(h)}),
            FoliatedForm::One { f, g } => {
                json!({"degree": 1, "f": series_to_json(f), "g": series_to_json(g)})
            }
            FoliatedForm::Two(c) => json!({"degree": 2, "c": series_to_json(c)}),
            FoliatedForm::Null { degree, .. } => json!({"degree": degree, "null": true}),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let degree = v
            .get("degree")
            .and_then(Value::as_i64)
            .ok_or_else(|| Error::argument("form needs a 'degree' field"))?;
        match degree {
            0 => Ok(FoliatedForm::Scalar(series_from_json(field(v, "h")?)?)),
            1 => FoliatedForm::one(
                series_from_json(field(v, "f")?)?,
                series_from_json(field(v, "g")?)?,
            ),
            2 => Ok(FoliatedForm::Two(series_from_json(field(v, "c")?)?)),
            d => Err(Error::argument(format!("unsupported form degree {d}"))),
        }
    }
}

fn field<'v>(v: &'v Value, key: &str) -> Result<&'v Value> {
    v.get(key)
        .ok_or_else(|| Error::argument(format!("missing field '{key}'")))
}

impl GradedElement for FoliatedForm {
    fn degree(&self) -> i64 {
        self.form_degree()
    }

    fn add_scaled(&self, other: &Self, c: f64) -> Self {
        let cc = Complex64::new(c, 0.0);
        match (self, other) {
            (FoliatedForm::Scalar(a), FoliatedForm::Scalar(b)) => {
                FoliatedForm::Scalar(a.add(&b.scale(cc)).expect("grids match"))
            }
            (FoliatedForm::One { f: f1, g: g1 }, FoliatedForm::One { f: f2, g: g2 }) => {
                FoliatedForm::One {
                    f: f1.add(&f2.scale(cc)).expect("grids match"),
                    g: g1.add(&g2.scale(cc)).expect("grids match"),
                }
            }
            (FoliatedForm::Two(a), FoliatedForm::Two(b)) => {
                FoliatedForm::Two(a.add(&b.scale(cc)).expect("grids match"))
            }
            (FoliatedForm::Null { degree: d1, grid }, FoliatedForm::Null { degree: d2, .. }) => {
                assert_eq!(d1, d2, "added Null forms of different degrees");
                FoliatedForm::Null {
                    degree: *d1,
                    grid: *grid,
                }
            }
            (a, b) => panic!(
                "added foliated forms of degrees {} and {}",
                a.form_degree(),
                b.form_degree()
            ),
        }
    }

    fn scale(&self, c: f64) -> Self {
        let cc = Complex64::new(c, 0.0);
        match self {
            FoliatedForm::Scalar(h) => FoliatedForm::Scalar(h.scale(cc)),
            FoliatedForm::One { f, g } => FoliatedForm::One {
                f: f.scale(cc),
                g: g.scale(cc),
            },
            FoliatedForm::Two(x) => FoliatedForm::Two(x.scale(cc)),
            FoliatedForm::Null { .. } => self.clone(),
        }
    }

    fn norm(&self) -> f64 {
        match self {
            FoliatedForm::Scalar(h) => h.norm_sup(),
            FoliatedForm::One { f, g } => f.norm_sup().max(g.norm_sup()),
            FoliatedForm::Two(c) => c.norm_sup(),
            FoliatedForm::Null { .. } => 0.0,
        }
    }
}

/// `X_Hα` applied to a series: multiplies the `(p,q,m)` coefficient by
/// `2πi(p + αq)`, exactly zero on the resonant lattice.
pub fn apply_x_h_alpha(h: &SparseFourierSeries, arith: &AlphaArith) -> Result<SparseFourierSeries> {
    h.try_map_modes(|idx| arith.x1_multiplier(&idx.p, &idx.q))
}

/// `X_H3 = ∂θ3`.
pub fn apply_x_h3(h: &SparseFourierSeries) -> SparseFourierSeries {
    h.derivative(crate::fourier::Axis::Theta3)
}

/// `d_F` on functions: `h ↦ (X_Hα(h), X_H3(h))`.
pub fn d_f0(h: &SparseFourierSeries, arith: &AlphaArith) -> Result<FoliatedForm> {
    Ok(FoliatedForm::One {
        f: apply_x_h_alpha(h, arith)?,
        g: apply_x_h3(h),
    })
}

/// `d_F` on 1-forms: `f·X*_Hα + g·X*_H3 ↦ (X_Hα(g) - X_H3(f))·X*_Hα∧X*_H3`.
pub fn d_f1(form: &FoliatedForm, arith: &AlphaArith) -> Result<FoliatedForm> {
    let (f, g) = form
        .as_one()
        .ok_or_else(|| Error::argument("d_f1 needs a degree-1 form"))?;
    let coeff = apply_x_h_alpha(g, arith)?.sub(&apply_x_h3(f))?;
    Ok(FoliatedForm::Two(coeff))
}

/// `d_F` at any degree (zero above the leaf dimension).
pub fn d_f(form: &FoliatedForm, arith: &AlphaArith) -> Result<FoliatedForm> {
    match form {
        FoliatedForm::Scalar(h) => d_f0(h, arith),
        FoliatedForm::One { .. } => d_f1(form, arith),
        FoliatedForm::Two(_) => Ok(FoliatedForm::Null {
            degree: 3,
            grid: *form.grid(),
        }),
        FoliatedForm::Null { degree, grid } => Ok(FoliatedForm::Null {
            degree: degree + 1,
            grid: *grid,
        }),
    }
}

/// Replace Γ by `Γ̃ = Γ + d_F h` with first component reduced to its
/// `(0,0,·)` average: the gauge in which the zero-mode lemma applies.
///
/// Requires `d_F Γ = 0` and a slope whose homological equation is solvable
/// on the non-resonant modes; the solve is delegated to the `X_Hα`
/// homological solver.
pub fn gauge_normalize(
    gamma: &FoliatedForm,
    arith: &AlphaArith,
    tol: f64,
) -> Result<(FoliatedForm, SparseFourierSeries)> {
    let (f, g) = gamma
        .as_one()
        .ok_or_else(|| Error::argument("gauge normalization needs a degree-1 form"))?;
    let closed = d_f1(gamma, arith)?;
    let defect = closed.norm();
    if defect > tol.max(1e-12) {
        return Err(Error::NotClosed { residual: defect });
    }
    let f00 = f.average_00();
    let oscillating = f.without_00();
    if oscillating.is_empty() {
        return Ok((gamma.clone(), SparseFourierSeries::zero(*gamma.grid())));
    }
    // Solve X_Hα(h) = f00 - f = -(f - f00); then f + X_Hα(h) = f00.
    let target = oscillating.scale(Complex64::new(-1.0, 0.0));
    let h = crate::solver::solve_xh_exact(&target, arith)?;
    let f_new = f00;
    let g_new = g.add(&apply_x_h3(&h))?;
    Ok((
        FoliatedForm::One { f: f_new, g: g_new },
        h,
    ))
}

use crate::fourier::json::{series_from_json, series_to_json};
