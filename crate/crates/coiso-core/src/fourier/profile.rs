//! Radial profiles: nodal samples plus optional exact closed forms.
//!
//! The two distinguished profiles are the compactly supported bump `ρ(r)`
//! used by the obstruction witnesses (zero near both poles, identically `r`
//! on a middle band) and the monotone cutoff `τ(r)` that interpolates the
//! two flat solid-torus connections across an ε-band around `r = 1/(2√2)`.
//! Both are built from `exp(-1/x)` joins, so they are genuinely smooth and
//! their derivatives have closed forms.

use super::grid::RadialGrid;
use crate::error::{Error, Result};

/// Bump support and plateau: ρ ≡ 0 outside `[BUMP_INNER, BUMP_OUTER]`,
/// ρ(r) = r on `[BUMP_PLATEAU.0, BUMP_PLATEAU.1]`.
pub const BUMP_INNER: f64 = 0.10;
pub const BUMP_OUTER: f64 = 0.60;
pub const BUMP_PLATEAU: (f64, f64) = (0.25, 0.45);

/// Cutoff transition: τ ≡ 0 below `CUTOFF_CENTER - CUTOFF_EPSILON`,
/// τ ≡ 1 above `CUTOFF_CENTER + CUTOFF_EPSILON`.
pub const CUTOFF_CENTER: f64 = 0.353_553_390_593_273_8; // 1/(2√2)
pub const CUTOFF_EPSILON: f64 = 0.05;

/// `exp(-1/x)` for x > 0, zero otherwise. The basic C^∞ join ingredient.
fn sigma(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp()
    } else {
        0.0
    }
}

fn sigma_prime(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp() / (x * x)
    } else {
        0.0
    }
}

/// Smooth step: 0 for x ≤ 0, 1 for x ≥ 1, strictly increasing between.
pub fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let a = sigma(x);
        let b = sigma(1.0 - x);
        a / (a + b)
    }
}

pub fn smooth_step_prime(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        0.0
    } else {
        let a = sigma(x);
        let b = sigma(1.0 - x);
        let ap = sigma_prime(x);
        let bp = sigma_prime(1.0 - x);
        (ap * b + a * bp) / ((a + b) * (a + b))
    }
}

pub fn bump_eval(r: f64) -> f64 {
    let w = BUMP_PLATEAU.0 - BUMP_INNER; // join width on both sides
    let s1 = smooth_step((r - BUMP_INNER) / w);
    let s2 = smooth_step((BUMP_OUTER - r) / (BUMP_OUTER - BUMP_PLATEAU.1));
    r * s1 * s2
}

pub fn bump_deriv(r: f64) -> f64 {
    let w1 = BUMP_PLATEAU.0 - BUMP_INNER;
    let w2 = BUMP_OUTER - BUMP_PLATEAU.1;
    let x1 = (r - BUMP_INNER) / w1;
    let x2 = (BUMP_OUTER - r) / w2;
    let s1 = smooth_step(x1);
    let s2 = smooth_step(x2);
    let d1 = smooth_step_prime(x1) / w1;
    let d2 = -smooth_step_prime(x2) / w2;
    s1 * s2 + r * (d1 * s2 + s1 * d2)
}

pub fn cutoff_eval(r: f64) -> f64 {
    cutoff_eval_with(r, CUTOFF_EPSILON)
}

pub fn cutoff_deriv(r: f64) -> f64 {
    cutoff_deriv_with(r, CUTOFF_EPSILON)
}

pub fn cutoff_eval_with(r: f64, eps: f64) -> f64 {
    smooth_step((r - (CUTOFF_CENTER - eps)) / (2.0 * eps))
}

pub fn cutoff_deriv_with(r: f64, eps: f64) -> f64 {
    smooth_step_prime((r - (CUTOFF_CENTER - eps)) / (2.0 * eps)) / (2.0 * eps)
}

/// Exact closed forms a profile may carry.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ClosedForm {
    Zero,
    Constant(f64),
    /// The identity profile r ↦ r.
    LinearR,
    /// The witness bump ρ(r).
    Bump,
    /// The connection cutoff τ(r).
    Cutoff,
}

impl ClosedForm {
    pub fn eval(&self, r: f64) -> f64 {
        match self {
            ClosedForm::Zero => 0.0,
            ClosedForm::Constant(c) => *c,
            ClosedForm::LinearR => r,
            ClosedForm::Bump => bump_eval(r),
            ClosedForm::Cutoff => cutoff_eval(r),
        }
    }

    pub fn deriv(&self, r: f64) -> f64 {
        match self {
            ClosedForm::Zero | ClosedForm::Constant(_) => 0.0,
            ClosedForm::LinearR => 1.0,
            ClosedForm::Bump => bump_deriv(r),
            ClosedForm::Cutoff => cutoff_deriv(r),
        }
    }

    /// The derivative as a closed form, when it is again one of the tags.
    pub fn deriv_form(&self) -> Option<ClosedForm> {
        match self {
            ClosedForm::Zero | ClosedForm::Constant(_) => Some(ClosedForm::Zero),
            ClosedForm::LinearR => Some(ClosedForm::Constant(1.0)),
            _ => None,
        }
    }
}

/// Real radial profile: nodal samples, optionally backed by a closed form.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialProfile {
    values: Vec<f64>,
    form: Option<ClosedForm>,
}

impl RadialProfile {
    pub fn from_form(grid: &RadialGrid, form: ClosedForm) -> Self {
        RadialProfile {
            values: grid.nodes().map(|r| form.eval(r)).collect(),
            form: Some(form),
        }
    }

    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        if values.len() < 8 {
            return Err(Error::argument("radial profile needs at least 8 samples"));
        }
        Ok(RadialProfile { values, form: None })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn form(&self) -> Option<ClosedForm> {
        self.form
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Nodal samples must match the closed form to 1e-12 when a tag is set.
    pub fn validate(&self, grid: &RadialGrid) -> Result<()> {
        if self.values.len() != grid.len {
            return Err(Error::GridMismatch(format!(
                "profile has {} samples, grid {}",
                self.values.len(),
                grid.len
            )));
        }
        if let Some(form) = self.form {
            for (i, r) in grid.nodes().enumerate() {
                if (self.values[i] - form.eval(r)).abs() > 1e-12 {
                    return Err(Error::argument(format!(
                        "closed-form tag {form:?} disagrees with sample {i}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Derivative profile: exact for closed forms, finite differences else.
    pub fn derivative(&self, grid: &RadialGrid) -> RadialProfile {
        match self.form {
            Some(form) => RadialProfile {
                values: grid.nodes().map(|r| form.deriv(r)).collect(),
                form: form.deriv_form(),
            },
            None => RadialProfile {
                values: grid.differentiate(&self.values),
                form: None,
            },
        }
    }

    pub fn eval(&self, grid: &RadialGrid, r: f64) -> Result<f64> {
        if let Some(form) = self.form {
            if !grid.contains(r) {
                return Err(Error::argument(format!("r = {r} outside grid")));
            }
            return Ok(form.eval(r));
        }
        let (i, j, w) = grid.bracket(r)?;
        Ok(self.values[i] * (1.0 - w) + self.values[j] * w)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |a, v| a.max(v.abs()))
    }
}
