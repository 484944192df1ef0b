//! The sparse series type and its arithmetic.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use super::grid::RadialGrid;
use super::profile::{ClosedForm, RadialProfile};
use crate::error::{Error, Result};

/// Default cap on the number of stored terms a product may produce.
pub const DEFAULT_TERM_BUDGET: usize = 500_000;

/// Coefficients below this are treated as exact zeros and pruned.
const PRUNE_EPS: f64 = 1e-305;

const TAU: f64 = std::f64::consts::TAU;

/// Integer multi-index `(p, q, m)` for `(θ1, θ2, θ3)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeIndex {
    pub p: BigInt,
    pub q: BigInt,
    pub m: BigInt,
}

impl ModeIndex {
    pub fn new(p: i64, q: i64, m: i64) -> Self {
        ModeIndex {
            p: BigInt::from(p),
            q: BigInt::from(q),
            m: BigInt::from(m),
        }
    }

    pub fn from_bigs(p: BigInt, q: BigInt, m: BigInt) -> Self {
        ModeIndex { p, q, m }
    }

    pub fn zero() -> Self {
        ModeIndex::new(0, 0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero() && self.m.is_zero()
    }

    pub fn neg(&self) -> Self {
        ModeIndex {
            p: -&self.p,
            q: -&self.q,
            m: -&self.m,
        }
    }

    pub fn sum(&self, other: &Self) -> Self {
        ModeIndex {
            p: &self.p + &other.p,
            q: &self.q + &other.q,
            m: &self.m + &other.m,
        }
    }

    pub fn component(&self, axis: Axis) -> &BigInt {
        match axis {
            Axis::Theta1 => &self.p,
            Axis::Theta2 => &self.q,
            Axis::Theta3 => &self.m,
            Axis::R => panic!("the radial axis has no integer index"),
        }
    }
}

impl std::fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.p, self.q, self.m)
    }
}

/// Differentiation / decay axes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    Theta1,
    Theta2,
    Theta3,
    R,
}

/// One term's radial coefficient.
///
/// Most coefficients arising from witnesses are a complex amplitude times a
/// real closed-form profile; sums and products of terms with incompatible
/// phases fall back to general complex nodal values.
#[derive(Clone, Debug)]
pub enum Coeff {
    Sep { amp: Complex64, profile: RadialProfile },
    Grid(Vec<Complex64>),
}

impl Coeff {
    pub fn scalar(amp: Complex64, grid: &RadialGrid) -> Self {
        Coeff::Sep {
            amp,
            profile: RadialProfile::from_form(grid, ClosedForm::Constant(1.0)),
        }
    }

    pub fn separable(amp: Complex64, profile: RadialProfile) -> Self {
        Coeff::Sep { amp, profile }
    }

    pub fn len(&self) -> usize {
        match self {
            Coeff::Sep { profile, .. } => profile.len(),
            Coeff::Grid(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn value_at(&self, i: usize) -> Complex64 {
        match self {
            Coeff::Sep { amp, profile } => amp * profile.values()[i],
            Coeff::Grid(v) => v[i],
        }
    }

    pub fn values(&self) -> Vec<Complex64> {
        (0..self.len()).map(|i| self.value_at(i)).collect()
    }

    pub fn max_abs(&self) -> f64 {
        (0..self.len()).fold(0.0f64, |a, i| a.max(self.value_at(i).norm()))
    }

    pub fn scale(&self, c: Complex64) -> Coeff {
        match self {
            Coeff::Sep { amp, profile } => Coeff::Sep {
                amp: amp * c,
                profile: profile.clone(),
            },
            Coeff::Grid(v) => Coeff::Grid(v.iter().map(|x| x * c).collect()),
        }
    }

    pub fn conj(&self) -> Coeff {
        match self {
            Coeff::Sep { amp, profile } => Coeff::Sep {
                amp: amp.conj(),
                profile: profile.clone(),
            },
            Coeff::Grid(v) => Coeff::Grid(v.iter().map(|x| x.conj()).collect()),
        }
    }

    pub fn add(&self, other: &Coeff) -> Coeff {
        if let (
            Coeff::Sep { amp: a, profile: p },
            Coeff::Sep {
                amp: b,
                profile: qp,
            },
        ) = (self, other)
        {
            if p == qp {
                return Coeff::Sep {
                    amp: a + b,
                    profile: p.clone(),
                };
            }
        }
        let n = self.len();
        Coeff::Grid(
            (0..n)
                .map(|i| self.value_at(i) + other.value_at(i))
                .collect(),
        )
    }

    /// Pointwise (radial) product.
    pub fn mul(&self, other: &Coeff) -> Coeff {
        if let (
            Coeff::Sep { amp: a, profile: p },
            Coeff::Sep {
                amp: b,
                profile: qp,
            },
        ) = (self, other)
        {
            // A constant factor keeps the other side's closed form alive.
            if let Some(ClosedForm::Constant(c)) = p.form() {
                return Coeff::Sep {
                    amp: a * b * c,
                    profile: qp.clone(),
                };
            }
            if let Some(ClosedForm::Constant(c)) = qp.form() {
                return Coeff::Sep {
                    amp: a * b * c,
                    profile: p.clone(),
                };
            }
        }
        let n = self.len();
        Coeff::Grid(
            (0..n)
                .map(|i| self.value_at(i) * other.value_at(i))
                .collect(),
        )
    }

    /// Multiply by a real radial profile (pointwise).
    pub fn mul_profile(&self, w: &RadialProfile) -> Coeff {
        match self {
            Coeff::Sep { amp, profile } => {
                if let Some(ClosedForm::Constant(c)) = w.form() {
                    return Coeff::Sep {
                        amp: amp * c,
                        profile: profile.clone(),
                    };
                }
                let values: Vec<f64> = profile
                    .values()
                    .iter()
                    .zip(w.values())
                    .map(|(a, b)| a * b)
                    .collect();
                Coeff::Sep {
                    amp: *amp,
                    profile: RadialProfile::from_values(values).expect("profile length"),
                }
            }
            Coeff::Grid(v) => Coeff::Grid(
                v.iter()
                    .zip(w.values())
                    .map(|(a, b)| a * *b)
                    .collect(),
            ),
        }
    }

    /// Pointwise multiplication by raw real nodal values.
    pub fn mul_values(&self, w: &[f64]) -> Coeff {
        let n = self.len();
        Coeff::Grid((0..n).map(|i| self.value_at(i) * w[i]).collect())
    }

    /// Radial derivative: exact for tagged closed forms, finite differences
    /// on the grid otherwise.
    pub fn derivative_r(&self, grid: &RadialGrid) -> Coeff {
        match self {
            Coeff::Sep { amp, profile } => Coeff::Sep {
                amp: *amp,
                profile: profile.derivative(grid),
            },
            Coeff::Grid(v) => Coeff::Grid(grid.differentiate(v)),
        }
    }

    pub fn eval(&self, grid: &RadialGrid, r: f64) -> Result<Complex64> {
        match self {
            Coeff::Sep { amp, profile } => Ok(amp * profile.eval(grid, r)?),
            Coeff::Grid(v) => {
                let (i, j, w) = grid.bracket(r)?;
                Ok(v[i] * (1.0 - w) + v[j] * w)
            }
        }
    }
}

/// Finite map from integer multi-indices to radial coefficients.
#[derive(Clone, Debug)]
pub struct SparseFourierSeries {
    grid: RadialGrid,
    terms: BTreeMap<ModeIndex, Coeff>,
}

impl SparseFourierSeries {
    pub fn zero(grid: RadialGrid) -> Self {
        SparseFourierSeries {
            grid,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(grid: RadialGrid, c: f64) -> Self {
        let mut s = Self::zero(grid);
        s.add_term(
            ModeIndex::zero(),
            Coeff::scalar(Complex64::new(c, 0.0), &grid),
        );
        s
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ModeIndex, &Coeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, idx: &ModeIndex) -> Option<&Coeff> {
        self.terms.get(idx)
    }

    /// Accumulate a term, pruning exact zeros.
    pub fn add_term(&mut self, idx: ModeIndex, coeff: Coeff) {
        debug_assert_eq!(coeff.len(), self.grid.len);
        match self.terms.entry(idx) {
            std::collections::btree_map::Entry::Vacant(e) => {
                if coeff.max_abs() > PRUNE_EPS {
                    e.insert(coeff);
                }
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&coeff);
                if sum.max_abs() > PRUNE_EPS {
                    e.insert(sum);
                } else {
                    e.remove();
                }
            }
        }
    }

    /// A single harmonic `amp · profile(r) · e^{2πi(pθ1+qθ2+mθ3)}`.
    pub fn harmonic(grid: RadialGrid, idx: ModeIndex, amp: Complex64, profile: RadialProfile) -> Self {
        let mut s = Self::zero(grid);
        s.add_term(idx, Coeff::Sep { amp, profile });
        s
    }

    /// Real `cos(2πn·θ_axis)` pair with a common profile.
    pub fn cos_mode(grid: RadialGrid, axis: Axis, n: i64, amp: f64, profile: RadialProfile) -> Self {
        let mut s = Self::zero(grid);
        let idx = match axis {
            Axis::Theta1 => ModeIndex::new(n, 0, 0),
            Axis::Theta2 => ModeIndex::new(0, n, 0),
            Axis::Theta3 => ModeIndex::new(0, 0, n),
            Axis::R => panic!("cos_mode needs an angular axis"),
        };
        let half = Complex64::new(0.5 * amp, 0.0);
        s.add_term(idx.clone(), Coeff::separable(half, profile.clone()));
        s.add_term(idx.neg(), Coeff::separable(half, profile));
        s
    }

    /// Real `sin(2πn·θ_axis)` pair with a common profile.
    pub fn sin_mode(grid: RadialGrid, axis: Axis, n: i64, amp: f64, profile: RadialProfile) -> Self {
        let mut s = Self::zero(grid);
        let idx = match axis {
            Axis::Theta1 => ModeIndex::new(n, 0, 0),
            Axis::Theta2 => ModeIndex::new(0, n, 0),
            Axis::Theta3 => ModeIndex::new(0, 0, n),
            Axis::R => panic!("sin_mode needs an angular axis"),
        };
        let half = Complex64::new(0.0, -0.5 * amp); // 1/(2i)
        s.add_term(idx.clone(), Coeff::separable(half, profile.clone()));
        s.add_term(idx.neg(), Coeff::separable(half.conj(), profile));
        s
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.grid.compatible(&other.grid)?;
        let mut out = self.clone();
        for (idx, c) in &other.terms {
            out.add_term(idx.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        if c.is_zero() {
            return Self::zero(self.grid);
        }
        SparseFourierSeries {
            grid: self.grid,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.clone(), v.scale(c)))
                .collect(),
        }
    }

    pub fn scale_re(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.multiply_with_budget(other, DEFAULT_TERM_BUDGET)
    }

    /// Convolution of indices, pointwise product of radial coefficients.
    pub fn multiply_with_budget(&self, other: &Self, budget: usize) -> Result<Self> {
        self.grid.compatible(&other.grid)?;
        let mut out = Self::zero(self.grid);
        for (i1, c1) in &self.terms {
            for (i2, c2) in &other.terms {
                out.add_term(i1.sum(i2), c1.mul(c2));
                if out.terms.len() > budget {
                    return Err(Error::Resource(format!(
                        "product exceeds term budget of {budget}"
                    )));
                }
            }
        }
        Ok(out)
    }

    /// Multiply every coefficient by a mode-dependent scalar, pruning zeros.
    pub fn map_modes<F: Fn(&ModeIndex) -> Complex64>(&self, f: F) -> Self {
        let mut out = Self::zero(self.grid);
        for (idx, c) in &self.terms {
            out.add_term(idx.clone(), c.scale(f(idx)));
        }
        out
    }

    pub fn try_map_modes<F: Fn(&ModeIndex) -> Result<Complex64>>(&self, f: F) -> Result<Self> {
        let mut out = Self::zero(self.grid);
        for (idx, c) in &self.terms {
            out.add_term(idx.clone(), c.scale(f(idx)?));
        }
        Ok(out)
    }

    /// Derivative along an angular axis (multiplication by `2πi·index`) or
    /// along `r` (profile differentiation).
    pub fn derivative(&self, axis: Axis) -> Self {
        match axis {
            Axis::R => SparseFourierSeries {
                grid: self.grid,
                terms: self
                    .terms
                    .iter()
                    .map(|(k, v)| (k.clone(), v.derivative_r(&self.grid)))
                    .collect(),
            },
            _ => self.map_modes(|idx| {
                let n = idx.component(axis).to_f64().unwrap_or(f64::INFINITY);
                Complex64::new(0.0, TAU * n)
            }),
        }
    }

    /// Radial derivative by the grid stencil uniformly, ignoring closed-form
    /// tags: one linear operator on nodal values, so it commutes exactly
    /// with coefficient merging. The bracket calculus uses this; the
    /// tag-aware [`Self::derivative`] serves the profile-level API.
    pub fn derivative_r_uniform(&self) -> Self {
        let grid = self.grid;
        let mut out = Self::zero(grid);
        for (idx, c) in &self.terms {
            let d = match c {
                Coeff::Sep { amp, profile } => Coeff::Sep {
                    amp: *amp,
                    profile: RadialProfile::from_values(grid.differentiate(profile.values()))
                        .expect("grid length"),
                },
                Coeff::Grid(v) => Coeff::Grid(grid.differentiate(v)),
            };
            out.add_term(idx.clone(), d);
        }
        out
    }

    /// Pointwise multiplication by a real radial profile (index-preserving).
    pub fn mul_profile(&self, w: &RadialProfile) -> Self {
        let mut out = Self::zero(self.grid);
        for (idx, c) in &self.terms {
            out.add_term(idx.clone(), c.mul_profile(w));
        }
        out
    }

    /// Restriction to the `(0, 0, ·)` modes (still a function of r and θ3).
    pub fn average_00(&self) -> Self {
        SparseFourierSeries {
            grid: self.grid,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.p.is_zero() && k.q.is_zero())
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// Complement of [`Self::average_00`].
    pub fn without_00(&self) -> Self {
        SparseFourierSeries {
            grid: self.grid,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| !(k.p.is_zero() && k.q.is_zero()))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    pub fn evaluate(&self, r: f64, t1: f64, t2: f64, t3: f64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (idx, c) in &self.terms {
            let phase = TAU
                * (idx.p.to_f64().unwrap() * t1
                    + idx.q.to_f64().unwrap() * t2
                    + idx.m.to_f64().unwrap() * t3);
            acc += c.eval(&self.grid, r)? * Complex64::new(0.0, phase).exp();
        }
        Ok(acc)
    }

    /// Sup of coefficient magnitudes over all terms and nodes.
    pub fn norm_sup(&self) -> f64 {
        self.terms.values().fold(0.0f64, |a, c| a.max(c.max_abs()))
    }

    /// Max over stored modes of `|c(idx) - conj(c(-idx))|`; zero for series
    /// representing real functions.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for (idx, c) in &self.terms {
            let partner = self.terms.get(&idx.neg());
            for i in 0..self.grid.len {
                let mirrored = partner
                    .map(|p| p.value_at(i))
                    .unwrap_or_else(|| Complex64::new(0.0, 0.0));
                worst = worst.max((c.value_at(i) - mirrored.conj()).norm());
            }
        }
        worst
    }

    pub fn prune_below(&mut self, tol: f64) {
        self.terms.retain(|_, c| c.max_abs() > tol);
    }

    /// All distinct magnitudes along an axis, with the sup coefficient size
    /// at each. Input to the decay fit.
    pub fn axis_magnitudes(&self, axis: Axis) -> Vec<(BigInt, f64)> {
        use num_traits::Signed;
        let mut by_mag: BTreeMap<BigInt, f64> = BTreeMap::new();
        for (idx, c) in &self.terms {
            let n = idx.component(axis).abs();
            let e = by_mag.entry(n).or_insert(0.0);
            *e = e.max(c.max_abs());
        }
        by_mag.into_iter().collect()
    }

    /// Number of stored terms with a nonzero component along the axis.
    pub fn nonzero_on_axis(&self, axis: Axis) -> usize {
        self.terms
            .keys()
            .filter(|idx| !idx.component(axis).is_zero())
            .count()
    }
}
