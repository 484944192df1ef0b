//! The transverse bracket, the full operator family `l_1, l_2, l_k`, and
//! its higher curvature corrections.
//!
//! Covariant derivatives in the two transverse directions act on the
//! Fourier representation as
//!
//! * `∇_r = ∂r` (radial differentiation of coefficients),
//! * `∇_θ = ∂θ1 - τ(r)·X_Hα` (index multiplication plus a radial factor),
//!
//! and the transverse bivector contributes the `1/r` weight of the chart
//! symplectic form `ω = r·dr∧dθ1`. `∇_r` is the grid stencil applied
//! uniformly (never the closed-form derivative), so it is a single linear
//! operator on nodal data and stays consistent across coefficient merges. Since all ingredients either act
//! mode-diagonally or commute with them, `X_Hα` and `X_H3` are exact
//! derivations of every bracket here; the Leibniz coherence relations hold
//! to rounding.
//!
//! Signs: `l_1(Γ) = (-1)^{|Γ|}d_F Γ` in the shifted grading. The family's
//! `l_2` on degrees `(a,b)` is `-(-1)^{ab}·(1/2)·(1/r)[∇_rA∧∇_θB - ∇_θA∧∇_rB]`
//! (unshifted degrees), the unique extension compatible with the Leibniz
//! relation; on pairs of 1-forms the prefactor is +1 and the formula
//! reduces to the transverse-bracket coefficient
//! `(1/2)({f1,g2} + {f2,g1})`.

use num_complex::Complex64;

use super::connection::Connection;
use super::{apply_x_h_alpha, d_f, FoliatedForm};
use crate::arith::AlphaArith;
use crate::error::{Error, Result};
use crate::fourier::{Axis, RadialGrid, RadialProfile, SparseFourierSeries};
use crate::linfty::{GradedElement, OperatorFamily};

/// The concrete operator family of `Y_alpha` for a choice of connection.
pub struct YAlphaFamily<'a> {
    arith: &'a AlphaArith,
    conn: &'a Connection,
    grid: RadialGrid,
    inv_r: RadialProfile,
    /// `(1/r)·τ'(r)`: the curvature endomorphism scalar.
    raised_curvature: RadialProfile,
}

impl<'a> YAlphaFamily<'a> {
    pub fn new(arith: &'a AlphaArith, conn: &'a Connection) -> Self {
        let grid = *conn.grid();
        let inv_r = RadialProfile::from_values(grid.nodes().map(|r| 1.0 / r).collect())
            .expect("grid length");
        let raised_curvature = conn.curvature().raised;
        YAlphaFamily {
            arith,
            conn,
            grid,
            inv_r,
            raised_curvature,
        }
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn arith(&self) -> &AlphaArith {
        self.arith
    }

    pub fn connection(&self) -> &Connection {
        self.conn
    }

    /// `∇_θ = ∂θ1 - τ(r)·X_Hα` on series.
    fn nabla_theta(&self, s: &SparseFourierSeries) -> Result<SparseFourierSeries> {
        let d1 = s.derivative(Axis::Theta1);
        if self.conn.is_flat() {
            return Ok(d1);
        }
        let correction = apply_x_h_alpha(s, self.arith)?.mul_profile(self.conn.tau());
        d1.sub(&correction)
    }

    fn nabla_r_form(&self, v: &FoliatedForm) -> FoliatedForm {
        self.map_components(v, |s| Ok(s.derivative_r_uniform()))
            .expect("radial derivative is total")
    }

    fn nabla_theta_form(&self, v: &FoliatedForm) -> Result<FoliatedForm> {
        self.map_components(v, |s| self.nabla_theta(s))
    }

    fn map_components(
        &self,
        v: &FoliatedForm,
        op: impl Fn(&SparseFourierSeries) -> Result<SparseFourierSeries>,
    ) -> Result<FoliatedForm> {
        Ok(match v {
            FoliatedForm::Scalar(h) => FoliatedForm::Scalar(op(h)?),
            FoliatedForm::One { f, g } => FoliatedForm::One {
                f: op(f)?,
                g: op(g)?,
            },
            FoliatedForm::Two(c) => FoliatedForm::Two(op(c)?),
            FoliatedForm::Null { .. } => v.clone(),
        })
    }

    /// Frame wedge of component forms (degrees add; ≥ 3 collapses to Null).
    fn wedge(&self, a: &FoliatedForm, b: &FoliatedForm) -> Result<FoliatedForm> {
        use FoliatedForm::*;
        Ok(match (a, b) {
            (Null { degree, grid }, other) | (other, Null { degree, grid }) => Null {
                degree: degree + other.form_degree(),
                grid: *grid,
            },
            (Scalar(p), Scalar(q)) => Scalar(p.multiply(q)?),
            (Scalar(p), One { f, g }) => One {
                f: p.multiply(f)?,
                g: p.multiply(g)?,
            },
            (One { f, g }, Scalar(q)) => One {
                f: f.multiply(q)?,
                g: g.multiply(q)?,
            },
            (One { f: f1, g: g1 }, One { f: f2, g: g2 }) => {
                Two(f1.multiply(g2)?.sub(&g1.multiply(f2)?)?)
            }
            (Scalar(p), Two(c)) => Two(p.multiply(c)?),
            (Two(c), Scalar(q)) => Two(c.multiply(q)?),
            (x, y) => Null {
                degree: x.form_degree() + y.form_degree(),
                grid: self.grid,
            },
        })
    }

    /// `l_1(v) = (-1)^{|v|-1} d_F v` (unshifted degree in the exponent is
    /// the shifted one plus one).
    pub fn l1(&self, v: &FoliatedForm) -> Result<FoliatedForm> {
        let d = d_f(v, self.arith)?;
        let sign = if (v.form_degree() - 1).rem_euclid(2) == 0 {
            1.0
        } else {
            -1.0
        };
        Ok(d.scale(sign))
    }

    /// Family `l_2` on arbitrary degree pairs.
    pub fn l2_family(&self, a: &FoliatedForm, b: &FoliatedForm) -> Result<FoliatedForm> {
        let (da, db) = (a.form_degree(), b.form_degree());
        if da + db > 2 || da > 2 || db > 2 || da < 0 || db < 0 {
            return Ok(FoliatedForm::Null {
                degree: da + db,
                grid: self.grid,
            });
        }
        let ra = self.nabla_r_form(a);
        let ta = self.nabla_theta_form(a)?;
        let rb = self.nabla_r_form(b);
        let tb = self.nabla_theta_form(b)?;
        let first = self.wedge(&ra, &tb)?;
        let second = self.wedge(&ta, &rb)?;
        let combined = first.add_scaled(&second, -1.0);
        let sign = if (da * db).rem_euclid(2) == 0 { -1.0 } else { 1.0 };
        let weighted = self.map_components(&combined, |s| Ok(s.mul_profile(&self.inv_r)))?;
        Ok(weighted.scale(0.5 * sign))
    }

    /// The curvature contraction scalar `φ_Γ = (1/r)·τ'(r)·f` of a 1-form.
    fn curvature_scalar(&self, v: &FoliatedForm) -> Result<SparseFourierSeries> {
        let (f, _) = v
            .as_one()
            .ok_or_else(|| Error::argument("curvature contraction takes a 1-form"))?;
        Ok(f.mul_profile(&self.raised_curvature))
    }

    /// Polarized higher operator, arity k ≥ 3, on 1-forms:
    /// `(1/k!)·Σ_{σ∈S_k} χ(σ)·φ_{σ(2)}···φ_{σ(k-1)}·l_2(Γ_{σ(1)}, Γ_{σ(k)})`
    /// (χ ≡ +1 on degree-1 arguments). On equal arguments this reduces to
    /// `φ^{k-2}·l_2(Γ,Γ)`.
    pub fn lk_polarized(&self, args: &[&FoliatedForm]) -> Result<FoliatedForm> {
        let k = args.len();
        if k < 3 {
            return Err(Error::argument("higher operators start at arity 3"));
        }
        if args.iter().any(|a| a.form_degree() != 1) {
            return Ok(FoliatedForm::Null {
                degree: args.iter().map(|a| a.form_degree()).sum::<i64>() + 2 - k as i64,
                grid: self.grid,
            });
        }
        if self.conn.is_flat() {
            return Ok(FoliatedForm::Two(SparseFourierSeries::zero(self.grid)));
        }
        // equal arguments: the reduced formula, no permutation sum
        if args.windows(2).all(|w| std::ptr::eq(w[0], w[1])) {
            return self.lk_reduced(args[0], k);
        }
        let phis: Vec<SparseFourierSeries> = args
            .iter()
            .map(|a| self.curvature_scalar(a))
            .collect::<Result<_>>()?;
        let mut acc = FoliatedForm::Two(SparseFourierSeries::zero(self.grid));
        let mut perm: Vec<usize> = (0..k).collect();
        let mut count = 0usize;
        loop {
            // χ(σ) = sgn(σ)·ε(σ) = +1: all arguments have odd equal degree
            let base = self.l2(args[perm[0]], args[perm[k - 1]])?;
            let mut term = base
                .as_two()
                .expect("l2 of 1-forms is a 2-form")
                .clone();
            for &mid in &perm[1..k - 1] {
                term = term.multiply(&phis[mid])?;
            }
            acc = acc.add_scaled(&FoliatedForm::Two(term), 1.0);
            count += 1;
            // next permutation, lexicographic
            let mut i = k - 1;
            while i > 0 && perm[i - 1] >= perm[i] {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            let mut j = k - 1;
            while perm[j] <= perm[i - 1] {
                j -= 1;
            }
            perm.swap(i - 1, j);
            perm[i..].reverse();
        }
        Ok(acc.scale(1.0 / count as f64))
    }

    /// Reduced equal-argument form `l_k(Γ,...,Γ) = φ_Γ^{k-2}·l_2(Γ,Γ)`.
    pub fn lk_reduced(&self, gamma: &FoliatedForm, k: usize) -> Result<FoliatedForm> {
        if k < 3 {
            return Err(Error::argument("higher operators start at arity 3"));
        }
        if self.conn.is_flat() {
            return Ok(FoliatedForm::Two(SparseFourierSeries::zero(self.grid)));
        }
        let phi = self.curvature_scalar(gamma)?;
        let base = self.l2(gamma, gamma)?;
        let mut coeff = base.as_two().expect("2-form").clone();
        for _ in 0..k - 2 {
            coeff = coeff.multiply(&phi)?;
        }
        Ok(FoliatedForm::Two(coeff))
    }

    /// Public `l_2` on pairs of 1-forms: coefficient
    /// `(1/2)({f1,g2}_P + {f2,g1}_P)`, symmetric, equal to the transverse
    /// bracket on the diagonal.
    pub fn l2(&self, a: &FoliatedForm, b: &FoliatedForm) -> Result<FoliatedForm> {
        if a.form_degree() != 1 || b.form_degree() != 1 {
            return Err(Error::argument("l2 takes two degree-1 forms"));
        }
        self.l2_family(a, b)
    }

    /// The transverse Poisson bracket
    /// `{f,g}_P = (1/r)(∇_r f·∇_θ g - ∇_θ f·∇_r g)`.
    pub fn bracket_p(
        &self,
        f: &SparseFourierSeries,
        g: &SparseFourierSeries,
    ) -> Result<SparseFourierSeries> {
        let term1 = f.derivative_r_uniform().multiply(&self.nabla_theta(g)?)?;
        let term2 = self.nabla_theta(f)?.multiply(&g.derivative_r_uniform())?;
        Ok(term1.sub(&term2)?.mul_profile(&self.inv_r))
    }
}

impl OperatorFamily for YAlphaFamily<'_> {
    type Elt = FoliatedForm;

    fn bracket(&self, k: usize, args: &[&FoliatedForm]) -> FoliatedForm {
        match k {
            0 => FoliatedForm::Null {
                degree: 2,
                grid: self.grid,
            },
            1 => self.l1(args[0]).expect("slope arithmetic resolvable"),
            2 => self
                .l2_family(args[0], args[1])
                .expect("slope arithmetic resolvable"),
            _ => self
                .lk_polarized(args)
                .expect("slope arithmetic resolvable"),
        }
    }

    fn max_arity(&self) -> usize {
        if self.conn.is_flat() {
            2
        } else {
            8
        }
    }
}

/// Free-function view of the transverse bracket.
pub fn bracket_p(
    f: &SparseFourierSeries,
    g: &SparseFourierSeries,
    conn: &Connection,
    arith: &AlphaArith,
) -> Result<SparseFourierSeries> {
    YAlphaFamily::new(arith, conn).bracket_p(f, g)
}

/// Free-function view of `l_2` on 1-forms.
pub fn l2(
    a: &FoliatedForm,
    b: &FoliatedForm,
    conn: &Connection,
    arith: &AlphaArith,
) -> Result<FoliatedForm> {
    YAlphaFamily::new(arith, conn).l2(a, b)
}

/// Polarized `l_k`, arity `k = args.len() ≥ 3`, on 1-forms.
pub fn l_k(
    args: &[&FoliatedForm],
    conn: &Connection,
    arith: &AlphaArith,
) -> Result<FoliatedForm> {
    YAlphaFamily::new(arith, conn).lk_polarized(args)
}

/// Reduced equal-argument `l_k(Γ,...,Γ)`.
pub fn l_k_reduced(
    gamma: &FoliatedForm,
    k: usize,
    conn: &Connection,
    arith: &AlphaArith,
) -> Result<FoliatedForm> {
    YAlphaFamily::new(arith, conn).lk_reduced(gamma, k)
}

impl FoliatedForm {
    /// Scale by a complex constant (componentwise).
    pub fn scale_complex(&self, c: Complex64) -> Self {
        match self {
            FoliatedForm::Scalar(h) => FoliatedForm::Scalar(h.scale(c)),
            FoliatedForm::One { f, g } => FoliatedForm::One {
                f: f.scale(c),
                g: g.scale(c),
            },
            FoliatedForm::Two(x) => FoliatedForm::Two(x.scale(c)),
            FoliatedForm::Null { .. } => self.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::AlphaSpec;
    use crate::fourier::{ClosedForm, ModeIndex};

    const TAU: f64 = std::f64::consts::TAU;

    fn grid() -> RadialGrid {
        RadialGrid::DEFAULT
    }

    fn golden() -> AlphaArith {
        AlphaArith::new(AlphaSpec::quadratic(-1, 5, 2).unwrap()).unwrap()
    }

    fn constant_profile() -> RadialProfile {
        RadialProfile::from_form(&grid(), ClosedForm::Constant(1.0))
    }

    #[test]
    fn bracket_symbolic_flat_case() {
        // f = r²/2 (radial), g = sin 2πθ1, flat region:
        // {f,g} = (1/r)(r·2π cos 2πθ1 - 0) = 2π cos 2πθ1.
        let arith = golden();
        let conn = Connection::flat(grid());
        let half_r2 =
            RadialProfile::from_values(grid().nodes().map(|r| 0.5 * r * r).collect()).unwrap();
        let f = SparseFourierSeries::harmonic(
            grid(),
            ModeIndex::zero(),
            Complex64::new(1.0, 0.0),
            half_r2,
        );
        let g = SparseFourierSeries::sin_mode(grid(), Axis::Theta1, 1, 1.0, constant_profile());
        let b = bracket_p(&f, &g, &conn, &arith).unwrap();
        // expect coefficient π at (±1,0,0) (cos pair of amplitude 2π)
        let c = b.coeff(&ModeIndex::new(1, 0, 0)).unwrap();
        for i in 1..grid().len - 1 {
            assert!(
                (c.value_at(i).re - std::f64::consts::PI).abs() < 1e-9,
                "node {i}: {:?}",
                c.value_at(i)
            );
        }
        let v = b.evaluate(0.3, 0.0, 0.7, 0.2).unwrap();
        assert!((v.re - TAU).abs() < 1e-9);
    }

    #[test]
    fn bracket_witness_band_value() {
        // f = ρ(r) sin(2πqθ1), g = ρ(r): on the ρ(r) = r band the bracket
        // is -2πq·cos(2πqθ1).
        let q = 3i64;
        let arith = AlphaArith::new(AlphaSpec::rational(2, 3).unwrap()).unwrap();
        let conn = Connection::flat(grid());
        let rho = RadialProfile::from_form(&grid(), ClosedForm::Bump);
        let f = SparseFourierSeries::sin_mode(grid(), Axis::Theta1, q, 1.0, rho.clone());
        let g = SparseFourierSeries::harmonic(
            grid(),
            ModeIndex::zero(),
            Complex64::new(1.0, 0.0),
            rho,
        );
        let b = bracket_p(&f, &g, &conn, &arith).unwrap();
        let v = b.evaluate(0.35, 0.0, 0.1, 0.9).unwrap();
        let expect = -TAU * q as f64; // cos(0) = 1
        assert!((v.re - expect).abs() < 1e-6, "got {v}, want {expect}");
        assert!(v.im.abs() < 1e-10);
    }

    #[test]
    fn bracket_antisymmetry_and_diagonal() {
        let arith = golden();
        let conn = Connection::cutoff(grid());
        let fam = YAlphaFamily::new(&arith, &conn);
        let f = crate::probes::random_series(&mut crate::probes::rng(11), &grid(), 12, 3, 2, 1);
        let g = crate::probes::random_series(&mut crate::probes::rng(12), &grid(), 12, 3, 2, 1);
        let fg = fam.bracket_p(&f, &g).unwrap();
        let gf = fam.bracket_p(&g, &f).unwrap();
        assert!(fg.add(&gf).unwrap().norm_sup() < 1e-10 * fg.norm_sup().max(1.0));
        let ff = fam.bracket_p(&f, &f).unwrap();
        assert!(ff.norm_sup() < 1e-10);
    }

    #[test]
    fn l2_symmetry_and_zero() {
        let arith = golden();
        let conn = Connection::cutoff(grid());
        let fam = YAlphaFamily::new(&arith, &conn);
        for seed in 0..20u64 {
            let a = crate::probes::random_one_form(&mut crate::probes::rng(seed), &grid(), 8);
            let b =
                crate::probes::random_one_form(&mut crate::probes::rng(seed + 100), &grid(), 8);
            let ab = fam.l2(&a, &b).unwrap();
            let ba = fam.l2(&b, &a).unwrap();
            let diff = ab.add_scaled(&ba, -1.0);
            assert!(
                diff.norm() <= 1e-10 * ab.norm().max(1.0),
                "seed {seed}: asymmetry {}",
                diff.norm()
            );
        }
        let zero = FoliatedForm::zero(1, grid());
        let a = crate::probes::random_one_form(&mut crate::probes::rng(7), &grid(), 8);
        assert_eq!(fam.l2(&a, &zero).unwrap().norm(), 0.0);
    }

    #[test]
    fn l2_diagonal_equals_bracket() {
        let arith = golden();
        let conn = Connection::cutoff(grid());
        let fam = YAlphaFamily::new(&arith, &conn);
        let gamma = crate::probes::random_one_form(&mut crate::probes::rng(3), &grid(), 10);
        let (f, g) = gamma.as_one().unwrap();
        let via_l2 = fam.l2(&gamma, &gamma).unwrap();
        let via_bracket = fam.bracket_p(f, g).unwrap();
        let diff = via_l2
            .as_two()
            .unwrap()
            .sub(&via_bracket)
            .unwrap();
        assert!(diff.norm_sup() < 1e-10 * via_bracket.norm_sup().max(1.0));
    }

    #[test]
    fn higher_operators_vanish_flat_and_off_band() {
        let arith = golden();
        let gamma = crate::probes::random_one_form(&mut crate::probes::rng(5), &grid(), 10);
        // flat: identically zero for all k ≥ 3
        let flat = Connection::flat(grid());
        for k in 3..=5 {
            let v = l_k_reduced(&gamma, k, &flat, &arith).unwrap();
            assert_eq!(v.norm(), 0.0, "flat l_{k}");
        }
        // cutoff: supported only inside the ε-band
        let conn = Connection::cutoff(grid());
        let v = l_k_reduced(&gamma, 3, &conn, &arith).unwrap();
        let coeff = v.as_two().unwrap();
        for (i, r) in grid().nodes().enumerate() {
            let inside = r > crate::fourier::CUTOFF_CENTER - crate::fourier::CUTOFF_EPSILON
                && r < crate::fourier::CUTOFF_CENTER + crate::fourier::CUTOFF_EPSILON;
            if !inside {
                let worst = coeff
                    .terms()
                    .map(|(_, c)| c.value_at(i).norm())
                    .fold(0.0f64, f64::max);
                assert!(worst <= 1e-12, "leak at r={r}: {worst}");
            }
        }
    }

    #[test]
    fn lk_zero_without_x_alpha_component() {
        let arith = golden();
        let conn = Connection::cutoff(grid());
        let g = crate::probes::random_series(&mut crate::probes::rng(9), &grid(), 10, 3, 2, 1);
        let gamma = FoliatedForm::One {
            f: SparseFourierSeries::zero(grid()),
            g,
        };
        let v = l_k_reduced(&gamma, 3, &conn, &arith).unwrap();
        assert_eq!(v.norm(), 0.0);
    }

    #[test]
    fn polarized_matches_reduced_on_equal_arguments() {
        let arith = golden();
        let conn = Connection::cutoff(grid());
        let gamma = crate::probes::random_one_form(&mut crate::probes::rng(21), &grid(), 8);
        // hand the polarized path distinct clones so it actually permutes
        let c1 = gamma.clone();
        let c2 = gamma.clone();
        let c3 = gamma.clone();
        let pol = l_k(&[&c1, &c2, &c3], &conn, &arith).unwrap();
        let red = l_k_reduced(&gamma, 3, &conn, &arith).unwrap();
        let diff = pol.add_scaled(&red, -1.0);
        assert!(
            diff.norm() <= 1e-10 * red.norm().max(1.0),
            "polarized vs reduced: {}",
            diff.norm()
        );
    }

    #[test]
    fn curvature_factor_pulls_out_for_radial_f() {
        // f = f_{0,0}(r): l_3(Γ,Γ,Γ) = (1/r)τ'·f · l_2(Γ,Γ) exactly.
        let arith = golden();
        let conn = Connection::cutoff(grid());
        let fam = YAlphaFamily::new(&arith, &conn);
        let f = SparseFourierSeries::harmonic(
            grid(),
            ModeIndex::zero(),
            Complex64::new(0.8, 0.0),
            RadialProfile::from_form(&grid(), ClosedForm::Bump),
        );
        let g = crate::probes::random_series(&mut crate::probes::rng(31), &grid(), 8, 3, 2, 1);
        let gamma = FoliatedForm::One { f: f.clone(), g };
        let l3 = fam.lk_reduced(&gamma, 3).unwrap();
        let phi = f.mul_profile(&conn.curvature().raised);
        let expect = fam
            .l2(&gamma, &gamma)
            .unwrap()
            .as_two()
            .unwrap()
            .multiply(&phi)
            .unwrap();
        let diff = l3.as_two().unwrap().sub(&expect).unwrap();
        assert!(diff.norm_sup() <= 1e-12 * expect.norm_sup().max(1.0));
    }
}
