//! The transverse distribution `G` and its curvature.
//!
//! On each solid torus the flat choice is `G_i = span{∂r_i, ∂θ_i}`. The
//! global connection interpolates between the two across an ε-band around
//! `r1 = 1/(2√2)` via the cutoff τ: `X(r1) = (1-τ)∂θ1 - ατ·∂θ2`, i.e.
//! `X = ∂θ1 - τ(r1)·X_Hα`, so the only nonzero connection coefficient on
//! chart 1 is `R¹₂ = -τ(r1)`. R depends on the radius alone, so the
//! connection acts mode-by-mode on series and the `Γ_β·∂R^β/∂q`-term of
//! the covariant derivative vanishes identically.

use crate::error::{Error, Result};
use crate::fourier::{
    cutoff_deriv, smooth_step, ClosedForm, RadialGrid, RadialProfile, CUTOFF_CENTER,
    CUTOFF_EPSILON,
};

/// Transverse connection data: the cutoff profile τ and its (analytic)
/// derivative.
#[derive(Clone, Debug)]
pub struct Connection {
    grid: RadialGrid,
    epsilon: f64,
    flat: bool,
    tau: RadialProfile,
    tau_prime: RadialProfile,
}

impl Connection {
    /// τ ≡ 0: both solid tori keep their flat product connection; all
    /// higher operators vanish.
    pub fn flat(grid: RadialGrid) -> Self {
        Connection {
            grid,
            epsilon: 0.0,
            flat: true,
            tau: RadialProfile::from_form(&grid, ClosedForm::Zero),
            tau_prime: RadialProfile::from_form(&grid, ClosedForm::Zero),
        }
    }

    /// The global cutoff connection with the default ε-band.
    pub fn cutoff(grid: RadialGrid) -> Self {
        Connection {
            grid,
            epsilon: CUTOFF_EPSILON,
            flat: false,
            tau: RadialProfile::from_form(&grid, ClosedForm::Cutoff),
            tau_prime: RadialProfile::from_values(
                grid.nodes().map(cutoff_deriv).collect(),
            )
            .expect("grid length"),
        }
    }

    /// Cutoff connection with a custom band half-width.
    pub fn with_epsilon(grid: RadialGrid, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0) || CUTOFF_CENTER - epsilon <= grid.r_min {
            return Err(Error::argument(format!(
                "epsilon_band {epsilon} incompatible with grid [{}, {}]",
                grid.r_min, grid.r_max
            )));
        }
        if (epsilon - CUTOFF_EPSILON).abs() < 1e-15 {
            return Ok(Self::cutoff(grid));
        }
        let eval = |r: f64| smooth_step((r - (CUTOFF_CENTER - epsilon)) / (2.0 * epsilon));
        let tau = RadialProfile::from_values(grid.nodes().map(eval).collect())?;
        let dstep = |r: f64| {
            crate::fourier::cutoff_deriv_with(r, epsilon)
        };
        let tau_prime = RadialProfile::from_values(grid.nodes().map(dstep).collect())?;
        Ok(Connection {
            grid,
            epsilon,
            flat: false,
            tau,
            tau_prime,
        })
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn is_flat(&self) -> bool {
        self.flat
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn tau(&self) -> &RadialProfile {
        &self.tau
    }

    pub fn tau_prime(&self) -> &RadialProfile {
        &self.tau_prime
    }

    /// τ values stay in [0,1] and are flat outside the ε-band.
    pub fn validate(&self) -> Result<()> {
        for (i, r) in self.grid.nodes().enumerate() {
            let v = self.tau.values()[i];
            if !(-1e-12..=1.0 + 1e-12).contains(&v) {
                return Err(Error::argument(format!("τ({r}) = {v} leaves [0,1]")));
            }
            if !self.flat {
                if r <= CUTOFF_CENTER - self.epsilon && v.abs() > 1e-12 {
                    return Err(Error::argument(format!("τ({r}) = {v} below the band")));
                }
                if r >= CUTOFF_CENTER + self.epsilon && (v - 1.0).abs() > 1e-12 {
                    return Err(Error::argument(format!("τ({r}) = {v} above the band")));
                }
            }
        }
        Ok(())
    }

    pub fn curvature(&self) -> Curvature {
        let f112 = RadialProfile::from_values(
            self.tau_prime.values().iter().map(|v| -v).collect(),
        )
        .expect("grid length");
        let raised = RadialProfile::from_values(
            self.grid
                .nodes()
                .zip(self.tau_prime.values())
                .map(|(r, v)| v / r)
                .collect(),
        )
        .expect("grid length");
        Curvature { f112, raised }
    }
}

/// Curvature of the cutoff connection in chart-1 coordinates.
#[derive(Clone, Debug)]
pub struct Curvature {
    /// `F¹₁₂ = -∂τ/∂r1`; every other coefficient vanishes.
    pub f112: RadialProfile,
    /// Index-raised form: the endomorphism is `(1/r)(∂τ/∂r1)·Id`.
    pub raised: RadialProfile,
}

impl Curvature {
    pub fn is_zero(&self, tol: f64) -> bool {
        self.f112.max_abs() <= tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::cutoff_eval;

    #[test]
    fn flat_connection_has_zero_curvature() {
        let c = Connection::flat(RadialGrid::DEFAULT);
        c.validate().unwrap();
        assert!(c.curvature().is_zero(0.0));
    }

    #[test]
    fn cutoff_curvature_supported_on_band() {
        let g = RadialGrid::DEFAULT;
        let c = Connection::cutoff(g);
        c.validate().unwrap();
        let curv = c.curvature();
        assert!(!curv.is_zero(1e-6));
        for (i, r) in g.nodes().enumerate() {
            let inside =
                r > CUTOFF_CENTER - CUTOFF_EPSILON && r < CUTOFF_CENTER + CUTOFF_EPSILON;
            if !inside {
                assert_eq!(curv.f112.values()[i], 0.0, "flat at r={r}");
                assert_eq!(curv.raised.values()[i], 0.0, "flat at r={r}");
            }
            // F¹₁₂ = -τ′ and raised = τ′/r, exactly
            assert!(
                (curv.f112.values()[i] + cutoff_deriv(r)).abs() < 1e-15,
                "sign convention at r={r}"
            );
            assert!((curv.raised.values()[i] - cutoff_deriv(r) / r).abs() < 1e-15);
        }
        // τ′ > 0 somewhere inside the band
        assert!(curv.f112.max_abs() > 1.0);
    }

    /// The covariant derivative's `Γ_β·∂R^β_i/∂q^α` term vanishes on
    /// `Y_alpha`: the only connection coefficient is `R¹₂ = -τ(r1)`, whose
    /// Fourier support is the single `(0,0,0)` mode, so every angular
    /// derivative of it is identically empty.
    #[test]
    fn connection_coefficient_has_no_angular_dependence() {
        use crate::fourier::{Axis, ModeIndex, SparseFourierSeries};
        let g = RadialGrid::DEFAULT;
        let c = Connection::cutoff(g);
        let r_coeff = SparseFourierSeries::harmonic(
            g,
            ModeIndex::zero(),
            num_complex::Complex64::new(-1.0, 0.0),
            c.tau().clone(),
        );
        for axis in [Axis::Theta1, Axis::Theta2, Axis::Theta3] {
            assert!(r_coeff.derivative(axis).is_empty(), "∂R/∂q on {axis:?}");
        }
    }

    #[test]
    fn custom_epsilon_band() {
        let g = RadialGrid::DEFAULT;
        let c = Connection::with_epsilon(g, 0.08).unwrap();
        c.validate().unwrap();
        assert!((c.epsilon() - 0.08).abs() < 1e-15);
        assert!(Connection::with_epsilon(g, 0.0).is_err());
        assert!(Connection::with_epsilon(g, 0.35).is_err());
        // τ matches cutoff_eval when ε is the default
        let d = Connection::with_epsilon(g, CUTOFF_EPSILON).unwrap();
        for (i, r) in g.nodes().enumerate() {
            assert!((d.tau().values()[i] - cutoff_eval(r)).abs() < 1e-15);
        }
    }
}
