//! Sparse multi-index Fourier series on the angular coordinates
//! `(θ1, θ2, θ3)` with radial-profile coefficients.
//!
//! Every function on `Y_alpha` (and on transverse disks) is represented as a
//! finite sum of terms `c(r) · e^{2πi(p·θ1 + q·θ2 + m·θ3)}` with `(p, q, m)`
//! arbitrary-size integers. Angles live on the unit circle `R/Z`; the `2π`
//! sits inside the exponential. Mode indices must admit values such as
//! `10^24` (Liouville witnesses), so they are `BigInt` and the term map is
//! sparse.

mod decay;
mod grid;
pub mod json;
mod profile;
mod series;

pub use decay::{decay_fit, DecayReport, DecayVerdict, NON_DECAY_FLOOR};
pub use grid::RadialGrid;
pub use profile::{
    bump_deriv, bump_eval, cutoff_deriv, cutoff_deriv_with, cutoff_eval, cutoff_eval_with,
    smooth_step, ClosedForm, RadialProfile, BUMP_INNER, BUMP_OUTER, BUMP_PLATEAU, CUTOFF_CENTER,
    CUTOFF_EPSILON,
};
pub use series::{Axis, Coeff, ModeIndex, SparseFourierSeries, DEFAULT_TERM_BUDGET};

/// Helper: robust `BigRational` → `f64` conversion (numerator and denominator
/// may individually overflow `f64`).
pub fn ratio_to_f64(x: &num_rational::BigRational) -> f64 {
    use num_traits::{Signed, ToPrimitive, Zero};
    if x.is_zero() {
        return 0.0;
    }
    let neg = x.is_negative();
    let num = x.numer().abs().into_parts().1;
    let den = x.denom().abs().into_parts().1;
    let shift: i64 = num.bits() as i64 - den.bits() as i64;
    // Scale so the integer quotient carries ~56 significant bits.
    let extra = 56i64;
    let s = extra - shift; // multiply numerator by 2^s (s may be negative)
    let q = if s >= 0 {
        (num << (s as u64)) / den
    } else {
        num / (den << ((-s) as u64))
    };
    let mut v = q.to_f64().unwrap_or(f64::INFINITY);
    // v ≈ |x| * 2^s; undo the scaling in safe chunks.
    let mut e = -s;
    while e > 1000 {
        v *= f64::powi(2.0, 1000);
        e -= 1000;
    }
    while e < -1000 {
        v *= f64::powi(2.0, -1000);
        e += 1000;
    }
    v *= f64::powi(2.0, e as i32);
    if neg {
        -v
    } else {
        v
    }
}

/// Natural log of a positive `BigRational`, accurate to ~1e-14 relative.
pub fn ratio_ln(x: &num_rational::BigRational) -> f64 {
    use num_traits::Signed;
    assert!(x.is_positive(), "ratio_ln needs a positive argument");
    big_ln(&x.numer().abs()) - big_ln(&x.denom().abs())
}

fn big_ln(x: &num_bigint::BigInt) -> f64 {
    use num_traits::ToPrimitive;
    let bits = x.bits();
    if bits <= 52 {
        return x.to_f64().unwrap().ln();
    }
    let top = (x >> (bits - 52)).to_f64().unwrap();
    top.ln() + (bits - 52) as f64 * std::f64::consts::LN_2
}
