//! Small divisors: `|1 - e^{2πinα}|` and the linear divisor `p + αq`.
//!
//! Fractional parts are resolved by escalating the working precision until
//! the distance to the nearest integer is known to relative `TARGET_REL_ERR`
//! (or the precision policy gives out, which is an error, never a silent
//! rounding). For the Liouville slope this routinely means hundreds of exact
//! digits; the factorial tail makes that cheap.

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{AlphaSpec, MAX_WORKING_DIGITS};
use crate::error::{Error, Result};
use crate::fourier::ratio_to_f64;

/// Relative accuracy to which fractional parts are resolved (stronger than
/// the 1e-3 the divisor contract requires, to leave slack for the sine).
pub const TARGET_REL_ERR: f64 = 1e-6;

/// Smallest magnitude representable comfortably in f64 outputs.
const F64_FLOOR: f64 = 1e-280;

const PI: f64 = std::f64::consts::PI;
const TAU: f64 = std::f64::consts::TAU;

/// Resolved fractional part of `n·α`.
#[derive(Clone, Debug)]
pub struct FracDist {
    /// frac(nα) ∈ [0, 1).
    pub frac: f64,
    /// dist(nα, Z) ∈ [0, 1/2], exact rational (up to the certified error).
    pub dist: BigRational,
    pub dist_f64: f64,
    /// Exactly an integer (decidable only for the rational variant).
    pub is_int: bool,
}

pub(crate) fn decimal_digits(n: &BigInt) -> u64 {
    (n.bits() as f64 * std::f64::consts::LOG10_2).ceil() as u64 + 1
}

/// Fractional part of `n·α`, resolved to relative `TARGET_REL_ERR`.
pub fn frac_dist(alpha: &AlphaSpec, n: &BigInt) -> Result<FracDist> {
    if n.is_zero() {
        return Err(Error::argument("frac_dist needs n != 0"));
    }
    if let AlphaSpec::Rational { p, q } = alpha {
        use num_integer::Integer;
        let prod = n * p;
        let rem = prod.mod_floor(q);
        let frac = BigRational::new(rem.clone(), q.clone());
        let dist = half_dist(&frac);
        return Ok(FracDist {
            frac: ratio_to_f64(&frac),
            dist_f64: ratio_to_f64(&dist),
            is_int: rem.is_zero(),
            dist,
        });
    }
    let mut target = decimal_digits(n) + 12;
    loop {
        let ap = alpha.approx(target)?;
        let y = BigRational::from(n.clone()) * &ap.value;
        let floor = y.floor();
        let frac = &y - &floor;
        let dist = half_dist(&frac);
        let total_err = BigRational::from(n.abs()) * &ap.err;
        // accept when the error is a 1e-6 fraction of the distance
        let bound = &dist * BigRational::new(BigInt::from(1), BigInt::from(1_000_000));
        if !dist.is_zero() && total_err <= bound {
            return Ok(FracDist {
                frac: ratio_to_f64(&frac),
                dist_f64: ratio_to_f64(&dist),
                is_int: false,
                dist,
            });
        }
        if target >= MAX_WORKING_DIGITS {
            return Err(Error::precision(
                target,
                format!("frac({n}·α) unresolved at the precision cap"),
            ));
        }
        target = (target * 2).min(MAX_WORKING_DIGITS);
    }
}

fn half_dist(frac: &BigRational) -> BigRational {
    let one_minus = BigRational::from(BigInt::from(1)) - frac;
    if frac <= &one_minus {
        frac.clone()
    } else {
        one_minus
    }
}

/// `|1 - e^{2πinα}| = 2|sin(π·frac(nα))|` with relative error < 1e-3.
pub fn small_divisor(alpha: &AlphaSpec, n: &BigInt, min_digits: Option<u64>) -> Result<f64> {
    if let Some(d) = min_digits {
        // caller-imposed floor on working precision: probe it now so an
        // unsatisfiable policy fails loudly
        alpha.approx(d)?;
    }
    let fd = frac_dist(alpha, n)?;
    if fd.is_int {
        return Ok(0.0);
    }
    let d = fd.dist_f64;
    if d < F64_FLOOR {
        return Err(Error::precision(
            decimal_digits(n) + 300,
            format!("divisor at n={n} underflows f64"),
        ));
    }
    Ok(two_sin_pi(d))
}

/// 2·sin(πd) for d ∈ [0, 1/2], series-expanded near zero.
fn two_sin_pi(d: f64) -> f64 {
    let x = PI * d;
    if x < 1e-4 {
        2.0 * x * (1.0 - x * x / 6.0 + x.powi(4) / 120.0)
    } else {
        2.0 * x.sin()
    }
}

/// The complex divisor `1 - e^{2πinα}` in inverted, polar-safe form.
#[derive(Clone, Debug)]
pub struct RotationDivisor {
    pub is_zero: bool,
    /// |1 - e^{2πinα}|.
    pub modulus: f64,
    /// 1/(1 - e^{2πinα}); meaningless when `is_zero`.
    pub inverse: Complex64,
}

pub fn rotation_divisor(alpha: &AlphaSpec, n: &BigInt) -> Result<RotationDivisor> {
    if n.is_zero() {
        return Ok(RotationDivisor {
            is_zero: true,
            modulus: 0.0,
            inverse: Complex64::new(f64::INFINITY, 0.0),
        });
    }
    let fd = frac_dist(alpha, n)?;
    if fd.is_int {
        return Ok(RotationDivisor {
            is_zero: true,
            modulus: 0.0,
            inverse: Complex64::new(f64::INFINITY, 0.0),
        });
    }
    let d = fd.dist_f64;
    if d < F64_FLOOR {
        return Err(Error::precision(
            decimal_digits(n) + 300,
            format!("rotation divisor at n={n} underflows f64"),
        ));
    }
    let modulus = two_sin_pi(d);
    // 1 - e^{2πiδ} = 2 sin(πδ) e^{i(πδ - π/2)}, δ = frac ∈ (0,1). Keep the
    // phase in terms of dist so it stays accurate for δ near 0 or 1.
    let delta_phase = if fd.frac <= 0.5 {
        PI * d - PI / 2.0
    } else {
        PI / 2.0 - PI * d
    };
    let inverse = Complex64::from_polar(1.0 / modulus, -delta_phase);
    Ok(RotationDivisor {
        is_zero: false,
        modulus,
        inverse,
    })
}

/// The linear divisor `p + αq` with an exact zero test.
#[derive(Clone, Copy, Debug)]
pub struct LinearDivisor {
    pub is_zero: bool,
    pub value: f64,
}

pub fn linear_divisor(alpha: &AlphaSpec, p: &BigInt, q: &BigInt) -> Result<LinearDivisor> {
    if q.is_zero() {
        let v = p.to_f64().unwrap_or(f64::INFINITY);
        return Ok(LinearDivisor {
            is_zero: p.is_zero(),
            value: v,
        });
    }
    if let AlphaSpec::Rational { p: pa, q: qa } = alpha {
        // p + q·pa/qa = (p·qa + q·pa)/qa
        let num = p * qa + q * pa;
        if num.is_zero() {
            return Ok(LinearDivisor {
                is_zero: true,
                value: 0.0,
            });
        }
        let v = ratio_to_f64(&BigRational::new(num, qa.clone()));
        return Ok(LinearDivisor {
            is_zero: false,
            value: v,
        });
    }
    let mut target = decimal_digits(q) + 12;
    loop {
        let ap = alpha.approx(target)?;
        let v = BigRational::from(p.clone()) + BigRational::from(q.clone()) * &ap.value;
        let err = BigRational::from(q.abs()) * &ap.err;
        let bound = v.abs() * BigRational::new(BigInt::from(1), BigInt::from(1_000_000_000));
        if !v.is_zero() && err <= bound {
            let value = ratio_to_f64(&v);
            if value.abs() < F64_FLOOR {
                return Err(Error::precision(
                    target + 300,
                    format!("divisor {p} + α·{q} underflows f64"),
                ));
            }
            return Ok(LinearDivisor {
                is_zero: false,
                value,
            });
        }
        if target >= MAX_WORKING_DIGITS {
            return Err(Error::precision(
                target,
                format!("divisor {p} + α·{q} unresolved at the precision cap"),
            ));
        }
        target = (target * 2).min(MAX_WORKING_DIGITS);
    }
}

/// α with a memoized divisor table; the workhorse handle the foliated
/// calculus carries around.
#[derive(Debug)]
pub struct AlphaArith {
    spec: AlphaSpec,
    alpha_f64: f64,
    cache: Mutex<HashMap<(BigInt, BigInt), LinearDivisor>>,
}

impl AlphaArith {
    pub fn new(spec: AlphaSpec) -> Result<Self> {
        let alpha_f64 = spec.to_f64()?;
        Ok(AlphaArith {
            spec,
            alpha_f64,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn spec(&self) -> &AlphaSpec {
        &self.spec
    }

    pub fn alpha_f64(&self) -> f64 {
        self.alpha_f64
    }

    pub fn divisor(&self, p: &BigInt, q: &BigInt) -> Result<LinearDivisor> {
        if let Some(d) = self
            .cache
            .lock()
            .unwrap()
            .get(&(p.clone(), q.clone()))
            .copied()
        {
            return Ok(d);
        }
        let d = linear_divisor(&self.spec, p, q)?;
        self.cache
            .lock()
            .unwrap()
            .insert((p.clone(), q.clone()), d);
        Ok(d)
    }

    /// Multiplier of the mode `(p,q,·)` under `X_Hα = ∂θ1 + α·∂θ2`:
    /// exactly zero on the resonant lattice, `2πi(p + αq)` otherwise.
    pub fn x1_multiplier(&self, p: &BigInt, q: &BigInt) -> Result<Complex64> {
        let d = self.divisor(p, q)?;
        if d.is_zero {
            Ok(Complex64::new(0.0, 0.0))
        } else {
            Ok(Complex64::new(0.0, TAU * d.value))
        }
    }

    pub fn resonant(&self, p: &BigInt, q: &BigInt) -> Result<bool> {
        Ok(self.divisor(p, q)?.is_zero)
    }
}
