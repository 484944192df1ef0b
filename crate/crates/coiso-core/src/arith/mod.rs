//! Exact and high-precision arithmetic for the slope α.
//!
//! Everything small-divisor-sensitive funnels through [`AlphaSpec::approx`],
//! which returns a rational approximant together with a rigorous error
//! bound, at a working precision chosen per call. Callers escalate the
//! precision until the quantity they need (a fractional part, a divisor) is
//! resolved to the required relative accuracy, and refuse — with a
//! [`crate::Error::Precision`] naming the digit count — rather than round
//! silently.

mod cf;
mod classify;
mod divisor;

pub use cf::{continued_fraction, convergents, Convergent};
pub use classify::{classify, ClassTag, Classification, DEFAULT_K_MAX};
pub use divisor::{
    frac_dist, linear_divisor, rotation_divisor, small_divisor, AlphaArith, FracDist,
    LinearDivisor, RotationDivisor, TARGET_REL_ERR,
};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Hard cap on working precision (decimal digits) for escalation loops.
pub const MAX_WORKING_DIGITS: u64 = 200_000;

/// Exact representation of the slope α.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlphaSpec {
    /// p/q in lowest terms, q > 0.
    Rational { p: BigInt, q: BigInt },
    /// (a + √b)/c with b > 0 non-square, c ≠ 0.
    Quadratic { a: BigInt, b: BigInt, c: BigInt },
    /// Liouville's series Σ_{i≥1} base^{-i!}; `terms` records how many
    /// partial sums the constructor pinned (arithmetic extends on demand).
    Liouville { base: u32, terms: u32 },
    /// A plain decimal with its stated precision (fraction digit count).
    Decimal { digits: String, precision: usize },
}

/// Rational approximant with a rigorous error bound: |α - value| ≤ err.
#[derive(Clone, Debug)]
pub struct Approx {
    pub value: BigRational,
    pub err: BigRational,
}

fn pow10(digits: u64) -> BigInt {
    BigInt::from(10u32).pow(digits as u32)
}

impl AlphaSpec {
    pub fn rational(p: i64, q: i64) -> Result<Self> {
        Self::rational_big(BigInt::from(p), BigInt::from(q))
    }

    pub fn rational_big(p: BigInt, q: BigInt) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::argument("rational slope needs q != 0"));
        }
        let (mut p, mut q) = if q.is_negative() { (-p, -q) } else { (p, q) };
        let g = p.gcd(&q);
        if !g.is_one() {
            p = &p / &g;
            q = &q / &g;
        }
        Ok(AlphaSpec::Rational { p, q })
    }

    pub fn quadratic(a: i64, b: i64, c: i64) -> Result<Self> {
        if b <= 0 {
            return Err(Error::argument("quadratic slope needs b > 0"));
        }
        if c == 0 {
            return Err(Error::argument("quadratic slope needs c != 0"));
        }
        let bb = BigInt::from(b);
        let root = bb.sqrt();
        if &root * &root == bb {
            return Err(Error::argument(format!(
                "b = {b} is a perfect square; use the rational variant"
            )));
        }
        Ok(AlphaSpec::Quadratic {
            a: BigInt::from(a),
            b: bb,
            c: BigInt::from(c),
        })
    }

    pub fn decimal(digits: &str) -> Result<Self> {
        let trimmed = digits.trim();
        let body = trimmed.strip_prefix('-').unwrap_or(trimmed);
        let mut parts = body.splitn(2, '.');
        let int_part = parts.next().unwrap_or("");
        let frac_part = parts.next().unwrap_or("");
        if int_part.is_empty() && frac_part.is_empty()
            || !int_part.chars().all(|c| c.is_ascii_digit())
            || !frac_part.chars().all(|c| c.is_ascii_digit())
        {
            return Err(Error::argument(format!("malformed decimal '{digits}'")));
        }
        Ok(AlphaSpec::Decimal {
            digits: trimmed.to_string(),
            precision: frac_part.len(),
        })
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, AlphaSpec::Rational { .. })
    }

    /// Rational approximant with |α - value| ≤ err ≤ 10^{-digits}.
    pub fn approx(&self, digits: u64) -> Result<Approx> {
        if digits > MAX_WORKING_DIGITS {
            return Err(Error::precision(digits, "working precision cap exceeded"));
        }
        match self {
            AlphaSpec::Rational { p, q } => Ok(Approx {
                value: BigRational::new(p.clone(), q.clone()),
                err: BigRational::zero(),
            }),
            AlphaSpec::Quadratic { a, b, c } => {
                let s = digits + 2;
                let scale = pow10(s);
                let t = (b * &scale * &scale).sqrt();
                // t/scale ≤ √b < (t+1)/scale
                let root = BigRational::new(t, scale.clone());
                let value = (BigRational::from(a.clone()) + root)
                    / BigRational::from(c.clone());
                let err = BigRational::new(BigInt::one(), scale * c.abs());
                Ok(Approx { value, err })
            }
            AlphaSpec::Liouville { base, .. } => {
                let base_big = BigInt::from(*base);
                let ln10_over_lnb = std::f64::consts::LN_10 / (*base as f64).ln();
                // Smallest M with (M+1)! ≥ (digits+1)·log_base(10).
                let needed = ((digits + 1) as f64 * ln10_over_lnb).ceil() as u64 + 1;
                let mut m = 1u64;
                let mut fact = 2u64; // (m+1)!
                while fact < needed {
                    m += 1;
                    fact = fact.saturating_mul(m + 1);
                }
                let value = liouville_partial_sum(&base_big, m);
                // tail < 2·base^{-(m+1)!} ≤ 10^{-(digits+1)}·2 ≤ 10^{-digits}
                let err = BigRational::new(BigInt::one(), pow10(digits));
                Ok(Approx { value, err })
            }
            AlphaSpec::Decimal { digits: d, precision } => {
                if (*precision as u64) < digits {
                    return Err(Error::precision(
                        digits,
                        format!("decimal carries only {precision} fraction digits"),
                    ));
                }
                Ok(Approx {
                    value: parse_decimal(d)?,
                    err: BigRational::new(BigInt::one(), pow10(*precision as u64)),
                })
            }
        }
    }

    /// f64 view of α (never used where exactness matters).
    pub fn to_f64(&self) -> Result<f64> {
        Ok(crate::fourier::ratio_to_f64(&self.approx(30)?.value))
    }

    /// Tagged JSON object, e.g. `{"kind":"liouville","base":10,"terms":3}`.
    pub fn to_json(&self) -> Value {
        match self {
            AlphaSpec::Rational { p, q } => json!({
                "kind": "rational",
                "p": big_to_number(p),
                "q": big_to_number(q),
            }),
            AlphaSpec::Quadratic { a, b, c } => json!({
                "kind": "quadratic",
                "a": big_to_number(a),
                "b": big_to_number(b),
                "c": big_to_number(c),
            }),
            AlphaSpec::Liouville { base, terms } => json!({
                "kind": "liouville",
                "base": base,
                "terms": terms,
            }),
            AlphaSpec::Decimal { digits, precision } => json!({
                "kind": "decimal",
                "digits": digits,
                "precision": precision,
            }),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let kind = v
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::argument("alpha spec needs a 'kind' field"))?;
        match kind {
            "rational" => {
                Self::rational_big(number_to_big(v, "p")?, number_to_big(v, "q")?)
            }
            "quadratic" => {
                let a = number_to_big(v, "a")?;
                let b = number_to_big(v, "b")?;
                let c = number_to_big(v, "c")?;
                let root = b.sqrt();
                if b.is_negative() || &root * &root == b {
                    return Err(Error::argument("quadratic slope needs non-square b > 0"));
                }
                if c.is_zero() {
                    return Err(Error::argument("quadratic slope needs c != 0"));
                }
                Ok(AlphaSpec::Quadratic { a, b, c })
            }
            "liouville" => {
                let base = v.get("base").and_then(Value::as_u64).unwrap_or(0) as u32;
                let terms = v.get("terms").and_then(Value::as_u64).unwrap_or(0) as u32;
                liouville_constant(base, terms)
            }
            "decimal" => Self::decimal(
                v.get("digits")
                    .and_then(Value::as_str)
                    .ok_or_else(|| Error::argument("decimal spec needs 'digits'"))?,
            ),
            other => Err(Error::argument(format!("unknown alpha kind '{other}'"))),
        }
    }
}

impl std::fmt::Display for AlphaSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AlphaSpec::Rational { p, q } => write!(f, "{p}/{q}"),
            AlphaSpec::Quadratic { a, b, c } => write!(f, "({a}+sqrt({b}))/{c}"),
            AlphaSpec::Liouville { base, terms } => {
                write!(f, "liouville(base={base}, terms={terms})")
            }
            AlphaSpec::Decimal { digits, .. } => write!(f, "{digits}"),
        }
    }
}

pub(crate) fn big_to_number(x: &BigInt) -> Value {
    let n: serde_json::Number = serde_json::from_str(&x.to_string())
        .expect("integer string is a valid JSON number");
    Value::Number(n)
}

fn number_to_big(v: &Value, key: &str) -> Result<BigInt> {
    let n = v
        .get(key)
        .ok_or_else(|| Error::argument(format!("missing field '{key}'")))?;
    match n {
        Value::Number(num) => num
            .to_string()
            .parse::<BigInt>()
            .map_err(|_| Error::argument(format!("field '{key}' is not an integer"))),
        Value::String(s) => s
            .parse::<BigInt>()
            .map_err(|_| Error::argument(format!("field '{key}' is not an integer"))),
        _ => Err(Error::argument(format!("field '{key}' is not an integer"))),
    }
}

fn parse_decimal(s: &str) -> Result<BigRational> {
    let neg = s.starts_with('-');
    let body = s.strip_prefix('-').unwrap_or(s);
    let mut parts = body.splitn(2, '.');
    let int_part = parts.next().unwrap_or("0");
    let frac_part = parts.next().unwrap_or("");
    let int_val: BigInt = if int_part.is_empty() {
        BigInt::zero()
    } else {
        int_part
            .parse()
            .map_err(|_| Error::argument(format!("malformed decimal '{s}'")))?
    };
    let frac_val: BigInt = if frac_part.is_empty() {
        BigInt::zero()
    } else {
        frac_part
            .parse()
            .map_err(|_| Error::argument(format!("malformed decimal '{s}'")))?
    };
    let den = pow10(frac_part.len() as u64);
    let mut v = BigRational::from(int_val) + BigRational::new(frac_val, den);
    if neg {
        v = -v;
    }
    Ok(v)
}

/// Exact partial sum Σ_{m=1..k} base^{-m!}.
pub fn liouville_partial_sum(base: &BigInt, k: u64) -> BigRational {
    let mut acc = BigRational::zero();
    let mut fact = 1u64;
    for m in 1..=k {
        fact *= m;
        acc += BigRational::new(
            BigInt::one(),
            num_traits::Pow::pow(base.clone(), fact as u32),
        );
    }
    acc
}

/// The canonical Liouville witness Σ_{i≥1} base^{-i!}.
pub fn liouville_constant(base: u32, terms: u32) -> Result<AlphaSpec> {
    if base < 2 {
        return Err(Error::argument("liouville base must be ≥ 2"));
    }
    if terms < 1 {
        return Err(Error::argument("liouville series needs ≥ 1 term"));
    }
    Ok(AlphaSpec::Liouville { base, terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::ratio_to_f64;

    #[test]
    fn rational_normalizes() {
        let a = AlphaSpec::rational(4, 6).unwrap();
        assert_eq!(a, AlphaSpec::rational(2, 3).unwrap());
        let b = AlphaSpec::rational(1, -2).unwrap();
        assert_eq!(b, AlphaSpec::rational(-1, 2).unwrap());
        assert!(AlphaSpec::rational(1, 0).is_err());
    }

    #[test]
    fn quadratic_rejects_squares() {
        assert!(AlphaSpec::quadratic(1, 4, 2).is_err());
        assert!(AlphaSpec::quadratic(1, 5, 0).is_err());
        assert!(AlphaSpec::quadratic(1, -5, 2).is_err());
        let golden = AlphaSpec::quadratic(1, 5, 2).unwrap();
        let v = golden.to_f64().unwrap();
        assert!((v - 1.618_033_988_749_895).abs() < 1e-12);
    }

    #[test]
    fn quadratic_approx_error_bound() {
        let a = AlphaSpec::quadratic(-1, 5, 2).unwrap(); // (√5-1)/2
        let ap = a.approx(40).unwrap();
        let exact = 0.618_033_988_749_894_8_f64;
        assert!((ratio_to_f64(&ap.value) - exact).abs() < 1e-12);
        assert!(ratio_to_f64(&ap.err) <= 1e-40 * 1.01);
    }

    #[test]
    fn liouville_partial_sums() {
        let ten = BigInt::from(10);
        // 10^{-1} + 10^{-2} + 10^{-6} = 0.110001
        let s3 = liouville_partial_sum(&ten, 3);
        assert_eq!(
            s3,
            BigRational::new(BigInt::from(110_001), BigInt::from(1_000_000))
        );
        let s1 = liouville_partial_sum(&ten, 1);
        assert_eq!(s1, BigRational::new(BigInt::from(1), BigInt::from(10)));
        // base 2: 1/2 + 1/4 + 1/64 = 49/64
        let s = liouville_partial_sum(&BigInt::from(2), 3);
        assert_eq!(s, BigRational::new(BigInt::from(49), BigInt::from(64)));
    }

    #[test]
    fn liouville_approx_has_bounded_tail() {
        let a = liouville_constant(10, 3).unwrap();
        let ap = a.approx(30).unwrap();
        // the true value lies above the 5-term partial sum
        let s5 = liouville_partial_sum(&BigInt::from(10), 5);
        let diff = &s5 - &ap.value;
        assert!(diff.abs() <= ap.err, "tail bound must dominate");
    }

    #[test]
    fn decimal_precision_refusal() {
        let d = AlphaSpec::decimal("0.6180").unwrap();
        assert!(d.approx(4).is_ok());
        match d.approx(10) {
            Err(Error::Precision { needed_digits, .. }) => assert_eq!(needed_digits, 10),
            other => panic!("expected precision error, got {other:?}"),
        }
        assert!(AlphaSpec::decimal("abc").is_err());
    }

    #[test]
    fn json_round_trip() {
        for a in [
            AlphaSpec::rational(22, 7).unwrap(),
            AlphaSpec::quadratic(1, 5, 2).unwrap(),
            liouville_constant(10, 3).unwrap(),
            AlphaSpec::decimal("0.618033").unwrap(),
        ] {
            let j = a.to_json();
            let back = AlphaSpec::from_json(&j).unwrap();
            assert_eq!(a, back, "round trip through {j}");
        }
        let j = liouville_constant(10, 3).unwrap().to_json();
        assert_eq!(j["kind"], "liouville");
        assert_eq!(j["base"], 10);
        assert_eq!(j["terms"], 3);
    }
}
