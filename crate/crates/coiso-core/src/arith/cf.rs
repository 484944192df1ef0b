//! Continued fractions and convergents.
//!
//! Rational slopes expand by the Euclidean algorithm and terminate. All
//! other variants run an interval version of the standard algorithm: the
//! slope is bracketed by exact rationals `[v - e, v + e]` and a partial
//! quotient is emitted only when the whole bracket agrees on the floor,
//! escalating the working precision otherwise. The Liouville constant's
//! partial quotients grow super-exponentially, which is exactly why the
//! brackets are exact big rationals and not floats.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{AlphaSpec, MAX_WORKING_DIGITS};
use crate::error::{Error, Result};

/// One rational approximant `p/q` (always in lowest terms, q ≥ 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Convergent {
    pub p: BigInt,
    pub q: BigInt,
    pub index: usize,
}

/// Partial quotients `a_0, a_1, ...` of α, at most `depth` of them.
///
/// Terminates early (with fewer than `depth` quotients) iff α is rational.
pub fn continued_fraction(alpha: &AlphaSpec, depth: usize) -> Result<Vec<BigInt>> {
    if depth < 1 {
        return Err(Error::argument("continued fraction depth must be ≥ 1"));
    }
    if let AlphaSpec::Rational { p, q } = alpha {
        return Ok(rational_cf(p, q, depth));
    }
    let mut target: u64 = match alpha {
        // a decimal can never exceed its stated precision; start there
        AlphaSpec::Decimal { precision, .. } => (*precision as u64).clamp(1, 64),
        _ => 64,
    };
    'escalate: loop {
        let ap = alpha.approx(target)?;
        let mut lo = &ap.value - &ap.err;
        let mut hi = &ap.value + &ap.err;
        let mut out: Vec<BigInt> = Vec::with_capacity(depth);
        for _ in 0..depth {
            let f_lo = lo.floor().to_integer();
            let f_hi = hi.floor().to_integer();
            if f_lo != f_hi {
                if target >= MAX_WORKING_DIGITS {
                    return Err(Error::precision(
                        target,
                        "partial quotient unresolved at the precision cap",
                    ));
                }
                target = (target * 2).min(MAX_WORKING_DIGITS);
                continue 'escalate;
            }
            out.push(f_lo.clone());
            let frac_lo = &lo - BigRational::from(f_lo.clone());
            let frac_hi = &hi - BigRational::from(f_lo);
            if frac_lo.is_zero() || frac_lo.is_negative() {
                // the bracket touches a rational endpoint: not resolvable
                if target >= MAX_WORKING_DIGITS {
                    return Err(Error::precision(
                        target,
                        "partial quotient unresolved at the precision cap",
                    ));
                }
                target = (target * 2).min(MAX_WORKING_DIGITS);
                continue 'escalate;
            }
            // reciprocal flips the bracket
            lo = frac_hi.recip();
            hi = frac_lo.recip();
        }
        return Ok(out);
    }
}

fn rational_cf(p: &BigInt, q: &BigInt, depth: usize) -> Vec<BigInt> {
    let mut x = BigRational::new(p.clone(), q.clone());
    let mut out = Vec::new();
    for _ in 0..depth {
        let a = x.floor().to_integer();
        let frac = &x - BigRational::from(a.clone());
        out.push(a);
        if frac.is_zero() {
            break;
        }
        x = frac.recip();
    }
    out
}

/// Convergents `p_n/q_n` via the standard three-term recurrence.
pub fn convergents(alpha: &AlphaSpec, depth: usize) -> Result<Vec<Convergent>> {
    let quotients = continued_fraction(alpha, depth)?;
    let mut out = Vec::with_capacity(quotients.len());
    let mut p_prev = BigInt::one();
    let mut p_prev2 = BigInt::zero();
    let mut q_prev = BigInt::zero();
    let mut q_prev2 = BigInt::one();
    for (i, a) in quotients.iter().enumerate() {
        let p = a * &p_prev + &p_prev2;
        let q = a * &q_prev + &q_prev2;
        out.push(Convergent {
            p: p.clone(),
            q: q.clone(),
            index: i,
        });
        p_prev2 = std::mem::replace(&mut p_prev, p);
        q_prev2 = std::mem::replace(&mut q_prev, q);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{liouville_constant, liouville_partial_sum};
    use num_integer::Integer;

    #[test]
    fn rational_22_over_7() {
        let a = AlphaSpec::rational(22, 7).unwrap();
        let cf = continued_fraction(&a, 10).unwrap();
        assert_eq!(cf, vec![BigInt::from(3), BigInt::from(7)]);
        let a = AlphaSpec::rational(2, 3).unwrap();
        let cs = convergents(&a, 10).unwrap();
        let last = cs.last().unwrap();
        assert_eq!((last.p.clone(), last.q.clone()), (BigInt::from(2), BigInt::from(3)));
    }

    #[test]
    fn golden_ratio_all_ones() {
        let a = AlphaSpec::quadratic(1, 5, 2).unwrap(); // (1+√5)/2
        let cf = continued_fraction(&a, 12).unwrap();
        assert!(cf.iter().all(|x| *x == BigInt::one()), "cf = {cf:?}");
    }

    #[test]
    fn golden_minus_one_fibonacci_denominators() {
        let a = AlphaSpec::quadratic(-1, 5, 2).unwrap(); // (√5-1)/2
        let cs = convergents(&a, 7).unwrap();
        let qs: Vec<i64> = cs.iter().map(|c| i64::try_from(&c.q).unwrap()).collect();
        assert_eq!(qs, vec![1, 1, 2, 3, 5, 8, 13]);
    }

    #[test]
    fn decimal_cf_names_required_digits() {
        let a = AlphaSpec::decimal("0.61").unwrap();
        match continued_fraction(&a, 12) {
            Err(crate::error::Error::Precision { needed_digits, .. }) => {
                assert!(needed_digits > 2, "needs more digits than stated")
            }
            other => panic!("expected a precision error, got {other:?}"),
        }
        // with enough digits the same request succeeds
        let b = AlphaSpec::decimal("0.6180339887498948482045868343").unwrap();
        assert_eq!(continued_fraction(&b, 12).unwrap().len(), 12);
    }

    #[test]
    fn liouville_quotients_blow_up() {
        let a = liouville_constant(10, 4).unwrap();
        let cf = continued_fraction(&a, 8).unwrap();
        // super-exponential growth: some quotient beyond the first few must
        // exceed 10^10
        let huge = BigInt::from(10u64.pow(10));
        assert!(
            cf.iter().any(|x| x.abs() > huge),
            "expected a huge partial quotient, got {cf:?}"
        );
    }

    #[test]
    fn liouville_convergents_contain_partial_sums() {
        let a = liouville_constant(10, 4).unwrap();
        let cs = convergents(&a, 10).unwrap();
        let ten = BigInt::from(10);
        // S_1 = 1/10 is beaten by 1/9 and is not a convergent; from n = 2 on
        // the tail bound 10^{-(n+1)!} < 1/(2 q_n^2) makes every partial sum
        // a convergent.
        for n in 2..=3u64 {
            let s = liouville_partial_sum(&ten, n);
            let found = cs
                .iter()
                .any(|c| BigRational::new(c.p.clone(), c.q.clone()) == s);
            assert!(found, "partial sum {n} must appear as a convergent");
        }
        // tail bound: |α - Σ_{m≤n}10^{-m!}| < 10^{-(n+1)!+1}
        let ap = a.approx(200).unwrap();
        for n in 1..=4u64 {
            let s = liouville_partial_sum(&ten, n);
            let diff = (&ap.value - &s).abs() + &ap.err;
            let fact: u64 = (1..=n + 1).product();
            let bound = BigRational::new(
                BigInt::from(10),
                BigInt::from(10).pow(fact as u32),
            );
            assert!(diff < bound, "tail bound at n={n}");
        }
    }

    #[test]
    fn convergents_quality_and_alternation() {
        let a = AlphaSpec::quadratic(-1, 5, 2).unwrap();
        let cs = convergents(&a, 15).unwrap();
        let ap = a.approx(80).unwrap();
        for w in cs.windows(2) {
            let c = &w[0];
            let next = &w[1];
            let x = BigRational::new(c.p.clone(), c.q.clone());
            let diff = &ap.value - &x;
            // |α - p_n/q_n| < 1/(q_n q_{n+1})
            let bound = BigRational::new(BigInt::one(), &c.q * &next.q);
            assert!(diff.abs() < bound, "quality at index {}", c.index);
            // alternation: signs of consecutive differences flip
            let x2 = BigRational::new(next.p.clone(), next.q.clone());
            let diff2 = &ap.value - &x2;
            if !diff2.is_zero() {
                assert!(
                    diff.is_positive() != diff2.is_positive(),
                    "alternation at index {}",
                    c.index
                );
            }
            // |α - p/q| < 1/q^2 and gcd = 1
            let sq = BigRational::new(BigInt::one(), &c.q * &c.q);
            assert!(diff.abs() < sq);
            assert!(c.p.gcd(&c.q).is_one());
        }
        // denominators strictly increase from index 1 on
        for w in cs.windows(2).skip(1) {
            assert!(w[1].q > w[0].q);
        }
    }
}
