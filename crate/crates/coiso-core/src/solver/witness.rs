//! The obstruction witnesses of the rational and Liouville cases.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

use crate::arith::{liouville_partial_sum, AlphaArith, AlphaSpec};
use crate::error::{Error, Result};
use crate::foliation::{d_f1, FoliatedForm};
use crate::linfty::GradedElement;
use crate::fourier::{
    decay_fit, ratio_to_f64, Axis, ClosedForm, Coeff, DecayVerdict, ModeIndex, RadialGrid,
    RadialProfile, SparseFourierSeries,
};

/// How a witness was built.
#[derive(Clone, Debug)]
pub enum WitnessTag {
    Rational { p: i64, q: i64 },
    Liouville { convergents: Vec<(BigInt, BigInt)> },
}

/// A `d_F`-closed degree-1 form engineered to have a nontrivial first
/// obstruction class.
#[derive(Clone, Debug)]
pub struct Witness {
    pub gamma: FoliatedForm,
    pub tag: WitnessTag,
}

impl Witness {
    pub fn f_component(&self) -> &SparseFourierSeries {
        self.gamma.as_one().expect("witnesses are 1-forms").0
    }
}

/// Rational-slope witness for α = p/q:
/// `Γ = ρ(r)·sin(2πqθ1)·X*_Hα + ρ(r)·X*_H3`
/// (identically `r·sin(2πqθ1)X*_Hα + r·X*_H3` on the middle band).
pub fn witness_rational(p: i64, q: i64, grid: RadialGrid) -> Result<Witness> {
    if q < 1 {
        return Err(Error::argument("rational witness needs q ≥ 1"));
    }
    if BigInt::from(p).gcd(&BigInt::from(q)) != BigInt::one() {
        return Err(Error::argument("p/q must be in lowest terms"));
    }
    let rho = RadialProfile::from_form(&grid, ClosedForm::Bump);
    let f = SparseFourierSeries::sin_mode(grid, Axis::Theta1, q, 1.0, rho.clone());
    let g = SparseFourierSeries::harmonic(grid, ModeIndex::zero(), Complex64::new(1.0, 0.0), rho);
    let gamma = FoliatedForm::one(f, g)?;
    let arith = AlphaArith::new(AlphaSpec::rational(p, q)?)?;
    let closed = d_f1(&gamma, &arith)?.norm();
    debug_assert!(closed <= 1e-12, "witness not closed: {closed}");
    if closed > 1e-12 {
        return Err(Error::NotClosed { residual: closed });
    }
    Ok(Witness {
        gamma,
        tag: WitnessTag::Rational { p, q },
    })
}

/// Liouville witness: a smooth angular series `F` supported at the
/// convergent denominators `q_n = base^{n!}`, with the factorially small
/// coefficients `F_{q_n} = p_n - q_n·α` (exact big-rational tails), times
/// the bump:
/// `f = ρ(r)·F(θ1), g = ρ(r)·r`.
///
/// `F` is smooth precisely because α is Liouville; the first obstruction
/// divides those coefficients by divisors of the same size and diverges.
pub fn witness_liouville(alpha: &AlphaSpec, n_max: u64, grid: RadialGrid) -> Result<Witness> {
    let (base, _) = match alpha {
        AlphaSpec::Liouville { base, terms } => (*base, *terms),
        _ => {
            return Err(Error::argument(
                "the Liouville witness needs the Liouville series slope",
            ))
        }
    };
    if n_max < 2 {
        return Err(Error::argument("need at least two convergents (n_max ≥ 2)"));
    }
    let base_big = BigInt::from(base);
    let rho = RadialProfile::from_form(&grid, ClosedForm::Bump);
    let mut f = SparseFourierSeries::zero(grid);
    let mut convergents = Vec::new();
    for n in 1..=n_max {
        let fact: u64 = (1..=n).product();
        let next_facts: u64 = fact * (n + 1);
        if next_facts as f64 * (base as f64).log10() > 280.0 {
            return Err(Error::precision(
                next_facts,
                format!("witness coefficient at n = {n} underflows f64"),
            ));
        }
        let qn = num_traits::Pow::pow(base_big.clone(), fact as u32);
        let sn = liouville_partial_sum(&base_big, n);
        let pn = (&sn * BigRational::from(qn.clone())).to_integer();
        // F_{q_n} = p_n - q_n·α = -q_n·(tail beyond n); three extra exact
        // terms leave a relative error ~ base^{-(n+4)!}
        let tail = liouville_partial_sum(&base_big, n + 3) - &sn;
        let coeff = -ratio_to_f64(&(BigRational::from(qn.clone()) * tail));
        let idx = ModeIndex::from_bigs(qn.clone(), BigInt::from(0), BigInt::from(0));
        f.add_term(
            idx.neg(),
            Coeff::separable(Complex64::new(coeff, 0.0), rho.clone()),
        );
        f.add_term(idx, Coeff::separable(Complex64::new(coeff, 0.0), rho.clone()));
        convergents.push((pn, qn));
    }
    // g = ρ(r)·r
    let rho_r =
        RadialProfile::from_values(grid.nodes().map(|r| r * crate::fourier::bump_eval(r)).collect())?;
    let g = SparseFourierSeries::harmonic(grid, ModeIndex::zero(), Complex64::new(1.0, 0.0), rho_r);
    let gamma = FoliatedForm::one(f, g)?;

    let arith = AlphaArith::new(alpha.clone())?;
    let closed = d_f1(&gamma, &arith)?.norm();
    if closed > 1e-12 {
        return Err(Error::NotClosed { residual: closed });
    }
    // the witness is smooth because α is Liouville: its angular series
    // passes the rapid-decay check whenever there are enough modes to fit
    let (f_ref, _) = gamma.as_one().expect("1-form");
    let decay = decay_fit(f_ref, Axis::Theta1);
    match decay.verdict {
        DecayVerdict::RapidDecay | DecayVerdict::Inconclusive => {}
        other => {
            return Err(Error::argument(format!(
                "liouville witness failed its smoothness check: {other:?}"
            )))
        }
    }
    Ok(Witness {
        gamma,
        tag: WitnessTag::Liouville { convergents },
    })
}
