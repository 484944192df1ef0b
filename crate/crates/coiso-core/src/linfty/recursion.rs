//! Operator composition, coherence checks, and the order-by-order
//! Maurer-Cartan recursion.

use super::sign::{antisymmetric_koszul_sign, unshuffles, DegreeVector};
use super::GradedElement;
use crate::error::{Error, Result};

/// A graded multilinear operator of fixed arity and degree, boxed so
/// composites can be built at runtime.
pub struct Operator<'a, E> {
    arity: usize,
    degree: i64,
    eval: Box<dyn Fn(&[&E]) -> E + 'a>,
}

impl<'a, E: GradedElement> Operator<'a, E> {
    pub fn new(arity: usize, degree: i64, eval: impl Fn(&[&E]) -> E + 'a) -> Self {
        Operator {
            arity,
            degree,
            eval: Box::new(eval),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn apply(&self, args: &[&E]) -> Result<E> {
        if args.len() != self.arity {
            return Err(Error::argument(format!(
                "operator of arity {} applied to {} arguments",
                self.arity,
                args.len()
            )));
        }
        Ok((self.eval)(args))
    }
}

/// Graded composition
/// `(μ∘ν)(v_1, ..., v_{j+k-1}) =
///   Σ_{σ ∈ S_{j,k-1}} (-1)^{deg ν} χ(σ) μ(ν(v_{σ(1)},...,v_{σ(j)}), v_{σ(j+1)}, ...)`.
pub fn compose<'a, E: GradedElement>(
    mu: &'a Operator<'a, E>,
    nu: &'a Operator<'a, E>,
) -> Operator<'a, E> {
    let k = mu.arity;
    let j = nu.arity;
    let arity = j + k - 1;
    let degree = mu.degree + nu.degree;
    let nu_sign = if nu.degree.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    Operator::new(arity, degree, move |args: &[&E]| {
        let degrees =
            DegreeVector::new(args.iter().map(|a| a.degree()).collect()).expect("nonempty args");
        let mut acc: Option<E> = None;
        for sigma in unshuffles(j, k - 1).expect("valid arities") {
            let chi = antisymmetric_koszul_sign(&sigma, &degrees).expect("lengths match") as f64;
            let permuted: Vec<&E> = sigma.images().iter().map(|&i| args[i]).collect();
            let inner = (nu.eval)(&permuted[..j]);
            let mut outer_args: Vec<&E> = Vec::with_capacity(k);
            outer_args.push(&inner);
            outer_args.extend_from_slice(&permuted[j..]);
            let term = (mu.eval)(&outer_args);
            let c = nu_sign * chi;
            acc = Some(match acc {
                None => term.scale(c),
                Some(a) => a.add_scaled(&term, c),
            });
        }
        acc.expect("at least one unshuffle")
    })
}

/// An arity-indexed family `k ↦ l_k` of graded anti-commutative operators,
/// `l_k` of degree `2-k`, flat (`l_0 = 0`).
pub trait OperatorFamily {
    type Elt: GradedElement;

    /// Evaluate `l_k`; `args.len() == k`. Families return a zero element of
    /// the appropriate degree when `l_k` vanishes identically.
    fn bracket(&self, k: usize, args: &[&Self::Elt]) -> Self::Elt;

    /// Largest arity with a possibly nonzero operator.
    fn max_arity(&self) -> usize;

    fn operator(&self, k: usize) -> Operator<'_, Self::Elt> {
        Operator::new(k, 2 - k as i64, move |args: &[&Self::Elt]| {
            self.bracket(k, args)
        })
    }
}

/// Largest residual of `Σ_{i+j=n} l_i ∘ l_j` over the probe tuples.
///
/// Each probe must supply `n-1` elements (the arity of every composite in
/// the sum). The first relations are `l_1∘l_1 = 0` (n = 2, a differential)
/// and `l_1∘l_2 + l_2∘l_1 = 0` (n = 3, the Leibniz rule).
pub fn check_coherence<F: OperatorFamily>(
    family: &F,
    n: usize,
    probes: &[Vec<F::Elt>],
) -> Result<f64> {
    if n < 2 {
        return Err(Error::argument("coherence relations start at n = 2"));
    }
    let arity = n - 1;
    let mut worst = 0.0f64;
    for (pi, probe) in probes.iter().enumerate() {
        if probe.len() != arity {
            return Err(Error::argument(format!(
                "probe {pi} supplies {} elements, relation n={n} needs {arity}",
                probe.len()
            )));
        }
        let refs: Vec<&F::Elt> = probe.iter().collect();
        let mut acc: Option<F::Elt> = None;
        for i in 1..n {
            let j = n - i;
            if i > family.max_arity() || j > family.max_arity() {
                continue;
            }
            let op_i = family.operator(i);
            let op_j = family.operator(j);
            let comp = compose(&op_i, &op_j);
            let term = comp.apply(&refs)?;
            acc = Some(match acc {
                None => term,
                Some(a) => a.add_scaled(&term, 1.0),
            });
        }
        if let Some(v) = acc {
            worst = worst.max(v.norm());
        }
    }
    Ok(worst)
}

/// A truncated formal power-series solution `Γ_t = Σ_{i≥1} Γ_i t^i`; every
/// coefficient has unshifted degree 1 (shifted degree 0).
#[derive(Clone, Debug)]
pub struct FormalSolution<E> {
    coefficients: Vec<E>,
}

impl<E: GradedElement> FormalSolution<E> {
    pub fn new(coefficients: Vec<E>) -> Self {
        FormalSolution { coefficients }
    }

    /// Truncation order K (the series runs Γ_1 .. Γ_K).
    pub fn order(&self) -> usize {
        self.coefficients.len()
    }

    /// 1-indexed coefficient Γ_i.
    pub fn gamma(&self, i: usize) -> &E {
        &self.coefficients[i - 1]
    }

    pub fn coefficients(&self) -> &[E] {
        &self.coefficients
    }

    pub fn push(&mut self, e: E) {
        self.coefficients.push(e);
    }
}

/// Ordered compositions of `total` into `parts` summands ≥ 1.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    fn rec(total: usize, parts: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            if total >= 1 {
                prefix.push(total);
                out.push(prefix.clone());
                prefix.pop();
            }
            return;
        }
        for first in 1..=total.saturating_sub(parts - 1) {
            prefix.push(first);
            rec(total - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts >= 1 {
        rec(total, parts, &mut Vec::new(), &mut out);
    }
    out
}

/// Right-hand side of the order-`i` deformation equation:
///
/// `RHS_i = Σ_{k≥2} (1/k!) Σ_{i_1+...+i_k = i} l_k(Γ_{i_1}, ..., Γ_{i_k})`,
///
/// so the equation to solve is `-l_1(Γ_i) = RHS_i`. For i = 2 this is
/// `(1/2) l_2(Γ_1, Γ_1)`.
pub fn obstruction_rhs<F: OperatorFamily>(
    family: &F,
    prefix: &FormalSolution<F::Elt>,
    i: usize,
) -> Result<F::Elt> {
    if i < 2 {
        return Err(Error::argument("obstruction classes start at order 2"));
    }
    if prefix.order() < i - 1 {
        return Err(Error::argument(format!(
            "order-{i} right side needs Γ_1..Γ_{}, got {} coefficients",
            i - 1,
            prefix.order()
        )));
    }
    let mut acc: Option<F::Elt> = None;
    let mut factorial = 1.0f64; // k! accumulated as k advances
    for k in 2..=i.min(family.max_arity()) {
        factorial = if k == 2 { 2.0 } else { factorial * k as f64 };
        let weight = 1.0 / factorial;
        for comp in compositions(i, k) {
            let args: Vec<&F::Elt> = comp.iter().map(|&t| prefix.gamma(t)).collect();
            let term = family.bracket(k, &args);
            acc = Some(match acc {
                None => term.scale(weight),
                Some(a) => a.add_scaled(&term, weight),
            });
        }
    }
    acc.ok_or_else(|| Error::argument("empty right-hand side"))
}
