//! Koszul signs and unshuffles.

use crate::error::{Error, Result};

/// Degrees `|v_i|` of a tuple of homogeneous elements. Entries may be
/// negative (shifted complexes).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeVector(pub Vec<i64>);

impl DegreeVector {
    pub fn new(degrees: Vec<i64>) -> Result<Self> {
        if degrees.is_empty() {
            return Err(Error::argument("degree vector must be nonempty"));
        }
        Ok(DegreeVector(degrees))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A permutation of `{1..k}`, stored 0-based: `images[i] = σ(i+1) - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let k = images.len();
        if k == 0 {
            return Err(Error::argument("empty permutation"));
        }
        let mut seen = vec![false; k];
        for &i in &images {
            if i >= k || seen[i] {
                return Err(Error::argument(format!(
                    "images {images:?} are not a bijection of 0..{k}"
                )));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    /// From 1-based images `σ(1), ..., σ(k)`.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        Self::new(
            images
                .iter()
                .map(|&i| {
                    i.checked_sub(1)
                        .ok_or_else(|| Error::argument("1-based image must be ≥ 1"))
                })
                .collect::<Result<Vec<_>>>()?,
        )
    }

    pub fn identity(k: usize) -> Self {
        Permutation {
            images: (0..k).collect(),
        }
    }

    /// The transposition swapping 0-based positions `i` and `j` in `S_k`.
    pub fn transposition(k: usize, i: usize, j: usize) -> Self {
        let mut images: Vec<usize> = (0..k).collect();
        images.swap(i, j);
        Permutation { images }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Standard sign: parity of the inversion count.
    pub fn sgn(&self) -> i32 {
        let mut inv = 0usize;
        for i in 0..self.images.len() {
            for j in i + 1..self.images.len() {
                if self.images[i] > self.images[j] {
                    inv += 1;
                }
            }
        }
        if inv.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Apply to a slice: returns `[args[σ(1)], ..., args[σ(k)]]`.
    pub fn permute<'a, T>(&self, args: &'a [T]) -> Vec<&'a T> {
        self.images.iter().map(|&i| &args[i]).collect()
    }
}

/// Koszul sign ε(σ), defined by
/// `v_1 ∧ ... ∧ v_k = ε(σ) · v_{σ(1)} ∧ ... ∧ v_{σ(k)}`:
/// the parity of interchanges of odd-degree elements.
pub fn koszul_sign(perm: &Permutation, degrees: &DegreeVector) -> Result<i32> {
    if perm.len() != degrees.len() {
        return Err(Error::argument(format!(
            "permutation of {} elements vs {} degrees",
            perm.len(),
            degrees.len()
        )));
    }
    // Count inversion pairs whose two elements are both odd.
    let mut odd_pairs = 0usize;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm.image(i) > perm.image(j) {
                let di = degrees.0[perm.image(i)];
                let dj = degrees.0[perm.image(j)];
                if di % 2 != 0 && dj % 2 != 0 {
                    odd_pairs += 1;
                }
            }
        }
    }
    Ok(if odd_pairs.is_multiple_of(2) { 1 } else { -1 })
}

/// Antisymmetric Koszul sign χ(σ) = sgn(σ)·ε(σ).
pub fn antisymmetric_koszul_sign(perm: &Permutation, degrees: &DegreeVector) -> Result<i32> {
    Ok(perm.sgn() * koszul_sign(perm, degrees)?)
}

/// All `(j, k-1)`-unshuffles of `{1..j+k-1}`: permutations increasing on
/// the first `j` slots and on the last `k-1` slots. There are
/// `binomial(j+k-1, j)` of them.
pub fn unshuffles(j: usize, k_minus_1: usize) -> Result<Vec<Permutation>> {
    if j < 1 {
        return Err(Error::argument("unshuffles need j ≥ 1"));
    }
    let n = j + k_minus_1;
    let mut out = Vec::new();
    let mut subset: Vec<usize> = (0..j).collect();
    loop {
        let mut images = subset.clone();
        let mut in_subset = vec![false; n];
        for &s in &subset {
            in_subset[s] = true;
        }
        images.extend((0..n).filter(|i| !in_subset[*i]));
        out.push(Permutation { images });

        // next j-combination of {0..n-1} in lexicographic order
        let mut i = j;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if subset[i] != i + n - j {
                subset[i] += 1;
                for t in i + 1..j {
                    subset[t] = subset[t - 1] + 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn deg(v: &[i64]) -> DegreeVector {
        DegreeVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn koszul_basic_cases() {
        let id = Permutation::identity(3);
        assert_eq!(koszul_sign(&id, &deg(&[5, -2, 7])).unwrap(), 1);
        let swap = Permutation::transposition(2, 0, 1);
        assert_eq!(koszul_sign(&swap, &deg(&[1, 1])).unwrap(), -1);
        assert_eq!(koszul_sign(&swap, &deg(&[0, 1])).unwrap(), 1);
        assert!(koszul_sign(&swap, &deg(&[1, 1, 1])).is_err());
    }

    #[test]
    fn antisymmetric_basic_cases() {
        let id = Permutation::identity(2);
        assert_eq!(antisymmetric_koszul_sign(&id, &deg(&[0, 0])).unwrap(), 1);
        let swap = Permutation::transposition(2, 0, 1);
        assert_eq!(antisymmetric_koszul_sign(&swap, &deg(&[0, 0])).unwrap(), -1);
        assert_eq!(antisymmetric_koszul_sign(&swap, &deg(&[1, 1])).unwrap(), 1);
    }

    #[test]
    fn unshuffle_counts() {
        assert_eq!(unshuffles(2, 1).unwrap().len(), 3);
        assert_eq!(unshuffles(1, 0).unwrap().len(), 1);
        assert_eq!(unshuffles(1, 0).unwrap()[0], Permutation::identity(1));
        assert_eq!(unshuffles(2, 2).unwrap().len(), 6);
    }

    #[test]
    fn unshuffles_are_increasing_on_blocks() {
        for (j, km1) in [(1usize, 1usize), (2, 1), (2, 2), (3, 2), (1, 3)] {
            for s in unshuffles(j, km1).unwrap() {
                let im = s.images();
                assert!(im[..j].windows(2).all(|w| w[0] < w[1]));
                assert!(im[j..].windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    /// Independent route to ε(σ): bubble-sort the permuted word back to
    /// identity, accumulating (−1)^{|a||b|} per adjacent swap.
    fn koszul_by_bubble(perm: &Permutation, degrees: &DegreeVector) -> i32 {
        let mut word: Vec<usize> = perm.images().to_vec();
        let mut sign = 1i32;
        let n = word.len();
        for i in 0..n {
            for j in 0..n - 1 - i {
                if word[j] > word[j + 1] {
                    let (a, b) = (degrees.0[word[j]], degrees.0[word[j + 1]]);
                    if a % 2 != 0 && b % 2 != 0 {
                        sign = -sign;
                    }
                    word.swap(j, j + 1);
                }
            }
        }
        sign
    }

    proptest! {
        #[test]
        fn koszul_matches_transposition_decomposition(
            perm_seed in proptest::collection::vec(0u64..1000, 2..7),
            degs in proptest::collection::vec(-3i64..4, 2..7),
        ) {
            let k = perm_seed.len().min(degs.len());
            // build a permutation by sorting the seed
            let mut order: Vec<usize> = (0..k).collect();
            order.sort_by_key(|&i| (perm_seed[i], i));
            let perm = Permutation::new(order).unwrap();
            let dv = DegreeVector::new(degs[..k].to_vec()).unwrap();
            prop_assert_eq!(
                koszul_sign(&perm, &dv).unwrap(),
                koszul_by_bubble(&perm, &dv)
            );
            prop_assert_eq!(
                antisymmetric_koszul_sign(&perm, &dv).unwrap(),
                perm.sgn() * koszul_sign(&perm, &dv).unwrap()
            );
        }

        #[test]
        fn unshuffle_count_is_binomial(j in 1usize..6, km1 in 0usize..6) {
            prop_assume!(j + km1 <= 8);
            let n = j + km1;
            let binom = (1..=n).product::<usize>()
                / ((1..=j).product::<usize>() * (1..=km1).product::<usize>());
            prop_assert_eq!(unshuffles(j, km1).unwrap().len(), binom);
        }
    }
}
