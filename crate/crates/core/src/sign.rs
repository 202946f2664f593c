//! Permutations and Koszul signs.

use crate::error::{OchaError, Result};
use crate::field::Field;

/// A permutation of `0..n` stored as an index array.
///
/// Acting on a word `w`, the permutation produces `w'` with
/// `w'[p] = w[perm[p]]`: position `p` of the new word holds the element that
/// sat at position `perm[p]` before.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            if p >= perm.len() || seen[p] {
                return Err(OchaError::NotAPermutation(perm));
            }
            seen[p] = true;
        }
        Ok(Permutation(perm))
    }

    /// Builds from one-based images, as permutations are usually written.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(OchaError::NotAPermutation(images.to_vec()));
        }
        Permutation::new(images.iter().map(|i| i - 1).collect())
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Rearranges `items` according to this permutation.
    pub fn apply<T: Clone>(&self, items: &[T]) -> Result<Vec<T>> {
        check_len(self.len(), items.len())?;
        Ok(self.0.iter().map(|&p| items[p].clone()).collect())
    }

    /// The permutation "apply `first`, then `self`".
    pub fn after(&self, first: &Permutation) -> Result<Permutation> {
        check_len(self.len(), first.len())?;
        Ok(Permutation(self.0.iter().map(|&p| first.0[p]).collect()))
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (p, &q) in self.0.iter().enumerate() {
            inv[q] = p;
        }
        Permutation(inv)
    }
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(OchaError::SizeMismatch { expected, got });
    }
    Ok(())
}

/// Parity of the Koszul sign for rearranging a word with the given degrees.
///
/// Every pair of elements whose relative order flips contributes the
/// product of their degrees.
pub fn koszul_parity(sigma: &Permutation, degrees: &[i64]) -> Result<bool> {
    check_len(sigma.len(), degrees.len())?;
    Ok(parity_of(sigma.as_slice(), degrees))
}

pub(crate) fn parity_of(perm: &[usize], degrees: &[i64]) -> bool {
    let mut odd = false;
    for p in 0..perm.len() {
        if degrees[perm[p]] & 1 == 0 {
            continue;
        }
        for q in p + 1..perm.len() {
            if perm[p] > perm[q] && degrees[perm[q]] & 1 != 0 {
                odd = !odd;
            }
        }
    }
    odd
}

/// The Koszul sign `±1` of a permutation acting on a graded word.
pub fn koszul_sign<F: Field>(sigma: &Permutation, degrees: &[i64]) -> Result<F> {
    Ok(F::sign(koszul_parity(sigma, degrees)?))
}

/// A word of basis indices in canonical (sorted) wedge order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WedgeWord {
    pub indices: Vec<usize>,
    /// Whether reordering into canonical form costs a sign.
    pub odd: bool,
    /// Two equal indices of odd degree: the wedge product is zero.
    pub vanishes: bool,
}

impl WedgeWord {
    pub fn sign<F: Field>(&self) -> F {
        if self.vanishes {
            F::zero()
        } else {
            F::sign(self.odd)
        }
    }
}

/// Stable-sorts a wedge word and reports the Koszul sign of the sort.
///
/// `degrees[p]` is the degree of the element at position `p`.
pub fn wedge_canonicalize(indices: &[usize], degrees: &[i64]) -> Result<WedgeWord> {
    check_len(indices.len(), degrees.len())?;
    let mut order: Vec<usize> = (0..indices.len()).collect();
    order.sort_by_key(|&p| indices[p]);
    let odd = parity_of(&order, degrees);
    let sorted: Vec<usize> = order.iter().map(|&p| indices[p]).collect();
    let vanishes = order
        .windows(2)
        .any(|w| indices[w[0]] == indices[w[1]] && degrees[w[0]] & 1 != 0);
    Ok(WedgeWord { indices: sorted, odd, vanishes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;

    fn sign(images: &[usize], deg: &[i64]) -> Rational {
        koszul_sign(&Permutation::from_one_based(images).unwrap(), deg).unwrap()
    }

    #[test]
    fn identity_is_positive() {
        assert_eq!(sign(&[1, 2, 3], &[1, 1, 1]), Rational::one());
    }

    #[test]
    fn transpositions() {
        assert_eq!(sign(&[2, 1], &[1, 1]), -Rational::one());
        assert_eq!(sign(&[2, 1], &[1, 2]), Rational::one());
    }

    #[test]
    fn three_cycle_on_odd_letters() {
        // inversions (1,3) and (2,3): two odd products
        assert_eq!(sign(&[2, 3, 1], &[1, 1, 1]), Rational::one());
    }

    #[test]
    fn size_mismatch_rejected() {
        let p = Permutation::identity(2);
        assert!(koszul_sign::<Rational>(&p, &[1]).is_err());
        assert!(Permutation::new(vec![0, 0]).is_err());
    }

    #[test]
    fn wedge_examples() {
        let w = wedge_canonicalize(&[3, 1], &[2, 2]).unwrap();
        assert_eq!((w.indices.clone(), w.sign::<Rational>()), (vec![1, 3], Rational::one()));
        let w = wedge_canonicalize(&[3, 1], &[1, 1]).unwrap();
        assert_eq!((w.indices.clone(), w.sign::<Rational>()), (vec![1, 3], -Rational::one()));
        let w = wedge_canonicalize(&[2, 2], &[1, 1]).unwrap();
        assert!(w.vanishes);
        let w = wedge_canonicalize(&[2, 2], &[0, 0]).unwrap();
        assert!(!w.vanishes);
    }

    #[test]
    fn inverse_and_after() {
        let p = Permutation::from_one_based(&[3, 1, 2]).unwrap();
        assert_eq!(p.after(&p.inverse()).unwrap(), Permutation::identity(3));
        let w = p.apply(&['a', 'b', 'c']).unwrap();
        assert_eq!(w, vec!['c', 'a', 'b']);
    }
}
