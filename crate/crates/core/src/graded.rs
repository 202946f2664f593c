//! Finite graded vector spaces, their elements, and wedge-word bases.

use std::collections::HashSet;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{OchaError, Result};
use crate::field::Field;

/// Largest wedge arity for which a basis can be built.
pub const MAX_ARITY: usize = 16;
const MAX_LOOKUP: usize = 1 << 22;

/// A graded vector space with an ordered, labelled basis.
pub struct GradedSpace {
    labels: Vec<String>,
    degrees: Vec<i64>,
    wedges: Vec<OnceLock<WedgeBasis>>,
}

impl Clone for GradedSpace {
    fn clone(&self) -> Self {
        GradedSpace {
            labels: self.labels.clone(),
            degrees: self.degrees.clone(),
            wedges: (0..=MAX_ARITY).map(|_| OnceLock::new()).collect(),
        }
    }
}

impl GradedSpace {
    pub fn new<S: Into<String>>(basis: impl IntoIterator<Item = (S, i64)>) -> Result<Self> {
        let (labels, degrees): (Vec<String>, Vec<i64>) =
            basis.into_iter().map(|(l, d)| (l.into(), d)).unzip();
        if labels.is_empty() {
            return Err(OchaError::InvalidSpace("dimension must be at least 1".into()));
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if l.is_empty() || l.chars().any(char::is_whitespace) {
                return Err(OchaError::InvalidSpace(format!("bad label '{l}'")));
            }
            if !seen.insert(l.as_str()) {
                return Err(OchaError::InvalidSpace(format!("duplicate label '{l}'")));
            }
        }
        Ok(GradedSpace {
            labels,
            degrees,
            wedges: (0..=MAX_ARITY).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.degrees[i]
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Basis indices of the given degree.
    pub fn of_degree(&self, d: i64) -> impl Iterator<Item = usize> + '_ {
        self.degrees.iter().enumerate().filter(move |(_, &x)| x == d).map(|(i, _)| i)
    }

    pub fn has_degree(&self, d: i64) -> bool {
        self.degrees.contains(&d)
    }

    /// The basis of canonical wedge words of length `ell`.
    pub fn wedge_basis(&self, ell: usize) -> Result<&WedgeBasis> {
        let too_large = OchaError::ArityTooLarge { arity: ell, dim: self.dim() };
        if ell > MAX_ARITY {
            return Err(too_large);
        }
        match self.dim().checked_pow(ell as u32) {
            Some(n) if n <= MAX_LOOKUP => {}
            _ => return Err(too_large),
        }
        Ok(self.wedges[ell].get_or_init(|| WedgeBasis::build(self, ell)))
    }
}

impl PartialEq for GradedSpace {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.degrees == other.degrees
    }
}

impl Eq for GradedSpace {}

impl fmt::Debug for GradedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.labels.iter().zip(&self.degrees))
            .finish()
    }
}

/// Sorted basis words of a fixed length with no repeated odd-degree letter.
#[derive(Debug)]
pub struct WedgeBasis {
    dim: usize,
    words: Vec<Vec<usize>>,
    degree_sums: Vec<i64>,
    lookup: Vec<u32>,
}

impl WedgeBasis {
    fn build(space: &GradedSpace, ell: usize) -> Self {
        let dim = space.dim();
        let mut words = Vec::new();
        let mut cur = Vec::with_capacity(ell);
        fn rec(space: &GradedSpace, ell: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == ell {
                out.push(cur.clone());
                return;
            }
            for i in from..space.dim() {
                if cur.last() == Some(&i) && space.degree(i) & 1 != 0 {
                    continue;
                }
                cur.push(i);
                rec(space, ell, i, cur, out);
                cur.pop();
            }
        }
        rec(space, ell, 0, &mut cur, &mut words);
        let mut lookup = vec![u32::MAX; dim.pow(ell as u32)];
        for (n, w) in words.iter().enumerate() {
            lookup[encode(dim, w)] = n as u32;
        }
        let degree_sums = words.iter().map(|w| w.iter().map(|&i| space.degree(i)).sum()).collect();
        WedgeBasis { dim, words, degree_sums, lookup }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn word(&self, n: usize) -> &[usize] {
        &self.words[n]
    }

    pub fn words(&self) -> &[Vec<usize>] {
        &self.words
    }

    pub fn degree_sum(&self, n: usize) -> i64 {
        self.degree_sums[n]
    }

    /// Position of a sorted word, or `None` if it is not canonical.
    pub fn index(&self, word: &[usize]) -> Option<usize> {
        if word.iter().any(|&i| i >= self.dim) {
            return None;
        }
        let n = *self.lookup.get(encode(self.dim, word))?;
        (n != u32::MAX).then_some(n as usize)
    }
}

fn encode(dim: usize, word: &[usize]) -> usize {
    word.iter().fold(0, |acc, &i| acc * dim + i)
}

/// Index of an ordered tuple of basis indices, first entry most significant.
pub fn tuple_index(dim: usize, tuple: &[usize]) -> usize {
    encode(dim, tuple)
}

/// Inverse of [`tuple_index`].
pub fn tuple_at(dim: usize, len: usize, mut idx: usize) -> Vec<usize> {
    let mut t = vec![0; len];
    for slot in t.iter_mut().rev() {
        *slot = idx % dim;
        idx /= dim;
    }
    t
}

/// An element of a graded space.
#[derive(Clone, PartialEq, Eq)]
pub struct Element<F> {
    space: Arc<GradedSpace>,
    coeffs: Vec<F>,
}

impl<F: Field> Element<F> {
    pub fn new(space: Arc<GradedSpace>, coeffs: Vec<F>) -> Result<Self> {
        if coeffs.len() != space.dim() {
            return Err(OchaError::SizeMismatch { expected: space.dim(), got: coeffs.len() });
        }
        Ok(Element { space, coeffs })
    }

    /// Builds an element that must be homogeneous of degree `d`.
    pub fn with_degree(space: Arc<GradedSpace>, coeffs: Vec<F>, d: i64) -> Result<Self> {
        let e = Element::new(space, coeffs)?;
        if e.support().any(|i| e.space.degree(i) != d) {
            return Err(OchaError::DegreeMismatch(format!("element is not homogeneous of degree {d}")));
        }
        Ok(e)
    }

    pub fn zero(space: Arc<GradedSpace>) -> Self {
        let coeffs = vec![F::zero(); space.dim()];
        Element { space, coeffs }
    }

    pub fn basis(space: Arc<GradedSpace>, i: usize) -> Self {
        let mut e = Element::zero(space);
        e.coeffs[i] = F::one();
        e
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &F {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(F::is_zero)
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, _)| i)
    }

    /// The common degree of the support; `None` for zero or mixed elements.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut degs = self.support().map(|i| self.space.degree(i));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// If this is `c · e_i` for a single basis vector, returns `(i, c)`.
    pub fn as_basis_multiple(&self) -> Option<(usize, F)> {
        let mut s = self.support();
        let i = s.next()?;
        if s.next().is_some() {
            return None;
        }
        Some((i, self.coeffs[i].clone()))
    }

    pub fn add(&self, other: &Element<F>) -> Result<Element<F>> {
        if self.space != other.space {
            return Err(OchaError::SpaceMismatch);
        }
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() + b.clone()).collect();
        Ok(Element { space: self.space.clone(), coeffs })
    }

    pub fn scale(&self, c: &F) -> Element<F> {
        let coeffs = self.coeffs.iter().map(|a| a.clone() * c.clone()).collect();
        Element { space: self.space.clone(), coeffs }
    }
}

impl<F: Field> fmt::Debug for Element<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .support()
            .map(|i| format!("{}*{}", self.coeffs[i], self.space.label(i)))
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// The pair of spaces `(Z, A)` that open-closed cochains are built over.
#[derive(Debug, PartialEq, Eq)]
pub struct OcSpaces {
    pub a: Arc<GradedSpace>,
    pub z: Arc<GradedSpace>,
}

impl OcSpaces {
    pub fn new(a: GradedSpace, z: GradedSpace) -> Arc<Self> {
        Arc::new(OcSpaces { a: Arc::new(a), z: Arc::new(z) })
    }

    pub fn dim_a(&self) -> usize {
        self.a.dim()
    }

    pub fn dim_z(&self) -> usize {
        self.z.dim()
    }

    /// Degree sum of an ordered tuple of `A`-basis indices.
    pub fn a_degree(&self, tuple: &[usize]) -> i64 {
        tuple.iter().map(|&i| self.a.degree(i)).sum()
    }

    pub fn z_degree(&self, word: &[usize]) -> i64 {
        word.iter().map(|&i| self.z.degree(i)).sum()
    }
}
