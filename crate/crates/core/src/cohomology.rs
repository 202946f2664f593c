//! Capped (normalized) open-closed Hochschild cohomology by exact linear algebra.
//!
//! Towers of total arity `≤ N` form a quotient complex: a component of `δD`
//! at arity `n` only sees components of `D` of arity `≤ n`.

use std::fmt;
use std::ops::RangeInclusive;

use rayon::prelude::*;

use crate::cochain::{CochainTower, Window};
use crate::error::{OchaError, Result};
use crate::field::Field;
use crate::graded::{tuple_at, MAX_ARITY};
use crate::linalg::{EchelonBasis, Matrix};
use crate::ocha::{hochschild_delta, OchaStructure};

/// One coordinate of a capped tower: a table entry `(ℓ, k, word, tuple)` and an output basis index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Coordinate {
    pub ell: usize,
    pub k: usize,
    pub word: usize,
    pub tuple: usize,
    pub out: usize,
}

/// The basis of degree-`d` towers of total arity `≤ cap`, in a fixed order.
#[derive(Clone, Debug)]
pub struct CappedBasis {
    pub degree: i64,
    pub cap: usize,
    pub coords: Vec<Coordinate>,
}

impl CappedBasis {
    pub fn new<F: Field>(s: &OchaStructure<F>, degree: i64, cap: usize, normalized: bool) -> Result<Self> {
        let sp = s.q().spaces();
        let unit = if normalized {
            let u = s.unit().ok_or(OchaError::MissingUnit)?;
            Some(u.as_basis_multiple().ok_or(OchaError::UnitNotBasis)?.0)
        } else {
            None
        };
        let dim_a = sp.dim_a();
        let mut coords = Vec::new();
        for total in 1..=cap {
            for ell in 0..=total {
                let k = total - ell;
                let words = sp.z.wedge_basis(ell)?;
                for word in 0..words.len() {
                    let zd = words.degree_sum(word);
                    for tuple in 0..dim_a.pow(k as u32) {
                        let a = tuple_at(dim_a, k, tuple);
                        if unit.is_some_and(|u| a.contains(&u)) {
                            continue;
                        }
                        let target = degree + zd + sp.a_degree(&a);
                        for out in sp.a.of_degree(target) {
                            coords.push(Coordinate { ell, k, word, tuple, out });
                        }
                    }
                }
            }
        }
        Ok(CappedBasis { degree, cap, coords })
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// The tower with coordinates `v`.
    pub fn tower<F: Field>(&self, s: &OchaStructure<F>, v: &[F]) -> Result<CochainTower<F>> {
        let mut t = CochainTower::new(s.q().spaces().clone(), self.degree, Window::Capped(self.cap));
        for (c, x) in self.coords.iter().zip(v) {
            if !x.is_zero() {
                t.component_mut(c.ell, c.k)?.row_mut(c.word, c.tuple)[c.out] = x.clone();
            }
        }
        t.prune();
        Ok(t)
    }

    /// Coordinates of `t`; entries outside the basis must vanish.
    pub fn coordinates<F: Field>(&self, t: &CochainTower<F>) -> Result<Vec<F>> {
        let mut seen = 0usize;
        let v: Vec<F> = self
            .coords
            .iter()
            .map(|c| match t.row(c.ell, c.k, c.word, c.tuple) {
                Some(row) => row[c.out].clone(),
                None => F::zero(),
            })
            .inspect(|x| seen += usize::from(!x.is_zero()))
            .collect();
        if seen != t.truncate(self.cap).nnz() {
            return Err(OchaError::Unsupported(format!("tower leaves the degree-{} capped basis", self.degree)));
        }
        Ok(v)
    }
}

/// The matrix of `δ` from degree `d` to `d + 1`, one column per basis tower.
pub fn delta_matrix<F: Field>(s: &OchaStructure<F>, from: &CappedBasis, to: &CappedBasis) -> Result<Matrix<F>> {
    let cols: Vec<Result<Vec<F>>> = (0..from.len())
        .into_par_iter()
        .map(|j| {
            let mut e = vec![F::zero(); from.len()];
            e[j] = F::one();
            let t = from.tower(s, &e)?;
            to.coordinates(&hochschild_delta(s, &t)?.truncate(to.cap))
        })
        .collect();
    let cols = cols.into_iter().collect::<Result<Vec<_>>>()?;
    Matrix::from_columns(to.len(), &cols)
}

/// A basis of the `δ`-closed towers of degree `d` in the capped complex.
pub fn closed_towers<F: Field>(s: &OchaStructure<F>, cap: usize, degree: i64, normalized: bool) -> Result<Vec<CochainTower<F>>> {
    let from = CappedBasis::new(s, degree, cap, normalized)?;
    let to = CappedBasis::new(s, degree + 1, cap, normalized)?;
    delta_matrix(s, &from, &to)?.kernel().iter().map(|v| from.tower(s, v)).collect()
}

/// Dimensions and representatives at one degree.
#[derive(Clone)]
pub struct DegreeRow<F> {
    pub degree: i64,
    pub cochains: usize,
    pub kernel: usize,
    pub image: usize,
    pub representatives: Vec<CochainTower<F>>,
}

impl<F> DegreeRow<F> {
    pub fn cohomology(&self) -> usize {
        self.kernel - self.image
    }
}

#[derive(Clone)]
pub struct CohomologyReport<F> {
    pub cap: usize,
    pub normalized: bool,
    pub rows: Vec<DegreeRow<F>>,
    /// Whether every assembled `δ∘δ` matrix vanished.
    pub delta_squared_zero: bool,
}

impl<F: Field> fmt::Display for CohomologyReport<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = if self.normalized { "normalized" } else { "full" };
        writeln!(f, "cap {} ({kind})", self.cap)?;
        writeln!(f, "{:>6} {:>8} {:>6} {:>6} {:>6}", "degree", "cochains", "ker", "im", "H")?;
        for r in &self.rows {
            writeln!(f, "{:>6} {:>8} {:>6} {:>6} {:>6}", r.degree, r.cochains, r.kernel, r.image, r.cohomology())?;
        }
        write!(f, "delta squared zero: {}", self.delta_squared_zero)
    }
}

/// Cohomology of the capped complex at each degree in `degrees`.
///
/// Representatives are kernel vectors (in the row-reduction order of the
/// basis) that are independent modulo the image, taken greedily.
pub fn cohomology<F: Field>(
    s: &OchaStructure<F>,
    cap: usize,
    degrees: RangeInclusive<i64>,
    normalized: bool,
) -> Result<CohomologyReport<F>> {
    if cap == 0 || cap > MAX_ARITY {
        return Err(OchaError::Unsupported(format!("cap {cap} outside 1..={MAX_ARITY}")));
    }
    if !s.is_ocha()? {
        return Err(OchaError::StructureCheck("not an OCHA".into()));
    }
    if normalized && !s.is_unital()? {
        return Err(OchaError::StructureCheck("not unital".into()));
    }
    let (lo, hi) = (*degrees.start(), *degrees.end());
    let bases = (lo - 1..=hi + 1).map(|d| CappedBasis::new(s, d, cap, normalized)).collect::<Result<Vec<_>>>()?;
    let mats = bases.windows(2).map(|w| delta_matrix(s, &w[0], &w[1])).collect::<Result<Vec<_>>>()?;
    let mut delta_squared_zero = true;
    for pair in mats.windows(2) {
        delta_squared_zero &= pair[1].mul(&pair[0])?.is_zero();
    }
    let mut rows = Vec::new();
    for (i, d) in (lo..=hi).enumerate() {
        let (incoming, outgoing) = (&mats[i], &mats[i + 1]);
        let basis = &bases[i + 1];
        let image = incoming.rank();
        let kernel = outgoing.kernel();
        let mut span = EchelonBasis::new(basis.len());
        for j in 0..incoming.cols() {
            span.insert(&incoming.column(j));
        }
        let mut representatives = Vec::new();
        for v in &kernel {
            if span.insert(v) {
                representatives.push(basis.tower(s, v)?);
            }
        }
        rows.push(DegreeRow { degree: d, cochains: basis.len(), kernel: kernel.len(), image, representatives });
    }
    Ok(CohomologyReport { cap, normalized, rows, delta_squared_zero })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::s2_model;
    use crate::cochain::CeTower;
    use crate::field::Rational;
    use crate::graded::{GradedSpace, OcSpaces};

    #[test]
    fn zero_structure_has_all_cochains_closed() {
        let sp = OcSpaces::new(
            GradedSpace::new([("u", -1), ("e", 1)]).unwrap(),
            GradedSpace::new([("z", 0)]).unwrap(),
        );
        let s = OchaStructure::new(
            CeTower::<Rational>::new(sp.clone(), 1),
            CochainTower::new(sp, 1, Window::Finite),
            None,
            None,
        )
        .unwrap();
        let r = cohomology(&s, 3, -2..=2, false).unwrap();
        for row in &r.rows {
            assert_eq!(row.kernel, row.cochains);
            assert_eq!(row.image, 0);
            assert_eq!(row.representatives.len(), row.cochains);
        }
    }

    #[test]
    fn s2_complex_is_a_complex_and_representatives_are_closed() {
        let s = s2_model::<Rational>().unwrap();
        for cap in 1..=3 {
            let r = cohomology(&s, cap, -3..=3, true).unwrap();
            assert!(r.delta_squared_zero);
            for row in &r.rows {
                assert!(row.kernel >= row.image);
                assert_eq!(row.representatives.len(), row.cohomology());
                for t in &row.representatives {
                    assert!(hochschild_delta(&s, t).unwrap().truncate(cap).is_zero());
                    assert!(t.is_normalized(s.unit().unwrap()));
                }
            }
        }
    }

    #[test]
    fn coordinates_round_trip() {
        let s = s2_model::<Rational>().unwrap();
        let b = CappedBasis::new(&s, 0, 3, false).unwrap();
        let v: Vec<Rational> = (0..b.len()).map(|i| Rational::from_i64(i as i64 % 5 - 2)).collect();
        assert_eq!(b.coordinates(&b.tower(&s, &v).unwrap()).unwrap(), v);
    }

    #[test]
    fn cap_zero_is_rejected() {
        let s = s2_model::<Rational>().unwrap();
        assert!(cohomology(&s, 0, 0..=0, true).is_err());
    }
}
