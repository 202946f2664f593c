//! Constant symplectic structures and the data cyclic operations dualize through.

use std::sync::Arc;

use crate::error::{OchaError, Result};
use crate::field::Field;
use crate::graded::{Element, GradedSpace};
use crate::linalg::Matrix;

/// A nondegenerate pairing `ω` on `A` with `ω(a,b) = (-1)^{|a||b|+1} ω(b,a)`.
#[derive(Clone, PartialEq, Eq)]
pub struct SymplecticForm<F> {
    space: Arc<GradedSpace>,
    degree: i64,
    matrix: Matrix<F>,
    inverse: Matrix<F>,
}

/// Lists every violated condition; empty iff the data defines a valid form.
pub fn omega_audit<F: Field>(space: &GradedSpace, degree: i64, matrix: &Matrix<F>) -> Vec<String> {
    let n = space.dim();
    if matrix.rows() != n || matrix.cols() != n {
        return vec![format!("matrix is {}x{}, expected {n}x{n}", matrix.rows(), matrix.cols())];
    }
    let mut issues = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let (di, dj) = (space.degree(i), space.degree(j));
            let v = matrix.get(i, j);
            let w = matrix.get(j, i).clone().neg_if((di * dj + 1) & 1 != 0);
            if *v != w {
                issues.push(format!(
                    "skew-symmetry fails at ({}, {}): {v} vs {w}",
                    space.label(i),
                    space.label(j)
                ));
            }
            if !v.is_zero() && di + dj + degree != 0 {
                issues.push(format!(
                    "nonzero pairing of {} and {} violates degree {degree}",
                    space.label(i),
                    space.label(j)
                ));
            }
        }
    }
    if matrix.rank() < n {
        issues.push("pairing is degenerate".into());
    }
    issues
}

impl<F: Field> SymplecticForm<F> {
    pub fn new(space: Arc<GradedSpace>, degree: i64, matrix: Matrix<F>) -> Result<Self> {
        let issues = omega_audit(&space, degree, &matrix);
        if !issues.is_empty() {
            return Err(OchaError::InvalidForm(issues.join("; ")));
        }
        let inverse = matrix.inverse()?;
        Ok(SymplecticForm { space, degree, matrix, inverse })
    }

    /// Builds from `(i, j, value)` entries, filling the skew partner of each.
    pub fn from_entries(space: Arc<GradedSpace>, degree: i64, entries: &[(usize, usize, F)]) -> Result<Self> {
        let n = space.dim();
        let mut m = Matrix::zeros(n, n);
        for (i, j, v) in entries {
            if *i >= n || *j >= n {
                return Err(OchaError::InvalidForm("index out of range".into()));
            }
            let odd = (space.degree(*i) * space.degree(*j) + 1) & 1 != 0;
            m.set(*i, *j, v.clone());
            m.set(*j, *i, v.clone().neg_if(odd));
        }
        Self::new(space, degree, m)
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn matrix(&self) -> &Matrix<F> {
        &self.matrix
    }

    pub fn inverse(&self) -> &Matrix<F> {
        &self.inverse
    }

    pub fn entry(&self, i: usize, j: usize) -> &F {
        self.matrix.get(i, j)
    }

    /// `ω(x, y)` on coefficient vectors.
    pub fn pair(&self, x: &[F], y: &[F]) -> F {
        let mut acc = F::zero();
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                let w = self.matrix.get(i, j);
                if !b.is_zero() && !w.is_zero() {
                    acc.add_mul(&(a.clone() * b.clone()), w);
                }
            }
        }
        acc
    }

    pub fn pair_elements(&self, x: &Element<F>, y: &Element<F>) -> F {
        self.pair(x.coeffs(), y.coeffs())
    }
}

/// A form together with the distinguished element `𝟙` used by `Δ` and the cyclic braces.
#[derive(Clone)]
pub struct CyclicContext<F> {
    omega: Arc<SymplecticForm<F>>,
    unit: Element<F>,
    pair_unit: Vec<F>,
    dual: Matrix<F>,
}

impl<F: Field> CyclicContext<F> {
    pub fn new(omega: Arc<SymplecticForm<F>>, unit: Element<F>) -> Result<Self> {
        if **unit.space() != *omega.space {
            return Err(OchaError::SpaceMismatch);
        }
        match unit.homogeneous_degree() {
            Some(-1) => {}
            _ => return Err(OchaError::DegreeMismatch("the unit must be homogeneous of degree -1".into())),
        }
        let n = omega.space.dim();
        let pair_unit = (0..n).map(|x| omega.pair(Element::basis(omega.space.clone(), x).coeffs(), unit.coeffs())).collect();
        let dual = omega.inverse.transpose();
        Ok(CyclicContext { omega, unit, pair_unit, dual })
    }

    pub fn omega(&self) -> &SymplecticForm<F> {
        &self.omega
    }

    pub fn unit(&self) -> &Element<F> {
        &self.unit
    }

    /// `ω(v, 𝟙)`.
    pub fn pair_with_unit(&self, v: &[F]) -> F {
        let mut acc = F::zero();
        for (a, b) in v.iter().zip(&self.pair_unit) {
            if !a.is_zero() && !b.is_zero() {
                acc.add_mul(a, b);
            }
        }
        acc
    }

    /// The vector `g` with `ω(g, e_y) = p[y]` for every basis vector `e_y`.
    pub fn recover(&self, p: &[F]) -> Vec<F> {
        self.dual.mul_vec(p).expect("dimension matches")
    }
}

impl<F: Field> std::fmt::Debug for SymplecticForm<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SymplecticForm").field("degree", &self.degree).field("matrix", &self.matrix).finish()
    }
}

impl<F: Field> std::fmt::Debug for CyclicContext<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CyclicContext").field("omega", &self.omega).field("unit", &self.unit).finish()
    }
}
