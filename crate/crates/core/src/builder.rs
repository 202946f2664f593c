//! OCHAs from a unital dga with a pairing and a chain map `f: Z → A`, plus fixtures.
//!
//! All degrees are shifted: the unit sits in degree `-1`, and `f` raises degree by one.

use std::sync::Arc;

use crate::cochain::{CeTower, CochainTower, Window};
use crate::error::{OchaError, Result};
use crate::field::Field;
use crate::graded::{Element, GradedSpace, OcSpaces};
use crate::ocha::OchaStructure;
use crate::symplectic::SymplecticForm;

/// A linear map or product given by `(input(s), output index, coefficient)` entries.
pub type LinearEntries<F> = Vec<(usize, usize, F)>;

/// Input data for [`build_dga_ocha`].
#[derive(Clone, Debug)]
pub struct DgaInput<F> {
    pub a: GradedSpace,
    pub unit: usize,
    /// `e_i · e_j = Σ c e_k` as `(i, j, k, c)`.
    pub product: Vec<(usize, usize, usize, F)>,
    /// `d_A e_i = Σ c e_k` as `(i, k, c)`.
    pub d_a: LinearEntries<F>,
    /// Form entries `(i, j, ω(e_i, e_j))`; skew partners are filled in.
    pub pairing: LinearEntries<F>,
    pub omega_degree: i64,
    pub z: GradedSpace,
    /// `d_Z z_i = Σ c z_k`.
    pub d_z: LinearEntries<F>,
    /// `f(z_i) = Σ c e_k`.
    pub f: LinearEntries<F>,
}

/// The signs chosen by calibration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Calibration {
    /// `𝔮₀₂(a,b) = (−1)^{|a|+1} ab` when set, `(−1)^{|a|} ab` otherwise.
    pub product_sign_shifted: bool,
    /// The pairing is negated when set.
    pub omega_negated: bool,
}

fn linear_rows<F: Field>(dim_out: usize, entries: &LinearEntries<F>, input: usize) -> Vec<F> {
    let mut out = vec![F::zero(); dim_out];
    for (i, k, c) in entries {
        if *i == input {
            out[*k] = out[*k].clone() + c.clone();
        }
    }
    out
}

fn assemble<F: Field>(input: &DgaInput<F>, cal: Calibration) -> Result<OchaStructure<F>> {
    let spaces = OcSpaces::new(input.a.clone(), input.z.clone());
    let (dim_a, dim_z) = (spaces.dim_a(), spaces.dim_z());
    let mut l = CeTower::new(spaces.clone(), 1);
    for i in 0..dim_z {
        let row = linear_rows(dim_z, &input.d_z, i);
        if row.iter().any(|v| !v.is_zero()) {
            l.set_entry(&[i], &row)?;
        }
    }
    let mut q = CochainTower::new(spaces.clone(), 1, Window::Finite);
    for i in 0..dim_a {
        let row = linear_rows(dim_a, &input.d_a, i);
        if row.iter().any(|v| !v.is_zero()) {
            q.set_entry(&[], &[i], &row)?;
        }
    }
    for i in 0..dim_z {
        let row = linear_rows(dim_a, &input.f, i);
        if row.iter().any(|v| !v.is_zero()) {
            q.set_entry(&[i], &[], &row)?;
        }
    }
    for i in 0..dim_a {
        for j in 0..dim_a {
            let mut row = vec![F::zero(); dim_a];
            for (x, y, k, c) in &input.product {
                if (*x, *y) == (i, j) {
                    row[*k] = row[*k].clone() + c.clone();
                }
            }
            if row.iter().all(F::is_zero) {
                continue;
            }
            let odd = (spaces.a.degree(i) + i64::from(cal.product_sign_shifted)) & 1 != 0;
            let row: Vec<F> = row.into_iter().map(|v| v.neg_if(odd)).collect();
            q.set_entry(&[], &[i, j], &row)?;
        }
    }
    let pairing: LinearEntries<F> =
        input.pairing.iter().map(|(i, j, c)| (*i, *j, c.clone().neg_if(cal.omega_negated))).collect();
    let omega = SymplecticForm::from_entries(spaces.a.clone(), input.omega_degree, &pairing)?;
    let unit = Element::basis(spaces.a.clone(), input.unit);
    OchaStructure::new(l, q, Some(unit), Some(Arc::new(omega)))
}

/// Builds `𝔩₁ = d_Z`, `𝔮₀₁ = d_A`, `𝔮₁₀ = f`, `𝔮₀₂ = ±ab`, trying the product and form
/// signs in a fixed order until the OCHA, unit and cyclicity checks all pass.
pub fn build_dga_ocha<F: Field>(input: &DgaInput<F>) -> Result<(OchaStructure<F>, Calibration)> {
    let mut last = String::new();
    for product_sign_shifted in [false, true] {
        for omega_negated in [false, true] {
            let cal = Calibration { product_sign_shifted, omega_negated };
            let s = assemble(input, cal)?;
            let report = s.audit()?;
            if report.passed() {
                return Ok((s, cal));
            }
            last = report.failures().map(|e| format!("{}: {}", e.name, e.witness.as_deref().unwrap_or(""))).collect::<Vec<_>>().join("; ");
        }
    }
    Err(OchaError::Calibration(last))
}

fn s2_algebra() -> Result<GradedSpace> {
    GradedSpace::new([("1", -1), ("e", 1)])
}

fn s2_input<F: Field>(z: GradedSpace, d_z: LinearEntries<F>, f: LinearEntries<F>) -> Result<DgaInput<F>> {
    Ok(DgaInput {
        a: s2_algebra()?,
        unit: 0,
        product: vec![(0, 0, 0, F::one()), (0, 1, 1, F::one()), (1, 0, 1, F::one())],
        d_a: Vec::new(),
        pairing: vec![(0, 1, F::one())],
        omega_degree: 0,
        z,
        d_z,
        f,
    })
}

/// Cohomology of `S²`: `A = ⟨1, e⟩`, `e² = 0`, `ω(1,e) = 1`; `Z` a shifted copy with `f` the identity.
pub fn s2_model<F: Field>() -> Result<OchaStructure<F>> {
    let z = GradedSpace::new([("z1", -2), ("ze", 0)])?;
    let input = s2_input(z, Vec::new(), vec![(0, 0, F::one()), (1, 1, F::one())])?;
    Ok(build_dga_ocha(&input)?.0)
}

/// The `S²` algebra with `Z = ⟨y, dy⟩`, `d_Z y = dy`, `f(y) = e`, `f(dy) = 0`.
pub fn s2_model_with_dz<F: Field>() -> Result<OchaStructure<F>> {
    let z = GradedSpace::new([("y", 0), ("dy", 1)])?;
    let input = s2_input(z, vec![(0, 1, F::one())], vec![(0, 1, F::one())])?;
    Ok(build_dga_ocha(&input)?.0)
}

/// Cohomology of the circle: `A = ⟨1, θ⟩`, `θ² = 0`, `|ω| = 1`; `Z = ⟨z⟩` with `f = 0`.
pub fn circle_model<F: Field>() -> Result<OchaStructure<F>> {
    let input = DgaInput {
        a: GradedSpace::new([("1", -1), ("t", 0)])?,
        unit: 0,
        product: vec![(0, 0, 0, F::one()), (0, 1, 1, F::one()), (1, 0, 1, F::one())],
        d_a: Vec::new(),
        pairing: vec![(0, 1, F::one())],
        omega_degree: 1,
        z: GradedSpace::new([("z", 0)])?,
        d_z: Vec::new(),
        f: Vec::new(),
    };
    Ok(build_dga_ocha(&input)?.0)
}

/// Cohomology of `CP²` as a pure cyclic unital `A∞` algebra: `𝔩 = 0`, `𝔮 = 𝔮₀,•`.
pub fn cp2_model<F: Field>() -> Result<OchaStructure<F>> {
    let input = DgaInput {
        a: GradedSpace::new([("1", -1), ("x", 1), ("xx", 3)])?,
        unit: 0,
        product: vec![
            (0, 0, 0, F::one()),
            (0, 1, 1, F::one()),
            (1, 0, 1, F::one()),
            (0, 2, 2, F::one()),
            (2, 0, 2, F::one()),
            (1, 1, 2, F::one()),
        ],
        d_a: Vec::new(),
        pairing: vec![(0, 2, F::one()), (1, 1, F::one())],
        omega_degree: -2,
        z: GradedSpace::new([("z", 0)])?,
        d_z: Vec::new(),
        f: Vec::new(),
    };
    Ok(build_dga_ocha(&input)?.0)
}
