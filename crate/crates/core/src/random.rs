//! Seeded random spaces, forms and towers for property checks.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::cochain::{CeTower, CochainTower, Window};
use crate::error::Result;
use crate::field::Field;
use crate::graded::{tuple_at, Element, GradedSpace, OcSpaces};
use crate::symplectic::{CyclicContext, SymplecticForm};

/// Shape of a random tower.
#[derive(Clone, Copy, Debug)]
pub struct TowerShape {
    pub max_ell: usize,
    pub max_k: usize,
    /// Probability that an admissible output coefficient is nonzero.
    pub density: f64,
    /// Coefficients are drawn from `-coeff..=coeff`.
    pub coeff: i64,
}

impl Default for TowerShape {
    fn default() -> Self {
        TowerShape { max_ell: 2, max_k: 3, density: 0.5, coeff: 3 }
    }
}

fn coefficient<F: Field, R: Rng>(rng: &mut R, shape: &TowerShape) -> F {
    loop {
        let c = rng.gen_range(-shape.coeff..=shape.coeff);
        if c != 0 {
            return F::from_i64(c);
        }
    }
}

/// A random degree-consistent tower supported in `ℓ ≤ max_ell`, `k ≤ max_k` and the window.
pub fn random_tower<F: Field, R: Rng>(
    rng: &mut R,
    spaces: &Arc<OcSpaces>,
    degree: i64,
    window: Window,
    shape: &TowerShape,
) -> Result<CochainTower<F>> {
    let mut t = CochainTower::new(spaces.clone(), degree, window);
    let dim_a = spaces.dim_a();
    for ell in 0..=shape.max_ell {
        let zb = spaces.z.wedge_basis(ell)?;
        for k in 0..=shape.max_k {
            if ell + k == 0 || !window.admits(ell + k) || zb.is_empty() {
                continue;
            }
            for w in 0..zb.len() {
                let z = zb.word(w).to_vec();
                for aidx in 0..dim_a.pow(k as u32) {
                    let a = tuple_at(dim_a, k, aidx);
                    let d = degree + zb.degree_sum(w) + spaces.a_degree(&a);
                    let mut out = vec![F::zero(); dim_a];
                    let mut any = false;
                    for x in spaces.a.of_degree(d) {
                        if rng.gen_bool(shape.density) {
                            out[x] = coefficient(rng, shape);
                            any = true;
                        }
                    }
                    if any {
                        t.set_entry(&z, &a, &out)?;
                    }
                }
            }
        }
    }
    Ok(t)
}

/// A random `l`-tower with arities `1..=max_ell`.
pub fn random_ce_tower<F: Field, R: Rng>(
    rng: &mut R,
    spaces: &Arc<OcSpaces>,
    degree: i64,
    max_ell: usize,
    shape: &TowerShape,
) -> Result<CeTower<F>> {
    let mut t = CeTower::new(spaces.clone(), degree);
    let dim_z = spaces.dim_z();
    for ell in 1..=max_ell {
        let zb = spaces.z.wedge_basis(ell)?;
        for w in 0..zb.len() {
            let d = degree + zb.degree_sum(w);
            let mut out = vec![F::zero(); dim_z];
            let mut any = false;
            for x in spaces.z.of_degree(d) {
                if rng.gen_bool(shape.density) {
                    out[x] = coefficient(rng, shape);
                    any = true;
                }
            }
            if any {
                t.set_entry(zb.word(w), &out)?;
            }
        }
    }
    Ok(t)
}

/// Random `A` carrying a unit of degree `-1` and a nondegenerate form, with a random `Z`.
///
/// `A` is `𝟙` alone, `𝟙, e` or `𝟙, e, x` with `x` odd and self-paired, chosen by `dim_a`.
pub fn random_cyclic_spaces<F: Field, R: Rng>(
    rng: &mut R,
    dim_a: usize,
    dim_z: usize,
) -> Result<(Arc<OcSpaces>, CyclicContext<F>)> {
    let (degs, omega_deg): (Vec<i64>, i64) = match dim_a {
        0 | 1 => (vec![-1], 2),
        2 => {
            let w = *[-2i64, -1, 0, 1, 2].choose(rng).expect("nonempty");
            (vec![-1, 1 - w], w)
        }
        _ => {
            let x = *[-1i64, 1].choose(rng).expect("nonempty");
            (vec![-1, 1 + 2 * x, x], -2 * x)
        }
    };
    let labels = ["u", "e", "x"];
    let a = GradedSpace::new(labels.iter().zip(&degs).map(|(l, d)| (*l, *d)))?;
    let zdegs: Vec<(String, i64)> = (0..dim_z).map(|i| (format!("z{}", i + 1), rng.gen_range(-2..=2))).collect();
    let z = GradedSpace::new(zdegs)?;
    let spaces = OcSpaces::new(a, z);
    let mut entries = Vec::new();
    match degs.len() {
        1 => entries.push((0, 0, F::one())),
        _ => entries.push((0, 1, F::from_i64(*[1i64, -1, 2].choose(rng).expect("nonempty")))),
    }
    if degs.len() == 3 {
        entries.push((2, 2, F::one()));
    }
    let omega = SymplecticForm::from_entries(spaces.a.clone(), omega_deg, &entries)?;
    let unit = Element::basis(spaces.a.clone(), 0);
    let ctx = CyclicContext::new(Arc::new(omega), unit)?;
    Ok((spaces, ctx))
}

/// A degree drawn uniformly from `lo..=hi`.
pub fn random_degree<R: Rng>(rng: &mut R, lo: i64, hi: i64) -> i64 {
    rng.gen_range(lo..=hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn towers_are_degree_consistent_and_seeded() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (sp, _) = random_cyclic_spaces::<Rational, _>(&mut rng, 3, 2).unwrap();
        let shape = TowerShape::default();
        let t: CochainTower<Rational> = random_tower(&mut rng, &sp, 1, Window::Capped(4), &shape).unwrap();
        assert!(t.degree_audit());
        let mut r1 = ChaCha8Rng::seed_from_u64(3);
        let mut r2 = ChaCha8Rng::seed_from_u64(3);
        let a: CochainTower<Rational> = random_tower(&mut r1, &sp, 0, Window::Finite, &shape).unwrap();
        let b: CochainTower<Rational> = random_tower(&mut r2, &sp, 0, Window::Finite, &shape).unwrap();
        assert!(a.agrees_with(&b).unwrap());
    }

    #[test]
    fn random_forms_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for dim in 1..=3 {
            for _ in 0..10 {
                random_cyclic_spaces::<Rational, _>(&mut rng, dim, 1).unwrap();
            }
        }
    }
}
