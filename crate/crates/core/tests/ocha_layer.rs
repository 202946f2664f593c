use ocha_core::builder::{cp2_model, s2_model, s2_model_with_dz};
use ocha_core::bv::{bv_verify, q_lemma_suite};
use ocha_core::ocha::{hochschild_delta, normalized_project, OchaStructure};
use ocha_core::random::{random_tower, TowerShape};
use ocha_core::{CochainTower, Rational, Window};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_for(s: &OchaStructure<Rational>, rng: &mut ChaCha8Rng, normalized: bool, cap: usize) -> CochainTower<Rational> {
    let shape = TowerShape { max_ell: 2, max_k: 3, density: 0.6, coeff: 3 };
    let deg = rng.gen_range(-2..=2);
    let t = random_tower(rng, s.q().spaces(), deg, Window::Capped(cap), &shape).unwrap();
    if normalized {
        normalized_project(&t, s.unit().unwrap()).unwrap()
    } else {
        t
    }
}

fn fixtures() -> Vec<(&'static str, OchaStructure<Rational>)> {
    vec![
        ("s2", s2_model().unwrap()),
        ("s2dz", s2_model_with_dz().unwrap()),
        ("cp2", cp2_model().unwrap()),
    ]
}

#[test]
fn delta_squares_to_zero_and_preserves_normalized() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for (name, s) in fixtures() {
        for _ in 0..15 {
            let d = random_for(&s, &mut rng, false, 5);
            let dd = hochschild_delta(&s, &hochschild_delta(&s, &d).unwrap()).unwrap();
            assert!(dd.is_zero(), "{name}: {:?}", dd.first_nonzero());
            let n = random_for(&s, &mut rng, true, 5);
            assert!(hochschild_delta(&s, &n).unwrap().is_normalized(s.unit().unwrap()), "{name}");
        }
    }
}

#[test]
fn q_lemmas() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for (name, s) in fixtures() {
        let ts: Vec<_> = (0..6).map(|i| random_for(&s, &mut rng, i % 2 == 0, 5)).collect();
        let r = q_lemma_suite(&s, &ts).unwrap();
        assert!(r.passed(), "{name}:\n{r}");
    }
}

#[test]
fn bv_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for (name, s) in fixtures() {
        for _ in 0..12 {
            let d = random_for(&s, &mut rng, true, 5);
            let e = random_for(&s, &mut rng, true, 5);
            let r = bv_verify(&s, &d, &e).unwrap();
            assert!(r.passed(), "{name} |D|={} |E|={}:\n{r}", d.degree(), e.degree());
        }
    }
}
