use std::collections::BTreeMap;
use std::sync::Arc;

use ocha_core::cyclic::{bv_delta, cyclicize, is_cyclic};
use ocha_core::io::{parse_structure, serialize, StructureFile};
use ocha_core::ocha::{normalized_project, OchaStructure};
use ocha_core::random::{random_cyclic_spaces, random_tower, TowerShape};
use ocha_core::{CeTower, CochainTower, CyclicContext, Field, Fp, OcSpaces, Rational, Window};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SHAPE: TowerShape = TowerShape { max_ell: 2, max_k: 3, density: 0.5, coeff: 4 };

fn setup<F: Field>(seed: u64, dim_a: usize, dim_z: usize) -> (ChaCha8Rng, Arc<OcSpaces>, CyclicContext<F>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (sp, ctx) = random_cyclic_spaces::<F, _>(&mut rng, dim_a, dim_z).unwrap();
    (rng, sp, ctx)
}

fn bundle<F: Field>(seed: u64, dim_a: usize, dim_z: usize, n: usize) -> StructureFile<F> {
    let (mut rng, sp, ctx) = setup::<F>(seed, dim_a, dim_z);
    let mut towers = BTreeMap::new();
    for i in 0..n {
        let deg = (i as i64 % 5) - 2;
        let win = if i % 2 == 0 { Window::Capped(4) } else { Window::Finite };
        towers.insert(format!("T{i}"), random_tower(&mut rng, &sp, deg, win, &SHAPE).unwrap());
    }
    let s = OchaStructure::new(
        CeTower::new(sp.clone(), 1),
        CochainTower::new(sp, 1, Window::Finite),
        Some(ctx.unit().clone()),
        Some(Arc::new(ctx.omega().clone())),
    )
    .unwrap();
    StructureFile::new(s, towers).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn structure_files_round_trip(seed in any::<u64>(), dim_a in 1usize..=3, dim_z in 1usize..=3, n in 0usize..4) {
        let f = bundle::<Rational>(seed, dim_a, dim_z, n);
        let text = serialize(&f);
        let back = parse_structure::<Rational>(&text).unwrap();
        prop_assert!(back == f);
        prop_assert_eq!(serialize(&back), text);
    }

    #[test]
    fn prime_field_files_round_trip(seed in any::<u64>(), dim_a in 1usize..=3, n in 0usize..3) {
        let f = bundle::<Fp<32003>>(seed, dim_a, 1, n);
        let text = serialize(&f);
        prop_assert_eq!(serialize(&parse_structure::<Fp<32003>>(&text).unwrap()), text);
    }

    #[test]
    fn normalized_projection_is_idempotent(seed in any::<u64>(), dim_a in 1usize..=3, deg in -2i64..=2) {
        let (mut rng, sp, ctx) = setup::<Rational>(seed, dim_a, 1);
        let t = random_tower(&mut rng, &sp, deg, Window::Capped(4), &SHAPE).unwrap();
        let p = normalized_project(&t, ctx.unit()).unwrap();
        prop_assert!(p.is_normalized(ctx.unit()));
        prop_assert!(normalized_project(&p, ctx.unit()).unwrap() == p);
    }

    #[test]
    fn cyclicize_projects_onto_cyclic_towers(seed in any::<u64>(), dim_a in 1usize..=3, deg in -2i64..=2) {
        let (mut rng, sp, ctx) = setup::<Rational>(seed, dim_a, 1);
        let t = random_tower(&mut rng, &sp, deg, Window::Capped(4), &SHAPE).unwrap();
        let c = cyclicize(&t, ctx.omega()).unwrap();
        prop_assert!(is_cyclic(&c, ctx.omega()));
        prop_assert!(cyclicize(&c, ctx.omega()).unwrap() == c);
    }

    #[test]
    fn bv_delta_squares_to_zero_on_normalized(seed in any::<u64>(), dim_a in 1usize..=3, deg in -2i64..=2) {
        let (mut rng, sp, ctx) = setup::<Rational>(seed, dim_a, 2);
        let t = random_tower(&mut rng, &sp, deg, Window::Capped(5), &SHAPE).unwrap();
        let n = normalized_project(&t, ctx.unit()).unwrap();
        prop_assert!(bv_delta(&bv_delta(&n, &ctx).unwrap(), &ctx).unwrap().is_zero());
    }

    #[test]
    fn rational_arithmetic_is_exact(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
        let x = Rational::new(a, b).unwrap();
        let y = Rational::new(c, d).unwrap();
        prop_assert_eq!(x.clone() + y.clone(), Rational::new(a * d + c * b, b * d).unwrap());
        prop_assert_eq!(x.clone() * y.clone(), Rational::new(a * c, b * d).unwrap());
        if a != 0 {
            prop_assert_eq!(x.clone() * x.inv().unwrap(), Rational::one());
        }
        prop_assert_eq!(Rational::parse_canonical(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn prime_arithmetic_matches_integers(a in any::<i64>(), b in any::<i64>()) {
        const P: i128 = 1_000_003;
        let m = |v: i128| Fp::<1_000_003>::new(v.rem_euclid(P) as i64);
        let (x, y) = (Fp::<1_000_003>::new(a), Fp::<1_000_003>::new(b));
        prop_assert_eq!(x * y, m(a as i128 * b as i128));
        prop_assert_eq!(x + y, m(a as i128 + b as i128));
        prop_assert_eq!(x - y, m(a as i128 - b as i128));
    }
}
