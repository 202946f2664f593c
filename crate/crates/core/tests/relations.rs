use ocha_core::brace::{brace_relation_residual, leibniz_residual};
use ocha_core::cyclic::{cyclic_relation_residual_i, cyclic_relation_residual_ii};
use ocha_core::random::{random_ce_tower, random_cyclic_spaces, random_tower, TowerShape};
use ocha_core::{CochainTower, Rational, Window};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn towers(rng: &mut ChaCha8Rng, n: usize, dim_a: usize) -> (Vec<CochainTower<Rational>>, ocha_core::CyclicContext<Rational>) {
    let shape = TowerShape { max_ell: 2, max_k: 3, density: 0.6, coeff: 3 };
    let dim_z = rng.gen_range(1..=2);
    let (sp, ctx) = random_cyclic_spaces::<Rational, _>(rng, dim_a, dim_z).unwrap();
    let ts = (0..n)
        .map(|_| {
            let deg = rng.gen_range(-2..=2);
            random_tower(rng, &sp, deg, Window::Capped(5), &shape).unwrap()
        })
        .collect();
    (ts, ctx)
}

#[test]
fn brace_relation_holds() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for trial in 0..20 {
        let m = trial % 3;
        let n = (trial / 3) % 3;
        let (ts, _) = towers(&mut rng, 1 + m + n, 3);
        let refs: Vec<&CochainTower<Rational>> = ts.iter().collect();
        let r = brace_relation_residual(refs[0], &refs[1..1 + m], &refs[1 + m..]).unwrap();
        assert!(r.is_zero(), "m={m} n={n}: {:?}", r.first_nonzero());
    }
}

#[test]
fn leibniz_holds() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for trial in 0..20 {
        let m = trial % 3;
        let (ts, _) = towers(&mut rng, 1 + m, 3);
        let sp = ts[0].spaces().clone();
        let shape = TowerShape { max_ell: 2, max_k: 0, density: 0.7, coeff: 3 };
        let deg = rng.gen_range(-2..=2);
        let l = random_ce_tower(&mut rng, &sp, deg, 2, &shape).unwrap();
        let refs: Vec<&CochainTower<Rational>> = ts.iter().collect();
        let r = leibniz_residual(&l, refs[0], &refs[1..]).unwrap();
        assert!(r.is_zero(), "m={m}: {:?}", r.first_nonzero());
    }
}

#[test]
fn cyclic_relations_hold() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for trial in 0..24 {
        let m = trial % 3;
        let n = (trial / 3) % 4;
        let (ts, ctx) = towers(&mut rng, 1 + m + n, 3);
        let refs: Vec<&CochainTower<Rational>> = ts.iter().collect();
        let (d, es, fs) = (refs[0], &refs[1..1 + m], &refs[1 + m..]);
        let r1 = cyclic_relation_residual_i(d, es, fs, &ctx).unwrap();
        let r2 = cyclic_relation_residual_ii(d, es, fs, &ctx).unwrap();
        assert!(r1.is_zero(), "(i) m={m} n={n}: {:?}", r1.first_nonzero());
        assert!(r2.is_zero(), "(ii) m={m} n={n}: {:?}", r2.first_nonzero());
    }
}

#[test]
fn interchanges_hold_for_cyclic_f() {
    use ocha_core::cyclic::{cyclicize, interchange_first, interchange_second, is_cyclic};
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut nonzero = 0;
    for trial in 0..30 {
        let n = 1 + trial % 3;
        let (ts, ctx) = towers(&mut rng, 2 + n, 3);
        let f = cyclicize(&ts[0], ctx.omega()).unwrap();
        assert!(is_cyclic(&f, ctx.omega()));
        let refs: Vec<&CochainTower<Rational>> = ts[2..].iter().collect();
        let m = trial % (n + 1);
        let r1 = interchange_first(&f, &ts[1], &refs, m, &ctx).unwrap();
        assert!(r1.is_zero(), "first n={n} m={m}: {:?}", r1.first_nonzero());
        let s = 1 + trial % n;
        let r2 = interchange_second(&f, &refs, s, &ctx).unwrap();
        assert!(r2.is_zero(), "second n={n} s={s}: {:?}", r2.first_nonzero());
        if !ocha_core::brace::brace(&f, &[&ts[1]]).unwrap().is_zero() {
            nonzero += 1;
        }
    }
    assert!(nonzero > 5);
}

#[test]
fn delta_leibniz_holds() {
    use ocha_core::cyclic::delta_leibniz_residual;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for trial in 0..20 {
        let m = trial % 3;
        let (ts, ctx) = towers(&mut rng, 1 + m, 3);
        let sp = ts[0].spaces().clone();
        let shape = TowerShape { max_ell: 2, max_k: 0, density: 0.7, coeff: 3 };
        let deg = rng.gen_range(-2..=2);
        let l = random_ce_tower(&mut rng, &sp, deg, 2, &shape).unwrap();
        let refs: Vec<&CochainTower<Rational>> = ts.iter().collect();
        let r = delta_leibniz_residual(&l, refs[0], &refs[1..], m, &ctx).unwrap();
        assert!(r.is_zero(), "m={m}: {:?}", r.first_nonzero());
        if m > 0 {
            assert!(delta_leibniz_residual(&l, refs[0], &refs[1..], 0, &ctx).is_err());
        }
    }
}
