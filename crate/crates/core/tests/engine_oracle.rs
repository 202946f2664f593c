use ocha_core::engine::evaluate;
use ocha_core::oracle::compare_with_oracle;
use ocha_core::random::{random_cyclic_spaces, random_tower, TowerShape};
use ocha_core::{CochainTower, Expr, Rational, Window};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn check(expr: &Expr<'_, Rational>, ctx: &ocha_core::CyclicContext<Rational>, arity: usize) {
    let v = evaluate(expr, Some(ctx)).unwrap();
    assert!(v.degree_audit());
    if let Some(msg) = compare_with_oracle(expr, Some(ctx), &v, arity).unwrap() {
        panic!("{msg}");
    }
}

#[test]
fn engine_matches_brute_force_on_random_trees() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let shape = TowerShape { max_ell: 2, max_k: 3, density: 0.6, coeff: 3 };
    for _ in 0..12 {
        let dim_a = rng.gen_range(1..=3);
        let dim_z = rng.gen_range(1..=2);
        let (sp, ctx) = random_cyclic_spaces::<Rational, _>(&mut rng, dim_a, dim_z).unwrap();
        let win = Window::Capped(4);
        let ts: Vec<CochainTower<Rational>> =
            (0..4)
                .map(|_| {
                    let deg = rng.gen_range(-2..=2);
                    random_tower(&mut rng, &sp, deg, win, &shape).unwrap()
                })
                .collect();
        let (d, e, f, g) = (&ts[0], &ts[1], &ts[2], &ts[3]);
        check(&Expr::brace(d, &[e]), &ctx, 4);
        check(&Expr::brace(d, &[e, f]), &ctx, 4);
        check(&Expr::first_order(d, &[], 0).unwrap(), &ctx, 3);
        check(&Expr::first_order(d, &[e], 0).unwrap(), &ctx, 3);
        check(&Expr::first_order(d, &[e], 1).unwrap(), &ctx, 3);
        check(&Expr::first_order(d, &[e, f], 1).unwrap(), &ctx, 3);
        check(&Expr::second_order(d, &[e], 1, &[], 0).unwrap(), &ctx, 3);
        check(&Expr::second_order(d, &[e], 1, &[f], 0).unwrap(), &ctx, 3);
        check(&Expr::second_order(d, &[e], 1, &[f], 1).unwrap(), &ctx, 3);
        check(&Expr::second_order(d, &[e, g], 2, &[f], 1).unwrap(), &ctx, 3);
        let mut nested = Expr::brace(d, &[e]);
        nested.args[0] = ocha_core::Arg::Op(Expr::brace(e, &[f]));
        check(&nested, &ctx, 4);
    }
}
