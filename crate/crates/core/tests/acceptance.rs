//! One line per acceptance criterion; exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use ocha_core::brace::{brace, brace_relation_residual, leibniz_residual};
use ocha_core::builder::{cp2_model, s2_model, s2_model_with_dz};
use ocha_core::bv::{bv_identity_residual, bv_relation_residual, q_lemma_suite};
use ocha_core::cohomology::{cohomology, CohomologyReport};
use ocha_core::cyclic::{
    cyclic_relation_residual_i, cyclic_relation_residual_ii, cyclicize, interchange_first, interchange_second,
};
use ocha_core::engine::evaluate;
use ocha_core::io::parse_structure;
use ocha_core::ocha::{hochschild_delta, normalized_project, OchaStructure};
use ocha_core::oracle::compare_with_oracle;
use ocha_core::random::{random_ce_tower, random_cyclic_spaces, random_tower, TowerShape};
use ocha_core::suites::ClosedSampler;
use ocha_core::{CochainTower, CyclicContext, Expr, OcSpaces, Rational, Window};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type R = Rational;
type T = CochainTower<R>;
type Outcome = Result<String, String>;
type Criterion = (&'static str, fn(&mut ChaCha8Rng) -> Outcome);

const SHAPE: TowerShape = TowerShape { max_ell: 2, max_k: 3, density: 0.6, coeff: 3 };

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)*) => {
        if !$cond {
            return Err(format!($($fmt)*));
        }
    };
}

fn e2s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn tower(rng: &mut ChaCha8Rng, sp: &std::sync::Arc<OcSpaces>, cap: usize) -> Result<T, String> {
    let deg = rng.gen_range(-2..=2);
    random_tower(rng, sp, deg, Window::Capped(cap), &SHAPE).map_err(e2s)
}

fn towers(rng: &mut ChaCha8Rng, sp: &std::sync::Arc<OcSpaces>, n: usize, cap: usize) -> Result<Vec<T>, String> {
    (0..n).map(|_| tower(rng, sp, cap)).collect()
}

fn random_space(rng: &mut ChaCha8Rng) -> Result<(std::sync::Arc<OcSpaces>, CyclicContext<R>), String> {
    let (dim_a, dim_z) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
    random_cyclic_spaces::<R, _>(rng, dim_a, dim_z).map_err(e2s)
}

fn zero(t: &T, what: &str) -> Result<(), String> {
    match t.first_nonzero() {
        None => Ok(()),
        Some(w) => Err(format!("{what}: {w}")),
    }
}

fn oracle_agrees(expr: &Expr<'_, R>, ctx: &CyclicContext<R>) -> Result<(), String> {
    let v = evaluate(expr, Some(ctx)).map_err(e2s)?;
    let arity = v.window().cap().unwrap_or(5);
    match compare_with_oracle(expr, Some(ctx), &v, arity).map_err(e2s)? {
        None => Ok(()),
        Some(m) => Err(m),
    }
}

/// Every brace, `Δ` and cyclic brace of a random tree of towers agrees with the oracle.
fn oracle_round(ts: &[&T], ctx: &CyclicContext<R>) -> Result<usize, String> {
    let (d, e, f) = (ts[0], ts[1], ts[2]);
    let mut nested = Expr::brace(d, &[e]);
    nested.args[0] = ocha_core::Arg::Op(Expr::brace(e, &[f]));
    let exprs = [
        Expr::brace(d, &[e]),
        Expr::brace(d, &[e, f]),
        nested,
        Expr::first_order(d, &[], 0).map_err(e2s)?,
        Expr::first_order(d, &[e], 0).map_err(e2s)?,
        Expr::first_order(d, &[e], 1).map_err(e2s)?,
        Expr::first_order(d, &[e, f], 1).map_err(e2s)?,
        Expr::second_order(d, &[e], 1, &[], 0).map_err(e2s)?,
        Expr::second_order(d, &[e], 1, &[f], 0).map_err(e2s)?,
        Expr::second_order(d, &[e], 1, &[f], 1).map_err(e2s)?,
        Expr::second_order(d, &[e, f], 2, &[], 0).map_err(e2s)?,
    ];
    for x in &exprs {
        oracle_agrees(x, ctx)?;
    }
    Ok(exprs.len())
}

fn oracle_equivalence(rng: &mut ChaCha8Rng) -> Outcome {
    let (mut towers_seen, mut exprs) = (0, 0);
    for trial in 0..36 {
        let (sp, ctx) = random_space(rng)?;
        let cap = 4 + trial % 2;
        let ts = towers(rng, &sp, 3, cap)?;
        towers_seen += ts.len();
        exprs += oracle_round(&ts.iter().collect::<Vec<_>>(), &ctx).map_err(|m| format!("trial {trial}: {m}"))?;
    }
    ensure!(towers_seen >= 100, "only {towers_seen} towers");
    Ok(format!("{towers_seen} towers, {exprs} expressions"))
}

fn brace_relations(rng: &mut ChaCha8Rng) -> Outcome {
    let mut trials = 0;
    for trial in 0..108 {
        let (m, n) = (trial % 3, (trial / 3) % 3);
        let (sp, _) = random_space(rng)?;
        let ts = towers(rng, &sp, 1 + m + n, 5)?;
        let refs: Vec<&T> = ts.iter().collect();
        zero(&brace_relation_residual(refs[0], &refs[1..1 + m], &refs[1 + m..]).map_err(e2s)?, &format!("brace m={m} n={n}"))?;
        let ldeg = rng.gen_range(-2..=2);
        let l = random_ce_tower(rng, &sp, ldeg, 2, &TowerShape { max_k: 0, density: 0.7, ..SHAPE }).map_err(e2s)?;
        zero(&leibniz_residual(&l, refs[0], &refs[1..1 + m]).map_err(e2s)?, &format!("leibniz m={m}"))?;
        trials += 1;
    }
    Ok(format!("{trials} trials, m,n ≤ 2"))
}

fn cyclic_relations(rng: &mut ChaCha8Rng) -> Outcome {
    let mut degrees = std::collections::BTreeSet::new();
    for trial in 0..108 {
        let (m, n) = (trial % 3, (trial / 3) % 4);
        let (sp, ctx) = random_space(rng)?;
        let ts = towers(rng, &sp, 1 + m + n, 5)?;
        degrees.extend(ts.iter().map(|t| t.degree()));
        let refs: Vec<&T> = ts.iter().collect();
        let (d, es, fs) = (refs[0], &refs[1..1 + m], &refs[1 + m..]);
        zero(&cyclic_relation_residual_i(d, es, fs, &ctx).map_err(e2s)?, &format!("(i) m={m} n={n}"))?;
        zero(&cyclic_relation_residual_ii(d, es, fs, &ctx).map_err(e2s)?, &format!("(ii) m={m} n={n}"))?;
    }
    ensure!(degrees.len() == 5, "degrees seen: {degrees:?}");
    Ok("108 trials, m ≤ 2, n ≤ 3, degrees -2..2".into())
}

fn interchange_round(f: &T, ts: &[T], rng: &mut ChaCha8Rng, ctx: &CyclicContext<R>) -> Result<(), String> {
    let refs: Vec<&T> = ts.iter().collect();
    let n = refs.len() - 1;
    let m = rng.gen_range(0..=n);
    zero(&interchange_first(f, refs[0], &refs[1..], m, ctx).map_err(e2s)?, &format!("first n={n} m={m}"))?;
    let s = rng.gen_range(1..=n);
    zero(&interchange_second(f, &refs[1..], s, ctx).map_err(e2s)?, &format!("second n={n} s={s}"))
}

fn interchanges_with(s: &OchaStructure<R>, rng: &mut ChaCha8Rng, trials: usize) -> Result<(), String> {
    let ctx = s.require_cyclic_unital().map_err(e2s)?;
    for _ in 0..trials {
        let n = rng.gen_range(1..=3);
        let ts = towers(rng, s.q().spaces(), 1 + n, 5)?;
        interchange_round(s.q(), &ts, rng, ctx)?;
    }
    Ok(())
}

fn interchanges(rng: &mut ChaCha8Rng) -> Outcome {
    for _ in 0..60 {
        let (sp, ctx) = random_space(rng)?;
        let f = cyclicize(&tower(rng, &sp, 5)?, ctx.omega()).map_err(e2s)?;
        let n = rng.gen_range(1..=3);
        let ts = towers(rng, &sp, 1 + n, 5)?;
        interchange_round(&f, &ts, rng, &ctx)?;
    }
    interchanges_with(&s2_model().map_err(e2s)?, rng, 40)?;
    Ok("60 trials with cyclicized F, 40 with F = q of the S² model".into())
}

fn audits(s: &OchaStructure<R>) -> Result<(), String> {
    let r = s.audit().map_err(e2s)?;
    ensure!(r.passed(), "{r}");
    ensure!(r.entries.len() == 5, "audit incomplete:\n{r}");
    Ok(())
}

fn random_in(s: &OchaStructure<R>, rng: &mut ChaCha8Rng, normalized: bool) -> Result<T, String> {
    let t = tower(rng, s.q().spaces(), 5)?;
    if normalized {
        normalized_project(&t, s.unit().unwrap()).map_err(e2s)
    } else {
        Ok(t)
    }
}

fn ocha_layer_on(s: &OchaStructure<R>, rng: &mut ChaCha8Rng, trials: usize) -> Result<(), String> {
    audits(s)?;
    for _ in 0..trials {
        let d = random_in(s, rng, false)?;
        zero(&hochschild_delta(s, &hochschild_delta(s, &d).map_err(e2s)?).map_err(e2s)?, "δ²")?;
        let n = random_in(s, rng, true)?;
        ensure!(hochschild_delta(s, &n).map_err(e2s)?.is_normalized(s.unit().unwrap()), "δ leaves the normalized towers");
    }
    Ok(())
}

fn ocha_layer(rng: &mut ChaCha8Rng) -> Outcome {
    let s2dz = s2_model_with_dz().map_err(e2s)?;
    ensure!(s2dz.q().component(1, 0).is_some_and(|c| !c.is_zero()), "f vanishes");
    ensure!(!s2dz.l().is_zero(), "d_Z vanishes");
    ocha_layer_on(&s2_model().map_err(e2s)?, rng, 100)?;
    ocha_layer_on(&s2dz, rng, 100)?;
    Ok("S² and S² with f, d_Z: audits pass, δ² = 0 on 200 towers".into())
}

fn q_lemmas_on(s: &OchaStructure<R>, rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let ts = (0..24).map(|i| random_in(s, rng, i % 2 == 0)).collect::<Result<Vec<_>, _>>()?;
    let r = q_lemma_suite(s, &ts).map_err(e2s)?;
    ensure!(r.passed(), "{r}");
    Ok(r.entries.len())
}

fn q_lemmas(rng: &mut ChaCha8Rng) -> Outcome {
    let a = q_lemmas_on(&s2_model().map_err(e2s)?, rng)?;
    let b = q_lemmas_on(&s2_model_with_dz().map_err(e2s)?, rng)?;
    Ok(format!("{} identities checked", a + b))
}

fn bv_on(s: &OchaStructure<R>, rng: &mut ChaCha8Rng, pairs: usize) -> Result<(usize, usize), String> {
    for _ in 0..pairs {
        let (d, e) = (random_in(s, rng, true)?, random_in(s, rng, true)?);
        zero(&bv_identity_residual(s, &d, &e).map_err(e2s)?, &format!("|D|={} |E|={}", d.degree(), e.degree()))?;
    }
    let sampler = ClosedSampler::new(s, 4, -3..=3, true).map_err(e2s)?;
    let mut closed = 0;
    for _ in 0..20 {
        let (Some(d), Some(e)) = (sampler.sample(rng).map_err(e2s)?, sampler.sample(rng).map_err(e2s)?) else {
            continue;
        };
        ensure!(hochschild_delta(s, &d).map_err(e2s)?.truncate(4).is_zero(), "sampled tower not closed");
        zero(&bv_relation_residual(s, &d, &e).map_err(e2s)?, "bv relation with primitive")?;
        closed += 1;
    }
    Ok((pairs, closed))
}

fn bv(rng: &mut ChaCha8Rng) -> Outcome {
    let (p1, c1) = bv_on(&s2_model().map_err(e2s)?, rng, 30)?;
    let (p2, c2) = bv_on(&s2_model_with_dz().map_err(e2s)?, rng, 30)?;
    ensure!(c1 + c2 > 0, "no closed pairs");
    Ok(format!("{} normalized pairs, {} closed pairs", p1 + p2, c1 + c2))
}

fn pure_a_infinity(rng: &mut ChaCha8Rng) -> Outcome {
    let s = cp2_model().map_err(e2s)?;
    ensure!(s.l().is_zero(), "l does not vanish");
    ensure!(s.q().bidegrees().all(|(l, _)| l == 0), "q has closed inputs");
    let ctx = s.require_cyclic_unital().map_err(e2s)?;
    let sp = s.q().spaces().clone();
    for _ in 0..10 {
        let ts = towers(rng, &sp, 2, 4)?;
        oracle_round(&[s.q(), &ts[0], &ts[1]], ctx)?;
        oracle_round(&[&ts[0], s.q(), &ts[1]], ctx)?;
        let refs: Vec<&T> = ts.iter().collect();
        zero(&brace_relation_residual(s.q(), &refs[..1], &refs[1..]).map_err(e2s)?, "brace relation")?;
        zero(&cyclic_relation_residual_i(s.q(), &refs[..1], &refs[1..], ctx).map_err(e2s)?, "(i)")?;
        zero(&cyclic_relation_residual_ii(&ts[0], &[s.q()], &refs[1..], ctx).map_err(e2s)?, "(ii)")?;
        zero(&brace(s.q(), &[s.q()]).map_err(e2s)?, "q{q}")?;
    }
    interchanges_with(&s, rng, 30)?;
    ocha_layer_on(&s, rng, 100)?;
    q_lemmas_on(&s, rng)?;
    let (p, c) = bv_on(&s, rng, 50)?;
    Ok(format!("CP²: oracle, relations, OCHA layer, q-lemmas, {p} BV pairs, {c} closed pairs"))
}

fn same_report(a: &CohomologyReport<R>, b: &CohomologyReport<R>) -> bool {
    a.delta_squared_zero == b.delta_squared_zero
        && a.rows.len() == b.rows.len()
        && a.rows.iter().zip(&b.rows).all(|(x, y)| {
            (x.degree, x.cochains, x.kernel, x.image) == (y.degree, y.cochains, y.kernel, y.image)
                && x.representatives == y.representatives
        })
}

fn capped_cohomology(_: &mut ChaCha8Rng) -> Outcome {
    let s = s2_model::<R>().map_err(e2s)?;
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(e2s)?;
        pool.install(|| cohomology(&s, 4, -4..=4, true)).map_err(e2s)
    };
    let base = run(1)?;
    ensure!(base.delta_squared_zero, "δ∘δ matrix nonzero");
    for row in &base.rows {
        ensure!(row.representatives.len() == row.kernel - row.image, "degree {}: dim H mismatch", row.degree);
        for t in &row.representatives {
            ensure!(hochschild_delta(&s, t).map_err(e2s)?.truncate(4).is_zero(), "degree {}: open representative", row.degree);
        }
    }
    for threads in [1, 2, 4] {
        ensure!(same_report(&base, &run(threads)?), "result changed with {threads} threads");
    }
    let dims: Vec<String> = base.rows.iter().map(|r| r.cohomology().to_string()).collect();
    Ok(format!("H at degrees -4..4 = [{}]", dims.join(" ")))
}

fn golden_counterexample(_: &mut ChaCha8Rng) -> Outcome {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/diamond_counterexample.ocha");
    let text = std::fs::read_to_string(path).map_err(e2s)?;
    let file = parse_structure::<R>(&text).map_err(e2s)?;
    let ctx = file.structure.context().map_err(e2s)?;
    let get = |n: &str| file.tower(n).map_err(e2s);
    let (d, e, f) = (get("D")?, get("E")?, get("F")?);
    let (want_diamond, want_delta) = (get("diamond")?, get("delta")?);

    let diamond_expr = Expr::second_order(d, &[e], 1, &[f], 1).map_err(e2s)?;
    let diamond = evaluate(&diamond_expr, Some(ctx)).map_err(e2s)?;
    ensure!(&diamond == want_diamond, "engine D{{E{{F,◊}}}} differs from the stored value");
    ensure!(compare_with_oracle(&diamond_expr, Some(ctx), want_diamond, 3).map_err(e2s)?.is_none(), "oracle disagrees on D{{E{{F,◊}}}}");

    let inner_expr = Expr::first_order(e, &[f], 1).map_err(e2s)?;
    let inner = evaluate(&inner_expr, Some(ctx)).map_err(e2s)?;
    ensure!(compare_with_oracle(&inner_expr, Some(ctx), &inner, 3).map_err(e2s)?.is_none(), "oracle disagrees on E{{F,Δ}}");
    let outer_expr = Expr::brace(d, &[&inner]);
    let delta = evaluate(&outer_expr, Some(ctx)).map_err(e2s)?;
    ensure!(&delta == want_delta, "engine D{{E{{F,Δ}}}} differs from the stored value");
    ensure!(compare_with_oracle(&outer_expr, Some(ctx), want_delta, 3).map_err(e2s)?.is_none(), "oracle disagrees on D{{E{{F,Δ}}}}");

    let diff = diamond.sub(&delta).map_err(e2s)?;
    let w = diff.first_nonzero().ok_or("the two values agree")?;
    Ok(format!("differ at {w}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("oracle equivalence", oracle_equivalence),
        ("brace relation and Leibniz rule", brace_relations),
        ("cyclic brace relations", cyclic_relations),
        ("interchange identities", interchanges),
        ("OCHA layer", ocha_layer),
        ("q against Δ and ◊", q_lemmas),
        ("BV identity", bv),
        ("pure cyclic unital A∞ specialization", pure_a_infinity),
        ("capped cohomology of S²", capped_cohomology),
        ("golden counterexample", golden_counterexample),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + i as u64);
        let start = Instant::now();
        let out = run(&mut rng);
        let secs = start.elapsed().as_secs_f64();
        match out {
            Ok(detail) => println!("[PRIMARY] {:>2} {name}: PASS ({detail}; {secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("[PRIMARY] {:>2} {name}: FAIL ({why})", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
