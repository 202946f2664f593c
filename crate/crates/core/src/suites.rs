//! Randomized residual suites with shrinking of failing instances.
//!
//! A [`Check`] is a named residual over input towers; a failure is shrunk by
//! dropping whole components of the inputs while the residual stays nonzero.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::brace::{brace_relation_residual, leibniz_residual};
use crate::bv::{
    brace_decomposition_residual, bv_identity_residual, bv_relation_residual, delta_cup_residual,
};
use crate::cochain::{CochainTower, Window};
use crate::cohomology::closed_towers;
use crate::cyclic::{
    bv_delta, cyclic_brace1, cyclic_brace2, cyclic_relation_residual_i, cyclic_relation_residual_ii, cyclicize,
    delta_leibniz_residual, interchange_first, interchange_second,
};
use crate::error::Result;
use crate::field::Field;
use crate::io::tower_block;
use crate::ocha::{hochschild_delta, normalized_project, OchaStructure};
use crate::random::{random_ce_tower, random_cyclic_spaces, random_tower, TowerShape};

type Eval<'a, F> = Box<dyn Fn(&[&CochainTower<F>]) -> Result<CochainTower<F>> + Send + Sync + 'a>;

/// A named residual; it passes when the residual is the zero tower.
pub struct Check<'a, F> {
    pub name: String,
    inputs: Vec<(String, CochainTower<F>)>,
    eval: Eval<'a, F>,
}

/// A failing check after shrinking.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub name: String,
    pub residual: String,
    /// The shrunk inputs as structure-file tower blocks.
    pub inputs: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FAIL  {}: {}", self.name, self.residual)?;
        for line in self.inputs.lines() {
            writeln!(f, "      {line}")?;
        }
        Ok(())
    }
}

impl<'a, F: Field> Check<'a, F> {
    pub fn new(
        name: impl Into<String>,
        inputs: Vec<(&str, CochainTower<F>)>,
        eval: impl Fn(&[&CochainTower<F>]) -> Result<CochainTower<F>> + Send + Sync + 'a,
    ) -> Self {
        let inputs = inputs.into_iter().map(|(n, t)| (n.to_string(), t)).collect();
        Check { name: name.into(), inputs, eval: Box::new(eval) }
    }

    fn residual(&self, inputs: &[CochainTower<F>]) -> Result<CochainTower<F>> {
        let refs: Vec<&CochainTower<F>> = inputs.iter().collect();
        (self.eval)(&refs)
    }

    /// `None` on success, the shrunk instance otherwise.
    pub fn run(&self) -> Result<Option<Failure>> {
        let mut current: Vec<CochainTower<F>> = self.inputs.iter().map(|(_, t)| t.clone()).collect();
        if self.residual(&current)?.is_zero() {
            return Ok(None);
        }
        let fails = |ts: &[CochainTower<F>]| self.residual(ts).map(|r| !r.is_zero()).unwrap_or(false);
        loop {
            let mut progress = false;
            for i in 0..current.len() {
                for key in current[i].bidegrees().collect::<Vec<_>>() {
                    let mut trial = current.clone();
                    trial[i] = current[i].filter_components(|l, k| (l, k) != key);
                    if fails(&trial) {
                        current = trial;
                        progress = true;
                    }
                }
            }
            if !progress {
                break;
            }
        }
        let residual = self
            .residual(&current)?
            .first_nonzero()
            .map_or_else(|| "nonzero".to_string(), |w| w.to_string());
        let inputs = self.inputs.iter().zip(&current).map(|((n, _), t)| tower_block(n, t)).collect();
        Ok(Some(Failure { name: self.name.clone(), residual, inputs }))
    }
}

/// The outcome of one randomized trial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialReport {
    pub trial: u64,
    pub checks: usize,
    pub failures: Vec<Failure>,
}

impl TrialReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for TrialReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "ok" } else { "FAIL" };
        writeln!(f, "trial {}: {status} ({} checks, {} failed)", self.trial, self.checks, self.failures.len())?;
        for x in &self.failures {
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

/// Runs every check of a trial.
pub fn run_checks<F: Field>(trial: u64, checks: &[Check<'_, F>]) -> Result<TrialReport> {
    let mut failures = Vec::new();
    for c in checks {
        if let Some(x) = c.run()? {
            failures.push(x);
        }
    }
    Ok(TrialReport { trial, checks: checks.len(), failures })
}

/// The generator for trial `t` of a seeded run; independent of how trials are scheduled.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Sizes for random inputs.
#[derive(Clone, Copy, Debug)]
pub struct SuiteShape {
    pub dim_a: usize,
    pub dim_z: usize,
    pub cap: usize,
    pub tower: TowerShape,
}

impl Default for SuiteShape {
    fn default() -> Self {
        SuiteShape { dim_a: 3, dim_z: 2, cap: 5, tower: TowerShape { max_ell: 2, max_k: 3, density: 0.6, coeff: 3 } }
    }
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// Brace relation and Leibniz rule, cyclic brace relations, interchanges with a
/// cyclicized `F`, and the `Δ`-Leibniz rule, on random cyclic spaces.
pub fn algebraic_checks<F: Field>(rng: &mut ChaCha8Rng, shape: &SuiteShape) -> Result<Vec<Check<'static, F>>> {
    let (sp, ctx) = random_cyclic_spaces::<F, _>(rng, shape.dim_a, shape.dim_z)?;
    let win = Window::Capped(shape.cap);
    let tower = |rng: &mut ChaCha8Rng| {
        let deg = rng.gen_range(-2..=2);
        random_tower::<F, _>(rng, &sp, deg, win, &shape.tower)
    };
    let mut checks = Vec::new();

    let (m, n) = (rng.gen_range(0..=2), rng.gen_range(0..=2));
    let mut ins = vec![("D".to_string(), tower(rng)?)];
    ins.extend(names("E", m).into_iter().map(|x| (x, tower(rng))).map(|(x, t)| t.map(|t| (x, t))).collect::<Result<Vec<_>>>()?);
    ins.extend(names("F", n).into_iter().map(|x| (x, tower(rng))).map(|(x, t)| t.map(|t| (x, t))).collect::<Result<Vec<_>>>()?);
    let owned = |v: &[(String, CochainTower<F>)]| v.iter().map(|(a, b)| (a.clone(), b.clone())).collect::<Vec<_>>();
    let pairs = owned(&ins);
    checks.push(Check::new(
        format!("brace relation m={m} n={n}"),
        pairs.iter().map(|(a, b)| (a.as_str(), b.clone())).collect(),
        move |t| brace_relation_residual(t[0], &t[1..1 + m], &t[1 + m..]),
    ));

    let l_deg = rng.gen_range(-2..=2);
    let l = random_ce_tower::<F, _>(rng, &sp, l_deg, 2, &TowerShape { max_k: 0, density: 0.7, ..shape.tower })?;
    {
        let l = l.clone();
        checks.push(Check::new(
            format!("leibniz m={m}"),
            pairs[..1 + m].iter().map(|(a, b)| (a.as_str(), b.clone())).collect(),
            move |t| leibniz_residual(&l, t[0], &t[1..]),
        ));
    }

    let (m, n) = (rng.gen_range(0..=2), rng.gen_range(0..=3));
    let mut ins = vec![("D".to_string(), tower(rng)?)];
    for x in names("E", m).into_iter().chain(names("F", n)) {
        ins.push((x, tower(rng)?));
    }
    for (label, second) in [("(i)", false), ("(ii)", true)] {
        let ctx = ctx.clone();
        checks.push(Check::new(
            format!("cyclic brace relation {label} m={m} n={n}"),
            ins.iter().map(|(a, b)| (a.as_str(), b.clone())).collect(),
            move |t| {
                if second {
                    cyclic_relation_residual_ii(t[0], &t[1..1 + m], &t[1 + m..], &ctx)
                } else {
                    cyclic_relation_residual_i(t[0], &t[1..1 + m], &t[1 + m..], &ctx)
                }
            },
        ));
    }

    let n = rng.gen_range(1..=3);
    let f = cyclicize(&tower(rng)?, ctx.omega())?;
    let mut ins = vec![("F".to_string(), f), ("D".to_string(), tower(rng)?)];
    for x in names("E", n) {
        ins.push((x, tower(rng)?));
    }
    let m = rng.gen_range(0..=n);
    {
        let ctx = ctx.clone();
        checks.push(Check::new(
            format!("interchange first n={n} m={m}"),
            ins.iter().map(|(a, b)| (a.as_str(), b.clone())).collect(),
            move |t| interchange_first(t[0], t[1], &t[2..], m, &ctx),
        ));
    }
    let s = rng.gen_range(1..=n);
    {
        let ctx = ctx.clone();
        let mut second: Vec<(&str, CochainTower<F>)> = vec![(ins[0].0.as_str(), ins[0].1.clone())];
        second.extend(ins[2..].iter().map(|(a, b)| (a.as_str(), b.clone())));
        checks.push(Check::new(format!("interchange second n={n} s={s}"), second, move |t| {
            interchange_second(t[0], &t[1..], s, &ctx)
        }));
    }

    let m = rng.gen_range(0..=2);
    let mut ins = vec![("D".to_string(), tower(rng)?)];
    for x in names("E", m) {
        ins.push((x, tower(rng)?));
    }
    checks.push(Check::new(
        format!("delta leibniz m={m}"),
        ins.iter().map(|(a, b)| (a.as_str(), b.clone())).collect(),
        move |t| delta_leibniz_residual(&l, t[0], &t[1..], t.len() - 1, &ctx),
    ));
    Ok(checks)
}

/// Random `δ`-closed towers of a capped complex, drawn from kernel bases.
pub struct ClosedSampler<F> {
    by_degree: Vec<Vec<CochainTower<F>>>,
}

impl<F: Field> ClosedSampler<F> {
    pub fn new(s: &OchaStructure<F>, cap: usize, degrees: std::ops::RangeInclusive<i64>, normalized: bool) -> Result<Self> {
        let mut by_degree = Vec::new();
        for d in degrees {
            let k = closed_towers(s, cap, d, normalized)?;
            if !k.is_empty() {
                by_degree.push(k);
            }
        }
        Ok(ClosedSampler { by_degree })
    }

    pub fn sample(&self, rng: &mut ChaCha8Rng) -> Result<Option<CochainTower<F>>> {
        let Some(basis) = self.by_degree.choose(rng) else {
            return Ok(None);
        };
        let coeffs: Vec<F> = basis.iter().map(|_| F::from_i64(rng.gen_range(-2..=2))).collect();
        let refs: Vec<&CochainTower<F>> = basis.iter().collect();
        CochainTower::linear_combine(&coeffs, &refs).map(Some)
    }
}

/// OCHA-layer, `𝔮`-lemma and BV checks on a cyclic unital structure with random inputs.
pub fn structure_checks<'a, F: Field>(
    s: &'a OchaStructure<F>,
    closed: Option<&ClosedSampler<F>>,
    rng: &mut ChaCha8Rng,
    shape: &SuiteShape,
) -> Result<Vec<Check<'a, F>>> {
    let ctx = s.require_cyclic_unital()?;
    let unit = ctx.unit().clone();
    let sp = s.q().spaces().clone();
    let win = Window::Capped(shape.cap);
    let raw = |rng: &mut ChaCha8Rng| {
        let deg = rng.gen_range(-2..=2);
        random_tower::<F, _>(rng, &sp, deg, win, &shape.tower)
    };
    let d0 = raw(rng)?;
    let normal = |rng: &mut ChaCha8Rng| raw(rng).and_then(|t| normalized_project(&t, &unit));
    let (d, e, g) = (normal(rng)?, normal(rng)?, normal(rng)?);
    let q = s.q();
    let mut checks: Vec<Check<'a, F>> = Vec::new();
    let one = |n: &'static str, t: &CochainTower<F>| vec![(n, t.clone())];
    let two = |t1: &CochainTower<F>, t2: &CochainTower<F>| vec![("D", t1.clone()), ("E", t2.clone())];

    checks.push(Check::new("δ² = 0", one("D", &d0), move |t| hochschild_delta(s, &hochschild_delta(s, t[0])?)));
    checks.push(Check::new("δ preserves normalized", one("D", &d), move |t| {
        let x = hochschild_delta(s, t[0])?;
        x.sub(&normalized_project(&x, s.unit().expect("unital"))?)
    }));
    let m = rng.gen_range(0..=2);
    checks.push(Check::new(format!("interchange first with q m={m}"), vec![("D", d0.clone()), ("E1", e.clone()), ("E2", g.clone())], move |t| {
        interchange_first(q, t[0], &t[1..], m, ctx)
    }));
    let sidx = rng.gen_range(1..=3);
    checks.push(Check::new(format!("interchange second with q s={sidx}"), vec![("D1", d0.clone()), ("D2", e.clone()), ("D3", g.clone())], move |t| {
        interchange_second(q, t, sidx, ctx)
    }));

    checks.push(Check::new("Δq = 0", Vec::new(), move |_| bv_delta(q, ctx)));
    checks.push(Check::new("q{D,Δ} = D", one("D", &d), move |t| cyclic_brace1(q, &[t[0]], 1, ctx)?.sub(t[0])));
    checks.push(Check::new("q{Δ,D} = -D", one("D", &d), move |t| cyclic_brace1(q, &[t[0]], 0, ctx)?.add(t[0])));
    let n = rng.gen_range(2..=3);
    let anchor = rng.gen_range(0..=n);
    checks.push(Check::new(
        format!("q{{…,Δ,…}} = 0 n={n} anchor={anchor}"),
        vec![("D1", d.clone()), ("D2", e.clone()), ("D3", g.clone())][..n].to_vec(),
        move |t| cyclic_brace1(q, t, anchor, ctx),
    ));
    checks.push(Check::new("q{D{◊}} = 0", one("D", &d), move |t| cyclic_brace2(q, &[t[0]], 1, &[], 0, ctx)));
    checks.push(Check::new("q{D{E,◊}} = 0", two(&d, &e), move |t| cyclic_brace2(q, &[t[0]], 1, &[t[1]], 1, ctx)));
    checks.push(Check::new("q{D{◊},E} antisymmetry", two(&d, &e), move |t| {
        let a = cyclic_brace2(q, &[t[0], t[1]], 1, &[], 0, ctx)?;
        let b = cyclic_brace2(q, &[t[1], t[0]], 2, &[], 0, ctx)?;
        a.add(&b.neg_if((t[0].degree() * t[1].degree()) & 1 != 0))
    }));
    checks.push(Check::new("Δ² = 0", one("D", &d), move |t| bv_delta(&bv_delta(t[0], ctx)?, ctx)));
    checks.push(Check::new("δΔ + Δδ = 0", one("D", &d), move |t| {
        hochschild_delta(s, &bv_delta(t[0], ctx)?)?.add(&bv_delta(&hochschild_delta(s, t[0])?, ctx)?)
    }));

    checks.push(Check::new("brace decomposition", two(&d, &e), move |t| brace_decomposition_residual(s, t[0], t[1])));
    checks.push(Check::new("delta of cup", two(&d, &e), move |t| delta_cup_residual(s, t[0], t[1])));
    checks.push(Check::new("bv identity", two(&d, &e), move |t| bv_identity_residual(s, t[0], t[1])));
    if let Some(sampler) = closed {
        if let (Some(a), Some(b)) = (sampler.sample(rng)?, sampler.sample(rng)?) {
            checks.push(Check::new("bv relation with primitive", two(&a, &b), move |t| bv_relation_residual(s, t[0], t[1])));
        }
    }
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::s2_model;
    use crate::field::Rational;

    #[test]
    fn trial_streams_are_reproducible() {
        let a: u64 = trial_rng(7, 3).gen();
        let b: u64 = trial_rng(7, 3).gen();
        let c: u64 = trial_rng(7, 4).gen();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn algebraic_suite_passes() {
        let shape = SuiteShape { dim_a: 2, dim_z: 1, cap: 4, ..SuiteShape::default() };
        for t in 0..4 {
            let checks = algebraic_checks::<Rational>(&mut trial_rng(1, t), &shape).unwrap();
            let r = run_checks(t, &checks).unwrap();
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn structure_suite_passes() {
        let s = s2_model::<Rational>().unwrap();
        let closed = ClosedSampler::new(&s, 4, -3..=3, true).unwrap();
        let shape = SuiteShape { cap: 4, ..SuiteShape::default() };
        for t in 0..3 {
            let checks = structure_checks(&s, Some(&closed), &mut trial_rng(2, t), &shape).unwrap();
            let r = run_checks(t, &checks).unwrap();
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn failures_are_shrunk() {
        let mut rng = trial_rng(3, 0);
        let (sp, _) = random_cyclic_spaces::<Rational, _>(&mut rng, 2, 1).unwrap();
        let d = random_tower::<Rational, _>(&mut rng, &sp, 0, Window::Capped(3), &TowerShape::default()).unwrap();
        assert!(d.bidegrees().count() > 1);
        let check = Check::new("identity is zero", vec![("D", d)], |t| Ok(t[0].clone()));
        let f = check.run().unwrap().unwrap();
        assert_eq!(f.inputs.matches("[component").count(), 1, "{f}");
    }
}
