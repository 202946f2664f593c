//! Cyclicity, the BV operator, first- and second-order cyclic braces and their relations.

use crate::brace::{brace, closed_action, degree_sum, nondecreasing, Interleaving, Residual};
use crate::cochain::{CeTower, CochainTower};
use crate::engine::evaluate;
use crate::error::{OchaError, Result};
use crate::expr::Expr;
use crate::field::{checked_count, Field};
use crate::graded::{tuple_at, tuple_index};
use crate::symplectic::{CyclicContext, SymplecticForm};

/// `Φ(x₁,…,x_{k+1}) = ω(D(z; x₁,…,x_k), x_{k+1})` for one component and word.
fn pairing_table<F: Field>(d: &CochainTower<F>, w: &SymplecticForm<F>, ell: usize, k: usize, word: usize) -> Vec<F> {
    let dim = d.spaces().dim_a();
    let comp = d.component(ell, k).expect("stored component");
    let mut phi = vec![F::zero(); dim.pow(k as u32 + 1)];
    for a in 0..dim.pow(k as u32) {
        let row = comp.row(word, a);
        if row.iter().all(F::is_zero) {
            continue;
        }
        for y in 0..dim {
            let mut e = vec![F::zero(); dim];
            e[y] = F::one();
            phi[a * dim + y] = w.pair(row, &e);
        }
    }
    phi
}

/// `(RΦ)(x) = (−1)^{|x_{k+1}| Σ_{i≤k} |x_i|} Φ(x_{k+1}, x₁,…,x_k)`.
fn rotate<F: Field>(phi: &[F], degs: &[i64], dim: usize, n: usize) -> Vec<F> {
    (0..phi.len())
        .map(|idx| {
            let x = tuple_at(dim, n, idx);
            let last = degs[x[n - 1]];
            let rest: i64 = x[..n - 1].iter().map(|&i| degs[i]).sum();
            let mut src = vec![x[n - 1]];
            src.extend_from_slice(&x[..n - 1]);
            phi[tuple_index(dim, &src)].clone().neg_if((last * rest) & 1 != 0)
        })
        .collect()
}

/// The first basis filling violating `ω`-cyclicity, if any.
pub fn cyclic_violation<F: Field>(d: &CochainTower<F>, w: &SymplecticForm<F>) -> Option<String> {
    let sp = d.spaces();
    let degs = sp.a.degrees();
    for c in d.components() {
        if c.k() == 0 {
            continue;
        }
        for word in 0..c.num_words() {
            let phi = pairing_table(d, w, c.ell(), c.k(), word);
            let rot = rotate(&phi, degs, sp.dim_a(), c.k() + 1);
            if let Some(idx) = (0..phi.len()).find(|&i| phi[i] != rot[i]) {
                let x = tuple_at(sp.dim_a(), c.k() + 1, idx);
                let labels: Vec<&str> = x.iter().map(|&i| sp.a.label(i)).collect();
                return Some(format!("({},{}) word {word}, inputs {labels:?}", c.ell(), c.k()));
            }
        }
    }
    None
}

pub fn is_cyclic<F: Field>(d: &CochainTower<F>, w: &SymplecticForm<F>) -> bool {
    cyclic_violation(d, w).is_none()
}

/// Averages the rotations of each pairing table and dualizes back through `ω`.
pub fn cyclicize<F: Field>(d: &CochainTower<F>, w: &SymplecticForm<F>) -> Result<CochainTower<F>> {
    let sp = d.spaces().clone();
    let dim = sp.dim_a();
    let degs = sp.a.degrees();
    let dual = w.inverse().transpose();
    let mut out = CochainTower::new(sp.clone(), d.degree(), d.window());
    for c in d.components() {
        let (ell, k) = (c.ell(), c.k());
        let dst = out.component_mut(ell, k)?;
        if k == 0 {
            dst.data.clone_from(&c.data);
            continue;
        }
        let inv = checked_count::<F>(k as u64 + 1)?.inv()?;
        for word in 0..c.num_words() {
            let phi = pairing_table(d, w, ell, k, word);
            let mut sum = phi.clone();
            let mut cur = phi;
            for _ in 0..k {
                cur = rotate(&cur, degs, dim, k + 1);
                for (s, v) in sum.iter_mut().zip(&cur) {
                    *s = s.clone() + v.clone();
                }
            }
            for a in 0..dim.pow(k as u32) {
                let p: Vec<F> = (0..dim).map(|y| sum[a * dim + y].clone() * inv.clone()).collect();
                let g = dual.mul_vec(&p)?;
                dst.row_mut(word, a).clone_from_slice(&g);
            }
        }
    }
    out.prune();
    Ok(out)
}

/// `ΔD = D{Δ}`.
pub fn bv_delta<F: Field>(d: &CochainTower<F>, ctx: &CyclicContext<F>) -> Result<CochainTower<F>> {
    evaluate(&Expr::first_order(d, &[], 0)?, Some(ctx))
}

/// The `(0,0)` part of `D{Δ}`, which [`bv_delta`] drops: the `c` with
/// `ω(c, a) = ω(D(;a), 𝟙)` for every `a`.
pub fn bv_delta_constant<F: Field>(d: &CochainTower<F>, ctx: &CyclicContext<F>) -> Vec<F> {
    let dim = d.spaces().dim_a();
    let p: Vec<F> = match d.component(0, 1) {
        Some(comp) => (0..dim).map(|y| ctx.pair_with_unit(comp.row(0, y))).collect(),
        None => vec![F::zero(); dim],
    };
    ctx.recover(&p)
}

/// `𝔮{ΔD, E}` with the constant of `ΔD` kept as an inserted element.
pub fn cup_with_delta<F: Field>(
    q: &CochainTower<F>,
    d: &CochainTower<F>,
    e: &CochainTower<F>,
    ctx: &CyclicContext<F>,
) -> Result<CochainTower<F>> {
    let dd = bv_delta(d, ctx)?;
    let main = brace(q, &[&dd, e])?;
    let c = bv_delta_constant(d, ctx);
    if c.iter().all(F::is_zero) {
        return Ok(main);
    }
    let constant = CochainTower::constant(d.spaces().clone(), d.degree() - 1, &c)?;
    main.add(&brace(q, &[&constant, e])?)
}

/// `D{E₁,…,E_s, Δ, E_{s+1},…,E_m}`.
pub fn cyclic_brace1<F: Field>(
    d: &CochainTower<F>,
    args: &[&CochainTower<F>],
    s: usize,
    ctx: &CyclicContext<F>,
) -> Result<CochainTower<F>> {
    evaluate(&Expr::first_order(d, args, s)?, Some(ctx))
}

/// `D{E₁,…,E_i{F₁,…,F_j, ◊, F_{j+1},…,F_n},…,E_m}` with `1 ≤ i ≤ m`.
pub fn cyclic_brace2<F: Field>(
    d: &CochainTower<F>,
    outer: &[&CochainTower<F>],
    i: usize,
    inner: &[&CochainTower<F>],
    j: usize,
    ctx: &CyclicContext<F>,
) -> Result<CochainTower<F>> {
    evaluate(&Expr::second_order(d, outer, i, inner, j)?, Some(ctx))
}

/// `Σ_{k≤s} |E_k| Σ_{a≤i_k} |F_a| + Σ_{k>s} |E_k| Σ_a |F_a|` for the `i`'s in `seq`.
fn sign_t<F: Field>(es: &[&CochainTower<F>], fs: &[&CochainTower<F>], seq: &[usize], s: usize) -> bool {
    let mut t = 0i64;
    for (k, e) in es.iter().enumerate() {
        let upto = if k < s { seq[2 * k] } else { fs.len() };
        t += e.degree() * degree_sum(&fs[..upto]);
    }
    t & 1 != 0
}

/// `D{E⃗}{F⃗, Δ}` minus its expansion into first- and second-order cyclic braces.
pub fn cyclic_relation_residual_i<F: Field>(
    d: &CochainTower<F>,
    es: &[&CochainTower<F>],
    fs: &[&CochainTower<F>],
    ctx: &CyclicContext<F>,
) -> Result<CochainTower<F>> {
    let (m, n) = (es.len(), fs.len());
    let lhs = cyclic_brace1(&brace(d, es)?, fs, n, ctx)?;
    let mut res = Residual::new(lhs);
    for s in 0..=m {
        for seq in nondecreasing(2 * s, 0, n) {
            let il = Interleaving::new(&es[..s], fs, &seq, 0)?;
            let mut args = il.args(fs);
            args.extend_from_slice(&fs[il.end..]);
            let anchor = args.len();
            args.extend_from_slice(&es[s..]);
            res.minus(sign_t(es, fs, &seq, s), &cyclic_brace1(d, &args, anchor, ctx)?)?;
        }
    }
    for s in 1..=m {
        for seq in nondecreasing(2 * s - 1, 0, n) {
            let il = Interleaving::new(&es[..s - 1], fs, &seq[..2 * s - 2], 0)?;
            let mut outer = il.args(fs);
            let i_s = seq[2 * s - 2];
            outer.extend_from_slice(&fs[il.end..i_s]);
            outer.push(es[s - 1]);
            let pos = outer.len();
            outer.extend_from_slice(&es[s..]);
            let inner = &fs[i_s..];
            let g = cyclic_brace2(d, &outer, pos, inner, inner.len(), ctx)?;
            res.minus(sign_t(es, fs, &seq, s), &g)?;
        }
    }
    Ok(res.finish())
}

/// `D{E⃗, Δ}{F⃗}` minus its expansion over the rotation point `r` of the `F`s.
pub fn cyclic_relation_residual_ii<F: Field>(
    d: &CochainTower<F>,
    es: &[&CochainTower<F>],
    fs: &[&CochainTower<F>],
    ctx: &CyclicContext<F>,
) -> Result<CochainTower<F>> {
    let (m, n) = (es.len(), fs.len());
    let lhs = brace(&cyclic_brace1(d, es, m, ctx)?, fs)?;
    let mut res = Residual::new(lhs);
    for r in 0..=n {
        let wrap = degree_sum(&fs[..r]) * degree_sum(&fs[r..]);
        for seq in nondecreasing(2 * m, r, n) {
            let il = Interleaving::new(es, fs, &seq, r)?;
            let mut args = il.args(fs);
            args.extend_from_slice(&fs[il.end..]);
            let anchor = args.len();
            args.extend_from_slice(&fs[..r]);
            let mut tau = wrap;
            for k in 0..m {
                tau += es[k].degree() * degree_sum(&fs[r..seq[2 * k]]);
            }
            res.minus(tau & 1 != 0, &cyclic_brace1(d, &args, anchor, ctx)?)?;
        }
    }
    Ok(res.finish())
}

/// `F{D{E₁..E_m, Δ, E_{m+1}..E_n}} − (−1)^{e₁} D{E₁..E_m, F{◊}, E_{m+1}..E_n}`.
pub fn interchange_first<F: Field>(
    f: &CochainTower<F>,
    d: &CochainTower<F>,
    es: &[&CochainTower<F>],
    m: usize,
    ctx: &CyclicContext<F>,
) -> Result<CochainTower<F>> {
    if !is_cyclic(f, ctx.omega()) {
        return Err(OchaError::NotCyclic);
    }
    let lhs = brace(f, &[&cyclic_brace1(d, es, m, ctx)?])?;
    let mut outer = es[..m].to_vec();
    outer.push(f);
    outer.extend_from_slice(&es[m..]);
    let rhs = cyclic_brace2(d, &outer, m + 1, &[], 0, ctx)?;
    let e1 = 1 + f.degree() * (d.degree() + degree_sum(&es[..m]) - 1);
    let mut res = Residual::new(lhs);
    res.minus(e1 & 1 != 0, &rhs)?;
    Ok(res.finish())
}

/// `F{D₁..ΔD_s..D_n} − (−1)^{e₂} D_s{F{D_{s+1}..D_n, ◊, D₁..D_{s−1}}}` with `1 ≤ s ≤ n`.
///
/// The `(0,1)` part of `D_s` only reaches the `(0,0)` part of `ΔD_s`, which is not a
/// cochain, so it is left out of the right-hand side.
pub fn interchange_second<F: Field>(
    f: &CochainTower<F>,
    ds: &[&CochainTower<F>],
    s: usize,
    ctx: &CyclicContext<F>,
) -> Result<CochainTower<F>> {
    if !is_cyclic(f, ctx.omega()) {
        return Err(OchaError::NotCyclic);
    }
    if s == 0 || s > ds.len() {
        return Err(OchaError::MalformedExpr(format!("index {s} outside 1..={}", ds.len())));
    }
    let dsd = bv_delta(ds[s - 1], ctx)?;
    let mut args = ds.to_vec();
    args[s - 1] = &dsd;
    let lhs = brace(f, &args)?;
    let mut inner = ds[s..].to_vec();
    let j = inner.len();
    inner.extend_from_slice(&ds[..s - 1]);
    let trimmed = ds[s - 1].filter_components(|l, k| (l, k) != (0, 1));
    let rhs = cyclic_brace2(&trimmed, &[f], 1, &inner, j, ctx)?;
    let before = degree_sum(&ds[..s - 1]);
    let e2 = 1 + (ds[s - 1].degree() - 1) * (f.degree() + before) + before * degree_sum(&ds[s..]);
    let mut res = Residual::new(lhs);
    res.minus(e2 & 1 != 0, &rhs)?;
    Ok(res.finish())
}

/// Both interchange residuals.
pub fn interchange_residuals<F: Field>(
    f: &CochainTower<F>,
    d: &CochainTower<F>,
    es: &[&CochainTower<F>],
    m: usize,
    ds: &[&CochainTower<F>],
    s: usize,
    ctx: &CyclicContext<F>,
) -> Result<(CochainTower<F>, CochainTower<F>)> {
    Ok((interchange_first(f, d, es, m, ctx)?, interchange_second(f, ds, s, ctx)?))
}

/// `l̂(D{E⃗, Δ})` minus its Leibniz expansion; only the rightmost anchor `s = m` is supported.
pub fn delta_leibniz_residual<F: Field>(
    l: &CeTower<F>,
    d: &CochainTower<F>,
    es: &[&CochainTower<F>],
    anchor: usize,
    ctx: &CyclicContext<F>,
) -> Result<CochainTower<F>> {
    let m = es.len();
    if anchor != m {
        return Err(OchaError::Unsupported("only the rightmost anchor is supported".into()));
    }
    let lhs = closed_action(l, &cyclic_brace1(d, es, m, ctx)?)?;
    let mut res = Residual::new(lhs);
    let ld = l.degree();
    res.minus((ld * degree_sum(es)) & 1 != 0, &cyclic_brace1(&closed_action(l, d)?, es, m, ctx)?)?;
    for i in 0..m {
        let le = closed_action(l, es[i])?;
        let mut args = es.to_vec();
        args[i] = &le;
        res.minus((ld * degree_sum(&es[i + 1..])) & 1 != 0, &cyclic_brace1(d, &args, m, ctx)?)?;
    }
    Ok(res.finish())
}
