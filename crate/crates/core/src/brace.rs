//! Open-closed braces, the closed string action and their relations.

use std::collections::BTreeSet;

use crate::cochain::{CeTower, CochainTower};
use crate::engine::evaluate;
use crate::error::Result;
use crate::expr::Expr;
use crate::field::Field;
use crate::graded::tuple_at;
use crate::sign::parity_of;

/// `D{E₁,…,E_m}`; `D{}` is `D`.
pub fn brace<F: Field>(d: &CochainTower<F>, args: &[&CochainTower<F>]) -> Result<CochainTower<F>> {
    if args.is_empty() {
        return Ok(d.clone());
    }
    evaluate(&Expr::brace(d, args), None)
}

/// `x{y} − (−1)^{|x||y|} y{x}`.
pub fn gbracket<F: Field>(x: &CochainTower<F>, y: &CochainTower<F>) -> Result<CochainTower<F>> {
    let xy = brace(x, &[y])?;
    let yx = brace(y, &[x])?;
    let odd = (x.degree() * y.degree()) & 1 != 0;
    CochainTower::linear_combine(&[F::one(), F::sign(!odd)], &[&xy, &yx])
}

/// `D ⌣ E = q{D, E}`.
pub fn cup<F: Field>(q: &CochainTower<F>, d: &CochainTower<F>, e: &CochainTower<F>) -> Result<CochainTower<F>> {
    brace(q, &[d, e])
}

/// `l̂(D)(z; a) = Σ_{J₁ ⊔ J₂, J₁ ≠ ∅} (−1)^ε D(l(z_{J₁}) ∧ z_{J₂}; a)`.
pub fn closed_action<F: Field>(l: &CeTower<F>, d: &CochainTower<F>) -> Result<CochainTower<F>> {
    let spaces = d.spaces().clone();
    let window = d.window();
    let mut keys = BTreeSet::new();
    for (ld, k) in d.bidegrees() {
        if ld == 0 {
            continue;
        }
        for j in l.arities() {
            let key = (ld - 1 + j, k);
            if window.admits(key.0 + key.1) {
                keys.insert(key);
            }
        }
    }
    let dim_a = spaces.dim_a();
    let dim_z = spaces.dim_z();
    let mut out = CochainTower::new(spaces.clone(), l.degree() + d.degree(), window);
    for (ell, k) in keys {
        let zb = spaces.z.wedge_basis(ell)?;
        for w in 0..zb.len() {
            let zs = zb.word(w);
            let zdeg: Vec<i64> = zs.iter().map(|&i| spaces.z.degree(i)).collect();
            for aidx in 0..dim_a.pow(k as u32) {
                let a = tuple_at(dim_a, k, aidx);
                let mut row = vec![F::zero(); dim_a];
                for mask in 1u32..(1 << ell) {
                    let j1: Vec<usize> = (0..ell).filter(|&p| mask >> p & 1 == 1).collect();
                    let j2: Vec<usize> = (0..ell).filter(|&p| mask >> p & 1 == 0).collect();
                    let perm: Vec<usize> = j1.iter().chain(&j2).copied().collect();
                    let sign = F::sign(parity_of(&perm, &zdeg));
                    let inner: Vec<usize> = j1.iter().map(|&p| zs[p]).collect();
                    let v = l.eval_basis(&inner)?;
                    for (y, c) in v.iter().enumerate().take(dim_z) {
                        if c.is_zero() {
                            continue;
                        }
                        let mut zin = vec![y];
                        zin.extend(j2.iter().map(|&p| zs[p]));
                        let val = d.eval_basis(&zin, &a)?;
                        let coef = sign.clone() * c.clone();
                        for (o, x) in row.iter_mut().zip(&val) {
                            if !x.is_zero() {
                                o.add_mul(&coef, x);
                            }
                        }
                    }
                }
                if row.iter().any(|v| !v.is_zero()) {
                    out.component_mut(ell, k)?.row_mut(w, aidx).clone_from_slice(&row);
                }
            }
        }
    }
    out.prune();
    Ok(out)
}

/// Nondecreasing sequences of the given length with entries in `lo..=hi`.
pub fn nondecreasing(len: usize, lo: usize, hi: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn rec(len: usize, lo: usize, hi: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        let start = cur.last().copied().unwrap_or(lo);
        for v in start..=hi {
            cur.push(v);
            rec(len, lo, hi, cur, out);
            cur.pop();
        }
    }
    if lo <= hi || len == 0 {
        rec(len, lo, hi, &mut cur, &mut out);
    }
    out
}

pub(crate) fn degree_sum<F: Field>(ts: &[&CochainTower<F>]) -> i64 {
    ts.iter().map(|t| t.degree()).sum()
}

/// Accumulates `Σ ± T` on top of a starting tower.
pub(crate) struct Residual<F> {
    acc: CochainTower<F>,
}

impl<F: Field> Residual<F> {
    pub fn new(lhs: CochainTower<F>) -> Self {
        Residual { acc: lhs }
    }

    /// Subtracts `(−1)^odd · t`.
    pub fn minus(&mut self, odd: bool, t: &CochainTower<F>) -> Result<()> {
        self.acc = CochainTower::linear_combine(&[F::one(), F::sign(!odd)], &[&self.acc, t])?;
        Ok(())
    }

    pub fn finish(self) -> CochainTower<F> {
        self.acc
    }
}

#[derive(Clone, Copy)]
enum Piece {
    F(usize),
    Inner(usize),
}

/// `F_{start+1..i₁}, E₁{F_{i₁+1..j₁}}, F_{j₁+1..i₂}, …` for a nondecreasing
/// sequence `i₁ ≤ j₁ ≤ i₂ ≤ ⋯` of even length (indices are counts of `F`s).
pub(crate) struct Interleaving<F> {
    inner: Vec<CochainTower<F>>,
    pieces: Vec<Piece>,
    pub end: usize,
}

impl<F: Field> Interleaving<F> {
    pub fn new(es: &[&CochainTower<F>], fs: &[&CochainTower<F>], seq: &[usize], start: usize) -> Result<Self> {
        let mut inner = Vec::new();
        let mut pieces = Vec::new();
        let mut cur = start;
        for (k, pair) in seq.chunks(2).enumerate() {
            let (i, j) = (pair[0], pair[1]);
            pieces.extend((cur..i).map(Piece::F));
            inner.push(brace(es[k], &fs[i..j])?);
            pieces.push(Piece::Inner(k));
            cur = j;
        }
        Ok(Interleaving { inner, pieces, end: cur })
    }

    pub fn args<'s>(&'s self, fs: &[&'s CochainTower<F>]) -> Vec<&'s CochainTower<F>> {
        self.pieces
            .iter()
            .map(|p| match *p {
                Piece::F(a) => fs[a],
                Piece::Inner(k) => &self.inner[k],
            })
            .collect()
    }
}

/// `D{E⃗}{F⃗}` minus the expansion over `i₁ ≤ j₁ ≤ ⋯ ≤ i_m ≤ j_m`.
pub fn brace_relation_residual<F: Field>(
    d: &CochainTower<F>,
    es: &[&CochainTower<F>],
    fs: &[&CochainTower<F>],
) -> Result<CochainTower<F>> {
    let lhs = brace(&brace(d, es)?, fs)?;
    let mut res = Residual::new(lhs);
    let (m, n) = (es.len(), fs.len());
    for seq in nondecreasing(2 * m, 0, n) {
        let il = Interleaving::new(es, fs, &seq, 0)?;
        let mut args = il.args(fs);
        args.extend_from_slice(&fs[il.end..]);
        let mut sign = 0i64;
        for k in 0..m {
            sign += es[k].degree() * degree_sum(&fs[..seq[2 * k]]);
        }
        res.minus(sign & 1 != 0, &brace(d, &args)?)?;
    }
    Ok(res.finish())
}

/// `l̂(D{E⃗})` minus `(−1)^{|l|Σ|E|} l̂(D){E⃗} + Σᵢ (−1)^{|l|Σ_{j>i}|E_j|} D{…, l̂(E_i), …}`.
pub fn leibniz_residual<F: Field>(
    l: &CeTower<F>,
    d: &CochainTower<F>,
    es: &[&CochainTower<F>],
) -> Result<CochainTower<F>> {
    let lhs = closed_action(l, &brace(d, es)?)?;
    let mut res = Residual::new(lhs);
    let ld = l.degree();
    res.minus((ld * degree_sum(es)) & 1 != 0, &brace(&closed_action(l, d)?, es)?)?;
    for i in 0..es.len() {
        let le = closed_action(l, es[i])?;
        let mut args = es.to_vec();
        args[i] = &le;
        res.minus((ld * degree_sum(&es[i + 1..])) & 1 != 0, &brace(d, &args)?)?;
    }
    Ok(res.finish())
}
