//! Structured evaluation of insertion trees.
//!
//! Every term of a (cyclic) brace sum is a placement of the operations, the
//! `Z`-inputs and the letters `b` (the `A`-inputs, rotated around `a₀` when
//! anchored) into a nested word.  Its sign is the Koszul sign of moving from
//! `ops · z · b` (operations in preorder) to the nested word, which factors as
//! a part depending only on how `z` is distributed plus, for each inserted
//! operation `Y`, `(|Y| + |z_Y|)` times the degree of the letters preceding
//! its block.  The letter distribution is then a dynamic program over
//! `(node, first letter, end letter)`.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::cochain::{CochainTower, Component, Window};
use crate::combinat::block_assignments;
use crate::error::{OchaError, Result};
use crate::expr::{flatten, Expr, FlatNode, Slot};
use crate::field::Field;
use crate::graded::{tuple_at, OcSpaces, MAX_ARITY};
use crate::sign::parity_of;
use crate::symplectic::CyclicContext;

/// Evaluates an insertion tree to a tower; anchored trees need a cyclic context.
pub fn evaluate<F: Field>(expr: &Expr<'_, F>, ctx: Option<&CyclicContext<F>>) -> Result<CochainTower<F>> {
    expr.validate()?;
    let anchored = expr.is_anchored();
    let ctx = match (anchored, ctx) {
        (true, None) => return Err(OchaError::MissingForm),
        (true, Some(c)) => Some(c),
        (false, _) => None,
    };
    let spaces = expr.op.spaces().clone();
    let nodes = flatten(expr);
    let window = expr.window()?;
    let degree = expr.degree();
    let plan = Plan::new(nodes, &spaces, ctx, degree);
    let keys = plan.output_keys(window);
    let mut tasks = Vec::new();
    for &(l, k) in &keys {
        for w in 0..spaces.z.wedge_basis(l)?.len() {
            tasks.push((l, k, w));
        }
    }
    let results: Vec<Result<(usize, usize, usize, Vec<(usize, Vec<F>)>)>> =
        tasks.par_iter().map(|&(l, k, w)| plan.rows(l, k, w).map(|r| (l, k, w, r))).collect();
    let mut out = CochainTower::new(spaces, degree, window);
    for res in results {
        let (l, k, w, rows) = res?;
        if rows.is_empty() {
            continue;
        }
        let c = out.component_mut(l, k)?;
        for (a, row) in rows {
            c.row_mut(w, a).clone_from_slice(&row);
        }
    }
    out.prune();
    Ok(out)
}

struct Plan<'a, 'c, F> {
    nodes: Vec<FlatNode<'a, F>>,
    spaces: &'c OcSpaces,
    ctx: Option<&'c CyclicContext<F>>,
    degree: i64,
    /// `max_k[x][ℓ]`: the largest stored `k` of node `x` at `Z`-arity `ℓ`.
    max_k: Vec<Vec<Option<usize>>>,
}

struct Assignment {
    ell: Vec<usize>,
    word: Vec<usize>,
    op_z_odd: Vec<bool>,
    odd: bool,
}

enum Input<F> {
    Basis(usize),
    Vector(Vec<F>),
}

impl<'a, 'c, F: Field> Plan<'a, 'c, F> {
    fn new(nodes: Vec<FlatNode<'a, F>>, spaces: &'c OcSpaces, ctx: Option<&'c CyclicContext<F>>, degree: i64) -> Self {
        let max_k = nodes
            .iter()
            .map(|n| {
                let mut v = vec![None; MAX_ARITY + 1];
                for (l, k) in n.tower.bidegrees() {
                    if k >= n.children.len() && l <= MAX_ARITY {
                        v[l] = Some(v[l].map_or(k, |m: usize| m.max(k)));
                    }
                }
                v
            })
            .collect();
        Plan { nodes, spaces, ctx, degree, max_k }
    }

    fn output_keys(&self, window: Window) -> Vec<(usize, usize)> {
        let mut acc: BTreeSet<(usize, usize)> = [(0, 0)].into_iter().collect();
        for n in &self.nodes {
            let c = n.children.len();
            let own: Vec<(usize, usize)> =
                n.tower.bidegrees().filter(|&(_, k)| k >= c).map(|(l, k)| (l, k - c)).collect();
            acc = acc
                .iter()
                .flat_map(|&(l, k)| own.iter().map(move |&(l2, k2)| (l + l2, k + k2)))
                .filter(|&(l, k)| l <= MAX_ARITY && k <= MAX_ARITY)
                .collect();
        }
        acc.into_iter()
            .filter(|&(l, k)| (l, k) != (0, 0) && window.admits(l + k))
            .collect()
    }

    fn assignments(&self, zs: &[usize]) -> Result<Vec<Assignment>> {
        let n = self.nodes.len();
        let zdeg: Vec<i64> = zs.iter().map(|&i| self.spaces.z.degree(i)).collect();
        let mut out = Vec::new();
        'next: for labels in block_assignments(zs.len(), n) {
            let mut blocks = vec![Vec::new(); n];
            for (pos, &x) in labels.iter().enumerate() {
                blocks[x].push(pos);
            }
            let mut word = Vec::with_capacity(n);
            let mut ell = Vec::with_capacity(n);
            let mut op_z_odd = Vec::with_capacity(n);
            let mut odd = false;
            let mut z_before = 0i64;
            for (x, b) in blocks.iter().enumerate() {
                if self.max_k[x].get(b.len()).copied().flatten().is_none() {
                    continue 'next;
                }
                let sub: Vec<usize> = b.iter().map(|&p| zs[p]).collect();
                let w = self.spaces.z.wedge_basis(sub.len())?.index(&sub).expect("subword of a canonical word");
                let d = self.nodes[x].tower.degree();
                odd ^= (d * z_before) & 1 != 0;
                let zd: i64 = b.iter().map(|&p| zdeg[p]).sum();
                z_before += zd;
                word.push(w);
                ell.push(b.len());
                op_z_odd.push((d + zd) & 1 != 0);
            }
            let perm: Vec<usize> = blocks.iter().flatten().copied().collect();
            odd ^= parity_of(&perm, &zdeg);
            out.push(Assignment { ell, word, op_z_odd, odd });
        }
        Ok(out)
    }

    fn rows(&self, l: usize, k: usize, w: usize) -> Result<Vec<(usize, Vec<F>)>> {
        let zb = self.spaces.z.wedge_basis(l)?;
        let zs = zb.word(w).to_vec();
        let assigns = self.assignments(&zs)?;
        if assigns.is_empty() {
            return Ok(Vec::new());
        }
        let dim_a = self.spaces.dim_a();
        let base = self.degree + zb.degree_sum(w);
        let mut rows = Vec::new();
        for aidx in 0..dim_a.pow(k as u32) {
            let tuple = tuple_at(dim_a, k, aidx);
            let dout = base + self.spaces.a_degree(&tuple);
            if !self.spaces.a.has_degree(dout) {
                continue;
            }
            let row = match self.ctx {
                None => self.sum_terms(&assigns, &tuple, None),
                Some(ctx) => self.anchored_row(ctx, &assigns, &tuple, dout),
            };
            if row.iter().any(|v| !v.is_zero()) {
                rows.push((aidx, row));
            }
        }
        Ok(rows)
    }

    fn anchored_row(&self, ctx: &CyclicContext<F>, assigns: &[Assignment], a: &[usize], dout: i64) -> Vec<F> {
        let dim_a = self.spaces.dim_a();
        let omega = ctx.omega();
        let k = a.len();
        let adeg: Vec<i64> = a.iter().map(|&i| self.spaces.a.degree(i)).collect();
        let mut p = vec![F::zero(); dim_a];
        for (y, py) in p.iter_mut().enumerate() {
            let reachable = (0..dim_a).any(|x| self.spaces.a.degree(x) == dout && !omega.entry(x, y).is_zero());
            if !reachable {
                continue;
            }
            let d0 = self.spaces.a.degree(y);
            for r in 0..=k {
                let head: i64 = adeg[..r].iter().sum();
                let tail: i64 = adeg[r..].iter().sum();
                let rot_odd = (head * (tail + d0)) & 1 != 0;
                let mut b: Vec<usize> = a[r..].to_vec();
                b.push(y);
                b.extend_from_slice(&a[..r]);
                let v = self.sum_terms(assigns, &b, Some(k - r));
                let val = ctx.pair_with_unit(&v);
                if !val.is_zero() {
                    *py = py.clone() + val.neg_if(rot_odd);
                }
            }
        }
        ctx.recover(&p)
    }

    /// `Σ_assignments ± root(…)` for the letters `b`, anchor letter at `pa`.
    fn sum_terms(&self, assigns: &[Assignment], b: &[usize], pa: Option<usize>) -> Vec<F> {
        let dim_a = self.spaces.dim_a();
        let mut total = vec![F::zero(); dim_a];
        let mut prefix_odd = Vec::with_capacity(b.len() + 1);
        let mut acc = 0i64;
        prefix_odd.push(false);
        for &x in b {
            acc += self.spaces.a.degree(x);
            prefix_odd.push(acc & 1 != 0);
        }
        let n1 = b.len() + 1;
        for asg in assigns {
            let mut dp = Dp {
                plan: self,
                asg,
                b,
                pa,
                prefix_odd: &prefix_odd,
                n1,
                memo: vec![None; self.nodes.len() * n1 * n1],
            };
            if let Some(v) = dp.value(0, 0, b.len()) {
                for (t, x) in total.iter_mut().zip(v) {
                    if !x.is_zero() {
                        *t = t.clone() + x.neg_if(asg.odd);
                    }
                }
            }
        }
        total
    }
}

struct Dp<'p, 'a, 'c, F> {
    plan: &'p Plan<'a, 'c, F>,
    asg: &'p Assignment,
    b: &'p [usize],
    pa: Option<usize>,
    prefix_odd: &'p [bool],
    n1: usize,
    memo: Vec<Option<Option<Vec<F>>>>,
}

impl<F: Field> Dp<'_, '_, '_, F> {
    fn value(&mut self, x: usize, p: usize, q: usize) -> Option<Vec<F>> {
        let key = (x * self.n1 + p) * self.n1 + q;
        if let Some(v) = &self.memo[key] {
            return v.clone();
        }
        let mut acc = vec![F::zero(); self.plan.spaces.dim_a()];
        let mut inputs = Vec::new();
        self.fill(x, 0, p, q, &mut inputs, false, &mut acc);
        let v = acc.iter().any(|c| !c.is_zero()).then_some(acc);
        self.memo[key] = Some(v.clone());
        v
    }

    fn covers_anchor(&self, p: usize, q: usize) -> bool {
        self.pa.is_some_and(|a| p <= a && a < q)
    }

    #[allow(clippy::too_many_arguments)]
    fn fill(&mut self, x: usize, ci: usize, cursor: usize, q: usize, inputs: &mut Vec<Input<F>>, odd: bool, acc: &mut [F]) {
        let plan = self.plan;
        let node = &plan.nodes[x];
        let Some(max_k) = plan.max_k[x][self.asg.ell[x]] else {
            return;
        };
        let remaining = node.children.len() - ci;
        if ci == node.children.len() {
            if self.covers_anchor(cursor, q) || inputs.len() + (q - cursor) > max_k {
                return;
            }
            let before = inputs.len();
            inputs.extend(self.b[cursor..q].iter().map(|&i| Input::Basis(i)));
            self.apply(x, inputs, odd, acc);
            inputs.truncate(before);
            return;
        }
        let before = inputs.len();
        for seg_end in cursor..=q {
            if seg_end > cursor {
                if self.covers_anchor(seg_end - 1, seg_end) || inputs.len() + 1 + remaining > max_k {
                    break;
                }
                inputs.push(Input::Basis(self.b[seg_end - 1]));
            }
            match node.children[ci] {
                Slot::Anchor => {
                    if self.pa == Some(seg_end) {
                        inputs.push(Input::Basis(self.b[seg_end]));
                        self.fill(x, ci + 1, seg_end + 1, q, inputs, odd, acc);
                        inputs.pop();
                    }
                }
                Slot::Node(y) => {
                    let holds = plan.nodes[y].holds_anchor;
                    for e in seg_end..=q {
                        if self.covers_anchor(seg_end, e) != holds {
                            continue;
                        }
                        if let Some(v) = self.value(y, seg_end, e) {
                            let child_odd = self.asg.op_z_odd[y] && self.prefix_odd[seg_end];
                            inputs.push(Input::Vector(v));
                            self.fill(x, ci + 1, e, q, inputs, odd ^ child_odd, acc);
                            inputs.pop();
                        }
                    }
                }
            }
        }
        inputs.truncate(before);
    }

    fn apply(&self, x: usize, inputs: &[Input<F>], odd: bool, acc: &mut [F]) {
        let tower = self.plan.nodes[x].tower;
        let Some(comp) = tower.component(self.asg.ell[x], inputs.len()) else {
            return;
        };
        apply_rec(comp, self.asg.word[x], self.plan.spaces.dim_a(), inputs, 0, 0, F::sign(odd), acc);
    }
}

#[allow(clippy::too_many_arguments)]
fn apply_rec<F: Field>(
    comp: &Component<F>,
    w: usize,
    dim_a: usize,
    inputs: &[Input<F>],
    slot: usize,
    idx: usize,
    coef: F,
    acc: &mut [F],
) {
    if slot == inputs.len() {
        for (o, v) in acc.iter_mut().zip(comp.row(w, idx)) {
            if !v.is_zero() {
                o.add_mul(&coef, v);
            }
        }
        return;
    }
    match &inputs[slot] {
        Input::Basis(i) => apply_rec(comp, w, dim_a, inputs, slot + 1, idx * dim_a + i, coef, acc),
        Input::Vector(v) => {
            for (i, c) in v.iter().enumerate() {
                if !c.is_zero() {
                    apply_rec(comp, w, dim_a, inputs, slot + 1, idx * dim_a + i, coef.clone() * c.clone(), acc);
                }
            }
        }
    }
}
