//! Brute-force evaluation of insertion trees, independent of the engine.
//!
//! Every placement is generated explicitly as a nested word; its sign is the
//! Koszul sign of the explicit permutation from `ops · z · letters`, and the
//! values come from multilinear [`CochainTower::eval`] on elements.

use crate::cochain::{CochainTower, Window};
use crate::error::{OchaError, Result};
use crate::expr::{Arg, Expr};
use crate::field::Field;
use crate::graded::{tuple_at, Element};
use crate::sign::{koszul_parity, Permutation};
use crate::symplectic::CyclicContext;

struct Node<'a, F> {
    tower: &'a CochainTower<F>,
    items: Vec<Item>,
}

#[derive(Clone, Copy)]
enum Item {
    Child(usize),
    Anchor,
}

#[derive(Clone, Debug)]
enum Placed {
    Letter(usize),
    Op(usize, Vec<Placed>),
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Sym {
    Op(usize),
    Z(usize),
    L(usize),
}

fn collect<'a, F: Field>(e: &Expr<'a, F>, out: &mut Vec<Node<'a, F>>) -> usize {
    let me = out.len();
    out.push(Node { tower: e.op, items: Vec::new() });
    let items = e
        .args
        .iter()
        .map(|a| match a {
            Arg::Anchor => Item::Anchor,
            Arg::Op(sub) => Item::Child(collect(sub, out)),
        })
        .collect();
    out[me].items = items;
    me
}

/// All placements of `node`'s items on letters starting at `start`, with their end.
fn placements<F>(nodes: &[Node<'_, F>], node: usize, start: usize, n: usize, anchor: Option<usize>) -> Vec<(Placed, usize)> {
    let mut out = Vec::new();
    let mut acc = Vec::new();
    walk(nodes, node, 0, start, n, anchor, &mut acc, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn walk<F>(
    nodes: &[Node<'_, F>],
    node: usize,
    item: usize,
    pos: usize,
    n: usize,
    anchor: Option<usize>,
    acc: &mut Vec<Placed>,
    out: &mut Vec<(Placed, usize)>,
) {
    // a free letter may be taken here, unless it is a₀
    if pos < n && anchor != Some(pos) {
        acc.push(Placed::Letter(pos));
        walk(nodes, node, item, pos + 1, n, anchor, acc, out);
        acc.pop();
    }
    if item == nodes[node].items.len() {
        out.push((Placed::Op(node, acc.clone()), pos));
        return;
    }
    match nodes[node].items[item] {
        Item::Anchor => {
            if anchor == Some(pos) {
                acc.push(Placed::Letter(pos));
                walk(nodes, node, item + 1, pos + 1, n, anchor, acc, out);
                acc.pop();
            }
        }
        Item::Child(c) => {
            for (p, end) in placements(nodes, c, pos, n, anchor) {
                acc.push(p);
                walk(nodes, node, item + 1, end, n, anchor, acc, out);
                acc.pop();
            }
        }
    }
}

fn flatten_word(p: &Placed, zof: &[Vec<usize>], out: &mut Vec<Sym>) {
    match p {
        Placed::Letter(i) => out.push(Sym::L(*i)),
        Placed::Op(x, items) => {
            out.push(Sym::Op(*x));
            out.extend(zof[*x].iter().map(|&z| Sym::Z(z)));
            for it in items {
                flatten_word(it, zof, out);
            }
        }
    }
}

/// A node with no inputs kills the term unless it is a constant.
fn no_empty_node<F: Field>(nodes: &[Node<'_, F>], p: &Placed, zof: &[Vec<usize>]) -> bool {
    match p {
        Placed::Letter(_) => true,
        Placed::Op(x, items) => {
            let empty = items.is_empty() && zof[*x].is_empty() && nodes[*x].tower.component(0, 0).is_none();
            !empty && items.iter().all(|it| no_empty_node(nodes, it, zof))
        }
    }
}

struct Ctx<'n, 'a, F> {
    nodes: &'n [Node<'a, F>],
    z: Vec<Element<F>>,
    letters: Vec<Element<F>>,
}

impl<F: Field> Ctx<'_, '_, F> {
    fn value(&self, p: &Placed, zof: &[Vec<usize>]) -> Result<Element<F>> {
        match p {
            Placed::Letter(i) => Ok(self.letters[*i].clone()),
            Placed::Op(x, items) => {
                let z: Vec<Element<F>> = zof[*x].iter().map(|&i| self.z[i].clone()).collect();
                let a = items.iter().map(|it| self.value(it, zof)).collect::<Result<Vec<_>>>()?;
                self.nodes[*x].tower.eval(&z, &a)
            }
        }
    }
}

/// `Σ ± root(…)` over all placements of `letters`, anchor letter at `anchor`.
fn placement_sum<F: Field>(
    nodes: &[Node<'_, F>],
    z: &[Element<F>],
    zdeg: &[i64],
    letters: &[Element<F>],
    ldeg: &[i64],
    anchor: Option<usize>,
) -> Result<Element<F>> {
    let space_a = nodes[0].tower.spaces().a.clone();
    let mut total = Element::zero(space_a);
    let nn = nodes.len();
    let ell = z.len();
    let ctx = Ctx { nodes, z: z.to_vec(), letters: letters.to_vec() };
    let tops: Vec<Placed> = placements(nodes, 0, 0, letters.len(), anchor)
        .into_iter()
        .filter(|(_, end)| *end == letters.len())
        .map(|(p, _)| p)
        .collect();
    let mut source_deg: Vec<i64> = nodes.iter().map(|n| n.tower.degree()).collect();
    source_deg.extend_from_slice(zdeg);
    source_deg.extend_from_slice(ldeg);
    for code in 0..nn.pow(ell as u32) {
        let mut zof = vec![Vec::new(); nn];
        let mut c = code;
        for pos in 0..ell {
            zof[c % nn].push(pos);
            c /= nn;
        }
        for top in tops.iter().filter(|t| no_empty_node(nodes, t, &zof)) {
            let mut word = Vec::new();
            flatten_word(top, &zof, &mut word);
            let perm: Vec<usize> = word
                .iter()
                .map(|s| match *s {
                    Sym::Op(x) => x,
                    Sym::Z(i) => nn + i,
                    Sym::L(i) => nn + ell + i,
                })
                .collect();
            let odd = koszul_parity(&Permutation::new(perm)?, &source_deg)?;
            let v = ctx.value(top, &zof)?;
            total = total.add(&v.scale(&F::sign(odd)))?;
        }
    }
    Ok(total)
}

fn nodes_of<'a, F: Field>(expr: &Expr<'a, F>) -> Result<Vec<Node<'a, F>>> {
    expr.validate()?;
    let mut nodes = Vec::new();
    collect(expr, &mut nodes);
    Ok(nodes)
}

fn basis_inputs<F: Field>(expr: &Expr<'_, F>, z: &[usize], a: &[usize]) -> (Vec<Element<F>>, Vec<i64>, Vec<Element<F>>, Vec<i64>) {
    let sp = expr.op.spaces();
    let ze = z.iter().map(|&i| Element::basis(sp.z.clone(), i)).collect();
    let zd = z.iter().map(|&i| sp.z.degree(i)).collect();
    let ae = a.iter().map(|&i| Element::basis(sp.a.clone(), i)).collect();
    let ad = a.iter().map(|&i| sp.a.degree(i)).collect();
    (ze, zd, ae, ad)
}

/// The value of an unanchored tree at basis inputs `z` (in the given order) and `a`.
pub fn expression_oracle<F: Field>(expr: &Expr<'_, F>, z: &[usize], a: &[usize]) -> Result<Element<F>> {
    if expr.is_anchored() {
        return Err(OchaError::MalformedExpr("anchored trees are evaluated by pairing_oracle".into()));
    }
    let nodes = nodes_of(expr)?;
    let (ze, zd, ae, ad) = basis_inputs(expr, z, a);
    placement_sum(&nodes, &ze, &zd, &ae, &ad, None)
}

/// The defining right-hand side `Σ_r ± ω(root(… a₀ …), 𝟙)` of an anchored tree.
pub fn pairing_oracle<F: Field>(
    expr: &Expr<'_, F>,
    ctx: &CyclicContext<F>,
    z: &[usize],
    a: &[usize],
    a0: usize,
) -> Result<F> {
    if !expr.is_anchored() {
        return Err(OchaError::MalformedExpr("pairing_oracle needs an anchor".into()));
    }
    let nodes = nodes_of(expr)?;
    let k = a.len();
    let mut full = a.to_vec();
    full.push(a0);
    let (ze, zd, fe, fd) = basis_inputs(expr, z, &full);
    let mut total = F::zero();
    for r in 0..=k {
        // rotated word a_{r+1..k}, a₀, a_{1..r} as positions in (a_1..a_k, a₀)
        let order: Vec<usize> = (r..=k).chain(0..r).collect();
        let rot_odd = koszul_parity(&Permutation::new(order.clone())?, &fd)?;
        let letters: Vec<Element<F>> = order.iter().map(|&i| fe[i].clone()).collect();
        let ldeg: Vec<i64> = order.iter().map(|&i| fd[i]).collect();
        let v = placement_sum(&nodes, &ze, &zd, &letters, &ldeg, Some(k - r))?;
        total = total + ctx.omega().pair(v.coeffs(), ctx.unit().coeffs()).neg_if(rot_odd);
    }
    Ok(total)
}

/// Largest total arity at which an evaluated tree can be nonzero.
pub fn arity_bound<F: Field>(expr: &Expr<'_, F>) -> Result<usize> {
    let towers = expr.towers();
    let anch = usize::from(expr.is_anchored());
    match expr.window()? {
        Window::Capped(n) => Ok(n),
        Window::Finite => {
            let total: usize = towers.iter().map(|t| t.max_arity()).sum();
            Ok(total.saturating_sub(towers.len() - 1 + anch))
        }
    }
}

/// Compares `value` with the oracle on every basis filling up to `max_arity`;
/// returns a description of the first disagreement.
pub fn compare_with_oracle<F: Field>(
    expr: &Expr<'_, F>,
    ctx: Option<&CyclicContext<F>>,
    value: &CochainTower<F>,
    max_arity: usize,
) -> Result<Option<String>> {
    let sp = expr.op.spaces().clone();
    let dim_a = sp.dim_a();
    let bound = max_arity.min(arity_bound(expr)?);
    for ell in 0..=bound {
        let zb = sp.z.wedge_basis(ell)?;
        for k in 0..=(bound - ell) {
            if ell + k == 0 {
                continue;
            }
            for w in 0..zb.len() {
                let z = zb.word(w);
                for aidx in 0..dim_a.pow(k as u32) {
                    let a = tuple_at(dim_a, k, aidx);
                    let got = value.eval_basis(z, &a)?;
                    match ctx.filter(|_| expr.is_anchored()) {
                        None => {
                            let want = expression_oracle(expr, z, &a)?;
                            if want.coeffs() != got.as_slice() {
                                return Ok(Some(format!("({ell},{k}) z={z:?} a={a:?}: oracle {want:?}, engine {got:?}")));
                            }
                        }
                        Some(c) => {
                            for y in 0..dim_a {
                                let want = pairing_oracle(expr, c, z, &a, y)?;
                                let e_y = Element::basis(sp.a.clone(), y);
                                let have = c.omega().pair(&got, e_y.coeffs());
                                if want != have {
                                    return Ok(Some(format!(
                                        "({ell},{k}) z={z:?} a={a:?} a0={y}: oracle {want}, engine {have}"
                                    )));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}
