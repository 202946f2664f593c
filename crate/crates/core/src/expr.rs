//! Insertion trees: nested braces with at most one anchor for the dual input `a₀`.

use crate::cochain::{CochainTower, Window};
use crate::error::{OchaError, Result};
use crate::field::Field;

/// One argument slot of a brace.
#[derive(Clone)]
pub enum Arg<'a, F> {
    Op(Expr<'a, F>),
    /// The position of `a₀` (written `Δ` at top level and `◊` one level down).
    Anchor,
}

/// `op{args…}`; a leaf when `args` is empty.
#[derive(Clone)]
pub struct Expr<'a, F> {
    pub op: &'a CochainTower<F>,
    pub args: Vec<Arg<'a, F>>,
}

impl<'a, F: Field> Expr<'a, F> {
    pub fn leaf(op: &'a CochainTower<F>) -> Self {
        Expr { op, args: Vec::new() }
    }

    /// `D{E₁,…,E_m}`.
    pub fn brace(op: &'a CochainTower<F>, args: &[&'a CochainTower<F>]) -> Self {
        Expr { op, args: args.iter().map(|t| Arg::Op(Expr::leaf(t))).collect() }
    }

    /// `D{E₁,…,E_s, Δ, E_{s+1},…,E_m}`.
    pub fn first_order(op: &'a CochainTower<F>, args: &[&'a CochainTower<F>], s: usize) -> Result<Self> {
        if s > args.len() {
            return Err(OchaError::MalformedExpr(format!("anchor position {s} exceeds {} arguments", args.len())));
        }
        let mut e = Expr::brace(op, args);
        e.args.insert(s, Arg::Anchor);
        Ok(e)
    }

    /// `D{E₁,…,E_i{F₁,…,F_j, ◊, F_{j+1},…,F_n},…,E_m}` with `1 ≤ i ≤ m`, `0 ≤ j ≤ n`.
    pub fn second_order(
        op: &'a CochainTower<F>,
        outer: &[&'a CochainTower<F>],
        i: usize,
        inner: &[&'a CochainTower<F>],
        j: usize,
    ) -> Result<Self> {
        if i == 0 || i > outer.len() {
            return Err(OchaError::MalformedExpr(format!("outer index {i} outside 1..={}", outer.len())));
        }
        let nested = Expr::first_order(outer[i - 1], inner, j)?;
        let mut e = Expr::brace(op, outer);
        e.args[i - 1] = Arg::Op(nested);
        Ok(e)
    }

    /// Depth of the anchor: 1 for `Δ` among the top-level arguments, 2 for `◊`.
    pub fn anchor_depth(&self) -> Option<usize> {
        self.args.iter().find_map(|a| match a {
            Arg::Anchor => Some(1),
            Arg::Op(e) => e.anchor_depth().map(|d| d + 1),
        })
    }

    pub fn anchor_count(&self) -> usize {
        self.args
            .iter()
            .map(|a| match a {
                Arg::Anchor => 1,
                Arg::Op(e) => e.anchor_count(),
            })
            .sum()
    }

    pub fn is_anchored(&self) -> bool {
        self.anchor_count() > 0
    }

    pub fn towers(&self) -> Vec<&'a CochainTower<F>> {
        let mut out = vec![self.op];
        for a in &self.args {
            if let Arg::Op(e) = a {
                out.extend(e.towers());
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        match self.anchor_count() {
            0 | 1 => {}
            n => return Err(OchaError::MalformedExpr(format!("{n} anchors; at most one is allowed"))),
        }
        if self.anchor_depth().is_some_and(|d| d > 2) {
            return Err(OchaError::MalformedExpr("anchors nested below two brace levels are not defined".into()));
        }
        for t in self.towers() {
            self.op.same_spaces(t)?;
        }
        Ok(())
    }

    /// Sum of the operation degrees, minus one when anchored.
    pub fn degree(&self) -> i64 {
        self.towers().iter().map(|t| t.degree()).sum::<i64>() - i64::from(self.is_anchored())
    }

    /// The window on which the value is exact: the meet of the input windows,
    /// lowered by one for the extra `a₀` slot when anchored and by one for
    /// each inserted constant.
    pub fn window(&self) -> Result<Window> {
        let towers = self.towers();
        let w = towers.iter().fold(Window::Finite, |w, t| w.meet(t.window()));
        let constants = towers.iter().filter(|t| t.component(0, 0).is_some()).count();
        let extra = constants + usize::from(self.is_anchored());
        if extra > 0 {
            w.shrink(extra)
        } else {
            match w {
                Window::Capped(0) => Err(OchaError::WindowUnderflow("empty window".into())),
                w => Ok(w),
            }
        }
    }
}

/// A flattened tree in preorder.
pub(crate) struct FlatNode<'a, F> {
    pub tower: &'a CochainTower<F>,
    pub children: Vec<Slot>,
    pub holds_anchor: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Slot {
    Node(usize),
    Anchor,
}

pub(crate) fn flatten<'a, F: Field>(e: &Expr<'a, F>) -> Vec<FlatNode<'a, F>> {
    fn go<'a, F: Field>(e: &Expr<'a, F>, out: &mut Vec<FlatNode<'a, F>>) -> usize {
        let me = out.len();
        out.push(FlatNode { tower: e.op, children: Vec::new(), holds_anchor: e.is_anchored() });
        let mut children = Vec::with_capacity(e.args.len());
        for a in &e.args {
            match a {
                Arg::Anchor => children.push(Slot::Anchor),
                Arg::Op(sub) => children.push(Slot::Node(go(sub, out))),
            }
        }
        out[me].children = children;
        me
    }
    let mut out = Vec::new();
    go(e, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::{GradedSpace, OcSpaces};
    use crate::field::Rational;

    #[test]
    fn anchors_and_degrees() {
        let s = OcSpaces::new(
            GradedSpace::new([("u", -1), ("e", 1)]).unwrap(),
            GradedSpace::new([("z", 0)]).unwrap(),
        );
        let d = CochainTower::<Rational>::new(s.clone(), 2, Window::Capped(4));
        let e = CochainTower::<Rational>::new(s.clone(), 1, Window::Finite);
        let x = Expr::second_order(&d, &[&e, &e], 2, &[&e], 1).unwrap();
        assert_eq!(x.anchor_depth(), Some(2));
        assert_eq!(x.degree(), 4);
        assert_eq!(x.window().unwrap(), Window::Capped(3));
        let flat = flatten(&x);
        assert_eq!(flat.len(), 4);
        assert_eq!(flat[0].children, vec![Slot::Node(1), Slot::Node(2)]);
        assert_eq!(flat[2].children, vec![Slot::Node(3), Slot::Anchor]);
        assert!(Expr::first_order(&d, &[&e], 2).is_err());
        let mut bad = Expr::first_order(&d, &[&e], 0).unwrap();
        bad.args.push(Arg::Anchor);
        assert!(bad.validate().is_err());
    }
}
