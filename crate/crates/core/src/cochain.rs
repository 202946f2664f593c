//! Towers of multilinear maps `Z^{∧ℓ} ⊗ A^{⊗k} → A` and `Z^{∧ℓ} → Z`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{OchaError, Result};
use crate::field::Field;
use crate::graded::{tuple_at, tuple_index, Element, GradedSpace, OcSpaces};
use crate::sign::wedge_canonicalize;

/// How far a tower's components are known.
///
/// `Finite` towers are exactly zero outside their stored components.
/// `Capped(n)` towers are exact in total arity `ℓ + k ≤ n` and unknown above.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Window {
    Finite,
    Capped(usize),
}

impl Window {
    pub fn admits(self, arity: usize) -> bool {
        match self {
            Window::Finite => true,
            Window::Capped(n) => arity <= n,
        }
    }

    pub fn meet(self, other: Window) -> Window {
        match (self, other) {
            (Window::Finite, w) | (w, Window::Finite) => w,
            (Window::Capped(a), Window::Capped(b)) => Window::Capped(a.min(b)),
        }
    }

    /// Lowers a cap by `by`, failing if nothing of positive arity remains.
    pub fn shrink(self, by: usize) -> Result<Window> {
        match self {
            Window::Finite => Ok(Window::Finite),
            Window::Capped(n) if n > by => Ok(Window::Capped(n - by)),
            Window::Capped(n) => Err(OchaError::WindowUnderflow(format!(
                "window {n} cannot absorb a shrink of {by}"
            ))),
        }
    }

    pub fn cap(self) -> Option<usize> {
        match self {
            Window::Finite => None,
            Window::Capped(n) => Some(n),
        }
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Window::Finite => write!(f, "finite"),
            Window::Capped(n) => write!(f, "{n}"),
        }
    }
}

/// A dense table for one bidegree `(ℓ, k)`.
///
/// Rows are indexed by a canonical wedge word over the `Z`-basis and an
/// ordered `A`-tuple; each row is the coefficient vector of the output.
#[derive(Clone, PartialEq, Eq)]
pub struct Component<F> {
    ell: usize,
    k: usize,
    words: usize,
    a_pow: usize,
    dim_a: usize,
    pub(crate) data: Vec<F>,
}

impl<F: Field> Component<F> {
    fn zero(spaces: &OcSpaces, ell: usize, k: usize) -> Result<Self> {
        let words = spaces.z.wedge_basis(ell)?.len();
        let dim_a = spaces.dim_a();
        let a_pow = dim_a
            .checked_pow(k as u32)
            .filter(|n| n.saturating_mul(words * dim_a) <= 1 << 26)
            .ok_or(OchaError::ArityTooLarge { arity: k, dim: dim_a })?;
        Ok(Component { ell, k, words, a_pow, dim_a, data: vec![F::zero(); words * a_pow * dim_a] })
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn num_words(&self) -> usize {
        self.words
    }

    pub fn num_tuples(&self) -> usize {
        self.a_pow
    }

    #[inline]
    pub fn row(&self, w: usize, a: usize) -> &[F] {
        let s = (w * self.a_pow + a) * self.dim_a;
        &self.data[s..s + self.dim_a]
    }

    #[inline]
    pub fn row_mut(&mut self, w: usize, a: usize) -> &mut [F] {
        let s = (w * self.a_pow + a) * self.dim_a;
        &mut self.data[s..s + self.dim_a]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(F::is_zero)
    }

    /// Nonzero rows as `(word index, tuple index, row)`.
    pub fn nonzero_rows(&self) -> impl Iterator<Item = (usize, usize, &[F])> + '_ {
        (0..self.words).flat_map(move |w| {
            (0..self.a_pow).filter_map(move |a| {
                let r = self.row(w, a);
                (!r.iter().all(F::is_zero)).then_some((w, a, r))
            })
        })
    }
}

/// A homogeneous open-closed cochain `D ∈ C^{•,•}(Z; A, A)`.
#[derive(Clone, PartialEq, Eq)]
pub struct CochainTower<F> {
    spaces: Arc<OcSpaces>,
    degree: i64,
    window: Window,
    comps: BTreeMap<(usize, usize), Component<F>>,
}

/// One nonzero table entry, reported by checks as a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub ell: usize,
    pub k: usize,
    pub z: Vec<String>,
    pub a: Vec<String>,
    pub value: String,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{}) [{}; {}] -> {}", self.ell, self.k, self.z.join(" "), self.a.join(" "), self.value)
    }
}

impl<F: Field> CochainTower<F> {
    pub fn new(spaces: Arc<OcSpaces>, degree: i64, window: Window) -> Self {
        CochainTower { spaces, degree, window, comps: BTreeMap::new() }
    }

    pub fn spaces(&self) -> &Arc<OcSpaces> {
        &self.spaces
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn components(&self) -> impl Iterator<Item = &Component<F>> {
        self.comps.values()
    }

    pub fn bidegrees(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.comps.keys().copied()
    }

    pub fn component(&self, ell: usize, k: usize) -> Option<&Component<F>> {
        self.comps.get(&(ell, k))
    }

    pub fn max_arity(&self) -> usize {
        self.comps.keys().map(|(l, k)| l + k).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.comps.values().all(Component::is_zero)
    }

    pub(crate) fn same_spaces(&self, other: &CochainTower<F>) -> Result<()> {
        if Arc::ptr_eq(&self.spaces, &other.spaces) || self.spaces == other.spaces {
            Ok(())
        } else {
            Err(OchaError::SpaceMismatch)
        }
    }

    /// Table for `(ℓ,k)`, created as zero if absent.
    pub fn component_mut(&mut self, ell: usize, k: usize) -> Result<&mut Component<F>> {
        if ell == 0 && k == 0 {
            return Err(OchaError::Unsupported("bidegree (0,0) is excluded".into()));
        }
        if !self.window.admits(ell + k) {
            let window = self.window.cap().unwrap_or(0);
            return Err(OchaError::OutsideWindow { ell, k, window });
        }
        if !self.comps.contains_key(&(ell, k)) {
            let c = Component::zero(&self.spaces, ell, k)?;
            self.comps.insert((ell, k), c);
        }
        Ok(self.comps.get_mut(&(ell, k)).expect("just inserted"))
    }

    /// An operation with no inputs and value `c`, of degree `degree`.
    ///
    /// This is the one place a `(0,0)` entry exists; such towers only ever
    /// appear as leaves of an insertion tree and never escape the crate.
    pub(crate) fn constant(spaces: Arc<OcSpaces>, degree: i64, c: &[F]) -> Result<Self> {
        let mut comp = Component::zero(&spaces, 0, 0)?;
        comp.row_mut(0, 0).clone_from_slice(c);
        let mut out = CochainTower::new(spaces, degree, Window::Finite);
        if !comp.is_zero() {
            out.comps.insert((0, 0), comp);
        }
        Ok(out)
    }

    /// Sets the output at a canonical word and an `A`-tuple, checking degrees.
    pub fn set_entry(&mut self, z: &[usize], a: &[usize], out: &[F]) -> Result<()> {
        let ell = z.len();
        let k = a.len();
        let dim_a = self.spaces.dim_a();
        if out.len() != dim_a {
            return Err(OchaError::SizeMismatch { expected: dim_a, got: out.len() });
        }
        if a.iter().any(|&i| i >= dim_a) {
            return Err(OchaError::InvalidSpace("A-index out of range".into()));
        }
        let w = self
            .spaces
            .z
            .wedge_basis(ell)?
            .index(z)
            .ok_or_else(|| OchaError::InvalidSpace(format!("{z:?} is not a canonical wedge word")))?;
        let expect = self.degree + self.spaces.z_degree(z) + self.spaces.a_degree(a);
        for (x, c) in out.iter().enumerate() {
            if !c.is_zero() && self.spaces.a.degree(x) != expect {
                return Err(OchaError::DegreeMismatch(format!(
                    "output {} has degree {}, expected {expect}",
                    self.spaces.a.label(x),
                    self.spaces.a.degree(x)
                )));
            }
        }
        let aidx = tuple_index(dim_a, a);
        let comp = self.component_mut(ell, k)?;
        comp.row_mut(w, aidx).clone_from_slice(out);
        Ok(())
    }

    /// Output row at a canonical word and tuple, `None` when zero by support.
    pub fn row(&self, ell: usize, k: usize, w: usize, a: usize) -> Option<&[F]> {
        self.comps.get(&(ell, k)).map(|c| c.row(w, a))
    }

    fn check_window(&self, ell: usize, k: usize) -> Result<()> {
        if let Window::Capped(n) = self.window {
            if ell + k > n {
                return Err(OchaError::OutsideWindow { ell, k, window: n });
            }
        }
        Ok(())
    }

    /// Evaluates on basis inputs given in any order.
    pub fn eval_basis(&self, z: &[usize], a: &[usize]) -> Result<Vec<F>> {
        self.check_window(z.len(), a.len())?;
        let dim_a = self.spaces.dim_a();
        let mut out = vec![F::zero(); dim_a];
        let Some(c) = self.comps.get(&(z.len(), a.len())) else {
            return Ok(out);
        };
        let degs: Vec<i64> = z.iter().map(|&i| self.spaces.z.degree(i)).collect();
        let ww = wedge_canonicalize(z, &degs)?;
        if ww.vanishes {
            return Ok(out);
        }
        let Some(w) = self.spaces.z.wedge_basis(z.len())?.index(&ww.indices) else {
            return Ok(out);
        };
        for (o, v) in out.iter_mut().zip(c.row(w, tuple_index(dim_a, a))) {
            *o = v.clone().neg_if(ww.odd);
        }
        Ok(out)
    }

    /// Multilinear evaluation `D(z_1,…,z_ℓ; a_1,…,a_k)`.
    pub fn eval(&self, z: &[Element<F>], a: &[Element<F>]) -> Result<Element<F>> {
        self.check_window(z.len(), a.len())?;
        for e in z {
            if **e.space() != *self.spaces.z {
                return Err(OchaError::SpaceMismatch);
            }
        }
        for e in a {
            if **e.space() != *self.spaces.a {
                return Err(OchaError::SpaceMismatch);
            }
        }
        let mut acc = vec![F::zero(); self.spaces.dim_a()];
        if self.comps.contains_key(&(z.len(), a.len())) {
            let supports: Vec<Vec<usize>> = z.iter().chain(a).map(|e| e.support().collect()).collect();
            let mut choice = vec![0usize; supports.len()];
            multi_for_each(&supports, &mut choice, 0, &mut |pick| {
                let mut coef = F::one();
                for (e, &i) in z.iter().chain(a).zip(pick) {
                    coef = coef * e.coeff(i).clone();
                }
                let row = self.eval_basis(&pick[..z.len()], &pick[z.len()..])?;
                for (o, v) in acc.iter_mut().zip(&row) {
                    o.add_mul(&coef, v);
                }
                Ok(())
            })?;
        }
        Element::new(self.spaces.a.clone(), acc)
    }

    /// Componentwise `Σ c_i T_i`; the window is the meet of the inputs.
    pub fn linear_combine(coeffs: &[F], towers: &[&CochainTower<F>]) -> Result<CochainTower<F>> {
        if coeffs.len() != towers.len() {
            return Err(OchaError::SizeMismatch { expected: towers.len(), got: coeffs.len() });
        }
        let first = towers
            .first()
            .ok_or_else(|| OchaError::Unsupported("empty linear combination".into()))?;
        let mut window = first.window;
        for t in towers {
            first.same_spaces(t)?;
            if t.degree != first.degree {
                return Err(OchaError::DegreeMismatch(format!(
                    "cannot combine degrees {} and {}",
                    first.degree, t.degree
                )));
            }
            window = window.meet(t.window);
        }
        let mut out = CochainTower::<F>::new(first.spaces.clone(), first.degree, window);
        for (c, t) in coeffs.iter().zip(towers) {
            if c.is_zero() {
                continue;
            }
            for (&(ell, k), comp) in &t.comps {
                if !window.admits(ell + k) {
                    continue;
                }
                let dst = out.component_mut(ell, k)?;
                for (d, s) in dst.data.iter_mut().zip(&comp.data) {
                    d.add_mul(c, s);
                }
            }
        }
        out.prune();
        Ok(out)
    }

    pub fn add(&self, other: &CochainTower<F>) -> Result<CochainTower<F>> {
        Self::linear_combine(&[F::one(), F::one()], &[self, other])
    }

    pub fn sub(&self, other: &CochainTower<F>) -> Result<CochainTower<F>> {
        Self::linear_combine(&[F::one(), -F::one()], &[self, other])
    }

    pub fn scale(&self, c: &F) -> CochainTower<F> {
        Self::linear_combine(std::slice::from_ref(c), &[self]).expect("single tower always combines")
    }

    pub fn neg_if(&self, odd: bool) -> CochainTower<F> {
        if odd {
            self.scale(&-F::one())
        } else {
            self.clone()
        }
    }

    /// Drops components that are identically zero.
    pub fn prune(&mut self) {
        self.comps.retain(|_, c| !c.is_zero());
    }

    /// Restricts to total arity `≤ n` and declares that cap.
    pub fn truncate(&self, n: usize) -> CochainTower<F> {
        let window = self.window.meet(Window::Capped(n));
        let comps = self
            .comps
            .iter()
            .filter(|((l, k), _)| l + k <= n)
            .map(|(key, c)| (*key, c.clone()))
            .collect();
        CochainTower { spaces: self.spaces.clone(), degree: self.degree, window, comps }
    }

    /// Declares a finitely supported tower exact beyond its components.
    pub fn into_finite(mut self) -> CochainTower<F> {
        self.window = Window::Finite;
        self
    }

    /// Keeps only the components accepted by `keep`.
    pub fn filter_components(&self, keep: impl Fn(usize, usize) -> bool) -> CochainTower<F> {
        let comps = self
            .comps
            .iter()
            .filter(|((l, k), _)| keep(*l, *k))
            .map(|(key, c)| (*key, c.clone()))
            .collect();
        CochainTower { spaces: self.spaces.clone(), degree: self.degree, window: self.window, comps }
    }

    /// True iff every stored entry has output degree `|D| + Σ|z| + Σ|a|`.
    pub fn degree_audit(&self) -> bool {
        self.degree_violation().is_none()
    }

    pub fn degree_violation(&self) -> Option<Witness> {
        let dim_a = self.spaces.dim_a();
        for c in self.comps.values() {
            let basis = self.spaces.z.wedge_basis(c.ell).ok()?;
            for (w, a, row) in c.nonzero_rows() {
                let tuple = tuple_at(dim_a, c.k, a);
                let expect = self.degree + basis.degree_sum(w) + self.spaces.a_degree(&tuple);
                if row.iter().enumerate().any(|(x, v)| !v.is_zero() && self.spaces.a.degree(x) != expect) {
                    return Some(self.witness(c, w, a));
                }
            }
        }
        None
    }

    fn witness(&self, c: &Component<F>, w: usize, a: usize) -> Witness {
        let basis = self.spaces.z.wedge_basis(c.ell).expect("component exists");
        let tuple = tuple_at(self.spaces.dim_a(), c.k, a);
        let value = Element::new(self.spaces.a.clone(), c.row(w, a).to_vec()).expect("row size");
        Witness {
            ell: c.ell,
            k: c.k,
            z: basis.word(w).iter().map(|&i| self.spaces.z.label(i).to_string()).collect(),
            a: tuple.iter().map(|&i| self.spaces.a.label(i).to_string()).collect(),
            value: format!("{value:?}"),
        }
    }

    /// The first nonzero entry, in component order.
    pub fn first_nonzero(&self) -> Option<Witness> {
        self.comps
            .values()
            .find_map(|c| c.nonzero_rows().next().map(|(w, a, _)| self.witness(c, w, a)))
    }

    /// True iff `D` vanishes whenever one `A`-slot is the unit.
    pub fn is_normalized(&self, unit: &Element<F>) -> bool {
        let dim_a = self.spaces.dim_a();
        let usupp: Vec<usize> = unit.support().collect();
        for c in self.comps.values() {
            for slot in 0..c.k {
                for w in 0..c.words {
                    for rest in 0..dim_a.pow(c.k.saturating_sub(1) as u32) {
                        let others = tuple_at(dim_a, c.k - 1, rest);
                        let mut acc = vec![F::zero(); dim_a];
                        for &u in &usupp {
                            let mut t = others.clone();
                            t.insert(slot, u);
                            for (o, v) in acc.iter_mut().zip(c.row(w, tuple_index(dim_a, &t))) {
                                o.add_mul(unit.coeff(u), v);
                            }
                        }
                        if acc.iter().any(|v| !v.is_zero()) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Exact equality of values inside the common window.
    pub fn agrees_with(&self, other: &CochainTower<F>) -> Result<bool> {
        if self.degree != other.degree {
            return Ok(self.is_zero() && other.is_zero());
        }
        Ok(self.sub(other)?.is_zero())
    }

    /// Number of nonzero scalar entries.
    pub fn nnz(&self) -> usize {
        self.comps.values().map(|c| c.data.iter().filter(|v| !v.is_zero()).count()).sum()
    }
}

impl<F: Field> fmt::Debug for CochainTower<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CochainTower(degree {}, window {}, components {:?}, nnz {})",
            self.degree, self.window, self.comps.keys().collect::<Vec<_>>(), self.nnz())
    }
}

pub(crate) fn multi_for_each(
    supports: &[Vec<usize>],
    choice: &mut Vec<usize>,
    depth: usize,
    f: &mut dyn FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    if depth == supports.len() {
        return f(choice);
    }
    for &i in &supports[depth] {
        choice[depth] = i;
        multi_for_each(supports, choice, depth + 1, f)?;
    }
    Ok(())
}

/// A homogeneous graded-symmetric tower `Z^{∧ℓ} → Z`, `ℓ ≥ 1`, finitely supported.
#[derive(Clone, PartialEq, Eq)]
pub struct CeTower<F> {
    spaces: Arc<OcSpaces>,
    degree: i64,
    comps: BTreeMap<usize, Vec<F>>,
}

impl<F: Field> CeTower<F> {
    pub fn new(spaces: Arc<OcSpaces>, degree: i64) -> Self {
        CeTower { spaces, degree, comps: BTreeMap::new() }
    }

    pub fn spaces(&self) -> &Arc<OcSpaces> {
        &self.spaces
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn arities(&self) -> impl Iterator<Item = usize> + '_ {
        self.comps.keys().copied()
    }

    pub fn max_arity(&self) -> usize {
        self.comps.keys().copied().max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.comps.values().all(|v| v.iter().all(F::is_zero))
    }

    fn z(&self) -> &GradedSpace {
        &self.spaces.z
    }

    pub fn set_entry(&mut self, z: &[usize], out: &[F]) -> Result<()> {
        let ell = z.len();
        if ell == 0 {
            return Err(OchaError::Unsupported("closed operations need ℓ ≥ 1".into()));
        }
        let dim_z = self.z().dim();
        if out.len() != dim_z {
            return Err(OchaError::SizeMismatch { expected: dim_z, got: out.len() });
        }
        let basis = self.z().wedge_basis(ell)?;
        let w = basis
            .index(z)
            .ok_or_else(|| OchaError::InvalidSpace(format!("{z:?} is not a canonical wedge word")))?;
        let expect = self.degree + basis.degree_sum(w);
        for (x, c) in out.iter().enumerate() {
            if !c.is_zero() && self.z().degree(x) != expect {
                return Err(OchaError::DegreeMismatch(format!(
                    "output {} has degree {}, expected {expect}",
                    self.z().label(x),
                    self.z().degree(x)
                )));
            }
        }
        let n = basis.len();
        let table = self.comps.entry(ell).or_insert_with(|| vec![F::zero(); n * dim_z]);
        table[w * dim_z..(w + 1) * dim_z].clone_from_slice(out);
        Ok(())
    }

    /// Output row at a canonical word index.
    pub fn row(&self, ell: usize, w: usize) -> Option<&[F]> {
        let d = self.z().dim();
        self.comps.get(&ell).map(|t| &t[w * d..(w + 1) * d])
    }

    /// Evaluates on basis inputs in any order.
    pub fn eval_basis(&self, z: &[usize]) -> Result<Vec<F>> {
        let d = self.z().dim();
        let mut out = vec![F::zero(); d];
        if !self.comps.contains_key(&z.len()) {
            return Ok(out);
        }
        let degs: Vec<i64> = z.iter().map(|&i| self.z().degree(i)).collect();
        let ww = wedge_canonicalize(z, &degs)?;
        if ww.vanishes {
            return Ok(out);
        }
        let w = self.z().wedge_basis(z.len())?.index(&ww.indices).expect("canonical");
        for (o, v) in out.iter_mut().zip(self.row(z.len(), w).expect("present")) {
            *o = v.clone().neg_if(ww.odd);
        }
        Ok(out)
    }

    pub fn degree_audit(&self) -> bool {
        let d = self.z().dim();
        self.comps.iter().all(|(&ell, table)| {
            let basis = self.z().wedge_basis(ell).expect("stored arity");
            (0..basis.len()).all(|w| {
                let expect = self.degree + basis.degree_sum(w);
                (0..d).all(|x| table[w * d + x].is_zero() || self.z().degree(x) == expect)
            })
        })
    }

    pub fn prune(&mut self) {
        self.comps.retain(|_, t| !t.iter().all(F::is_zero));
    }
}

impl<F: Field> fmt::Debug for CeTower<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CeTower(degree {}, arities {:?})", self.degree, self.comps.keys().collect::<Vec<_>>())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;
    use crate::graded::GradedSpace;

    fn spaces() -> Arc<OcSpaces> {
        OcSpaces::new(
            GradedSpace::new([("u", -1), ("e", 1)]).unwrap(),
            GradedSpace::new([("x", 1), ("y", 1)]).unwrap(),
        )
    }

    fn r(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    #[test]
    fn repeated_odd_input_vanishes() {
        let s = spaces();
        let mut t = CochainTower::<Rational>::new(s, -1, Window::Finite);
        t.set_entry(&[0, 1], &[], &[r(0), r(3)]).unwrap();
        assert!(t.eval_basis(&[1, 1], &[]).unwrap().iter().all(|v| v.is_zero()));
    }

    #[test]
    fn table_lookup_and_symmetry() {
        let s = spaces();
        let mut t = CochainTower::<Rational>::new(s.clone(), 1, Window::Finite);
        t.set_entry(&[], &[0, 1], &[r(0), r(5)]).unwrap();
        assert_eq!(t.eval_basis(&[], &[0, 1]).unwrap(), vec![r(0), r(5)]);
        let mut t = CochainTower::<Rational>::new(s, -1, Window::Finite);
        t.set_entry(&[0, 1], &[], &[r(0), r(2)]).unwrap();
        assert_eq!(t.eval_basis(&[1, 0], &[]).unwrap(), vec![r(0), r(-2)]);
    }

    #[test]
    fn degree_checked_on_entry() {
        let s = spaces();
        let mut t = CochainTower::<Rational>::new(s, 0, Window::Finite);
        // degree 0 map sends e (deg 1) to something of degree 1
        assert!(t.set_entry(&[], &[1], &[r(1), r(0)]).is_err());
        assert!(t.set_entry(&[], &[1], &[r(0), r(1)]).is_ok());
        assert!(t.degree_audit());
    }

    #[test]
    fn linear_combination() {
        let s = spaces();
        let mut t = CochainTower::<Rational>::new(s, 1, Window::Capped(3));
        t.set_entry(&[], &[0, 1], &[r(0), r(5)]).unwrap();
        let z = CochainTower::linear_combine(&[r(1), r(-1)], &[&t, &t]).unwrap();
        assert!(z.is_zero());
        let d = CochainTower::linear_combine(&[r(2)], &[&t]).unwrap();
        assert_eq!(d.eval_basis(&[], &[0, 1]).unwrap(), vec![r(0), r(10)]);
        let zero = t.scale(&r(0));
        assert!(zero.is_zero());
        assert_eq!(zero.window(), Window::Capped(3));
    }

    #[test]
    fn outside_window_is_an_error() {
        let s = spaces();
        let t = CochainTower::<Rational>::new(s, 1, Window::Capped(2));
        assert!(t.eval_basis(&[], &[0, 0, 0]).is_err());
        assert!(t.eval_basis(&[], &[0, 0]).is_ok());
    }

    #[test]
    fn normalized_check() {
        let s = spaces();
        let unit = Element::basis(s.a.clone(), 0);
        let mut t = CochainTower::<Rational>::new(s, -1, Window::Finite);
        assert!(t.is_normalized(&unit));
        t.set_entry(&[], &[1, 1], &[r(0), r(1)]).unwrap();
        assert!(t.is_normalized(&unit));
        t.set_entry(&[], &[0, 1], &[r(1), r(0)]).unwrap();
        assert!(!t.is_normalized(&unit));
    }
}
