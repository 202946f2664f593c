//! Open-closed homotopy algebras: axiom checks, units, the Hochschild differential.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::brace::{brace, closed_action};
use crate::cochain::{CeTower, CochainTower, Window};
use crate::cyclic::cyclic_violation;
use crate::error::{OchaError, Result};
use crate::field::Field;
use crate::graded::{tuple_at, tuple_index, Element};
use crate::sign::parity_of;
use crate::symplectic::{CyclicContext, SymplecticForm};

/// Named pass/fail lines with an optional witness each.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub entries: Vec<ReportEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportEntry {
    pub name: String,
    pub witness: Option<String>,
}

impl ReportEntry {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, name: impl Into<String>, witness: Option<String>) {
        self.entries.push(ReportEntry { name: name.into(), witness });
    }

    /// Records a residual tower: passes iff it is zero.
    pub fn residual<F: Field>(&mut self, name: impl Into<String>, r: &CochainTower<F>) {
        self.push(name, r.first_nonzero().map(|w| w.to_string()));
    }

    pub fn extend(&mut self, other: Report) {
        self.entries.extend(other.entries);
    }

    pub fn passed(&self) -> bool {
        self.entries.iter().all(ReportEntry::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportEntry> {
        self.entries.iter().filter(|e| !e.passed())
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            match &e.witness {
                None => writeln!(f, "ok    {}", e.name)?,
                Some(w) => writeln!(f, "FAIL  {}: {w}", e.name)?,
            }
        }
        Ok(())
    }
}

#[derive(Default)]
struct Cache {
    ocha: OnceLock<bool>,
    unital: OnceLock<bool>,
    cyclic: OnceLock<bool>,
}

/// `(Z, A, 𝔩, 𝔮)` with an optional unit and form.
pub struct OchaStructure<F> {
    l: CeTower<F>,
    q: CochainTower<F>,
    unit: Option<Element<F>>,
    omega: Option<Arc<SymplecticForm<F>>>,
    ctx: Option<CyclicContext<F>>,
    cache: Cache,
}

impl<F: Field> Clone for OchaStructure<F> {
    fn clone(&self) -> Self {
        OchaStructure {
            l: self.l.clone(),
            q: self.q.clone(),
            unit: self.unit.clone(),
            omega: self.omega.clone(),
            ctx: self.ctx.clone(),
            cache: Cache::default(),
        }
    }
}

impl<F: Field> fmt::Debug for OchaStructure<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OchaStructure")
            .field("l", &self.l)
            .field("q", &self.q)
            .field("unit", &self.unit)
            .field("omega", &self.omega)
            .finish()
    }
}

impl<F: Field> OchaStructure<F> {
    pub fn new(
        l: CeTower<F>,
        q: CochainTower<F>,
        unit: Option<Element<F>>,
        omega: Option<Arc<SymplecticForm<F>>>,
    ) -> Result<Self> {
        if l.degree() != 1 || q.degree() != 1 {
            return Err(OchaError::DegreeMismatch("l and q must have degree 1".into()));
        }
        if l.spaces() != q.spaces() {
            return Err(OchaError::SpaceMismatch);
        }
        if q.window() != Window::Finite {
            return Err(OchaError::Unsupported("structure towers must be finitely supported".into()));
        }
        if let Some(w) = &omega {
            if **w.space() != *q.spaces().a {
                return Err(OchaError::SpaceMismatch);
            }
        }
        let ctx = match (&unit, &omega) {
            (Some(u), Some(w)) => Some(CyclicContext::new(w.clone(), u.clone())?),
            (Some(u), None) => {
                if u.homogeneous_degree() != Some(-1) {
                    return Err(OchaError::DegreeMismatch("the unit must be homogeneous of degree -1".into()));
                }
                None
            }
            _ => None,
        };
        Ok(OchaStructure { l, q, unit, omega, ctx, cache: Cache::default() })
    }

    pub fn l(&self) -> &CeTower<F> {
        &self.l
    }

    pub fn q(&self) -> &CochainTower<F> {
        &self.q
    }

    pub fn unit(&self) -> Option<&Element<F>> {
        self.unit.as_ref()
    }

    pub fn omega(&self) -> Option<&Arc<SymplecticForm<F>>> {
        self.omega.as_ref()
    }

    /// Unit and form together; needed by `Δ` and the cyclic braces.
    pub fn context(&self) -> Result<&CyclicContext<F>> {
        match (&self.unit, &self.ctx) {
            (None, _) => Err(OchaError::MissingUnit),
            (_, None) => Err(OchaError::MissingForm),
            (_, Some(c)) => Ok(c),
        }
    }

    pub fn is_ocha(&self) -> Result<bool> {
        if let Some(&v) = self.cache.ocha.get() {
            return Ok(v);
        }
        let ok = check_l_infinity(&self.l)?.is_none() && check_ocha(self)?.is_none();
        Ok(*self.cache.ocha.get_or_init(|| ok))
    }

    pub fn is_unital(&self) -> Result<bool> {
        if let Some(&v) = self.cache.unital.get() {
            return Ok(v);
        }
        let ok = check_unital(self)?;
        Ok(*self.cache.unital.get_or_init(|| ok))
    }

    pub fn is_cyclic(&self) -> Result<bool> {
        if let Some(&v) = self.cache.cyclic.get() {
            return Ok(v);
        }
        let w = self.omega.as_ref().ok_or(OchaError::MissingForm)?;
        let ok = cyclic_violation(&self.q, w).is_none();
        Ok(*self.cache.cyclic.get_or_init(|| ok))
    }

    /// Errors unless the structure is a cyclic unital OCHA.
    pub fn require_cyclic_unital(&self) -> Result<&CyclicContext<F>> {
        let ctx = self.context()?;
        if !self.is_ocha()? {
            return Err(OchaError::StructureCheck("not an OCHA".into()));
        }
        if !self.is_unital()? {
            return Err(OchaError::StructureCheck("not unital".into()));
        }
        if !self.is_cyclic()? {
            return Err(OchaError::NotCyclic);
        }
        Ok(ctx)
    }

    /// The full audit as a report.
    pub fn audit(&self) -> Result<Report> {
        let mut r = Report::new();
        if let Some(w) = &self.omega {
            let issues = crate::symplectic::omega_audit(w.space(), w.degree(), w.matrix());
            r.push("omega", (!issues.is_empty()).then(|| issues.join("; ")));
        }
        r.push("l-infinity", check_l_infinity(&self.l)?);
        r.push("ocha", check_ocha(self)?);
        if self.unit.is_some() {
            r.push("unital", unital_violation(self)?);
        }
        if let Some(w) = &self.omega {
            r.push("cyclic", cyclic_violation(&self.q, w));
        }
        Ok(r)
    }
}

/// `Σ_{J₁⊔J₂, J₁≠∅} (−1)^ε 𝔩(𝔩(z_{J₁}) ∧ z_{J₂})` on every word up to twice the top arity;
/// the first nonzero value, if any.
pub fn check_l_infinity<F: Field>(l: &CeTower<F>) -> Result<Option<String>> {
    let sp = l.spaces().clone();
    let top = 2 * l.max_arity();
    for ell in 1..=top {
        let zb = sp.z.wedge_basis(ell)?;
        for w in 0..zb.len() {
            let zs = zb.word(w);
            let zdeg: Vec<i64> = zs.iter().map(|&i| sp.z.degree(i)).collect();
            let mut acc = vec![F::zero(); sp.dim_z()];
            for mask in 1u32..(1 << ell) {
                let j1: Vec<usize> = (0..ell).filter(|&p| mask >> p & 1 == 1).collect();
                let j2: Vec<usize> = (0..ell).filter(|&p| mask >> p & 1 == 0).collect();
                let perm: Vec<usize> = j1.iter().chain(&j2).copied().collect();
                let sign = F::sign(parity_of(&perm, &zdeg));
                let inner: Vec<usize> = j1.iter().map(|&p| zs[p]).collect();
                for (y, c) in l.eval_basis(&inner)?.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let mut outer = vec![y];
                    outer.extend(j2.iter().map(|&p| zs[p]));
                    let coef = sign.clone() * c.clone();
                    for (o, v) in acc.iter_mut().zip(l.eval_basis(&outer)?) {
                        o.add_mul(&coef, &v);
                    }
                }
            }
            if acc.iter().any(|v| !v.is_zero()) {
                let labels: Vec<&str> = zs.iter().map(|&i| sp.z.label(i)).collect();
                return Ok(Some(format!("L-infinity relation fails at {labels:?}")));
            }
        }
    }
    Ok(None)
}

/// `𝔮{𝔮} − 𝔩̂(𝔮)`.
pub fn ocha_residual<F: Field>(s: &OchaStructure<F>) -> Result<CochainTower<F>> {
    let qq = brace(&s.q, &[&s.q])?;
    let lq = closed_action(&s.l, &s.q)?;
    qq.sub(&lq)
}

/// The first nonzero entry of `𝔮{𝔮} − 𝔩̂(𝔮)`, if any.
pub fn check_ocha<F: Field>(s: &OchaStructure<F>) -> Result<Option<String>> {
    Ok(ocha_residual(s)?.first_nonzero().map(|w| format!("q{{q}} - l(q) nonzero at {w}")))
}

/// The first failure of the unit conditions, if any.
pub fn unital_violation<F: Field>(s: &OchaStructure<F>) -> Result<Option<String>> {
    let unit = s.unit.as_ref().ok_or(OchaError::MissingUnit)?;
    let q = &s.q;
    let sp = q.spaces();
    let dim_a = sp.dim_a();
    let zero_z: Vec<Element<F>> = Vec::new();
    for x in 0..dim_a {
        let a = Element::basis(sp.a.clone(), x);
        let left = q.eval(&zero_z, &[unit.clone(), a.clone()])?;
        if left != a {
            return Ok(Some(format!("q02(1, {}) = {left:?}", sp.a.label(x))));
        }
        let right = q.eval(&zero_z, &[a.clone(), unit.clone()])?;
        let right = right.scale(&F::sign((sp.a.degree(x) - 1) & 1 != 0));
        if right != a {
            return Ok(Some(format!("(-1)^(|a|-1) q02({}, 1) = {right:?}", sp.a.label(x))));
        }
    }
    let usupp: Vec<usize> = unit.support().collect();
    for c in q.components() {
        if (c.ell(), c.k()) == (0, 2) {
            continue;
        }
        for slot in 0..c.k() {
            for w in 0..c.num_words() {
                for rest in 0..dim_a.pow(c.k() as u32 - 1) {
                    let others = tuple_at(dim_a, c.k() - 1, rest);
                    let mut acc = vec![F::zero(); dim_a];
                    for &u in &usupp {
                        let mut t = others.clone();
                        t.insert(slot, u);
                        for (o, v) in acc.iter_mut().zip(c.row(w, tuple_index(dim_a, &t))) {
                            o.add_mul(unit.coeff(u), v);
                        }
                    }
                    if acc.iter().any(|v| !v.is_zero()) {
                        return Ok(Some(format!("q({},{}) does not vanish on the unit in slot {}", c.ell(), c.k(), slot + 1)));
                    }
                }
            }
        }
    }
    Ok(None)
}

pub fn check_unital<F: Field>(s: &OchaStructure<F>) -> Result<bool> {
    Ok(unital_violation(s)?.is_none())
}

/// `δ(D) = 𝔮{D} − (−1)^{|D|} D{𝔮} + (−1)^{|D|} 𝔩̂(D)`.
pub fn hochschild_delta<F: Field>(s: &OchaStructure<F>, d: &CochainTower<F>) -> Result<CochainTower<F>> {
    let odd = d.degree() & 1 != 0;
    let qd = brace(&s.q, &[d])?;
    let dq = brace(d, &[&s.q])?;
    let ld = closed_action(&s.l, d)?;
    CochainTower::linear_combine(&[F::one(), F::sign(!odd), F::sign(odd)], &[&qd, &dq, &ld])
}

/// Zeroes every entry with the unit among the `A`-inputs; the unit must be a basis multiple.
pub fn normalized_project<F: Field>(d: &CochainTower<F>, unit: &Element<F>) -> Result<CochainTower<F>> {
    let (u, _) = unit.as_basis_multiple().ok_or(OchaError::UnitNotBasis)?;
    let dim_a = d.spaces().dim_a();
    let mut out = d.clone();
    for (ell, k) in d.bidegrees().collect::<Vec<_>>() {
        let c = out.component_mut(ell, k)?;
        for a in 0..dim_a.pow(k as u32) {
            if tuple_at(dim_a, k, a).contains(&u) {
                for w in 0..c.num_words() {
                    c.row_mut(w, a).iter_mut().for_each(|v| *v = F::zero());
                }
            }
        }
    }
    out.prune();
    Ok(out)
}
