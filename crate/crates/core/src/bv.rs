//! The BV operator against a cyclic unital OCHA: the `𝔮`-lemmas and the cochain-level BV identity.

use crate::brace::{brace, cup, gbracket};
use crate::cochain::CochainTower;
use crate::cyclic::{bv_delta, cup_with_delta, cyclic_brace1, cyclic_brace2};
use crate::error::Result;
use crate::field::Field;
use crate::ocha::{hochschild_delta, OchaStructure, Report};

fn combine<F: Field>(terms: &[(bool, &CochainTower<F>)]) -> Result<CochainTower<F>> {
    let coeffs: Vec<F> = terms.iter().map(|(odd, _)| F::sign(*odd)).collect();
    let towers: Vec<&CochainTower<F>> = terms.iter().map(|(_, t)| *t).collect();
    CochainTower::linear_combine(&coeffs, &towers)
}

fn odd(x: i64) -> bool {
    x & 1 != 0
}

/// `D{E} − 𝔮{ΔD,E} − 𝔮{D{◊},E} − δ(D{E,Δ}) − (δD){E,Δ} − (−1)^{|D|} D{δE,Δ}`.
pub fn brace_decomposition_residual<F: Field>(
    s: &OchaStructure<F>,
    d: &CochainTower<F>,
    e: &CochainTower<F>,
) -> Result<CochainTower<F>> {
    let ctx = s.require_cyclic_unital()?;
    let q = s.q();
    let de = brace(d, &[e])?;
    let q_dd_e = cup_with_delta(q, d, e, ctx)?;
    let q_ddia_e = cyclic_brace2(q, &[d, e], 1, &[], 0, ctx)?;
    let d_e_anchor = cyclic_brace1(d, &[e], 1, ctx)?;
    let delta_first = hochschild_delta(s, &d_e_anchor)?;
    let dd_e = cyclic_brace1(&hochschild_delta(s, d)?, &[e], 1, ctx)?;
    let de_delta = cyclic_brace1(d, &[&hochschild_delta(s, e)?], 1, ctx)?;
    combine(&[
        (false, &de),
        (true, &q_dd_e),
        (true, &q_ddia_e),
        (true, &delta_first),
        (true, &dd_e),
        (!odd(d.degree()), &de_delta),
    ])
}

/// `Δ(𝔮{D,E}) − 𝔮{D{◊},E} + (−1)^{|D||E|} 𝔮{E{◊},D}`.
pub fn delta_cup_residual<F: Field>(s: &OchaStructure<F>, d: &CochainTower<F>, e: &CochainTower<F>) -> Result<CochainTower<F>> {
    let ctx = s.require_cyclic_unital()?;
    let q = s.q();
    let lhs = bv_delta(&cup(q, d, e)?, ctx)?;
    let a = cyclic_brace2(q, &[d, e], 1, &[], 0, ctx)?;
    let b = cyclic_brace2(q, &[e, d], 1, &[], 0, ctx)?;
    combine(&[(false, &lhs), (true, &a), (odd(d.degree() * e.degree()), &b)])
}

/// `[D,E]` minus the fifteen-term right-hand side of the cochain-level BV identity.
pub fn bv_identity_residual<F: Field>(s: &OchaStructure<F>, d: &CochainTower<F>, e: &CochainTower<F>) -> Result<CochainTower<F>> {
    let ctx = s.require_cyclic_unital()?;
    let q = s.q();
    let x = odd(d.degree() * e.degree());
    let bracket = gbracket(d, e)?;
    let delta_cup = bv_delta(&cup(q, d, e)?, ctx)?;
    let q_dd_e = cup_with_delta(q, d, e, ctx)?;
    let q_de_d = cup_with_delta(q, e, d, ctx)?;
    let d_e = cyclic_brace1(d, &[e], 1, ctx)?;
    let e_d = cyclic_brace1(e, &[d], 1, ctx)?;
    let delta_d_e = hochschild_delta(s, &d_e)?;
    let delta_e_d = hochschild_delta(s, &e_d)?;
    let (ddelta, edelta) = (hochschild_delta(s, d)?, hochschild_delta(s, e)?);
    let dd_e_anchor = cyclic_brace1(&ddelta, &[e], 1, ctx)?;
    let de_d_anchor = cyclic_brace1(&edelta, &[d], 1, ctx)?;
    let d_de_anchor = cyclic_brace1(d, &[&edelta], 1, ctx)?;
    let e_dd_anchor = cyclic_brace1(e, &[&ddelta], 1, ctx)?;
    let sd = odd(d.degree());
    combine(&[
        (false, &bracket),
        (true, &delta_cup),
        (true, &q_dd_e),
        (x, &q_de_d),
        (true, &delta_d_e),
        (x, &delta_e_d),
        (true, &dd_e_anchor),
        (x, &de_d_anchor),
        (!sd, &d_de_anchor),
        (x ^ odd(e.degree()), &e_dd_anchor),
    ])
}

/// `D{E,Δ} − (−1)^{|D||E|} E{D,Δ}`.
pub fn bv_primitive<F: Field>(s: &OchaStructure<F>, d: &CochainTower<F>, e: &CochainTower<F>) -> Result<CochainTower<F>> {
    let ctx = s.require_cyclic_unital()?;
    let d_e = cyclic_brace1(d, &[e], 1, ctx)?;
    let e_d = cyclic_brace1(e, &[d], 1, ctx)?;
    combine(&[(false, &d_e), (!odd(d.degree() * e.degree()), &e_d)])
}

/// `[D,E] − Δ(D⌣E) − ΔD⌣E + (−1)^{|D||E|} ΔE⌣D − δ(primitive)`, meaningful for `δ`-closed `D`, `E`.
pub fn bv_relation_residual<F: Field>(s: &OchaStructure<F>, d: &CochainTower<F>, e: &CochainTower<F>) -> Result<CochainTower<F>> {
    let ctx = s.require_cyclic_unital()?;
    let q = s.q();
    let x = odd(d.degree() * e.degree());
    let bracket = gbracket(d, e)?;
    let delta_cup = bv_delta(&cup(q, d, e)?, ctx)?;
    let q_dd_e = cup_with_delta(q, d, e, ctx)?;
    let q_de_d = cup_with_delta(q, e, d, ctx)?;
    let exact = hochschild_delta(s, &bv_primitive(s, d, e)?)?;
    combine(&[(false, &bracket), (true, &delta_cup), (true, &q_dd_e), (x, &q_de_d), (true, &exact)])
}

/// Brace decomposition, `Δ` of a cup, the full identity and, when `δD = δE = 0`, the
/// cohomology-level BV relation with its explicit primitive.
pub fn bv_verify<F: Field>(s: &OchaStructure<F>, d: &CochainTower<F>, e: &CochainTower<F>) -> Result<Report> {
    let mut r = Report::new();
    r.residual("brace decomposition", &brace_decomposition_residual(s, d, e)?);
    r.residual("delta of cup", &delta_cup_residual(s, d, e)?);
    r.residual("bv identity", &bv_identity_residual(s, d, e)?);
    if hochschild_delta(s, d)?.is_zero() && hochschild_delta(s, e)?.is_zero() {
        r.residual("bv relation with primitive", &bv_relation_residual(s, d, e)?);
    }
    Ok(r)
}

/// The identities for `𝔮` against `Δ` and `◊`, on each tower (and consecutive pairs);
/// `Δ² = 0` and `δΔ + Δδ = 0` are checked on the normalized ones.
pub fn q_lemma_suite<F: Field>(s: &OchaStructure<F>, towers: &[CochainTower<F>]) -> Result<Report> {
    let ctx = s.require_cyclic_unital()?;
    let q = s.q();
    let unit = ctx.unit();
    let mut r = Report::new();
    r.residual("delta q", &bv_delta(q, ctx)?);
    for (i, d) in towers.iter().enumerate() {
        let right = cyclic_brace1(q, &[d], 1, ctx)?;
        let left = cyclic_brace1(q, &[d], 0, ctx)?;
        r.residual(format!("q{{D,Δ}} = D [{i}]"), &right.sub(d)?);
        r.residual(format!("q{{Δ,D}} = -D [{i}]"), &left.add(d)?);
        r.residual(format!("q{{D{{◊}}}} = 0 [{i}]"), &cyclic_brace2(q, &[d], 1, &[], 0, ctx)?);
        if d.is_normalized(unit) {
            let dd = bv_delta(d, ctx)?;
            r.residual(format!("Δ² = 0 [{i}]"), &bv_delta(&dd, ctx)?);
            let lhs = hochschild_delta(s, &dd)?;
            let rhs = bv_delta(&hochschild_delta(s, d)?, ctx)?;
            r.residual(format!("δΔ + Δδ = 0 [{i}]"), &lhs.add(&rhs)?);
        }
    }
    for (i, pair) in towers.windows(2).enumerate() {
        let (d, e) = (&pair[0], &pair[1]);
        for anchor in 0..=2 {
            r.residual(format!("q{{D,E}} with Δ at {anchor} = 0 [{i}]"), &cyclic_brace1(q, &[d, e], anchor, ctx)?);
        }
        r.residual(format!("q{{D{{E,◊}}}} = 0 [{i}]"), &cyclic_brace2(q, &[d], 1, &[e], 1, ctx)?);
        let a = cyclic_brace2(q, &[d, e], 1, &[], 0, ctx)?;
        let b = cyclic_brace2(q, &[e, d], 2, &[], 0, ctx)?;
        let sign = odd(d.degree() * e.degree());
        r.residual(format!("q{{D{{◊}},E}} antisymmetry [{i}]"), &combine(&[(false, &a), (sign, &b)])?);
    }
    Ok(r)
}
