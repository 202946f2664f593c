//! The line-oriented structure file.
//!
//! ```text
//! # comment
//! field rational                     | field prime <p>
//! [A]
//! <label> <degree>                   one line per basis vector, in basis order
//! [Z]
//! <label> <degree>
//! [unit]
//! <label>
//! [omega <degree>]
//! <label> <label> <scalar>           first index ≤ second; the skew partner is implied
//! [l <ℓ>]
//! <z labels> -> <terms>
//! [q <ℓ> <k>]
//! <z labels> ; <a labels> -> <terms>
//! [tower <name> <degree> <cap|finite>]
//! [component <ℓ> <k>]                belongs to the preceding tower
//! <z labels> ; <a labels> -> <terms>
//! ```
//!
//! `<terms>` is a list of `<scalar>*<label>` with nonzero scalars in basis
//! order.  `Z`-words are sorted by basis index.  Scalars are reduced
//! fractions `p/q` or integers for `rational`, residues in `0..p` otherwise.
//! [`serialize`] writes sections in the order above, blocks sorted by
//! bidegree and towers by name.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::sync::Arc;

use crate::cochain::{CeTower, CochainTower, Window};
use crate::error::{OchaError, Result};
use crate::field::{Field, FieldKind};
use crate::graded::{tuple_at, Element, GradedSpace, OcSpaces};
use crate::linalg::Matrix;
use crate::ocha::OchaStructure;
use crate::symplectic::SymplecticForm;

const RESERVED: [char; 5] = ['*', ';', '[', ']', '#'];

/// A structure together with named test towers.
pub struct StructureFile<F> {
    pub structure: OchaStructure<F>,
    pub towers: BTreeMap<String, CochainTower<F>>,
}

impl<F: Field> Clone for StructureFile<F> {
    fn clone(&self) -> Self {
        StructureFile { structure: self.structure.clone(), towers: self.towers.clone() }
    }
}

impl<F: Field> PartialEq for StructureFile<F> {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = (&self.structure, &other.structure);
        a.l() == b.l()
            && a.q() == b.q()
            && a.unit() == b.unit()
            && a.omega().map(|w| &**w) == b.omega().map(|w| &**w)
            && self.towers == other.towers
    }
}

impl<F: Field> StructureFile<F> {
    /// Checks that labels and names survive a round trip.
    pub fn new(structure: OchaStructure<F>, towers: BTreeMap<String, CochainTower<F>>) -> Result<Self> {
        let sp = structure.q().spaces();
        for l in sp.a.labels().iter().chain(sp.z.labels()).chain(towers.keys()) {
            check_name(l).map_err(OchaError::InvalidSpace)?;
        }
        if let Some(u) = structure.unit() {
            match u.as_basis_multiple() {
                Some((_, c)) if c == F::one() => {}
                _ => return Err(OchaError::UnitNotBasis),
            }
        }
        for t in towers.values() {
            structure.q().same_spaces(t)?;
        }
        Ok(StructureFile { structure, towers })
    }

    pub fn tower(&self, name: &str) -> Result<&CochainTower<F>> {
        self.towers.get(name).ok_or_else(|| OchaError::Unsupported(format!("no tower named '{name}'")))
    }
}

fn check_name(s: &str) -> std::result::Result<(), String> {
    if s.is_empty() || s == "->" || s.chars().any(|c| c.is_whitespace() || RESERVED.contains(&c)) {
        Err(format!("'{s}' cannot be used as a label or name"))
    } else {
        Ok(())
    }
}

fn err(line: usize, col: usize, msg: impl Into<String>) -> OchaError {
    OchaError::Parse { line, col, msg: msg.into() }
}

/// Whitespace-separated tokens with 1-based character columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, (byte, ch)) in line.char_indices().enumerate() {
        let col = i + 1;
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some((col, byte)),
            (true, Some((c, b))) => {
                out.push((c, &line[b..byte]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some((c, b)) = start {
        out.push((c, &line[b..]));
    }
    out
}

/// Reads the `field` line without parsing the rest.
pub fn peek_field(text: &str) -> Result<FieldKind> {
    for (n, raw) in text.lines().enumerate() {
        let toks = tokens(strip_comment(raw));
        if toks.is_empty() {
            continue;
        }
        return parse_field_line(n + 1, &toks);
    }
    Err(err(1, 1, "missing field line"))
}

fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(a, _)| a)
}

fn parse_field_line(n: usize, toks: &[(usize, &str)]) -> Result<FieldKind> {
    match toks {
        [(_, "field"), (_, "rational")] => Ok(FieldKind::Rational),
        [(_, "field"), (_, "prime"), (c, p)] => {
            let p: u64 = p.parse().map_err(|_| err(n, *c, format!("bad prime '{p}'")))?;
            Ok(FieldKind::Prime(p))
        }
        [(c, _), ..] => Err(err(n, *c, "expected 'field rational' or 'field prime <p>'")),
        [] => Err(err(n, 1, "expected a field line")),
    }
}

fn int<T: std::str::FromStr>(n: usize, (c, s): (usize, &str), what: &str) -> Result<T> {
    s.parse().map_err(|_| err(n, c, format!("expected {what}, found '{s}'")))
}

enum Section {
    A,
    Z,
    Unit,
    Omega,
    L(usize),
    Q(usize, usize),
    Tower(String),
    Component(String, usize, usize),
}

struct Builder<F> {
    spaces: Option<Arc<OcSpaces>>,
    a: Vec<(String, i64)>,
    z: Vec<(String, i64)>,
    unit: Option<usize>,
    omega: Option<(i64, Vec<(usize, usize, F)>)>,
    l: Option<CeTower<F>>,
    q: Option<CochainTower<F>>,
    towers: BTreeMap<String, CochainTower<F>>,
    seen_blocks: HashSet<String>,
    seen_keys: HashSet<(String, Vec<usize>, Vec<usize>)>,
    current_tower: Option<String>,
}

impl<F: Field> Builder<F> {
    fn spaces(&mut self, n: usize) -> Result<Arc<OcSpaces>> {
        if let Some(s) = &self.spaces {
            return Ok(s.clone());
        }
        if self.a.is_empty() {
            return Err(err(n, 1, "the A basis is empty or missing"));
        }
        if self.z.is_empty() {
            return Err(err(n, 1, "the Z basis is empty or missing"));
        }
        let a = GradedSpace::new(self.a.clone()).map_err(|e| err(n, 1, e.to_string()))?;
        let z = GradedSpace::new(self.z.clone()).map_err(|e| err(n, 1, e.to_string()))?;
        let s = OcSpaces::new(a, z);
        self.l = Some(CeTower::new(s.clone(), 1));
        self.q = Some(CochainTower::new(s.clone(), 1, Window::Finite));
        self.spaces = Some(s.clone());
        Ok(s)
    }
}

fn label_index(n: usize, space: &GradedSpace, (c, s): (usize, &str)) -> Result<usize> {
    space.index_of(s).ok_or_else(|| err(n, c, format!("unknown label '{s}'")))
}

fn wedge_word(n: usize, space: &GradedSpace, toks: &[(usize, &str)]) -> Result<Vec<usize>> {
    let col = toks.first().map_or(1, |t| t.0);
    let word = toks.iter().map(|&t| label_index(n, space, t)).collect::<Result<Vec<_>>>()?;
    let basis = space.wedge_basis(word.len()).map_err(|e| err(n, col, e.to_string()))?;
    if basis.index(&word).is_some() {
        return Ok(word);
    }
    let mut sorted = word.clone();
    sorted.sort_unstable();
    if basis.index(&sorted).is_some() {
        Err(err(n, col, "unsorted wedge key"))
    } else {
        Err(err(n, col, "the wedge word vanishes"))
    }
}

fn parse_terms<F: Field>(n: usize, space: &GradedSpace, toks: &[(usize, &str)]) -> Result<Vec<F>> {
    let mut out = vec![F::zero(); space.dim()];
    let mut last = None;
    for &(c, t) in toks {
        let (coef, label) = t.split_once('*').ok_or_else(|| err(n, c, format!("expected <scalar>*<label>, found '{t}'")))?;
        let v = F::parse_canonical(coef).map_err(|m| err(n, c, m))?;
        if v.is_zero() {
            return Err(err(n, c, "zero terms are not written"));
        }
        let i = label_index(n, space, (c + coef.len() + 1, label))?;
        if last.is_some_and(|p| p >= i) {
            return Err(err(n, c, "terms must follow basis order"));
        }
        last = Some(i);
        out[i] = v;
    }
    if last.is_none() {
        return Err(err(n, toks.first().map_or(1, |t| t.0), "empty right-hand side"));
    }
    Ok(out)
}

/// Splits `z ; a -> terms` (or `z -> terms` when `open` is false).
#[allow(clippy::type_complexity)]
fn split_entry<'t>(
    n: usize,
    toks: &'t [(usize, &'t str)],
    open: bool,
) -> Result<(&'t [(usize, &'t str)], &'t [(usize, &'t str)], &'t [(usize, &'t str)])> {
    let arrow = toks.iter().position(|t| t.1 == "->").ok_or_else(|| err(n, toks[0].0, "missing '->'"))?;
    let (lhs, rhs) = (&toks[..arrow], &toks[arrow + 1..]);
    if !open {
        if let Some(t) = lhs.iter().find(|t| t.1 == ";") {
            return Err(err(n, t.0, "unexpected ';' in a closed entry"));
        }
        return Ok((lhs, &[], rhs));
    }
    let semi = lhs.iter().position(|t| t.1 == ";").ok_or_else(|| err(n, toks[0].0, "missing ';'"))?;
    let (z, a) = (&lhs[..semi], &lhs[semi + 1..]);
    if let Some(t) = a.iter().find(|t| t.1 == ";") {
        return Err(err(n, t.0, "more than one ';'"));
    }
    Ok((z, a, rhs))
}

fn map_entry_err(n: usize, col: usize) -> impl Fn(OchaError) -> OchaError {
    move |e| match e {
        OchaError::Parse { .. } => e,
        other => err(n, col, other.to_string()),
    }
}

/// Parses a structure file; the field line must match `F`.
pub fn parse_structure<F: Field>(text: &str) -> Result<StructureFile<F>> {
    let mut b: Builder<F> = Builder {
        spaces: None,
        a: Vec::new(),
        z: Vec::new(),
        unit: None,
        omega: None,
        l: None,
        q: None,
        towers: BTreeMap::new(),
        seen_blocks: HashSet::new(),
        seen_keys: HashSet::new(),
        current_tower: None,
    };
    let mut field_seen = false;
    let mut section: Option<Section> = None;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let n = idx + 1;
        last_line = n;
        let toks = tokens(strip_comment(raw));
        let Some(&(col, head)) = toks.first() else {
            continue;
        };
        if !field_seen {
            let kind = parse_field_line(n, &toks)?;
            if kind != F::kind() {
                return Err(err(n, col, format!("file is over {kind}, expected {}", F::kind())));
            }
            field_seen = true;
            continue;
        }
        if head.starts_with('[') {
            section = Some(parse_header(n, raw, &mut b)?);
            continue;
        }
        let sec = section.as_ref().ok_or_else(|| err(n, col, "entry outside any section"))?;
        match sec {
            Section::A | Section::Z => {
                let [name, deg] = toks[..] else {
                    return Err(err(n, col, "expected '<label> <degree>'"));
                };
                check_name(name.1).map_err(|m| err(n, name.0, m))?;
                let d: i64 = int(n, deg, "an integer degree")?;
                let list = if matches!(sec, Section::A) { &mut b.a } else { &mut b.z };
                list.push((name.1.to_string(), d));
            }
            Section::Unit => {
                let sp = b.spaces(n)?;
                if toks.len() != 1 || b.unit.is_some() {
                    return Err(err(n, col, "the unit section holds exactly one label"));
                }
                b.unit = Some(label_index(n, &sp.a, toks[0])?);
            }
            Section::Omega => {
                let sp = b.spaces(n)?;
                let [x, y, v] = toks[..] else {
                    return Err(err(n, col, "expected '<label> <label> <scalar>'"));
                };
                let (i, j) = (label_index(n, &sp.a, x)?, label_index(n, &sp.a, y)?);
                if i > j {
                    return Err(err(n, x.0, "pairing entries are written with the first index not after the second"));
                }
                let v = F::parse_canonical(v.1).map_err(|m| err(n, v.0, m))?;
                let entries = &mut b.omega.as_mut().expect("header sets the form").1;
                if entries.iter().any(|(a, c, _)| (*a, *c) == (i, j)) {
                    return Err(err(n, col, "duplicate pairing entry"));
                }
                entries.push((i, j, v));
            }
            Section::L(ell) => {
                let sp = b.spaces(n)?;
                let (z, _, rhs) = split_entry(n, &toks, false)?;
                if z.len() != *ell {
                    return Err(err(n, col, format!("expected {ell} Z labels")));
                }
                let word = wedge_word(n, &sp.z, z)?;
                let out = parse_terms::<F>(n, &sp.z, rhs)?;
                if !b.seen_keys.insert((format!("l{ell}"), word.clone(), Vec::new())) {
                    return Err(err(n, col, "duplicate entry"));
                }
                b.l.as_mut().expect("spaces built").set_entry(&word, &out).map_err(map_entry_err(n, col))?;
            }
            Section::Q(ell, k) | Section::Component(_, ell, k) => {
                let sp = b.spaces(n)?;
                let (z, a, rhs) = split_entry(n, &toks, true)?;
                if z.len() != *ell || a.len() != *k {
                    return Err(err(n, col, format!("expected {ell} Z labels and {k} A labels")));
                }
                let word = wedge_word(n, &sp.z, z)?;
                let tuple = a.iter().map(|&t| label_index(n, &sp.a, t)).collect::<Result<Vec<_>>>()?;
                let out = parse_terms::<F>(n, &sp.a, rhs)?;
                let (key, target) = match sec {
                    Section::Q(..) => ("q".to_string(), b.q.as_mut().expect("spaces built")),
                    Section::Component(name, ..) => {
                        (format!("tower {name}"), b.towers.get_mut(name).expect("header registers the tower"))
                    }
                    _ => unreachable!(),
                };
                if !b.seen_keys.insert((key, word.clone(), tuple.clone())) {
                    return Err(err(n, col, "duplicate entry"));
                }
                target.set_entry(&word, &tuple, &out).map_err(map_entry_err(n, col))?;
            }
            Section::Tower(name) => {
                return Err(err(n, col, format!("tower '{name}' needs a [component <ℓ> <k>] header before entries")));
            }
        }
    }
    if !field_seen {
        return Err(err(1, 1, "missing field line"));
    }
    let end = last_line.max(1);
    let sp = b.spaces(end)?;
    let unit = b.unit.map(|u| Element::basis(sp.a.clone(), u));
    let omega = match b.omega.take() {
        None => None,
        Some((deg, entries)) => {
            let w = SymplecticForm::from_entries(sp.a.clone(), deg, &entries).map_err(|e| err(end, 1, e.to_string()))?;
            Some(Arc::new(w))
        }
    };
    let mut l = b.l.take().expect("spaces built");
    let mut q = b.q.take().expect("spaces built");
    l.prune();
    q.prune();
    let structure = OchaStructure::new(l, q, unit, omega).map_err(|e| err(end, 1, e.to_string()))?;
    let mut towers = b.towers;
    towers.values_mut().for_each(CochainTower::prune);
    StructureFile::new(structure, towers).map_err(|e| err(end, 1, e.to_string()))
}

fn parse_header<F: Field>(n: usize, raw: &str, b: &mut Builder<F>) -> Result<Section> {
    let line = strip_comment(raw).trim();
    let col = raw.find('[').map_or(1, |i| raw[..i].chars().count() + 1);
    let inner = line
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| err(n, col, "malformed section header"))?;
    let toks: Vec<(usize, &str)> = tokens(inner).into_iter().map(|(c, t)| (c + col, t)).collect();
    let Some(&(_, kind)) = toks.first() else {
        return Err(err(n, col, "empty section header"));
    };
    if !matches!(kind, "A" | "Z") {
        b.spaces(n)?;
    } else if b.spaces.is_some() {
        return Err(err(n, col, "[A] and [Z] must precede every other section"));
    }
    if kind != "component" && !b.seen_blocks.insert(inner.split_whitespace().collect::<Vec<_>>().join(" ")) {
        return Err(err(n, col, format!("duplicate section [{inner}]")));
    }
    let sec = match (kind, &toks[1..]) {
        ("A", []) => Section::A,
        ("Z", []) => Section::Z,
        ("unit", []) => Section::Unit,
        ("omega", [d]) => {
            b.omega = Some((int(n, *d, "an integer degree")?, Vec::new()));
            Section::Omega
        }
        ("l", [e]) => Section::L(int(n, *e, "an arity")?),
        ("q", [e, k]) => Section::Q(int(n, *e, "an arity")?, int(n, *k, "an arity")?),
        ("tower", [name, d, w]) => {
            check_name(name.1).map_err(|m| err(n, name.0, m))?;
            let degree: i64 = int(n, *d, "an integer degree")?;
            let window = match w.1 {
                "finite" => Window::Finite,
                _ => Window::Capped(int(n, *w, "a cap or 'finite'")?),
            };
            let sp = b.spaces(n)?;
            b.towers.insert(name.1.to_string(), CochainTower::new(sp, degree, window));
            Section::Tower(name.1.to_string())
        }
        ("component", [e, k]) => {
            let name = b.current_tower.clone().ok_or_else(|| err(n, col, "[component] must follow a [tower] header"))?;
            let (ell, k) = (int(n, *e, "an arity")?, int(n, *k, "an arity")?);
            if !b.seen_blocks.insert(format!("component {name} {ell} {k}")) {
                return Err(err(n, col, format!("duplicate component ({ell},{k}) of '{name}'")));
            }
            Section::Component(name, ell, k)
        }
        _ => return Err(err(n, col, format!("unknown section [{inner}]"))),
    };
    if let Section::Tower(name) = &sec {
        b.current_tower = Some(name.clone());
    }
    if !matches!(sec, Section::Component(..) | Section::Tower(_)) {
        b.current_tower = None;
    }
    Ok(sec)
}

fn terms<F: Field>(space: &GradedSpace, row: &[F]) -> String {
    row.iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(i, v)| format!("{v}*{}", space.label(i)))
        .collect::<Vec<_>>()
        .join(" ")
}

fn open_entries<F: Field>(out: &mut String, t: &CochainTower<F>, header: impl Fn(usize, usize) -> String) {
    let sp = t.spaces();
    let dim_a = sp.dim_a();
    for c in t.components() {
        if c.is_zero() {
            continue;
        }
        let _ = writeln!(out, "{}", header(c.ell(), c.k()));
        let words = sp.z.wedge_basis(c.ell()).expect("stored component");
        for w in 0..words.len() {
            for a in 0..c.num_tuples() {
                let row = c.row(w, a);
                if row.iter().all(F::is_zero) {
                    continue;
                }
                let mut lhs: Vec<&str> = words.word(w).iter().map(|&i| sp.z.label(i)).collect();
                lhs.push(";");
                lhs.extend(tuple_at(dim_a, c.k(), a).into_iter().map(|i| sp.a.label(i)));
                let _ = writeln!(out, "{} -> {}", lhs.join(" "), terms(&sp.a, row));
            }
        }
    }
}

/// Canonical text; `parse_structure(serialize(x)) == x`.
pub fn serialize<F: Field>(file: &StructureFile<F>) -> String {
    let s = &file.structure;
    let sp = s.q().spaces();
    let mut out = String::new();
    let _ = writeln!(out, "field {}", F::kind());
    for (name, space) in [("A", &sp.a), ("Z", &sp.z)] {
        let _ = writeln!(out, "[{name}]");
        for (l, d) in space.labels().iter().zip(space.degrees()) {
            let _ = writeln!(out, "{l} {d}");
        }
    }
    if let Some((u, _)) = s.unit().and_then(Element::as_basis_multiple) {
        let _ = writeln!(out, "[unit]\n{}", sp.a.label(u));
    }
    if let Some(w) = s.omega() {
        let _ = writeln!(out, "[omega {}]", w.degree());
        let m: &Matrix<F> = w.matrix();
        for i in 0..m.rows() {
            for j in i..m.cols() {
                if !m.get(i, j).is_zero() {
                    let _ = writeln!(out, "{} {} {}", sp.a.label(i), sp.a.label(j), m.get(i, j));
                }
            }
        }
    }
    let l = s.l();
    for ell in l.arities() {
        let words = sp.z.wedge_basis(ell).expect("stored arity");
        let mut block = String::new();
        for w in 0..words.len() {
            let row = l.row(ell, w).expect("stored arity");
            if row.iter().any(|v| !v.is_zero()) {
                let lhs: Vec<&str> = words.word(w).iter().map(|&i| sp.z.label(i)).collect();
                let _ = writeln!(block, "{} -> {}", lhs.join(" "), terms(&sp.z, row));
            }
        }
        if !block.is_empty() {
            let _ = write!(out, "[l {ell}]\n{block}");
        }
    }
    open_entries(&mut out, s.q(), |ell, k| format!("[q {ell} {k}]"));
    for (name, t) in &file.towers {
        out.push_str(&tower_block(name, t));
    }
    out
}

/// A `[tower …]` section with its components, as it appears in a structure file.
pub fn tower_block<F: Field>(name: &str, t: &CochainTower<F>) -> String {
    let mut out = format!("[tower {name} {} {}]\n", t.degree(), t.window());
    open_entries(&mut out, t, |ell, k| format!("[component {ell} {k}]"));
    out
}
