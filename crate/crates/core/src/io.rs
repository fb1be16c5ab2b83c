//! JSON wire formats. Every parser reports failures with a JSON-pointer path
//! into the offending document.
//!
//! Cochains are sparse objects keyed by comma-joined element names (`""` in
//! degree 0); missing cells are zero. Rationals are integers or strings
//! `"a/b"`.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::cohomology::{cell_count, cell_index, cell_of, Cochain, HyperCocycle2};
use crate::covers::{CoverBase, CoverDescriptor};
use crate::endoscopy::{a1_elliptic, a1xa1_in_c2, EndoscopicDatum};
use crate::error::{Error, Result};
use crate::galois_module::{dual_torsion_module, FiniteGroup, FiniteModule, GaloisLattice, TorsionPoint};
use crate::lattice::IMat;
use crate::localfield::{parse_rat, AdditiveCharacter, Normalization, Place, QuadExtElement, Rat};
use crate::rootdata::BasedRootDatum;
use crate::transfer::{BasePoint, ChiData, CoverElement, FactorNormalization, Mat2, TransferInput};

/// A value together with its JSON pointer.
#[derive(Clone)]
pub struct Node<'a> {
    pub v: &'a Value,
    path: String,
}

fn nest(prefix: &str, e: Error) -> Error {
    match e {
        Error::Invalid { path, msg } => Error::invalid(format!("{prefix}{path}"), msg),
        e => e,
    }
}

fn escape(key: &str) -> String {
    key.replace('~', "~0").replace('/', "~1")
}

impl<'a> Node<'a> {
    pub fn root(v: &'a Value) -> Self {
        Node { v, path: String::new() }
    }

    pub fn path(&self) -> &str {
        &self.path
    }

    pub fn err(&self, msg: impl Into<String>) -> Error {
        Error::invalid(if self.path.is_empty() { "/" } else { &self.path }, msg)
    }

    /// Checks that this is an object whose keys all lie in `allowed`.
    pub fn object(&self, allowed: &[&str]) -> Result<&'a Map<String, Value>> {
        let m = self.v.as_object().ok_or_else(|| self.err("expected an object"))?;
        if let Some(k) = m.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(Error::invalid(format!("{}/{}", self.path, escape(k)), "unknown field"));
        }
        Ok(m)
    }

    pub fn opt(&self, key: &str) -> Option<Node<'a>> {
        self.v.get(key).filter(|v| !v.is_null()).map(|v| Node { v, path: format!("{}/{}", self.path, escape(key)) })
    }

    pub fn get(&self, key: &str) -> Result<Node<'a>> {
        self.opt(key).ok_or_else(|| Error::invalid(format!("{}/{}", self.path, escape(key)), "missing field"))
    }

    pub fn items(&self) -> Result<Vec<Node<'a>>> {
        let a = self.v.as_array().ok_or_else(|| self.err("expected an array"))?;
        Ok(a.iter().enumerate().map(|(i, v)| Node { v, path: format!("{}/{i}", self.path) }).collect())
    }

    pub fn i64(&self) -> Result<i64> {
        self.v.as_i64().ok_or_else(|| self.err("expected an integer"))
    }

    pub fn usize(&self) -> Result<usize> {
        self.v.as_u64().and_then(|x| usize::try_from(x).ok()).ok_or_else(|| self.err("expected a non-negative integer"))
    }

    pub fn bool(&self) -> Result<bool> {
        self.v.as_bool().ok_or_else(|| self.err("expected a boolean"))
    }

    pub fn str(&self) -> Result<&'a str> {
        self.v.as_str().ok_or_else(|| self.err("expected a string"))
    }

    pub fn rat(&self) -> Result<Rat> {
        match self.v {
            Value::Number(n) => n.as_i64().map(|x| Rat::from_integer(x as i128)).ok_or_else(|| self.err("expected an integer or \"a/b\"")),
            Value::String(s) => parse_rat(s).map_err(|_| self.err(format!("bad rational {s:?}"))),
            _ => Err(self.err("expected an integer or \"a/b\"")),
        }
    }

    pub fn int_vec(&self) -> Result<Vec<i64>> {
        self.items()?.iter().map(|x| x.i64()).collect()
    }

    pub fn int_mat(&self) -> Result<IMat> {
        self.items()?.iter().map(|x| x.int_vec()).collect()
    }

    pub fn with<T>(&self, f: impl FnOnce() -> Result<T>) -> Result<T> {
        f().map_err(|e| nest(&self.path, e))
    }
}

pub fn parse_value(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::invalid("/", format!("not JSON: {e}")))
}

// ---------------------------------------------------------------- groups

/// `"trivial"`, `"Z/n"`, `"Z/2xZ/2"`, `"V4"`, `"D<n>"`, or
/// `{"elements": [...], "table": [[...]]}`.
pub fn parse_group(n: Node) -> Result<FiniteGroup> {
    if let Some(s) = n.v.as_str() {
        return group_preset(s).ok_or_else(|| n.err(format!("unknown group preset {s:?}")));
    }
    n.object(&["elements", "table"])?;
    let en = n.get("elements")?;
    let names: Vec<String> = en.items()?.iter().map(|x| x.str().map(str::to_string)).collect::<Result<_>>()?;
    if names.len() > 64 {
        return Err(en.err("groups of order above 64 are not supported"));
    }
    for (i, s) in names.iter().enumerate() {
        if s.is_empty() || split_key(s).len() != 1 {
            return Err(Error::invalid(format!("{}/elements/{i}", n.path), "element names must be nonempty and contain no top-level comma"));
        }
    }
    let table = n.get("table")?;
    let rows: Vec<Vec<usize>> = table.items()?.iter().map(|r| r.items()?.iter().map(|x| x.usize()).collect()).collect::<Result<_>>()?;
    n.with(|| FiniteGroup::new(names, rows))
}

pub fn group_preset(s: &str) -> Option<FiniteGroup> {
    match s {
        "trivial" | "1" => Some(FiniteGroup::trivial()),
        "V4" | "Z/2xZ/2" => Some(FiniteGroup::klein_four()),
        _ => {
            if let Some(k) = s.strip_prefix("Z/") {
                let k: usize = k.parse().ok()?;
                (1..=64).contains(&k).then(|| FiniteGroup::cyclic(k))
            } else if let Some(k) = s.strip_prefix('D') {
                let k: usize = k.parse().ok()?;
                (2..=32).contains(&k).then(|| FiniteGroup::dihedral(k))
            } else {
                None
            }
        }
    }
}

pub fn group_to_json(g: &FiniteGroup) -> Value {
    json!({ "elements": g.names(), "table": g.table() })
}

// ---------------------------------------------------------------- lattices

/// `{"rank": r, "action": [M_g, ...]}` with `M_g` row-major acting on column
/// vectors; `action` may be omitted for the trivial action.
pub fn parse_lattice_body(n: Node, group: &FiniteGroup) -> Result<GaloisLattice> {
    n.object(&["rank", "action", "group"])?;
    let rank = n.get("rank")?.usize()?;
    if rank > 16 {
        return Err(Error::invalid(format!("{}/rank", n.path), "rank above 16 is not supported"));
    }
    match n.opt("action") {
        None => Ok(GaloisLattice::trivial(group, rank)),
        Some(a) => {
            let mats: Vec<IMat> = a.items()?.iter().map(|m| m.int_mat()).collect::<Result<_>>()?;
            n.with(|| GaloisLattice::new(group, rank, mats))
        }
    }
}

/// `{"group": G, "rank": r, "action": [...]}`.
pub fn parse_lattice(n: Node) -> Result<(FiniteGroup, GaloisLattice)> {
    n.object(&["group", "rank", "action"])?;
    let g = parse_group(n.get("group")?)?;
    let l = parse_lattice_body(n, &g)?;
    Ok((g, l))
}

pub fn lattice_to_json(g: &FiniteGroup, l: &GaloisLattice) -> Value {
    json!({ "group": group_to_json(g), "rank": l.rank, "action": l.action })
}

// ---------------------------------------------------------------- modules

/// `{"group", "module": {"factors", "action"}}` or
/// `{"group", "lattice": {"rank", "action"}, "n"}` (the latter is `L̂[n]`),
/// plus optional `"degree"`.
pub fn parse_cohomology_input(n: Node) -> Result<(FiniteGroup, FiniteModule, Option<usize>)> {
    n.object(&["group", "module", "lattice", "n", "degree"])?;
    let g = parse_group(n.get("group")?)?;
    let degree = n.opt("degree").map(|d| d.usize()).transpose()?;
    if let Some(d) = degree {
        if d > 2 {
            return Err(Error::invalid(format!("{}/degree", n.path), "degrees 0, 1, 2 only"));
        }
    }
    let m = match (n.opt("module"), n.opt("lattice")) {
        (Some(m), None) => {
            m.object(&["factors", "action"])?;
            let factors = m.get("factors")?.int_vec()?;
            if factors.len() > 16 || factors.iter().any(|&d| !(1..=1 << 16).contains(&d)) {
                return Err(Error::invalid(format!("{}/factors", m.path), "at most 16 factors, each in 1..=65536"));
            }
            let action = match m.opt("action") {
                Some(a) => a.items()?.iter().map(|x| x.int_mat()).collect::<Result<Vec<_>>>()?,
                None => vec![crate::lattice::identity(factors.len()); g.order()],
            };
            m.with(|| FiniteModule::new(&g, factors, action))?
        }
        (None, Some(l)) => {
            let lat = parse_lattice_body(l, &g)?;
            let k = n.get("n")?.i64()?;
            if !(1..=1 << 16).contains(&k) {
                return Err(Error::invalid(format!("{}/n", n.path), "level must be in 1..=65536"));
            }
            n.with(|| dual_torsion_module(&g, &lat, k))?
        }
        _ => return Err(n.err("give exactly one of \"module\" and \"lattice\"")),
    };
    Ok((g, m, degree))
}

// ---------------------------------------------------------------- root data

/// A preset name, `{"preset": name}`, or
/// `{"rank", "simple_roots", "simple_coroots"}`.
pub fn parse_root_datum(n: Node) -> Result<BasedRootDatum> {
    if let Some(s) = n.v.as_str() {
        return BasedRootDatum::preset(s).map_err(|_| n.err(format!("unknown root datum preset {s:?}")));
    }
    let m = n.object(&["preset", "rank", "simple_roots", "simple_coroots"])?;
    if let Some(p) = n.opt("preset") {
        if m.len() != 1 {
            return Err(n.err("\"preset\" excludes the other fields"));
        }
        return parse_root_datum(p);
    }
    let rank = n.get("rank")?.usize()?;
    if rank > 8 {
        return Err(Error::invalid(format!("{}/rank", n.path), "rank above 8 is not supported"));
    }
    let sr = n.get("simple_roots")?.int_mat()?;
    let sc = n.get("simple_coroots")?.int_mat()?;
    n.with(|| BasedRootDatum::new(rank, sr, sc))
}

pub fn root_datum_to_json(rd: &BasedRootDatum) -> Value {
    json!({ "rank": rd.rank(), "simple_roots": rd.simple_roots(), "simple_coroots": rd.simple_coroots() })
}

// ---------------------------------------------------------------- cochains

/// Splits `"(1,s1),s1"` at top-level commas.
pub fn split_key(key: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in key.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&key[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&key[start..]);
    out
}

pub fn cell_key(group: &FiniteGroup, cell: &[usize]) -> String {
    cell.iter().map(|&g| group.name(g)).collect::<Vec<_>>().join(",")
}

pub fn parse_cochain(n: Node, group: &FiniteGroup, module: &FiniteModule, degree: usize) -> Result<Cochain> {
    let m = n.v.as_object().ok_or_else(|| n.err("expected an object keyed by group elements"))?;
    let mut out = Cochain::zero(group, module, degree);
    for (key, _) in m {
        let parts: Vec<&str> = if key.is_empty() { vec![] } else { split_key(key) };
        let here = n.opt(key).expect("present");
        if parts.len() != degree {
            return Err(here.err(format!("expected {degree} group elements in the key")));
        }
        let mut cell = Vec::with_capacity(degree);
        for p in parts {
            cell.push(group.index_of(p).ok_or_else(|| here.err(format!("unknown group element {p:?}")))?);
        }
        let v = here.int_vec()?;
        if v.len() != module.rank() {
            return Err(here.err(format!("expected {} coordinates", module.rank())));
        }
        out.values[cell_index(group, &cell)] = module.reduce(&v);
    }
    Ok(out)
}

/// Nonzero cells only.
pub fn cochain_to_json(group: &FiniteGroup, x: &Cochain) -> Value {
    let mut m = Map::new();
    for i in 0..cell_count(group, x.degree) {
        if x.values[i].iter().any(|&a| a != 0) {
            m.insert(cell_key(group, &cell_of(group, x.degree, i)), json!(x.values[i]));
        }
    }
    Value::Object(m)
}

// ---------------------------------------------------------------- descriptors

/// `{"torus": {"rank", "action"}}` or `{"group": {"datum", "action"}}`.
pub fn parse_cover_base(n: Node, group: &FiniteGroup) -> Result<CoverBase> {
    n.object(&["torus", "group"])?;
    match (n.opt("torus"), n.opt("group")) {
        (Some(t), None) => Ok(CoverBase::torus(parse_lattice_body(t, group)?)),
        (None, Some(gn)) => {
            gn.object(&["datum", "action"])?;
            let rd = parse_root_datum(gn.get("datum")?)?;
            let action = match gn.opt("action") {
                Some(a) => a.items()?.iter().map(|x| x.int_mat()).collect::<Result<Vec<_>>>()?,
                None => vec![crate::lattice::identity(rd.rank()); group.order()],
            };
            gn.with(|| CoverBase::group(group, rd, action))
        }
        _ => Err(n.err("give exactly one of \"torus\" and \"group\"")),
    }
}

pub fn cover_base_to_json(b: &CoverBase) -> Value {
    match b {
        CoverBase::Torus(l) => json!({ "torus": { "rank": l.rank, "action": l.action } }),
        CoverBase::Group { datum, action } => json!({ "group": { "datum": root_datum_to_json(datum), "action": action } }),
    }
}

fn parse_hyper(n: &Node, group: &FiniteGroup, base: &CoverBase, level: i64) -> Result<HyperCocycle2> {
    let cx = n.with(|| base.complex(group, level))?;
    let z = match n.opt("z") {
        Some(z) => parse_cochain(z, group, &cx.a, 2)?,
        None => Cochain::zero(group, &cx.a, 2),
    };
    let c = match n.opt("c") {
        Some(c) => parse_cochain(c, group, &cx.b, 1)?,
        None => Cochain::zero(group, &cx.b, 1),
    };
    Ok(HyperCocycle2 { z, c })
}

fn parse_level(n: Node) -> Result<i64> {
    let k = n.i64()?;
    if !(1..=1 << 12).contains(&k) {
        return Err(n.err("level must be in 1..=4096"));
    }
    Ok(k)
}

/// `{"group", "base", "n", "z", "c"}`.
pub fn parse_descriptor(n: Node) -> Result<CoverDescriptor> {
    n.object(&["group", "base", "n", "z", "c"])?;
    let g = parse_group(n.get("group")?)?;
    let base = parse_cover_base(n.get("base")?, &g)?;
    let level = parse_level(n.get("n")?)?;
    let t = parse_hyper(&n, &g, &base, level)?;
    n.with(|| CoverDescriptor::new(g, base, level, t))
}

pub fn descriptor_to_json(d: &CoverDescriptor) -> Value {
    json!({
        "group": group_to_json(&d.group),
        "base": cover_base_to_json(&d.base),
        "n": d.n,
        "z": cochain_to_json(&d.group, &d.t.z),
        "c": cochain_to_json(&d.group, &d.t.c),
    })
}

// ---------------------------------------------------------------- endoscopic data

/// `{"group", "dual", "action", "s", "twisting", "strict_s", "x_g"}`.
///
/// `action[σ]` is `σ_G` on `X*(T̂)`, `s` a list of `[num, den]`, and
/// `twisting[σ]` a word in the simple reflections of `Ĝ`. `x_g` is an
/// optional `{"n", "z", "c"}` on `G`.
pub fn parse_endoscopic_datum(n: Node) -> Result<EndoscopicDatum> {
    if let Some(s) = n.v.as_str() {
        return endoscopic_preset(s).ok_or_else(|| n.err(format!("unknown endoscopic preset {s:?}")));
    }
    n.object(&["group", "dual", "action", "s", "twisting", "strict_s", "x_g"])?;
    let g = parse_group(n.get("group")?)?;
    let dn = n.get("dual")?;
    let dual = parse_root_datum(dn.clone())?;
    if dual.semisimple_rank() > 4 {
        return Err(dn.err("semisimple rank above 4 is not supported"));
    }
    let action = match n.opt("action") {
        Some(a) => a.items()?.iter().map(|x| x.int_mat()).collect::<Result<Vec<_>>>()?,
        None => vec![crate::lattice::identity(dual.rank()); g.order()],
    };
    let sn = n.get("s")?;
    let coords: Vec<(i64, i64)> = sn
        .items()?
        .iter()
        .map(|p| {
            let v = p.int_vec()?;
            match v[..] {
                [a, b] if b != 0 => Ok((a, b)),
                _ => Err(p.err("expected [numerator, nonzero denominator]")),
            }
        })
        .collect::<Result<_>>()?;
    if coords.len() != dual.rank() {
        return Err(sn.err(format!("expected {} coordinates", dual.rank())));
    }
    let s = sn.with(|| TorsionPoint::new(&coords))?;
    let tw_node = n.get("twisting")?;
    let twisting: Vec<Vec<usize>> = tw_node.items()?.iter().map(|w| w.items()?.iter().map(|x| x.usize()).collect()).collect::<Result<_>>()?;
    if twisting.iter().any(|w| w.len() > 64) {
        return Err(tw_node.err("Weyl words longer than 64 letters"));
    }
    let strict = n.opt("strict_s").map(|b| b.bool()).transpose()?.unwrap_or(false);
    let d = n.with(|| EndoscopicDatum::new(&g, &dual, &action, &s, &twisting, strict))?;
    match n.opt("x_g") {
        None => Ok(d),
        Some(x) => {
            x.object(&["n", "z", "c"])?;
            let base = d.g_base()?;
            let level = parse_level(x.get("n")?)?;
            let t = parse_hyper(&x, &g, &base, level)?;
            let desc = x.with(|| CoverDescriptor::new(g.clone(), base, level, t))?;
            d.with_base_cover(desc)
        }
    }
}

pub fn endoscopic_preset(s: &str) -> Option<EndoscopicDatum> {
    match s {
        "a1-elliptic" => Some(a1_elliptic()),
        "a1xa1-in-c2" => Some(a1xa1_in_c2()),
        _ => None,
    }
}

pub fn endoscopic_datum_to_json(d: &EndoscopicDatum) -> Value {
    let words: Vec<&Vec<usize>> = d.twisting.iter().map(|&w| &d.tits.weyl.words[w]).collect();
    let mut out = json!({
        "group": group_to_json(&d.group),
        "dual": root_datum_to_json(&d.dual),
        "action": d.action.iter().map(|a| &a.mat_x).collect::<Vec<_>>(),
        "s": d.s.coords().iter().map(|&(a, b)| vec![a, b]).collect::<Vec<_>>(),
        "twisting": words,
        "strict_s": d.strict_s,
    });
    if let Some(x) = &d.x_g {
        out["x_g"] = json!({ "n": x.n, "z": cochain_to_json(&x.group, &x.t.z), "c": cochain_to_json(&x.group, &x.t.c) });
    }
    out
}

// ---------------------------------------------------------------- transfer input

fn parse_ext(n: Node, place: Place, d: Rat) -> Result<QuadExtElement> {
    let it = n.items()?;
    if it.len() != 2 {
        return Err(n.err("expected [a, b] for a + b√d"));
    }
    let (a, b) = (it[0].rat()?, it[1].rat()?);
    n.with(|| QuadExtElement::new(place, d, a, b))
}

fn parse_place(n: Node) -> Result<Place> {
    let s = match n.v {
        Value::Number(x) => x.to_string(),
        Value::String(s) => s.clone(),
        _ => return Err(n.err("expected \"real\" or a prime")),
    };
    s.parse::<Place>().map_err(|_| n.err(format!("bad place {s:?}")))
}

/// `{"datum" | "fixture", "place", "d", "h", "base", "gamma_alpha", "delta",
/// "chi", "normalization", "factor"}`.
///
/// `delta` is `{"x": [a, b], "delta_alpha": [a, b]}` (the lift defaults to
/// `x`); `factor` is `"pinning"` or `{"whittaker": {"sign", "a"}}`.
/// The `datum` or `fixture` field of a transfer input; a1-elliptic if absent.
pub fn parse_transfer_datum(n: &Node) -> Result<EndoscopicDatum> {
    match (n.opt("datum"), n.opt("fixture")) {
        (Some(d), None) => parse_endoscopic_datum(d),
        (None, Some(f)) => {
            let s = f.str()?;
            endoscopic_preset(s).ok_or_else(|| f.err(format!("unknown fixture {s:?}")))
        }
        (None, None) => Ok(a1_elliptic()),
        _ => Err(n.err("give at most one of \"datum\" and \"fixture\"")),
    }
}

pub fn parse_transfer_input(n: Node, default_norm: Normalization) -> Result<(TransferInput, FactorNormalization)> {
    n.object(&["datum", "fixture", "place", "d", "h", "base", "gamma_alpha", "delta", "chi", "normalization", "factor"])?;
    let datum = parse_transfer_datum(&n)?;
    let place = parse_place(n.get("place")?)?;
    let dn = n.get("d")?;
    let d = dn.rat()?;
    if d == Rat::from_integer(0) {
        return Err(dn.err("d must be nonzero"));
    }
    let h: Mat2 = match n.opt("h") {
        None => [[Rat::from_integer(1), Rat::from_integer(0)], [Rat::from_integer(0), Rat::from_integer(1)]],
        Some(hn) => {
            let rows = hn.items()?;
            if rows.len() != 2 {
                return Err(hn.err("expected a 2×2 matrix"));
            }
            let mut m = [[Rat::from_integer(0); 2]; 2];
            for (i, r) in rows.iter().enumerate() {
                let es = r.items()?;
                if es.len() != 2 {
                    return Err(r.err("expected 2 entries"));
                }
                for (j, e) in es.iter().enumerate() {
                    m[i][j] = e.rat()?;
                }
            }
            m
        }
    };
    let base = match n.opt("base") {
        None => BasePoint::KostantTrivial,
        Some(b) => match b.v {
            Value::String(s) if s == "kostant-trivial" => BasePoint::KostantTrivial,
            Value::Object(_) => {
                b.object(&["class"])?;
                let c = b.get("class")?;
                let k = c.i64()?;
                if k != 1 && k != -1 {
                    return Err(c.err("class must be 1 or -1"));
                }
                BasePoint::Class(k as i8)
            }
            _ => return Err(b.err("expected \"kostant-trivial\" or {\"class\": ±1}")),
        },
    };
    let gamma = parse_ext(n.get("gamma_alpha")?, place, d)?;
    let dl = n.get("delta")?;
    dl.object(&["x", "delta_alpha"])?;
    let x = parse_ext(dl.get("x")?, place, d)?;
    let da = match dl.opt("delta_alpha") {
        Some(a) => parse_ext(a, place, d)?,
        None => x.clone(),
    };
    let delta = dl.with(|| CoverElement::new(x, da))?;
    let chi = match n.opt("chi") {
        None => n.with(|| ChiData::standard(place, &d))?,
        Some(c) => serde_json::from_value::<ChiData>(c.v.clone()).map_err(|e| c.err(e.to_string()))?,
    };
    let normalization = match n.opt("normalization") {
        None => default_norm,
        Some(s) => s.str()?.parse::<Normalization>().map_err(|_| s.err("expected \"deligne\" or \"artin\""))?,
    };
    let factor = match n.opt("factor") {
        None => FactorNormalization::Pinning,
        Some(f) => match f.v {
            Value::String(s) if s == "pinning" => FactorNormalization::Pinning,
            Value::String(s) if s == "whittaker" => FactorNormalization::Whittaker { psi: AdditiveCharacter::default() },
            Value::Object(_) => {
                f.object(&["whittaker"])?;
                let w = f.get("whittaker")?;
                w.object(&["sign", "a"])?;
                let mut psi = AdditiveCharacter::default();
                if let Some(s) = w.opt("sign") {
                    let k = s.i64()?;
                    if k != 1 && k != -1 {
                        return Err(s.err("sign must be 1 or -1"));
                    }
                    psi.sign = k as i8;
                }
                if let Some(a) = w.opt("a") {
                    let q = a.rat()?;
                    if q == Rat::from_integer(0) {
                        return Err(a.err("ψ scale must be nonzero"));
                    }
                    psi.a = (*q.numer(), *q.denom());
                }
                FactorNormalization::Whittaker { psi }
            }
            _ => return Err(f.err("expected \"pinning\", \"whittaker\" or {\"whittaker\": {...}}")),
        },
    };
    let inp = n.with(|| TransferInput::new(&datum, place, d, h, base, gamma, delta, chi, normalization))?;
    Ok((inp, factor))
}

// ---------------------------------------------------------------- schemas

/// The input kinds with a published schema.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputKind {
    Group,
    Lattice,
    Cohomology,
    RootDatum,
    Descriptor,
    EndoscopicDatum,
    TransferInput,
}

impl InputKind {
    pub const ALL: [InputKind; 7] = [
        InputKind::Group,
        InputKind::Lattice,
        InputKind::Cohomology,
        InputKind::RootDatum,
        InputKind::Descriptor,
        InputKind::EndoscopicDatum,
        InputKind::TransferInput,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InputKind::Group => "group",
            InputKind::Lattice => "lattice",
            InputKind::Cohomology => "cohomology",
            InputKind::RootDatum => "root-datum",
            InputKind::Descriptor => "descriptor",
            InputKind::EndoscopicDatum => "endoscopic-datum",
            InputKind::TransferInput => "transfer-input",
        }
    }

    /// Parses and validates; the result is discarded. Used by the fuzz targets.
    pub fn check(self, text: &str) -> Result<()> {
        let v = parse_value(text)?;
        let n = Node::root(&v);
        match self {
            InputKind::Group => parse_group(n).map(drop),
            InputKind::Lattice => parse_lattice(n).map(drop),
            InputKind::Cohomology => parse_cohomology_input(n).map(drop),
            InputKind::RootDatum => parse_root_datum(n).map(drop),
            InputKind::Descriptor => parse_descriptor(n).map(drop),
            InputKind::EndoscopicDatum => parse_endoscopic_datum(n).map(drop),
            InputKind::TransferInput => parse_transfer_input(n, Normalization::Deligne).map(drop),
        }
    }

    pub fn schema(self) -> Value {
        let int_mat = json!({ "type": "array", "items": { "type": "array", "items": { "type": "integer" } } });
        let rational = json!({ "oneOf": [{ "type": "integer" }, { "type": "string", "pattern": "^-?[0-9]+(/-?[0-9]+)?$" }] });
        let group = json!({
            "oneOf": [
                { "type": "string", "description": "trivial, Z/n, Z/2xZ/2, V4 or Dn" },
                { "type": "object", "additionalProperties": false, "required": ["elements", "table"],
                  "properties": { "elements": { "type": "array", "items": { "type": "string" } },
                                  "table": { "type": "array", "items": { "type": "array", "items": { "type": "integer", "minimum": 0 } } } } }
            ]
        });
        let lattice_body = json!({
            "type": "object", "required": ["rank"],
            "properties": { "rank": { "type": "integer", "minimum": 0, "maximum": 16 },
                            "action": { "type": "array", "items": int_mat, "description": "one matrix per group element, in table order" } }
        });
        let root_datum = json!({
            "oneOf": [
                { "type": "string", "description": "preset such as A1.sc, A1.ad, C2.sc, A1xA1 in C2" },
                { "type": "object", "additionalProperties": false, "required": ["preset"], "properties": { "preset": { "type": "string" } } },
                { "type": "object", "additionalProperties": false, "required": ["rank", "simple_roots", "simple_coroots"],
                  "properties": { "rank": { "type": "integer" }, "simple_roots": int_mat, "simple_coroots": int_mat } }
            ]
        });
        let cochain = json!({
            "type": "object",
            "description": "sparse cochain: keys are comma-joined element names (\"\" in degree 0), values coordinate vectors; missing cells are zero",
            "additionalProperties": { "type": "array", "items": { "type": "integer" } }
        });
        let base = json!({
            "oneOf": [
                { "type": "object", "additionalProperties": false, "required": ["torus"], "properties": { "torus": lattice_body } },
                { "type": "object", "additionalProperties": false, "required": ["group"],
                  "properties": { "group": { "type": "object", "required": ["datum"], "properties": { "datum": root_datum, "action": { "type": "array", "items": int_mat } } } } }
            ]
        });
        let endo = json!({
            "oneOf": [
                { "type": "string", "enum": ["a1-elliptic", "a1xa1-in-c2"] },
                { "type": "object", "additionalProperties": false, "required": ["group", "dual", "s", "twisting"],
                  "properties": {
                      "group": group, "dual": root_datum,
                      "action": { "type": "array", "items": int_mat, "description": "σ_G on X*(T̂)" },
                      "s": { "type": "array", "items": { "type": "array", "items": { "type": "integer" }, "minItems": 2, "maxItems": 2 } },
                      "twisting": { "type": "array", "items": { "type": "array", "items": { "type": "integer", "minimum": 0 } } },
                      "strict_s": { "type": "boolean" },
                      "x_g": { "type": "object", "required": ["n"], "properties": { "n": { "type": "integer" }, "z": cochain, "c": cochain } }
                  } }
            ]
        });
        let ext = json!({ "type": "array", "items": rational, "minItems": 2, "maxItems": 2, "description": "[a, b] for a + b√d" });
        let body = match self {
            InputKind::Group => group,
            InputKind::Lattice => {
                let mut l = lattice_body;
                l["properties"]["group"] = group;
                l["required"] = json!(["group", "rank"]);
                l["additionalProperties"] = json!(false);
                l
            }
            InputKind::Cohomology => json!({
                "type": "object", "additionalProperties": false, "required": ["group"],
                "properties": {
                    "group": group,
                    "module": { "type": "object", "required": ["factors"], "properties": { "factors": { "type": "array", "items": { "type": "integer", "minimum": 1 } }, "action": { "type": "array", "items": int_mat } } },
                    "lattice": lattice_body,
                    "n": { "type": "integer", "minimum": 1 },
                    "degree": { "type": "integer", "minimum": 0, "maximum": 2 }
                }
            }),
            InputKind::RootDatum => root_datum,
            InputKind::Descriptor => json!({
                "type": "object", "additionalProperties": false, "required": ["group", "base", "n"],
                "properties": { "group": group, "base": base, "n": { "type": "integer", "minimum": 1 }, "z": cochain, "c": cochain }
            }),
            InputKind::EndoscopicDatum => endo,
            InputKind::TransferInput => json!({
                "type": "object", "additionalProperties": false, "required": ["place", "d", "gamma_alpha", "delta"],
                "properties": {
                    "datum": endo, "fixture": { "type": "string" },
                    "place": { "oneOf": [{ "type": "string" }, { "type": "integer" }], "description": "\"real\" or a prime" },
                    "d": rational,
                    "h": { "type": "array", "items": { "type": "array", "items": rational } },
                    "base": { "oneOf": [{ "const": "kostant-trivial" }, { "type": "object", "properties": { "class": { "enum": [1, -1] } } }] },
                    "gamma_alpha": ext,
                    "delta": { "type": "object", "required": ["x"], "properties": { "x": ext, "delta_alpha": ext } },
                    "chi": { "type": "object", "description": "{\"kind\": \"unramified\"} | {\"kind\": \"ramified\", \"zeta_turns\": [n, d]} | {\"kind\": \"real\", \"k\": odd}" },
                    "normalization": { "enum": ["deligne", "artin"] },
                    "factor": { "oneOf": [{ "enum": ["pinning", "whittaker"] }, { "type": "object", "properties": { "whittaker": { "type": "object", "properties": { "sign": { "enum": [1, -1] }, "a": rational } } } }] }
                }
            }),
        };
        let mut out = json!({ "$schema": "https://json-schema.org/draft/2020-12/schema", "title": self.name() });
        for (k, v) in body.as_object().expect("object schema").clone() {
            out[k] = v;
        }
        out
    }
}

impl std::str::FromStr for InputKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        InputKind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| Error::invalid("/", format!("unknown input kind {s:?}")))
    }
}

/// Renders `(a_1, …, a_k) ∈ ⊕ ℤ/d_i` multiplicatively as `ζ_{d_1}^{a_1}·…`.
pub fn render_multiplicative(factors: &[i64], v: &[i64]) -> String {
    let parts: Vec<String> = factors
        .iter()
        .zip(v)
        .enumerate()
        .filter(|(_, (_, &a))| a != 0)
        .map(|(i, (&d, &a))| if a == 1 { format!("ζ{d}[{i}]") } else { format!("ζ{d}[{i}]^{a}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("·")
    }
}

/// Sparse cochain as `{key: multiplicative string}`.
pub fn cochain_to_mult(group: &FiniteGroup, factors: &[i64], x: &Cochain) -> BTreeMap<String, String> {
    (0..cell_count(group, x.degree))
        .filter(|&i| x.values[i].iter().any(|&a| a != 0))
        .map(|i| (cell_key(group, &cell_of(group, x.degree, i)), render_multiplicative(factors, &x.values[i])))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    fn path_of(e: Error) -> String {
        match e {
            Error::Invalid { path, .. } => path,
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn group_round_trip_and_presets() {
        let g = FiniteGroup::klein_four();
        assert_eq!(parse_group(Node::root(&group_to_json(&g))).unwrap(), g);
        assert_eq!(parse_group(Node::root(&v("\"Z/3\""))).unwrap().order(), 3);
        assert_eq!(parse_group(Node::root(&v("\"D3\""))).unwrap().order(), 6);
        assert!(parse_group(Node::root(&v("\"Z/0\""))).is_err());
    }

    #[test]
    fn pointer_paths() {
        let e = parse_group(Node::root(&v(r#"{"elements": ["1", "a"], "table": [[0, 1], [1]]}"#))).unwrap_err();
        assert_eq!(path_of(e), "/table/1");
        let e = parse_lattice(Node::root(&v(r#"{"group": "Z/2", "rank": 1, "action": [[[1]], [[2]]]}"#))).unwrap_err();
        assert_eq!(path_of(e), "/action/1");
        let e = parse_lattice(Node::root(&v(r#"{"group": "Z/2", "rank": 1, "bogus": 1}"#))).unwrap_err();
        assert_eq!(path_of(e), "/bogus");
        let e = parse_transfer_input(Node::root(&v(r#"{"place": 5, "d": 2, "gamma_alpha": [3, 1], "delta": {"x": [3, "1/0"]}}"#)), Normalization::Deligne).unwrap_err();
        assert_eq!(path_of(e), "/delta/x/1");
    }

    #[test]
    fn keys_split_at_top_level() {
        assert_eq!(split_key("(1,s1),(s1,1)"), vec!["(1,s1)", "(s1,1)"]);
        assert_eq!(split_key("s1"), vec!["s1"]);
    }

    #[test]
    fn descriptor_round_trip() {
        let (g, l) = crate::covers::anisotropic_torus();
        let cl = crate::covers::classify_torus_covers(&g, &l, 2).unwrap();
        for (_, d) in &cl.representatives {
            let j = descriptor_to_json(d);
            assert_eq!(&parse_descriptor(Node::root(&j)).unwrap(), d);
        }
        // product-group element names survive the key format
        let k = FiniteGroup::klein_four();
        let ind = crate::covers::induced_torus(&k);
        let cl = crate::covers::classify_torus_covers(&k, &ind, 2).unwrap();
        for (_, d) in &cl.representatives {
            assert_eq!(&parse_descriptor(Node::root(&descriptor_to_json(d))).unwrap(), d);
        }
    }

    #[test]
    fn cochain_key_arity_is_checked() {
        let j = v(r#"{"group": "Z/2", "base": {"torus": {"rank": 1, "action": [[[1]], [[-1]]]}}, "n": 2, "z": {"s1": [1]}}"#);
        assert_eq!(path_of(parse_descriptor(Node::root(&j)).unwrap_err()), "/z/s1");
        let j = v(r#"{"group": "Z/2", "base": {"torus": {"rank": 1, "action": [[[1]], [[-1]]]}}, "n": 2, "z": {"s1,s1": [1]}}"#);
        assert!(parse_descriptor(Node::root(&j)).is_ok());
    }

    #[test]
    fn endoscopic_round_trip() {
        for name in ["a1-elliptic", "a1xa1-in-c2"] {
            let d = endoscopic_preset(name).unwrap();
            let j = endoscopic_datum_to_json(&d);
            let back = parse_endoscopic_datum(Node::root(&j)).unwrap();
            assert_eq!(endoscopic_datum_to_json(&back), j);
        }
    }

    #[test]
    fn schemas_are_objects() {
        for k in InputKind::ALL {
            let s = k.schema();
            assert_eq!(s["title"], k.name());
            assert_eq!(k.name().parse::<InputKind>().unwrap(), k);
        }
    }

    #[test]
    fn transfer_input_defaults() {
        let (inp, f) = parse_transfer_input(Node::root(&v(r#"{"place": "5", "d": 2, "gamma_alpha": [3, 1], "delta": {"x": [3, 1]}}"#)), Normalization::Artin).unwrap();
        assert_eq!(inp.normalization, Normalization::Artin);
        assert_eq!(f, FactorNormalization::Pinning);
        assert_eq!(inp.chi, ChiData::Unramified);
    }
}
