use std::fmt::Write as _;
use std::path::Path;

use serde_json::{json, Map, Value};

use endocover::cohomology::{cohomology_group, Cochain};
use endocover::covers::{
    anisotropic_torus, automorphism_group, baer, classify_covers, cover_isomorphisms, induced_torus, BaerOp, CoverBase, CoverDescriptor,
};
use endocover::endoscopy::{endoscopic_cover, l_embedding_certificate, EndoscopicCoverResult};
use endocover::fixtures::{self, transfer_places, FIXTURES};
use endocover::galois_module::{FiniteGroup, GaloisLattice};
use endocover::io::{
    cochain_to_mult, descriptor_to_json, endoscopic_datum_to_json, endoscopic_preset, group_to_json, parse_cohomology_input,
    parse_cover_base, parse_descriptor, parse_endoscopic_datum, parse_group, parse_lattice, parse_transfer_datum, parse_transfer_input,
    parse_value, InputKind, Node,
};
use endocover::localfield::{hilbert_symbol, parse_rat, rat, Normalization, Place, QuadExtElement};
use endocover::transfer::{transfer_report, BasePoint, ChiData, CoverElement, FactorNormalization, TransferInput};
use endocover::{Error, Result};

use crate::{read, BaseSource, CoversCmd, Output};

pub fn schema(kind: &str) -> Result<Output> {
    if kind == "all" {
        let all: Map<String, Value> = InputKind::ALL.iter().map(|k| (k.name().to_string(), k.schema())).collect();
        return Ok(Output::Json(Value::Object(all)));
    }
    Ok(Output::Json(kind.parse::<InputKind>()?.schema()))
}

fn load(path: &Path) -> Result<Value> {
    parse_value(&read(path)?)
}

pub fn cohomology(path: &Path, degree: Option<usize>) -> Result<Output> {
    let v = load(path)?;
    let (g, m, file_degree) = parse_cohomology_input(Node::root(&v))?;
    let degrees: Vec<usize> = match degree.or(file_degree) {
        Some(d) if d > 2 => return Err(Error::invalid("/degree", "degrees 0, 1, 2 only")),
        Some(d) => vec![d],
        None => vec![0, 1, 2],
    };
    let mut out = Vec::new();
    for k in degrees {
        let h = cohomology_group(&g, &m, k)?;
        out.push(json!({ "degree": k, "invariants": h.invariants(), "order": h.order().to_string() }));
    }
    Ok(Output::Json(json!({ "group": group_to_json(&g), "factors": m.factors, "cohomology": out })))
}

fn cover_preset(name: &str) -> Result<(FiniteGroup, CoverBase)> {
    let (g, l) = match name {
        "aniso1" => anisotropic_torus(),
        "split1" => {
            let g = FiniteGroup::trivial();
            let l = GaloisLattice::trivial(&g, 1);
            (g, l)
        }
        "induced-Z/2" => {
            let g = FiniteGroup::cyclic(2);
            let l = induced_torus(&g);
            (g, l)
        }
        _ => return Err(Error::invalid("/preset", format!("unknown cover preset {name:?}; try aniso1, split1, induced-Z/2"))),
    };
    Ok((g, CoverBase::torus(l)))
}

fn load_base(src: &BaseSource) -> Result<(FiniteGroup, CoverBase)> {
    if let Some(p) = &src.preset {
        return cover_preset(p);
    }
    let path = src.input.as_deref().expect("clap enforces one source");
    let v = load(path)?;
    let n = Node::root(&v);
    if v.get("base").is_some() {
        n.object(&["group", "base"])?;
        let g = parse_group(n.get("group")?)?;
        let b = parse_cover_base(n.get("base")?, &g)?;
        Ok((g, b))
    } else {
        let (g, l) = parse_lattice(n)?;
        Ok((g, CoverBase::torus(l)))
    }
}

/// Serializes a descriptor and checks that it parses back to itself.
fn certified(d: &CoverDescriptor) -> Result<Value> {
    let v = descriptor_to_json(d);
    let back = parse_descriptor(Node::root(&v)).map_err(|e| Error::check(format!("emitted descriptor does not re-parse: {e}")))?;
    if back != *d {
        return Err(Error::check("emitted descriptor re-parses to a different cover"));
    }
    Ok(v)
}

fn rendered(d: &CoverDescriptor) -> Value {
    let cx = d.complex();
    json!({
        "z": cochain_to_mult(&d.group, &cx.a.factors, &d.t.z),
        "c": cochain_to_mult(&d.group, &cx.b.factors, &d.t.c),
    })
}

fn load_descriptor(path: &Path) -> Result<CoverDescriptor> {
    let v = load(path)?;
    parse_descriptor(Node::root(&v))
}

pub fn covers(cmd: CoversCmd) -> Result<Output> {
    match cmd {
        CoversCmd::Classify { base, n } => {
            let (g, b) = load_base(&base)?;
            let cl = classify_covers(&g, &b, n)?;
            let mut classes = Vec::new();
            for (coords, d) in &cl.representatives {
                if cl.h2.dlog(&d.t).as_deref() != Some(coords.as_slice()) {
                    return Err(Error::check("representative does not sit in its own class"));
                }
                classes.push(json!({ "class": coords, "descriptor": certified(d)?, "multiplicative": rendered(d) }));
            }
            Ok(Output::Json(json!({
                "n": n,
                "h2_invariants": cl.h2.invariants(),
                "count": classes.len(),
                "classes": classes,
            })))
        }
        CoversCmd::Isom { first, second } => {
            let (t, t2) = (load_descriptor(&first)?, load_descriptor(&second)?);
            let ws = cover_isomorphisms(&t, &t2)?;
            if ws.iter().any(|w| !w.verify(&t, &t2)) {
                return Err(Error::check("isomorphism witness fails its own check"));
            }
            let witness = ws.first().map(|w| json!({ "h": w.h, "b": w.b }));
            Ok(Output::Json(json!({ "isomorphic": !ws.is_empty(), "witnesses": ws.len(), "first": witness })))
        }
        CoversCmd::Aut { base, n } => {
            let (g, b) = load_base(&base)?;
            let a = automorphism_group(&g, &b, n)?;
            Ok(Output::Json(json!({ "n": n, "invariants": a.invariants(), "order": a.order().to_string() })))
        }
        CoversCmd::Baer { first, second, inverse } => {
            let t1 = load_descriptor(&first)?;
            let out = match (second, inverse) {
                (_, true) => baer(&t1, None, BaerOp::Inverse)?,
                (Some(p), false) => baer(&t1, Some(&load_descriptor(&p)?), BaerOp::Sum)?,
                (None, false) => return Err(Error::invalid("/", "give a second descriptor or --inverse")),
            };
            Ok(Output::Json(json!({ "descriptor": certified(&out)?, "class": out.class(), "multiplicative": rendered(&out) })))
        }
    }
}

fn endo_json(r: &EndoscopicCoverResult) -> Result<Value> {
    let d = &r.descriptor;
    let cx = d.complex();
    let boundary = cx.is_hypercocycle(&d.group, &d.t);
    let cert = l_embedding_certificate(r, None)?;
    // re-check from the serialized lift alone
    let x: Cochain = serde_json::from_value(serde_json::to_value(&cert.x).expect("serializable")).map_err(|e| Error::check(e.to_string()))?;
    let again = l_embedding_certificate(r, Some((cert.level, x)))?;
    if !boundary || !cert.verified() || !again.verified() || again.transcript != cert.transcript {
        return Err(Error::check("certificate failed re-validation"));
    }
    let pass = |b: bool| if b { "passed" } else { "failed" };
    Ok(json!({
        "datum": endoscopic_datum_to_json(&r.datum),
        "pinning_signs": r.pinning_signs,
        "epsilon": r.epsilon,
        "pi1_h": r.pi1_h,
        "h2_invariants": r.h2_invariants,
        "class": r.class,
        "trivial_class": r.is_trivial_class(),
        "descriptor": certified(d)?,
        "multiplicative": rendered(d),
        "checks": { "boundary": pass(boundary), "l_embedding": pass(cert.verified()) },
        "certificate": cert,
    }))
}

pub fn endo_cover(preset: Option<&str>, input: Option<&Path>, strict_s: bool) -> Result<Output> {
    let mut d = match (preset, input) {
        (Some(p), _) => endoscopic_preset(p).ok_or_else(|| Error::invalid("/preset", format!("unknown endoscopic preset {p:?}")))?,
        (None, Some(path)) => {
            let v = load(path)?;
            parse_endoscopic_datum(Node::root(&v))?
        }
        (None, None) => return Err(Error::invalid("/", "give --preset or an input file")),
    };
    if strict_s {
        d.strict_s = true;
        d.validate()?;
    }
    Ok(Output::Json(endo_json(&endoscopic_cover(&d)?)?))
}

pub fn hilbert(a: &str, b: &str, place: &str) -> Result<Output> {
    let pa = parse_rat(a).map_err(|_| Error::invalid("/a", format!("not a rational number: {a:?}")))?;
    let pb = parse_rat(b).map_err(|_| Error::invalid("/b", format!("not a rational number: {b:?}")))?;
    let v: Place = place.parse()?;
    let s = hilbert_symbol(&pa, &pb, v)?;
    Ok(Output::Json(json!({ "a": pa.to_string(), "b": pb.to_string(), "place": v.to_string(), "symbol": s })))
}

fn evaluate(inp: &TransferInput, norm: FactorNormalization, cover: &EndoscopicCoverResult) -> Result<Value> {
    let rep = transfer_report(inp, norm)?;
    if rep.lift_check == Some(false) {
        return Err(Error::check("the two δ lifts disagree"));
    }
    Ok(json!({ "cover": rendered(&cover.descriptor), "report": rep }))
}

pub fn transfer(fixture: Option<&str>, input: Option<&Path>, norm: Normalization) -> Result<Output> {
    if let Some(id) = fixture {
        let datum = endoscopic_preset(id).ok_or_else(|| Error::invalid("/fixture", format!("unknown fixture {id:?}")))?;
        let cover = endoscopic_cover(&datum)?;
        let one = [[rat(1), rat(0)], [rat(0), rat(1)]];
        let mut out = Vec::new();
        for (v, d) in transfer_places() {
            let d = rat(d);
            let x = QuadExtElement::new(v, d, rat(1), rat(1))?;
            let inp = TransferInput::new(
                &datum,
                v,
                d,
                one,
                BasePoint::KostantTrivial,
                x.clone(),
                CoverElement::canonical(x)?,
                ChiData::standard(v, &d)?,
                norm,
            )?;
            out.push(evaluate(&inp, FactorNormalization::Pinning, &cover)?);
        }
        return Ok(Output::Json(json!({ "fixture": id, "evaluations": out })));
    }
    let path = input.expect("clap enforces one source");
    let v = load(path)?;
    let n = Node::root(&v);
    let (inp, factor) = parse_transfer_input(n.clone(), norm)?;
    let datum = parse_transfer_datum(&n)?;
    let cover = endoscopic_cover(&datum)?;
    Ok(Output::Json(evaluate(&inp, factor, &cover)?))
}

pub fn fixtures_list(as_json: bool) -> Output {
    if as_json {
        let v: Vec<Value> = FIXTURES.iter().map(|(id, d)| json!({ "id": id, "description": d })).collect();
        return Output::Json(Value::Array(v));
    }
    let mut s = String::new();
    for (id, d) in FIXTURES {
        writeln!(s, "{id:<14}{d}").unwrap();
    }
    Output::Text(s, true)
}

pub fn fixtures_run(id: &str, as_json: bool) -> Result<Output> {
    let rep = fixtures::run(id)?;
    if as_json {
        let v = serde_json::to_value(&rep).expect("serializable");
        return Ok(if rep.passed { Output::Json(v) } else { Output::Text(serde_json::to_string_pretty(&v).unwrap() + "\n", false) });
    }
    let mut s = String::new();
    for c in &rep.checks {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        if c.detail.is_empty() {
            writeln!(s, "{tag}  {}", c.name).unwrap();
        } else {
            writeln!(s, "{tag}  {}  ({})", c.name, c.detail).unwrap();
        }
    }
    writeln!(s, "{}: {}", rep.id, if rep.passed { "all checks pass" } else { "FAILED" }).unwrap();
    Ok(Output::Text(s, rep.passed))
}
