//! Bundled presets, each with its own battery of checks.

use serde::Serialize;

use crate::cohomology::cohomology_group;
use crate::covers::{anisotropic_torus, brute_force_h2_order, classify_torus_covers, induced_torus, torsion_lifting, automorphism_group, CoverBase};
use crate::endoscopy::{
    a1_elliptic, a1xa1_in_c2, endoscopic_cover, l_embedding_certificate, pinning_classes, weyl_conjugation_check, EndoscopicDatum,
};
use crate::error::{Error, Result};
use crate::galois_module::{dual_torsion_module, FiniteGroup, GaloisLattice};
use crate::localfield::{kappa, rat, Normalization, Phase, Place, QuadExtElement, Rat};
use crate::transfer::{delta_prime, det2, eta_shift_pairing, BasePoint, ChiData, CoverElement, EtaShift, FactorNormalization, Mat2, TransferInput, TransferValue};

pub const FIXTURES: [(&str, &str); 5] = [
    ("aniso1", "1-dimensional anisotropic torus over a quadratic extension"),
    ("split1", "1-dimensional split torus"),
    ("induced-Z/2", "Res_{E/F} G_m for a quadratic extension"),
    ("a1-elliptic", "elliptic endoscopic torus of PGL2"),
    ("a1xa1-in-c2", "long-root A1×A1 endoscopic datum of SO5"),
];

#[derive(Clone, Debug, Serialize)]
pub struct FixtureCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct FixtureReport {
    pub id: String,
    pub passed: bool,
    pub checks: Vec<FixtureCheck>,
}

struct Checks(Vec<FixtureCheck>);

impl Checks {
    fn add(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.0.push(FixtureCheck { name: name.into(), passed, detail: detail.into() });
    }

    fn add_result(&mut self, name: &str, r: Result<(bool, String)>) {
        match r {
            Ok((p, d)) => self.add(name, p, d),
            Err(e) => self.add(name, false, e.to_string()),
        }
    }
}

pub fn run(id: &str) -> Result<FixtureReport> {
    let mut c = Checks(Vec::new());
    match id {
        "aniso1" => aniso1(&mut c),
        "split1" => split1(&mut c),
        "induced-Z/2" => induced(&mut c),
        "a1-elliptic" => {
            endoscopic(&mut c, &a1_elliptic(), true);
            transfer_laws(&mut c);
        }
        "a1xa1-in-c2" => endoscopic(&mut c, &a1xa1_in_c2(), false),
        _ => return Err(Error::invalid("/fixture", format!("unknown fixture {id:?}"))),
    }
    let passed = c.0.iter().all(|x| x.passed);
    Ok(FixtureReport { id: id.into(), passed, checks: c.0 })
}

fn aniso1(c: &mut Checks) {
    let (g, l) = anisotropic_torus();
    c.add_result("two classes of 2-fold covers", (|| {
        let cl = classify_torus_covers(&g, &l, 2)?;
        let brute = brute_force_h2_order(&g, &dual_torsion_module(&g, &l, 2)?);
        Ok((cl.representatives.len() == 2 && brute == 2, format!("classes {}, brute force {brute}", cl.representatives.len())))
    })());
    c.add_result("H¹(Γ, Ŝ[2]) has order 2, H¹(Γ, Ŝ)[2] is trivial", (|| {
        let h1 = cohomology_group(&g, &dual_torsion_module(&g, &l, 2)?, 1)?.order();
        let aut = automorphism_group(&g, &CoverBase::Torus(l.clone()), 2)?.order();
        Ok((h1 == 2 && aut == 1, format!("{h1} and {aut}")))
    })());
}

fn split1(c: &mut Checks) {
    let g = FiniteGroup::trivial();
    let l = GaloisLattice::trivial(&g, 1);
    c.add_result("one class at every level", (|| {
        let counts = (1..=6).map(|n| classify_torus_covers(&g, &l, n).map(|x| x.representatives.len())).collect::<Result<Vec<_>>>()?;
        Ok((counts.iter().all(|&k| k == 1), format!("{counts:?}")))
    })());
    let z2 = FiniteGroup::cyclic(2);
    let t = GaloisLattice::trivial(&z2, 1);
    c.add_result("trivial ℤ/2 action: classes = gcd(2, n)", (|| {
        let mut ok = true;
        let mut seen = Vec::new();
        for n in 1..=4 {
            let k = classify_torus_covers(&z2, &t, n)?.representatives.len() as u128;
            let brute = brute_force_h2_order(&z2, &dual_torsion_module(&z2, &t, n)?);
            ok &= k == brute && k == if n % 2 == 0 { 2 } else { 1 };
            seen.push(k);
        }
        Ok((ok, format!("{seen:?}")))
    })());
}

fn induced(c: &mut Checks) {
    let g = FiniteGroup::cyclic(2);
    let l = induced_torus(&g);
    c.add_result("classification agrees with brute force", (|| {
        let mut ok = true;
        for n in 2..=3 {
            let k = classify_torus_covers(&g, &l, n)?.representatives.len() as u128;
            ok &= k == brute_force_h2_order(&g, &dual_torsion_module(&g, &l, n)?);
        }
        Ok((ok, String::new()))
    })());
    c.add_result("torsion lifting is bijective", (|| {
        let mut ok = true;
        for n in 2..=4 {
            ok &= torsion_lifting(&g, &l, n)?.bijective();
        }
        Ok((ok, "n = 2, 3, 4".into()))
    })());
}

fn endoscopic(c: &mut Checks, d: &EndoscopicDatum, expect_nontrivial: bool) {
    let r = match endoscopic_cover(d) {
        Ok(r) => r,
        Err(e) => return c.add("endoscopic cover", false, e.to_string()),
    };
    let cx = r.descriptor.complex();
    c.add("∂c = z̄", cx.is_hypercocycle(&d.group, &r.descriptor.t), "exact");
    if expect_nontrivial {
        c.add(
            "class is the nontrivial element of an order-2 H²",
            r.h2_invariants == [2] && !r.is_trivial_class(),
            format!("H² invariants {:?}, class {:?}", r.h2_invariants, r.class),
        );
    }
    c.add_result("pinning-sign invariance", (|| {
        let cls = pinning_classes(d)?;
        Ok((cls.iter().all(|(_, k)| *k == r.class), format!("{} sign choices", cls.len())))
    })());
    c.add_result("Weyl-conjugation invariance", (|| {
        let us = d.conjugating_elements();
        let mut ok = true;
        for &u in &us {
            ok &= weyl_conjugation_check(d, u)?.passed();
        }
        Ok((ok, format!("{} conjugating elements; conjugacy checked within N(T̂, Ĝ)", us.len())))
    })());
    c.add_result("L-embedding multiplicativity", (|| {
        let cert = l_embedding_certificate(&r, None)?;
        Ok((cert.verified(), format!("level {}, {} checks", cert.level, cert.transcript.len())))
    })());
    let mut bad = r.clone();
    let last = bad.descriptor.t.z.values.len() - 1;
    let v = &mut bad.descriptor.t.z.values[last];
    v[0] = 1 - v[0];
    c.add(
        "mutated z is rejected",
        matches!(l_embedding_certificate(&bad, None), Err(Error::CheckFailed(_))),
        "negative control",
    );
}

/// Places and fields used by the transfer checks.
pub fn transfer_places() -> Vec<(Place, i128)> {
    vec![(Place::Padic(3), 2), (Place::Padic(3), 3), (Place::Padic(5), 2), (Place::Padic(5), 5), (Place::Real, -1)]
}

fn el(v: Place, d: i128, a: Rat, b: Rat) -> QuadExtElement {
    QuadExtElement { place: v, d: rat(d), a, b }
}

fn grid(v: Place, d: i128) -> Vec<QuadExtElement> {
    let r = |x: i128| rat(x);
    if v == Place::Real {
        vec![el(v, d, r(1), r(1)), el(v, d, r(-1), r(1)), el(v, d, r(2), r(-2)), el(v, d, r(-3), r(-3))]
    } else {
        let mut out = Vec::new();
        for a in [1, 2, 3, 6] {
            for b in [1, -1, 3, 5] {
                out.push(el(v, d, r(a), r(b)));
            }
        }
        out
    }
}

fn value(inp: &TransferInput) -> Result<Phase> {
    match delta_prime(inp, FactorNormalization::Pinning)? {
        TransferValue::Value(p) => Ok(p),
        TransferValue::Zero => Err(Error::check("unexpected zero")),
    }
}

fn transfer_laws(c: &mut Checks) {
    let datum = a1_elliptic();
    let one: Mat2 = [[rat(1), rat(0)], [rat(0), rat(1)]];
    let mk = |v: Place, d: i128, h: Mat2, g: &QuadExtElement, de: CoverElement| -> Result<TransferInput> {
        TransferInput::new(&datum, v, rat(d), h, BasePoint::KostantTrivial, g.clone(), de, ChiData::standard(v, &rat(d))?, Normalization::Deligne)
    };
    let scalars = [rat(-1), rat(2), rat(3), rat(5), rat(-6), rat(1) / rat(3), rat(10)];
    let mats: [Mat2; 6] = [
        [[rat(1), rat(1)], [rat(0), rat(1)]],
        [[rat(3), rat(0)], [rat(0), rat(1)]],
        [[rat(1), rat(0)], [rat(1), rat(5)]],
        [[rat(2), rat(0)], [rat(0), rat(1)]],
        [[rat(0), rat(1)], [rat(1), rat(0)]],
        [[rat(1), rat(2)], [rat(3), rat(-5)]],
    ];
    for (v, d) in transfer_places() {
        let tag = format!("{v}, d = {d}");
        c.add_result(&format!("genuine in γ ({tag})"), (|| {
            let mut n = 0;
            for x in grid(v, d) {
                let de = CoverElement::canonical(x.clone())?;
                let base = value(&mk(v, d, one, &x, de.clone())?)?;
                for &e in &scalars {
                    let shifted = value(&mk(v, d, one, &x.scale(e), de.clone())?)?;
                    if shifted != base.mul(Phase::sign(kappa(&e, &rat(d), v)?)) {
                        return Ok((false, format!("x = {x}, η = {e}")));
                    }
                    n += 1;
                }
            }
            Ok((true, format!("{n} cases")))
        })());
        c.add_result(&format!("independent of the δ_± lift ({tag})"), (|| {
            let mut n = 0;
            for x in grid(v, d) {
                let base = value(&mk(v, d, one, &x, CoverElement::canonical(x.clone())?)?)?;
                for &e in &scalars {
                    let other = CoverElement::new(x.clone(), x.scale(e))?;
                    if value(&mk(v, d, one, &x, other)?)? != base {
                        return Ok((false, format!("x = {x}, lift {e}")));
                    }
                    n += 1;
                }
            }
            Ok((true, format!("{n} cases")))
        })());
        c.add_result(&format!("η-shift law ({tag})"), (|| {
            let mut n = 0;
            for x in grid(v, d) {
                let de = CoverElement::canonical(x.clone())?;
                let inp = mk(v, d, one, &x, de.clone())?;
                for &e in &scalars {
                    let shifted = mk(v, d, one, &x, de.eta_shift(&e))?;
                    let law = inp.inv_pairing()?.mul(eta_shift_pairing(&EtaShift { eta: vec![e] }, &inp.kappa, &rat(d), v)?);
                    if shifted.inv_pairing()? != law {
                        return Ok((false, format!("x = {x}, η = {e}")));
                    }
                    n += 1;
                }
            }
            Ok((true, format!("{n} cases")))
        })());
        c.add_result(&format!("stable-conjugacy law ({tag})"), (|| {
            let mut n = 0;
            let mut moved = false;
            for x in grid(v, d) {
                let de = CoverElement::canonical(x.clone())?;
                let base = value(&mk(v, d, one, &x, de.clone())?)?;
                for h in &mats {
                    let other = value(&mk(v, d, *h, &x, de.clone())?)?;
                    let mult = Phase::sign(kappa(&det2(h), &rat(d), v)?);
                    if other != base.mul(mult) {
                        return Ok((false, format!("x = {x}, h = {h:?}")));
                    }
                    moved |= !mult.is_one();
                    n += 1;
                }
            }
            Ok((moved, format!("{n} cases")))
        })());
        c.add_result(&format!("unrelated pairs vanish ({tag})"), (|| {
            // [1 + 2√d] is neither [1 + √d] nor its conjugate
            let x = el(v, d, rat(1), rat(1));
            let y = el(v, d, rat(1), rat(2));
            let z = delta_prime(&mk(v, d, one, &y, CoverElement::canonical(x.clone())?)?, FactorNormalization::Pinning)?;
            Ok((z == TransferValue::Zero, format!("γ = {y}, δ = {x}")))
        })());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_passes() {
        for (id, _) in FIXTURES {
            let r = run(id).unwrap();
            assert!(r.passed, "{id}: {:#?}", r.checks.iter().filter(|c| !c.passed).collect::<Vec<_>>());
        }
    }

    #[test]
    fn unknown_fixture() {
        assert!(matches!(run("nosuch"), Err(Error::Invalid { .. })));
    }
}
