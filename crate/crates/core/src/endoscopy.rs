//! Endoscopic data `(s, 𝓗)` inside `ᴸG` and the cover character
//! `x_{H,G} = (z, [c])` of the endoscopic group.
//!
//! Everything is phrased on the based root datum of `Ĝ`. Its `X*(T̂)` is
//! `X_*(T)`, and `T̂[n]` has coordinates in `X_*(T̂)/n`. The endoscopic group
//! `H` has `X_*(T_H) = X*(T̂)`, its coroots being the roots of `Ĥ`, so the
//! covers of `H` are handled by [`CoverBase::Group`] on `Ĥ`'s dual datum.

use serde::Serialize;

use crate::cohomology::{differential, hyper_h2, solve_differential, Cochain, HyperCocycle2};
use crate::covers::{CoverBase, CoverDescriptor};
use crate::error::{Error, Result};
use crate::galois_module::{dual_torsion_module, FiniteGroup, FiniteModule, GaloisLattice, TorsionPoint};
use crate::lattice::{self, IMat};
use crate::linalg::{lcm, md, ModEchelon};
use crate::rootdata::{
    gauge_shift, tits_cocycle, AdmissibleSet, BasedRootDatum, ChevalleyAlgebra, Gauge, PinnedAutomorphism, SignedPerm,
    TitsGroup,
};

/// Printed with every certificate: conjugacy of inputs is only tested inside
/// the normalizer of `T̂`.
pub const CONJUGACY_NOTE: &str = "conjugacy checked within N(T̂,Ĝ)";

/// The root system of `Ĥ = Cent(s, Ĝ)°` with the base induced by `B̂`.
#[derive(Clone, Debug)]
pub struct Centralizer {
    pub datum: BasedRootDatum,
    /// `R(Ĥ)` as indices of roots of `Ĝ`, increasing.
    pub roots: Vec<usize>,
    /// `Δ_H` as indices of roots of `Ĝ`, in the order of `datum`'s simple roots.
    pub simple: Vec<usize>,
}

impl Centralizer {
    /// Position of a `Ĝ`-root in `Δ_H`.
    pub fn simple_position(&self, a: usize) -> Option<usize> {
        self.simple.iter().position(|&b| b == a)
    }

    pub fn contains(&self, a: usize) -> bool {
        self.roots.binary_search(&a).is_ok()
    }
}

/// Roots of `Ĝ` that are trivial on `s`, with the base of positive ones.
pub fn centralizer_root_system(dual: &BasedRootDatum, s: &TorsionPoint) -> Result<Centralizer> {
    if s.rank() != dual.rank() {
        return Err(Error::invalid("/s", format!("expected {} coordinates", dual.rank())));
    }
    let roots: Vec<usize> = (0..dual.num_roots()).filter(|&a| s.pair(dual.root(a)).0 == 0).collect();
    let in_h = |a: usize| roots.binary_search(&a).is_ok();
    let mut simple = Vec::new();
    for &a in roots.iter().filter(|&&a| dual.is_positive(a)) {
        let decomposable = roots.iter().filter(|&&b| dual.is_positive(b) && b != a).any(|&b| {
            let d: Vec<i64> = dual.coords(a).iter().zip(dual.coords(b)).map(|(x, y)| x - y).collect();
            dual.index_of_coords(&d).is_some_and(|c| dual.is_positive(c) && in_h(c))
        });
        if !decomposable {
            simple.push(a);
        }
    }
    let datum = BasedRootDatum::new(
        dual.rank(),
        simple.iter().map(|&a| dual.root(a).to_vec()).collect(),
        simple.iter().map(|&a| dual.coroot(a).to_vec()).collect(),
    )?;
    if datum.num_roots() != roots.len() {
        return Err(Error::check("centralizer roots are not generated by the induced base"));
    }
    Ok(Centralizer { datum, roots, simple })
}

/// `(s, 𝓗)`: the pinned dual group with its `Γ`-action `σ_G`, the point `s`
/// and the twisting `σ ↦ w_σ`, so that `𝓗` is generated by `Ĥ` and the
/// elements `n(w_σ) ⋊ σ`.
#[derive(Clone, Debug)]
pub struct EndoscopicDatum {
    pub group: FiniteGroup,
    pub dual: BasedRootDatum,
    /// `σ_G` as pinned automorphisms of `Ĝ`.
    pub action: Vec<PinnedAutomorphism>,
    pub s: TorsionPoint,
    /// `w_σ` as elements of `tits.weyl`.
    pub twisting: Vec<usize>,
    /// Optional base cover of `G` at some level.
    pub x_g: Option<CoverDescriptor>,
    /// Require `σ_H(s) = s` instead of equality modulo `Z(Ĝ)`.
    pub strict_s: bool,
    pub tits: TitsGroup,
    pub centralizer: Centralizer,
}

impl EndoscopicDatum {
    /// `action_x[σ]` is `σ_G` on `X*(T̂)`; `twisting[σ]` is a word in the
    /// simple reflections of `Ĝ`.
    pub fn new(
        group: &FiniteGroup,
        dual: &BasedRootDatum,
        action_x: &[IMat],
        s: &TorsionPoint,
        twisting: &[Vec<usize>],
        strict_s: bool,
    ) -> Result<Self> {
        let q = group.order();
        if action_x.len() != q {
            return Err(Error::invalid("/action", format!("expected {q} matrices")));
        }
        if twisting.len() != q {
            return Err(Error::invalid("/twisting", format!("expected {q} Weyl words")));
        }
        let lat = GaloisLattice::new(group, dual.rank(), action_x.to_vec()).map_err(|e| match e {
            Error::Invalid { msg, .. } => Error::invalid("/action", msg),
            e => e,
        })?;
        let action = lat
            .action
            .iter()
            .enumerate()
            .map(|(g, m)| {
                PinnedAutomorphism::from_matrix_x(dual, m).map_err(|e| match e {
                    Error::Invalid { msg, .. } => Error::invalid(format!("/action/{g}"), msg),
                    e => e,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let tits = TitsGroup::new(dual)?;
        let l = dual.semisimple_rank();
        let mut tw = Vec::with_capacity(q);
        for (g, word) in twisting.iter().enumerate() {
            let mut w = tits.weyl.group.identity();
            for (k, &i) in word.iter().enumerate() {
                if i >= l {
                    return Err(Error::invalid(format!("/twisting/{g}/{k}"), format!("no simple reflection {i}")));
                }
                w = tits.weyl.mul(w, tits.weyl.simple(i));
            }
            tw.push(w);
        }
        let centralizer = centralizer_root_system(dual, s)?;
        let d = EndoscopicDatum {
            group: group.clone(),
            dual: dual.clone(),
            action,
            s: s.clone(),
            twisting: tw,
            x_g: None,
            strict_s,
            tits,
            centralizer,
        };
        d.validate()?;
        Ok(d)
    }

    /// Attaches a base cover; it must live on [`Self::g_base`].
    pub fn with_base_cover(mut self, x_g: CoverDescriptor) -> Result<Self> {
        if x_g.group != self.group || x_g.base != self.g_base()? {
            return Err(Error::invalid("/x_g", "base cover does not live on G"));
        }
        self.x_g = Some(x_g);
        Ok(self)
    }

    /// Re-checks the compatibility conditions, e.g. after toggling `strict_s`.
    pub fn validate(&self) -> Result<()> {
        let g = &self.group;
        let weyl = &self.tits.weyl;
        for a in g.elements() {
            for b in g.elements() {
                let lhs = weyl.mul(self.twisting[a], self.action[a].conj_weyl(weyl, self.twisting[b]));
                if lhs != self.twisting[g.mul(a, b)] {
                    return Err(Error::invalid(
                        "/twisting",
                        format!("σ ↦ w_σ σ_G is not a homomorphism at ({}, {})", g.name(a), g.name(b)),
                    ));
                }
            }
        }
        let ch = &self.centralizer;
        for a in g.elements() {
            let p = self.sigma_h_perm(a);
            for &r in &ch.roots {
                if !ch.contains(p[r]) {
                    return Err(Error::invalid(format!("/twisting/{a}"), "σ_H does not preserve R(Ĥ)"));
                }
            }
            for &r in &ch.simple {
                if ch.simple_position(p[r]).is_none() {
                    return Err(Error::invalid(format!("/twisting/{a}"), "σ_H does not preserve the base of Ĥ"));
                }
            }
            let moved = self.s.map(&self.sigma_h_y(a)).sub(&self.s);
            let ok = if self.strict_s {
                moved.is_zero()
            } else {
                self.dual.simple_roots().iter().all(|r| moved.pair(r).0 == 0)
            };
            if !ok {
                let how = if self.strict_s { "" } else { " modulo Z(Ĝ)" };
                return Err(Error::invalid("/s", format!("σ_H(s) ≠ s{how} for σ = {}", g.name(a))));
            }
        }
        Ok(())
    }

    /// `σ_H = w_σ ∘ σ_G` on `X*(T̂)`.
    pub fn sigma_h_x(&self, g: usize) -> IMat {
        lattice::mat_mul(&self.tits.weyl.mat_x[self.twisting[g]], &self.action[g].mat_x)
    }

    /// `σ_H` on `X_*(T̂)`.
    pub fn sigma_h_y(&self, g: usize) -> IMat {
        lattice::mat_mul(&self.tits.weyl.mat_y[self.twisting[g]], &self.action[g].mat_y)
    }

    /// `σ_H` on root indices of `Ĝ`.
    pub fn sigma_h_perm(&self, g: usize) -> Vec<usize> {
        let w = &self.tits.weyl.perm[self.twisting[g]];
        self.action[g].root_perm.iter().map(|&b| w[b]).collect()
    }

    /// The base `G` (datum dual to `Ĝ`, action `σ_G`).
    pub fn g_base(&self) -> Result<CoverBase> {
        CoverBase::group(
            &self.group,
            self.dual.dual(),
            self.action.iter().map(|a| a.mat_x.clone()).collect(),
        )
    }

    /// The quasi-split endoscopic group `H` as a cover base.
    pub fn h_base(&self) -> Result<CoverBase> {
        CoverBase::group(
            &self.group,
            self.centralizer.datum.dual(),
            self.group.elements().map(|g| self.sigma_h_x(g)).collect(),
        )
    }

    /// `Ad(n(w_σ) ⋊ σ_G)` on the root vectors of `Ĝ`.
    pub fn section_action(&self, alg: &ChevalleyAlgebra, simple: &[SignedPerm], g: usize) -> SignedPerm {
        let n = self.tits.adjoint_action(alg, simple, &self.tits.lift(self.twisting[g]));
        n.compose(&alg.pinned_action(&self.action[g]))
    }

    /// The 2-cocycle of the Tits section `σ ↦ n(w_σ) ⋊ σ_G`, from products in
    /// the Tits group: `n(w_σ)·σ_G(n(w_τ)) = z(σ,τ)·n(w_στ)`.
    pub fn tits_section_cocycle(&self) -> Cochain {
        let module = self.two_torsion();
        let weyl = &self.tits.weyl;
        Cochain::from_fn(&self.group, &module, 2, |c| {
            let (a, b) = (c[0], c[1]);
            let wb = self.action[a].conj_weyl(weyl, self.twisting[b]);
            let x = self.tits.mul(&self.tits.lift(self.twisting[a]), &self.tits.lift(wb));
            debug_assert_eq!(x.w, self.twisting[self.group.mul(a, b)]);
            x.t
        })
    }

    /// `T̂^H[2]`.
    pub fn two_torsion(&self) -> FiniteModule {
        self.torsion(2)
    }

    /// `T̂^H[n]`: `Hom(X*(T̂), ℤ/n)` with `σ_H`.
    pub fn torsion(&self, n: i64) -> FiniteModule {
        let lat = GaloisLattice {
            rank: self.dual.rank(),
            action: self.group.elements().map(|g| self.sigma_h_x(g)).collect(),
        };
        dual_torsion_module(&self.group, &lat, n).expect("positive level")
    }

    /// The coroots of `Ĝ` as an admissible set for `σ_H`.
    pub fn coroot_set(&self) -> Result<AdmissibleSet> {
        let ys: Vec<IMat> = self.group.elements().map(|g| self.sigma_h_y(g)).collect();
        AdmissibleSet::from_coroots(&self.dual, &self.group, &ys)
    }

    /// Weyl elements `u` with `u(R(Ĥ)⁺) ⊂ R(Ĝ)⁺`: one per `Ĝ`-conjugate of
    /// `𝓗` containing `T̂`, up to `Ĥ`.
    pub fn conjugating_elements(&self) -> Vec<usize> {
        let weyl = &self.tits.weyl;
        (0..weyl.order())
            .filter(|&u| {
                self.centralizer
                    .roots
                    .iter()
                    .filter(|&&a| self.dual.is_positive(a))
                    .all(|&a| self.dual.is_positive(weyl.perm[u][a]))
            })
            .collect()
    }

    /// `Ad(n(u))` applied to the datum: `s ↦ u(s)`, `w_σ ↦ u w_σ σ_G(u)⁻¹`.
    pub fn conjugate(&self, u: usize) -> Result<EndoscopicDatum> {
        let weyl = &self.tits.weyl;
        if !self.conjugating_elements().contains(&u) {
            return Err(Error::invalid("/u", "u does not map the positive roots of Ĥ to positive roots"));
        }
        let words: Vec<Vec<usize>> = self
            .group
            .elements()
            .map(|g| {
                let su = self.action[g].conj_weyl(weyl, u);
                weyl.words[weyl.mul(weyl.mul(u, self.twisting[g]), weyl.inv(su))].clone()
            })
            .collect();
        let ax: Vec<IMat> = self.action.iter().map(|a| a.mat_x.clone()).collect();
        let mut d = EndoscopicDatum::new(
            &self.group,
            &self.dual,
            &ax,
            &self.s.map(&weyl.mat_y[u]),
            &words,
            self.strict_s,
        )?;
        d.x_g = self.x_g.clone();
        Ok(d)
    }
}

/// Output of [`endoscopic_cover`].
#[derive(Clone, Debug)]
pub struct EndoscopicCoverResult {
    pub datum: EndoscopicDatum,
    /// Signs `a_β` of the adapted pinning `X^H_β = a_β X_β`, `β ∈ Δ_H`.
    pub pinning_signs: Vec<i8>,
    /// `ε_β(σ)` per group element and simple root of `Ĥ`.
    pub epsilon: Vec<Vec<i8>>,
    /// `x_{H,G}` as a level-2 descriptor on `H`.
    pub descriptor: CoverDescriptor,
    pub class: Vec<i64>,
    pub h2_invariants: Vec<i64>,
    /// `π₁(H) = X*(T̂)/Q(Ĥ)` as `⊕ ℤ/d` (0 for free summands).
    pub pi1_h: Vec<i64>,
}

impl EndoscopicCoverResult {
    pub fn z(&self) -> &Cochain {
        &self.descriptor.t.z
    }

    pub fn c(&self) -> &Cochain {
        &self.descriptor.t.c
    }

    pub fn is_trivial_class(&self) -> bool {
        self.class.iter().all(|&a| a == 0)
    }
}

/// `x_{H,G}` for the default adapted pinning (all signs `+1`).
pub fn endoscopic_cover(d: &EndoscopicDatum) -> Result<EndoscopicCoverResult> {
    endoscopic_cover_with_pinning(d, &vec![1; d.centralizer.simple.len()])
}

/// `x_{H,G}` for the adapted pinning `X^H_β = a_β X_β`.
pub fn endoscopic_cover_with_pinning(d: &EndoscopicDatum, signs: &[i8]) -> Result<EndoscopicCoverResult> {
    let ch = &d.centralizer;
    let k = ch.simple.len();
    if signs.len() != k || signs.iter().any(|&a| a != 1 && a != -1) {
        return Err(Error::invalid("/pinning", format!("expected {k} signs ±1")));
    }
    let alg = ChevalleyAlgebra::new(&d.dual)?;
    let simple: Vec<SignedPerm> = (0..d.dual.semisimple_rank()).map(|i| alg.simple_tits_action(i)).collect();
    let z = d.tits_section_cocycle();
    let base = d.h_base()?;
    let complex = base.complex(&d.group, 2)?;
    let mut epsilon = Vec::with_capacity(d.group.order());
    let mut c = Cochain::zero(&d.group, &complex.b, 1);
    for g in d.group.elements() {
        let sp = d.section_action(&alg, &simple, g);
        let mut eps = Vec::with_capacity(k);
        for (j, &beta) in ch.simple.iter().enumerate() {
            // γ = σ_H⁻¹ β; the section sends X_γ to ±X_β
            let gamma = (0..d.dual.num_roots())
                .find(|&a| sp.perm[a] == beta)
                .expect("section permutes the roots");
            let i = ch
                .simple_position(gamma)
                .ok_or_else(|| Error::check("σ_H⁻¹ does not preserve the base of Ĥ"))?;
            let e = signs[j] * signs[i] * sp.sign[gamma];
            eps.push(e);
            c.values[g][j] = if e == -1 { 1 } else { 0 };
        }
        epsilon.push(eps);
    }
    let t = HyperCocycle2 { z, c };
    if !differential(&d.group, &complex.a, &t.z)?.is_zero() {
        return Err(Error::check("Tits section cocycle z is not a 2-cocycle"));
    }
    if !complex.is_hypercocycle(&d.group, &t) {
        return Err(Error::check("∂c ≠ z̄ for the sign cochain"));
    }
    let descriptor = CoverDescriptor::new(d.group.clone(), base, 2, t)?;
    let h2 = descriptor.h2();
    let class = h2.dlog(&descriptor.t).expect("hypercocycle");
    Ok(EndoscopicCoverResult {
        datum: d.clone(),
        pinning_signs: signs.to_vec(),
        epsilon,
        class,
        h2_invariants: h2.invariants().to_vec(),
        pi1_h: ch.datum.dual().pi1().factors,
        descriptor,
    })
}

/// Classes of `x_{H,G}` for all `2^{|Δ_H|}` adapted pinnings.
pub fn pinning_classes(d: &EndoscopicDatum) -> Result<Vec<(Vec<i8>, Vec<i64>)>> {
    let k = d.centralizer.simple.len();
    (0..1u32 << k)
        .map(|bits| {
            let signs: Vec<i8> = (0..k).map(|j| if bits >> j & 1 == 1 { -1 } else { 1 }).collect();
            endoscopic_cover_with_pinning(d, &signs).map(|r| (signs, r.class))
        })
        .collect()
}

/// Outcome of transporting `x_{H,G}` along `Ad(n(u))`.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ConjugationCheck {
    pub u: String,
    /// `Ad(n)(z · ∂s_{q/p}) = z'` exactly.
    pub z_transport_exact: bool,
    /// `Ad(n)(c · s̄_{q/p}) / c' ∈ B¹(Γ, T̂^{H'}_ad[2])`.
    pub c_defect_is_coboundary: bool,
    pub class_matches: bool,
}

impl ConjugationCheck {
    pub fn passed(&self) -> bool {
        self.z_transport_exact && self.c_defect_is_coboundary && self.class_matches
    }
}

/// Compares `x_{H,G}` of `d` with that of its conjugate by `n(u)`, using the
/// gauge shift `s_{q/p}` with `q(α) = p(uα)` as the correction.
pub fn weyl_conjugation_check(d: &EndoscopicDatum, u: usize) -> Result<ConjugationCheck> {
    let d2 = d.conjugate(u)?;
    let r = endoscopic_cover(d)?;
    let r2 = endoscopic_cover(&d2)?;
    let weyl = &d.tits.weyl;
    let group = &d.group;
    let set = d.coroot_set()?;
    let p = Gauge::from_positive_system(&d.dual);
    let q = p.pullback(&weyl.perm[u]);
    let y = gauge_shift(group, &set, &p, &q);
    let m = d.two_torsion();
    let dy = differential(group, &m, &y)?;
    let my = &weyl.mat_y[u];
    let transport = |v: &[i64]| -> Vec<i64> { lattice::mat_vec(my, v).iter().map(|&a| md(a, 2)).collect() };
    let zt = Cochain {
        degree: 2,
        values: r.z().values.iter().zip(&dy.values).map(|(a, b)| transport(&m.add(a, b))).collect(),
    };
    let ch = &d.centralizer;
    let ch2 = &d2.centralizer;
    // Δ_H' = u(Δ_H) as sets
    let perm_simple: Vec<usize> = ch2
        .simple
        .iter()
        .map(|&b2| {
            ch.simple
                .iter()
                .position(|&b| weyl.perm[u][b] == b2)
                .ok_or_else(|| Error::check("u does not carry Δ_H onto Δ_H'"))
        })
        .collect::<Result<_>>()?;
    let ct = Cochain {
        degree: 1,
        values: group
            .elements()
            .map(|g| {
                let yg = transport(y.at(group, &[g]));
                ch2.simple
                    .iter()
                    .enumerate()
                    .map(|(j, &b2)| md(r.c().values[g][perm_simple[j]] + lattice::dot(d.dual.root(b2), &yg), 2))
                    .collect()
            })
            .collect(),
    };
    let complex2 = r2.descriptor.complex();
    let z_transport_exact = zt == *r2.z();
    let defect = ct.sub(&complex2.b, r2.c());
    let c_defect_is_coboundary = solve_differential(group, &complex2.b, 0, &defect).is_some();
    let moved = HyperCocycle2 { z: zt, c: ct };
    let class_matches = hyper_h2(group, &complex2).dlog(&moved).as_deref() == Some(&r2.class[..]);
    Ok(ConjugationCheck {
        u: weyl.group.name(u).to_string(),
        z_transport_exact,
        c_defect_is_coboundary,
        class_matches,
    })
}

/// Independent evaluation of the Tits section cocycle by the gauge formula
/// `z_p(σ,τ) = Σ α` over coroots with `p(α)=+`, `p(σ_H⁻¹α)=−`, `p((στ)_H⁻¹α)=+`.
pub fn gauge_formula_cocycle(d: &EndoscopicDatum) -> Result<Cochain> {
    let set = d.coroot_set()?;
    Ok(tits_cocycle(&d.group, &set, &Gauge::from_positive_system(&d.dual)))
}

/// An element `t · n(w) ⋊ σ` of `N(T̂, Ĝ) ⋊ Γ` with `t ∈ T̂[N]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LElement {
    pub t: Vec<i64>,
    pub w: usize,
    pub g: usize,
}

/// The finite model of `ᴸG` used for certificates.
struct LModel<'a> {
    d: &'a EndoscopicDatum,
    n: i64,
}

impl LModel<'_> {
    fn red(&self, v: &[i64]) -> Vec<i64> {
        v.iter().map(|&a| md(a, self.n)).collect()
    }

    fn mul(&self, a: &LElement, b: &LElement) -> LElement {
        let d = self.d;
        let weyl = &d.tits.weyl;
        let aut = &d.action[a.g];
        let t2 = lattice::mat_vec(&weyl.mat_y[a.w], &lattice::mat_vec(&aut.mat_y, &b.t));
        let w2 = aut.conj_weyl(weyl, b.w);
        let z = d.tits.mul(&d.tits.lift(a.w), &d.tits.lift(w2));
        let t: Vec<i64> = (0..a.t.len()).map(|i| a.t[i] + t2[i] + self.n / 2 * z.t[i]).collect();
        LElement {
            t: self.red(&t),
            w: z.w,
            g: d.group.mul(a.g, b.g),
        }
    }
}

/// One line of a certificate transcript.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CheckLine {
    pub kind: String,
    pub at: Vec<String>,
    pub ok: bool,
}

/// `σ ↦ (n(w_σ), σ_G)`.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SectionEntry {
    pub sigma: String,
    pub weyl_word: Vec<usize>,
    pub sigma_g: IMat,
}

/// Verification that `h ⊠ σ ↦ h x(σ)⁻¹ n(w_σ) ⋊ σ_G` is an L-homomorphism on
/// the torsion model `T̂[N]`.
#[derive(Clone, Debug, Serialize)]
pub struct LEmbeddingCertificate {
    pub level: i64,
    pub section: Vec<SectionEntry>,
    /// The lift `x ∈ C¹(Γ, T̂^H[N])` of `c`.
    pub x: Cochain,
    /// `b ∈ T̂^H_ad[N]` with `x̄ = c + ∂b`; the pinning preserved is `Ad(b)` of the adapted one.
    pub pinning_shift: Vec<i64>,
    /// `z · ∂x⁻¹` at level `N`.
    pub twisted_cocycle: Cochain,
    pub transcript: Vec<CheckLine>,
    pub note: String,
}

impl LEmbeddingCertificate {
    pub fn verified(&self) -> bool {
        self.transcript.iter().all(|l| l.ok)
    }

    pub fn first_failure(&self) -> Option<&CheckLine> {
        self.transcript.iter().find(|l| !l.ok)
    }
}

/// The verification level `N = lcm(2, ord s, exp π₁(H)_tors)`, doubled until
/// `c` lifts to `T̂^H[N]`.
pub fn certificate_level(r: &EndoscopicCoverResult) -> i64 {
    let d = &r.datum;
    let e = r.pi1_h.iter().filter(|&&x| x != 0).fold(1, |a, &b| lcm(a, b));
    let mut n = lcm(lcm(2, d.s.order()), e);
    for _ in 0..8 {
        if default_lift(r, n).is_some() {
            return n;
        }
        n *= 2;
    }
    n
}

/// A lift `x` of `c` with `x̄(σ) = c(σ)` exactly, if one exists at level `n`.
pub fn default_lift(r: &EndoscopicCoverResult, n: i64) -> Option<Cochain> {
    let d = &r.datum;
    let full = d.torsion(n);
    let rank = d.dual.rank();
    let simple = &d.centralizer.simple;
    let cols: Vec<Vec<i64>> = (0..rank)
        .map(|j| simple.iter().map(|&b| md(d.dual.root(b)[j], n)).collect())
        .collect();
    let ech = ModEchelon::new(&cols, &vec![n; simple.len()], &vec![n; rank]);
    let mut values = Vec::with_capacity(d.group.order());
    for g in d.group.elements() {
        let target: Vec<i64> = r.c().values[g].iter().map(|&a| a * (n / 2)).collect();
        values.push(full.reduce(&ech.solve(&target)?));
    }
    Some(Cochain { degree: 1, values })
}

/// Builds the certificate for a lift `x` at level `n` (default: the exact
/// lift at [`certificate_level`]). Failing lines are recorded, not raised;
/// a lift whose image is not cohomologous to `c` is an error.
pub fn l_embedding_transcript(r: &EndoscopicCoverResult, lift: Option<(i64, Cochain)>) -> Result<LEmbeddingCertificate> {
    let d = &r.datum;
    let group = &d.group;
    let (n, x) = match lift {
        Some((n, x)) => {
            if n < 2 || n % 2 != 0 {
                return Err(Error::invalid("/level", "level must be a positive even number"));
            }
            if x.degree != 1 || x.values.len() != group.order() || x.values.iter().any(|v| v.len() != d.dual.rank()) {
                return Err(Error::invalid("/x", "x must be a 1-cochain valued in T̂[N]"));
            }
            let full = d.torsion(n);
            let values = x.values.iter().map(|v| full.reduce(v)).collect();
            (n, Cochain { degree: 1, values })
        }
        None => {
            let n = certificate_level(r);
            let x = default_lift(r, n).ok_or_else(|| Error::unsupported("c does not lift to T̂[N] at desk levels"))?;
            (n, x)
        }
    };
    let half = n / 2;
    let full = d.torsion(n);
    let seq = d.h_base()?.sequence(group, n)?;
    let adj = &seq.adjoint;
    // x̄ − c = ∂b
    let xbar = x.map(&seq.projection, adj);
    let c_n = r.c().scale(adj, half);
    let b = solve_differential(group, adj, 0, &xbar.sub(adj, &c_n))
        .ok_or_else(|| Error::invalid("/x", "lift mismatch: x̄ is not cohomologous to c"))?;
    let b = b.values[0].clone();

    let zn = r.z().scale(&full, half);
    let dx = differential(group, &full, &x)?;
    let twisted = zn.sub(&full, &dx);
    let model = LModel { d, n };
    let phi = |h: &[i64], g: usize| LElement {
        t: model.red(&h.iter().zip(x.at(group, &[g])).map(|(a, b)| a - b).collect::<Vec<_>>()),
        w: d.twisting[g],
        g,
    };
    let zero = vec![0; d.dual.rank()];
    let mut transcript = Vec::new();
    for a in group.elements() {
        for bb in group.elements() {
            // (1 ⊠ σ)(1 ⊠ τ) = κ(σ,τ) ⊠ στ
            let lhs = model.mul(&phi(&zero, a), &phi(&zero, bb));
            let rhs = phi(twisted.at(group, &[a, bb]), group.mul(a, bb));
            transcript.push(CheckLine {
                kind: "product".into(),
                at: vec![group.name(a).into(), group.name(bb).into()],
                ok: lhs == rhs,
            });
        }
    }
    for a in group.elements() {
        for i in 0..d.dual.rank() {
            let mut e = vec![0; d.dual.rank()];
            e[i] = 1 % n;
            // (1 ⊠ σ)(e ⊠ 1) = σ_H(e) ⊠ σ
            let lhs = model.mul(&phi(&zero, a), &phi(&e, group.identity()));
            let rhs = phi(&full.act(a, &e), a);
            transcript.push(CheckLine {
                kind: "torus".into(),
                at: vec![group.name(a).into(), format!("e{}", i + 1)],
                ok: lhs == rhs,
            });
        }
    }
    // pinning: phases of X'_β = ζ^{p_β} X_β for β ∈ ±Δ_H
    let alg = ChevalleyAlgebra::new(&d.dual)?;
    let simple: Vec<SignedPerm> = (0..d.dual.semisimple_rank()).map(|i| alg.simple_tits_action(i)).collect();
    let ch = &d.centralizer;
    let phase = |a: usize| -> Option<i64> {
        let (pos, sgn) = if d.dual.is_positive(a) { (a, 1) } else { (d.dual.neg(a), -1) };
        let j = ch.simple_position(pos)?;
        let base = if r.pinning_signs[j] == -1 { half } else { 0 } + b[j];
        Some(md(sgn * base, n))
    };
    for g in group.elements() {
        let sp = d.section_action(&alg, &simple, g);
        for &beta in ch.simple.iter().chain(ch.simple.iter().map(|&b| d.dual.neg(b)).collect::<Vec<_>>().iter()) {
            let target = sp.perm[beta];
            let theta = if sp.sign[beta] == -1 { half } else { 0 } - lattice::dot(d.dual.root(target), x.at(group, &[g]));
            let ok = match (phase(beta), phase(target)) {
                (Some(p), Some(q)) => md(p + theta - q, n) == 0,
                _ => false,
            };
            transcript.push(CheckLine {
                kind: "pinning".into(),
                at: vec![group.name(g).into(), format!("{:?}", d.dual.root(beta))],
                ok,
            });
        }
    }
    let section = group
        .elements()
        .map(|g| SectionEntry {
            sigma: group.name(g).into(),
            weyl_word: d.tits.weyl.words[d.twisting[g]].clone(),
            sigma_g: d.action[g].mat_x.clone(),
        })
        .collect();
    Ok(LEmbeddingCertificate {
        level: n,
        section,
        x,
        pinning_shift: b,
        twisted_cocycle: twisted,
        transcript,
        note: CONJUGACY_NOTE.into(),
    })
}

/// [`l_embedding_transcript`], failing if any check fails.
pub fn l_embedding_certificate(r: &EndoscopicCoverResult, lift: Option<(i64, Cochain)>) -> Result<LEmbeddingCertificate> {
    let cert = l_embedding_transcript(r, lift)?;
    if let Some(l) = cert.first_failure() {
        return Err(Error::check(format!("L-embedding check '{}' fails at ({})", l.kind, l.at.join(", "))));
    }
    Ok(cert)
}

/// `φ_x(1 ⊠ σ)` in the finite model, for comparing embeddings.
pub fn section_image(r: &EndoscopicCoverResult, n: i64, x: &Cochain, g: usize) -> LElement {
    let d = &r.datum;
    LElement {
        t: x.at(&d.group, &[g]).iter().map(|&a| md(-a, n)).collect(),
        w: d.twisting[g],
        g,
    }
}

/// `b · e · b⁻¹` for `b ∈ T̂[N]`.
pub fn conjugate_by_torus(r: &EndoscopicCoverResult, n: i64, b: &[i64], e: &LElement) -> LElement {
    let model = LModel { d: &r.datum, n };
    let id = r.datum.tits.weyl.group.identity();
    let bi: Vec<i64> = b.iter().map(|&a| md(-a, n)).collect();
    let left = model.mul(
        &LElement {
            t: b.to_vec(),
            w: id,
            g: r.datum.group.identity(),
        },
        e,
    );
    model.mul(
        &left,
        &LElement {
            t: bi,
            w: id,
            g: r.datum.group.identity(),
        },
    )
}

/// `x_H = x_G · x_{H,G}`.
#[derive(Clone, Debug)]
pub struct ComposedCover {
    /// `lcm(n, 2)`.
    pub nominal_level: i64,
    pub descriptor: CoverDescriptor,
    /// `Z(Ĝ)`-valued representative of `x_G` used for the pullback.
    pub center_cocycle: Cochain,
}

/// Pulls `x_G` back along `Z(Ĝ) → T̂^H` and Baer-adds `x_{H,G}`. The result
/// lives at `m = lcm(n, 2)` when `x_G` has a `Z(Ĝ)[m]`-valued representative,
/// otherwise at the first of `m·e`, `m·e·|Γ|` where it has one
/// (`e` = exponent of `π₁(G)_tors`).
pub fn compose_with_base_cover(r: &EndoscopicCoverResult, x_g: &CoverDescriptor) -> Result<ComposedCover> {
    let d = &r.datum;
    let group = &d.group;
    if x_g.group != *group || x_g.base != d.g_base()? {
        return Err(Error::invalid("/x_g", "base cover does not live on G"));
    }
    let m = lcm(x_g.n, 2);
    let e = x_g.base.pi1_torsion_exponent();
    let mut tried = Vec::new();
    for level in [m, m * e, m * e * group.order() as i64] {
        if tried.contains(&level) {
            continue;
        }
        tried.push(level);
        let up = x_g.raise_level(level)?;
        let cx = up.complex();
        // solve ȳ₁ + ∂y₂ = c with y₁ ∈ C¹(T̂[L]), y₂ ∈ T̂_ad[L]
        let cells = group.order();
        let ka = cx.a.rank();
        let kb = cx.b.rank();
        let mut gens = Vec::new();
        let mut coef = Vec::new();
        for cell in 0..cells {
            for j in 0..ka {
                let mut y = Cochain::zero(group, &cx.a, 1);
                y.values[cell][j] = 1 % cx.a.factors[j];
                gens.push(y.map(&cx.map, &cx.b).flatten());
                coef.push(cx.a.factors[j]);
            }
        }
        for j in 0..kb {
            let mut y = Cochain::zero(group, &cx.b, 0);
            y.values[0][j] = 1 % cx.b.factors[j];
            gens.push(differential(group, &cx.b, &y)?.flatten());
            coef.push(cx.b.factors[j]);
        }
        let moduli: Vec<i64> = (0..cells).flat_map(|_| cx.b.factors.clone()).collect();
        let ech = ModEchelon::new(&gens, &moduli, &coef);
        let Some(sol) = ech.solve(&up.t.c.flatten()) else {
            continue;
        };
        let y1 = Cochain::unflatten(1, ka, cells, &sol[..cells * ka]);
        let zeta = up.t.z.sub(&cx.a, &differential(group, &cx.a, &y1)?);
        let h = d.h_base()?;
        let hx = h.complex(group, level)?;
        let center = HyperCocycle2 {
            z: zeta.clone(),
            c: Cochain::zero(group, &hx.b, 1),
        };
        if !hx.is_hypercocycle(group, &center) {
            return Err(Error::check("pulled-back base cover is not a hypercocycle on H"));
        }
        let xhg = r.descriptor.raise_level(level)?;
        let t = HyperCocycle2 {
            z: zeta.add(&hx.a, &xhg.t.z),
            c: xhg.t.c.clone(),
        };
        return Ok(ComposedCover {
            nominal_level: m,
            descriptor: CoverDescriptor::new(group.clone(), h, level, t)?,
            center_cocycle: zeta,
        });
    }
    Err(Error::unsupported("x_G has no Z(Ĝ)-valued representative at the tried levels"))
}

/// The fixture `a1-elliptic`: `G = PGL₂` split, `Ĝ = SL₂`, `Γ = ℤ/2`,
/// `w_σ = s_α`, `s = α∨(i)`, so `H` is the anisotropic torus.
pub fn a1_elliptic() -> EndoscopicDatum {
    let g = FiniteGroup::cyclic(2);
    let dual = BasedRootDatum::preset("A1.sc").expect("preset");
    let s = TorsionPoint::new(&[(1, 4)]).expect("point");
    EndoscopicDatum::new(&g, &dual, &[vec![vec![1]], vec![vec![1]]], &s, &[vec![], vec![0]], false)
        .expect("fixture")
}

/// The fixture `a1xa1-in-c2`: `G = SO₅` (adjoint `B2`), `Ĝ = Sp₄`,
/// `s = diag`-type point of order 2 with `Ĥ = SL₂ × SL₂` on the long roots,
/// and `Γ = ℤ/2` swapping the two factors through the short simple reflection.
pub fn a1xa1_in_c2() -> EndoscopicDatum {
    let g = FiniteGroup::cyclic(2);
    let dual = BasedRootDatum::preset("C2.sc").expect("preset");
    let s = TorsionPoint::new(&[(0, 1), (1, 2)]).expect("point");
    let id = lattice::identity(2);
    EndoscopicDatum::new(&g, &dual, &[id.clone(), id], &s, &[vec![], vec![0]], false).expect("fixture")
}

/// Split variant of [`a1xa1_in_c2`] (trivial twisting).
pub fn a1xa1_in_c2_split() -> EndoscopicDatum {
    let g = FiniteGroup::cyclic(2);
    let dual = BasedRootDatum::preset("C2.sc").expect("preset");
    let s = TorsionPoint::new(&[(0, 1), (1, 2)]).expect("point");
    let id = lattice::identity(2);
    EndoscopicDatum::new(&g, &dual, &[id.clone(), id], &s, &[vec![], vec![]], false).expect("fixture")
}
