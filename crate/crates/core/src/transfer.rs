//! Cover elements of tori, the relative-position cocycle `x_σ(δ̃)`, and the
//! transfer factor `Δ′_x` at desk scale.
//!
//! Two layers. [`ls_cocycle`] is general: it builds `x_σ(δ̃)` for any based
//! root datum, finite `Γ` and Weyl 1-cocycle, with the torus part kept as a
//! formal expression in the `a`-data symbols `a_β = δ_β − δ_{−β}`.
//! The evaluation of `Δ′_x` is concrete and restricted to the elliptic
//! endoscopic torus of `PGL₂` over `ℚ_p` or `ℝ`, where every character value
//! reduces to a quadratic sign or an explicit phase.

use std::collections::BTreeMap;

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::endoscopy::{endoscopic_cover, l_embedding_certificate, EndoscopicDatum};
use crate::error::{Error, Result};
use crate::galois_module::FiniteGroup;
use crate::lattice;
use crate::linalg::md;
use crate::localfield::{epsilon_quadratic, is_local_square, kappa, rat, AdditiveCharacter, Normalization, Phase, Place, QuadExtElement, Rat};
use crate::rootdata::{BasedRootDatum, PinnedAutomorphism, TitsGroup};

/// `Σ_β y_β ⊗ a_β + t(−1)`: a point of `T(F^s)` written in the `a`-data.
/// Symbols are keyed by positive roots; `a_{−β} = −a_β` moves a sign into `t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormalTorus {
    pub symbols: BTreeMap<usize, Vec<i64>>,
    /// Coordinates in `X_*/2`.
    pub sign: Vec<i64>,
}

impl FormalTorus {
    pub fn zero(rank: usize) -> Self {
        FormalTorus { symbols: BTreeMap::new(), sign: vec![0; rank] }
    }

    /// Adds `y ⊗ a_β`.
    pub fn push(&mut self, rd: &BasedRootDatum, beta: usize, y: &[i64]) {
        let key = if rd.is_positive(beta) {
            beta
        } else {
            for (s, v) in self.sign.iter_mut().zip(y) {
                *s = md(*s + v, 2);
            }
            rd.neg(beta)
        };
        let e = self.symbols.entry(key).or_insert_with(|| vec![0; y.len()]);
        for (a, b) in e.iter_mut().zip(y) {
            *a += b;
        }
        if e.iter().all(|&a| a == 0) {
            self.symbols.remove(&key);
        }
    }

    pub fn add(&self, rd: &BasedRootDatum, o: &FormalTorus) -> FormalTorus {
        let mut out = self.clone();
        for (&b, y) in &o.symbols {
            out.push(rd, b, y);
        }
        for (s, v) in out.sign.iter_mut().zip(&o.sign) {
            *s = md(*s + v, 2);
        }
        out
    }

    fn map_y(&self, rd: &BasedRootDatum, m: &lattice::IMat, perm: Option<&[usize]>) -> FormalTorus {
        let mut out = FormalTorus::zero(self.sign.len());
        for (&b, y) in &self.symbols {
            let b2 = perm.map_or(b, |p| p[b]);
            out.push(rd, b2, &lattice::mat_vec(m, y));
        }
        let s = lattice::mat_vec(m, &self.sign);
        for (a, v) in out.sign.iter_mut().zip(s) {
            *a = md(*a + v, 2);
        }
        out
    }
}

/// `t · n(w)` in `N(T, G)(F^s)` with a formal torus part.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalizerElement {
    pub t: FormalTorus,
    pub w: usize,
}

/// `σ ↦ x_σ(δ̃)` together with the data needed to test the cocycle law.
#[derive(Clone, Debug)]
pub struct LsCocycle {
    pub group: FiniteGroup,
    pub tits: TitsGroup,
    pub sigma_t: Vec<PinnedAutomorphism>,
    pub omega: Vec<usize>,
    /// `σ_S = ω_σ ∘ σ_T` on root indices.
    pub sigma_s: Vec<Vec<usize>>,
    pub values: Vec<NormalizerElement>,
}

impl LsCocycle {
    fn mul(&self, x: &NormalizerElement, y: &NormalizerElement) -> NormalizerElement {
        let rd = &self.tits.rd;
        let wy = y.t.map_y(rd, &self.tits.weyl.mat_y[x.w], None);
        let n = self.tits.mul(&self.tits.lift(x.w), &self.tits.lift(y.w));
        let mut t = x.t.add(rd, &wy);
        for (a, v) in t.sign.iter_mut().zip(&n.t) {
            *a = md(*a + v, 2);
        }
        NormalizerElement { t, w: n.w }
    }

    /// The Galois action: `σ_T` on `X_*` and on `n(w)`, `a_β ↦ a_{σ_S β}`.
    fn galois(&self, g: usize, x: &NormalizerElement) -> NormalizerElement {
        let aut = &self.sigma_t[g];
        NormalizerElement {
            t: x.t.map_y(&self.tits.rd, &aut.mat_y, Some(&self.sigma_s[g])),
            w: aut.conj_weyl(&self.tits.weyl, x.w),
        }
    }

    /// Pairs `(σ, τ)` where `x_{στ} ≠ x_σ · σ(x_τ)`.
    pub fn cocycle_defects(&self) -> Vec<(usize, usize)> {
        let g = &self.group;
        let mut out = Vec::new();
        for a in g.elements() {
            for b in g.elements() {
                let rhs = self.mul(&self.values[a], &self.galois(a, &self.values[b]));
                if rhs != self.values[g.mul(a, b)] {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

/// `x_σ(δ̃) = ∏_{α>0, σ_S⁻¹α<0} α∨(a_α) · n(ω_σ)`.
///
/// `rd` is the datum of `G` (roots in `X*(T)`); `sigma_t` its quasi-split
/// Galois action; `omega[σ]` a Weyl element with `ω_{στ} = ω_σ σ_T(ω_τ)`.
pub fn ls_cocycle(rd: &BasedRootDatum, group: &FiniteGroup, sigma_t: &[PinnedAutomorphism], omega: &[usize]) -> Result<LsCocycle> {
    let q = group.order();
    if sigma_t.len() != q || omega.len() != q {
        return Err(Error::invalid("/omega", format!("expected {q} entries")));
    }
    let tits = TitsGroup::new(rd)?;
    let weyl = &tits.weyl;
    if let Some(&w) = omega.iter().find(|&&w| w >= weyl.order()) {
        return Err(Error::invalid("/omega", format!("no Weyl element {w}")));
    }
    for a in group.elements() {
        for b in group.elements() {
            if omega[group.mul(a, b)] != weyl.mul(omega[a], sigma_t[a].conj_weyl(weyl, omega[b])) {
                return Err(Error::invalid("/omega", format!("not a 1-cocycle at ({}, {})", group.name(a), group.name(b))));
            }
        }
    }
    let sigma_s: Vec<Vec<usize>> = group
        .elements()
        .map(|g| sigma_t[g].root_perm.iter().map(|&r| weyl.perm[omega[g]][r]).collect())
        .collect();
    let mut values = Vec::with_capacity(q);
    for g in group.elements() {
        let inv = &sigma_s[group.inv(g)];
        let mut t = FormalTorus::zero(rd.rank());
        for a in (0..rd.num_roots()).filter(|&a| rd.is_positive(a) && !rd.is_positive(inv[a])) {
            t.push(rd, a, rd.coroot(a));
        }
        values.push(NormalizerElement { t, w: omega[g] });
    }
    Ok(LsCocycle { group: group.clone(), tits, sigma_t: sigma_t.to_vec(), omega: omega.to_vec(), sigma_s, values })
}

/// `η_α ∈ F_{±α}^×`, one entry per symmetric orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaShift {
    pub eta: Vec<Rat>,
}

/// `⟨β∨, κ⟩` on the symmetric orbits of `R(S, G) ∖ R(S, H)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KappaCharacter {
    /// Root indices of `G`, one representative per symmetric orbit.
    pub orbits: Vec<usize>,
    pub values: Vec<Phase>,
}

impl KappaCharacter {
    /// Reads `κ` off `s`: `⟨β∨, κ⟩ = β̂(s)`, where `β̂` is the root of `Ĝ`
    /// with the same index as `β`.
    pub fn from_datum(d: &EndoscopicDatum) -> Result<Self> {
        let mut seen = vec![false; d.dual.num_roots()];
        let mut orbits = Vec::new();
        let mut values = Vec::new();
        for b in 0..d.dual.num_roots() {
            if seen[b] || d.centralizer.contains(b) {
                continue;
            }
            let mut orbit: Vec<usize> = d.group.elements().map(|g| d.sigma_h_perm(g)[b]).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &r in &orbit {
                seen[r] = true;
                seen[d.dual.neg(r)] = true;
            }
            if orbit.contains(&d.dual.neg(b)) {
                let (num, den) = d.s.pair(d.dual.root(b));
                let v = Phase::new(num, den);
                if v.as_sign().is_none() {
                    return Err(Error::check("κ is not ±1 on a symmetric orbit"));
                }
                orbits.push(b.min(d.dual.neg(b)));
                values.push(v);
            }
        }
        Ok(KappaCharacter { orbits, values })
    }

    /// Whether the orbit lies in `R_κ`.
    pub fn in_r_kappa(&self, i: usize) -> bool {
        self.values[i].is_one()
    }
}

/// `∏_O κ_O(η_O)^{[β_O ∉ R_κ]}`.
pub fn eta_shift_pairing(eta: &EtaShift, k: &KappaCharacter, d: &Rat, v: Place) -> Result<Phase> {
    if eta.eta.len() != k.orbits.len() {
        return Err(Error::invalid("/eta", format!("expected {} entries", k.orbits.len())));
    }
    let mut out = Phase::one();
    for (i, e) in eta.eta.iter().enumerate() {
        if !k.in_r_kappa(i) {
            out = out.mul(Phase::sign(kappa(e, d, v)?));
        }
    }
    Ok(out)
}

/// A `2×2` matrix over `ℚ`, row major.
pub type Mat2 = [[Rat; 2]; 2];

pub fn det2(m: &Mat2) -> Rat {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

/// A point of the elliptic torus `S = E^×/F^×` with a lift to the double
/// cover of the symmetric orbit `{±α}`: `δ = [x]`, `α(δ) = x/x̄`, and
/// `δ_α ∈ x·F^×`, `δ_{−α} = σ(δ_α)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverElement {
    pub x: QuadExtElement,
    pub delta_alpha: QuadExtElement,
}

impl CoverElement {
    pub fn new(x: QuadExtElement, delta_alpha: QuadExtElement) -> Result<Self> {
        if x.place != delta_alpha.place || x.d != delta_alpha.d {
            return Err(Error::invalid("/delta_alpha", "δ_α lives in a different field"));
        }
        if x.b.is_zero() || x.a.is_zero() {
            return Err(Error::invalid("/x", "not strongly regular: α(δ) = ±1"));
        }
        if ratio_in_base(&delta_alpha, &x).is_none() {
            return Err(Error::invalid("/delta_alpha", "δ_α/δ_{−α} ≠ α(δ)"));
        }
        Ok(CoverElement { x, delta_alpha })
    }

    /// The canonical lift `δ_α = x`.
    pub fn canonical(x: QuadExtElement) -> Result<Self> {
        Self::new(x.clone(), x)
    }

    pub fn delta_minus_alpha(&self) -> QuadExtElement {
        self.delta_alpha.conj()
    }

    /// `α(δ) = δ_α / δ_{−α}`.
    pub fn alpha_value(&self) -> QuadExtElement {
        self.delta_alpha.mul(&self.delta_minus_alpha().inv().expect("nonzero"))
    }

    /// `a_α = δ_α − δ_{−α}`, a nonzero trace-zero element.
    pub fn a_data(&self) -> QuadExtElement {
        self.delta_alpha.sub(&self.delta_minus_alpha())
    }

    pub fn eta_shift(&self, eta: &Rat) -> Self {
        CoverElement { x: self.x.clone(), delta_alpha: self.delta_alpha.scale(*eta) }
    }
}

/// `y/z` if it lies in `F^×`.
pub fn ratio_in_base(y: &QuadExtElement, z: &QuadExtElement) -> Option<Rat> {
    if y.is_zero() || z.is_zero() {
        return None;
    }
    y.mul(&z.inv().ok()?).as_base()
}

/// Quadratic-extension `χ`-data for the symmetric orbit: a character of
/// `E^×` restricting to `κ_{E/F}` on `F^×`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum ChiData {
    /// `E/F` unramified: `χ(z) = (−1)^{v_E(z)}`.
    Unramified,
    /// `E/F` tamely ramified at odd `p`: `χ(√d) = ζ` and `χ(u) = (ū/p)` on units.
    Ramified { zeta_turns: (i64, i64) },
    /// `ℂ/ℝ`: `χ(z) = (z/|z|)^k`, `k` odd.
    Real { k: i64 },
}

impl ChiData {
    /// The standard choice for `E = F(√d)`.
    pub fn standard(v: Place, d: &Rat) -> Result<Self> {
        match v {
            Place::Real => Ok(ChiData::Real { k: 1 }),
            Place::Padic(2) => Err(Error::unsupported("χ-data at p = 2")),
            Place::Padic(p) => {
                let (e, _) = crate::localfield::valuation(d, p);
                if e % 2 == 0 {
                    Ok(ChiData::Unramified)
                } else {
                    // ζ² = κ(d) = κ(−1)
                    let s = kappa(&rat(-1), d, v)?;
                    Ok(ChiData::Ramified { zeta_turns: if s == 1 { (0, 1) } else { (1, 4) } })
                }
            }
        }
    }

    fn check(&self, v: Place, d: &Rat) -> Result<()> {
        let ok = match (*self, v) {
            (ChiData::Real { k }, Place::Real) => k % 2 != 0,
            (ChiData::Unramified, Place::Padic(p)) if p != 2 => crate::localfield::valuation(d, p).0 % 2 == 0,
            (ChiData::Ramified { zeta_turns }, Place::Padic(p)) if p != 2 => {
                let z = Phase::new(zeta_turns.0, zeta_turns.1);
                crate::localfield::valuation(d, p).0 % 2 != 0 && z.pow(2) == Phase::sign(kappa(&rat(-1), d, v)?)
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::invalid("/chi", format!("χ-data {self:?} does not fit E = F(√{d}) at {v}")))
        }
    }

    pub fn is_quadratic(&self) -> bool {
        match *self {
            ChiData::Unramified => true,
            ChiData::Ramified { zeta_turns } => Phase::new(zeta_turns.0, zeta_turns.1).pow(2).is_one(),
            ChiData::Real { .. } => false,
        }
    }

    /// `χ(z)` exactly, or unsupported when the value is not a root of unity
    /// of known order.
    pub fn eval(&self, z: &QuadExtElement) -> Result<Phase> {
        if z.is_zero() {
            return Err(Error::invalid("/chi", "χ evaluated at 0"));
        }
        self.check(z.place, &z.d)?;
        match (*self, z.place) {
            (ChiData::Real { k }, _) => {
                let turns = real_arg_turns(z)?;
                Ok(Phase::new(*turns.numer() * k, *turns.denom()))
            }
            (ChiData::Unramified, Place::Padic(p)) => Ok(Phase::sign(if ext_valuation(z, p) % 2 == 0 { 1 } else { -1 })),
            (ChiData::Ramified { zeta_turns }, Place::Padic(p)) => {
                // z = √d^k · u with u a unit of O_E; χ(u) = Legendre of u mod √d
                let (e, u0) = crate::localfield::valuation(&z.d, p);
                let d_unit = u0;
                let (va, ua) = if z.a.is_zero() { (i64::MAX / 4, rat(0)) } else { crate::localfield::valuation(&z.a, p) };
                let (vb, ub) = if z.b.is_zero() { (i64::MAX / 4, rat(0)) } else { crate::localfield::valuation(&z.b, p) };
                debug_assert_eq!(e, 1);
                // v_E(a) = 2 v(a), v_E(b√d) = 2 v(b) + 1
                let (k, residue) = if 2 * va <= 2 * vb + 1 {
                    (2 * va, ua * d_unit_power(&d_unit, -va))
                } else {
                    // b√d · (√d)^{−(2vb+1)} = b · d^{−vb} = ub·u0^{−vb}
                    (2 * vb + 1, ub * d_unit_power(&d_unit, -vb))
                };
                let leg = legendre_rat(&residue, p);
                let zeta = Phase::new(zeta_turns.0, zeta_turns.1);
                Ok(zeta.pow(k).mul(Phase::sign(leg)))
            }
            _ => unreachable!("checked above"),
        }
    }
}

fn d_unit_power(u: &Rat, k: i64) -> Rat {
    let mut out = rat(1);
    for _ in 0..k.unsigned_abs() {
        out = if k > 0 { out * u } else { out / u };
    }
    out
}

fn legendre_rat(u: &Rat, p: u32) -> i8 {
    // a unit is a square iff it is a local square
    if is_local_square(u, Place::Padic(p)).expect("unit") {
        1
    } else {
        -1
    }
}

/// `v_E(z)` for `E = ℚ_p(√d)` unramified (`v(d)` even): `min(v(a), v(b))`
/// after absorbing `d = p^{2m}·u`.
fn ext_valuation(z: &QuadExtElement, p: u32) -> i64 {
    let (m, _) = crate::localfield::valuation(&z.d, p);
    let va = if z.a.is_zero() { i64::MAX } else { crate::localfield::valuation(&z.a, p).0 };
    let vb = if z.b.is_zero() { i64::MAX } else { crate::localfield::valuation(&z.b, p).0 + m / 2 };
    va.min(vb)
}

/// `arg(z)/2π` for `z ∈ ℂ = ℝ(√d)` when it is a multiple of `1/8`.
fn real_arg_turns(z: &QuadExtElement) -> Result<num::rational::Ratio<i64>> {
    let r = |n: i64| num::rational::Ratio::new(n, 8);
    let (a, b) = (z.a, z.b);
    let out = if b.is_zero() {
        if a.is_positive() { r(0) } else { r(4) }
    } else if a.is_zero() {
        if b.is_positive() { r(2) } else { r(6) }
    } else if z.d == rat(-1) && a.abs() == b.abs() {
        match (a.is_positive(), b.is_positive()) {
            (true, true) => r(1),
            (false, true) => r(3),
            (false, false) => r(5),
            (true, false) => r(7),
        }
    } else {
        return Err(Error::unsupported(format!("arg({z}) is not a multiple of π/4")));
    };
    Ok(out)
}

/// `Δ_II` two ways: `χ((α(δ) − 1)/a_α)` with `a_α = δ_α − δ_{−α}`, and
/// `χ(δ_α)`. They must agree.
pub fn delta_ii_bridge(delta: &CoverElement, chi: &ChiData) -> Result<Phase> {
    let one = QuadExtElement::from_base(delta.x.place, delta.x.d, rat(1))?;
    let lhs = chi.eval(&delta.alpha_value().sub(&one).mul(&delta.a_data().inv()?))?;
    let rhs = chi.eval(&delta.delta_alpha)?;
    if lhs != rhs {
        return Err(Error::check(format!("Δ_II formulas disagree: {lhs} vs {rhs}")));
    }
    Ok(lhs)
}

/// The invariant of the base embedding relative to the pinning.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasePoint {
    /// The caller asserts that the `a`-data `2√d` of the standard embedding
    /// comes from the Kostant section, so its invariant is trivial.
    KostantTrivial,
    /// An explicit value `⟨inv(δ̃⁰, pin), s⟩ = ±1` for `a⁰ = 2√d`.
    Class(i8),
}

/// Either an exact zero (unrelated pair) or a root of unity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TransferValue {
    Zero,
    Value(Phase),
}

impl TransferValue {
    pub fn phase(self) -> Option<Phase> {
        match self {
            TransferValue::Zero => None,
            TransferValue::Value(p) => Some(p),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum FactorNormalization {
    #[default]
    Pinning,
    Whittaker {
        psi: AdditiveCharacter,
    },
}

/// Desk-scale input for the elliptic endoscopic torus of `PGL₂`.
///
/// `S` is embedded in `G` by `x ↦ h·j(x)·h⁻¹` with
/// `j(a + b√d) = [[a, bd], [b, a]]`; `γ_x` is a point of the double cover of
/// `H(F) = E^×/F^×` written as `γ_α ∈ E^×`.
#[derive(Clone, Debug)]
pub struct TransferInput {
    pub place: Place,
    pub d: Rat,
    pub kappa: KappaCharacter,
    pub h: Mat2,
    pub base: BasePoint,
    pub gamma_alpha: QuadExtElement,
    pub delta: CoverElement,
    pub chi: ChiData,
    pub normalization: Normalization,
}

/// Checks that `d` is the a1-elliptic shape and returns `κ`.
pub fn desk_support(d: &EndoscopicDatum) -> Result<KappaCharacter> {
    if d.group.order() != 2 || d.dual.rank() != 1 || d.dual.semisimple_rank() != 1 {
        return Err(Error::unsupported("transfer evaluation is implemented for rank-one data over a quadratic extension"));
    }
    if !d.centralizer.roots.is_empty() {
        return Err(Error::unsupported("transfer evaluation needs Ĥ to be a torus"));
    }
    let k = KappaCharacter::from_datum(d)?;
    if k.orbits.len() != 1 {
        return Err(Error::unsupported("transfer evaluation needs the root orbit to be symmetric"));
    }
    // the parameter of inv_H is x(σ)⁻¹ with x the exact lift of c; the desk
    // model takes it trivial
    let r = endoscopic_cover(d)?;
    let cert = l_embedding_certificate(&r, None)?;
    if !cert.x.is_zero() {
        return Err(Error::unsupported("inv_H with nontrivial parameter x"));
    }
    Ok(k)
}

impl TransferInput {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        datum: &EndoscopicDatum,
        place: Place,
        d: Rat,
        h: Mat2,
        base: BasePoint,
        gamma_alpha: QuadExtElement,
        delta: CoverElement,
        chi: ChiData,
        normalization: Normalization,
    ) -> Result<Self> {
        let kappa = desk_support(datum)?;
        if is_local_square(&d, place)? {
            return Err(Error::invalid("/d", "E/F must be a field"));
        }
        if det2(&h).is_zero() {
            return Err(Error::invalid("/h", "embedding matrix is singular"));
        }
        if let BasePoint::Class(c) = base {
            if c.abs() != 1 {
                return Err(Error::invalid("/base", "class must be ±1"));
            }
        }
        for (what, z) in [("/gamma_alpha", &gamma_alpha), ("/delta/x", &delta.x)] {
            if z.place != place || z.d != d {
                return Err(Error::invalid(what, "element of a different field"));
            }
        }
        if gamma_alpha.b.is_zero() || gamma_alpha.a.is_zero() {
            return Err(Error::invalid("/gamma_alpha", "γ is not strongly regular"));
        }
        chi.check(place, &d)?;
        Ok(TransferInput { place, d, kappa, h, base, gamma_alpha, delta, chi, normalization })
    }

    fn sqrt_d(&self) -> QuadExtElement {
        QuadExtElement { place: self.place, d: self.d, a: rat(0), b: rat(1) }
    }

    fn sign(&self, x: &Rat) -> Result<Phase> {
        Ok(Phase::sign(kappa(x, &self.d, self.place)?))
    }

    /// Kostant `a`-data of the standard embedding: `dα(j(√d)) = 2√d`.
    pub fn base_a_data(&self) -> QuadExtElement {
        self.sqrt_d().scale(rat(2))
    }

    /// `γ` and `δ` are related iff `[γ_α] ∈ {[x], [x̄]}` in `E^×/F^×`. In the
    /// second case `δ` is rewritten through `j(x̄) = Ad(diag(1,−1)) j(x)`.
    pub fn related(&self) -> Option<TransferInput> {
        if ratio_in_base(&self.gamma_alpha, &self.delta.x).is_some() {
            return Some(self.clone());
        }
        if ratio_in_base(&self.gamma_alpha, &self.delta.x.conj()).is_some() {
            let mut out = self.clone();
            let flip = [[rat(1), rat(0)], [rat(0), rat(-1)]];
            out.h = mat_mul(&self.h, &flip);
            out.delta = CoverElement {
                x: self.delta.x.conj(),
                delta_alpha: self.delta.delta_minus_alpha(),
            };
            return Some(out);
        }
        None
    }

    /// `inv(δ̃, pin)` in `H¹(F, S_sc) = F^×/N(E^×)`, as a representative:
    /// base class × `a_α/a⁰` × `det h`.
    pub fn inv_class(&self) -> Result<Rat> {
        let shift = ratio_in_base(&self.delta.a_data(), &self.base_a_data()).ok_or_else(|| Error::check("a-data is not trace zero"))?;
        let base = match self.base {
            BasePoint::KostantTrivial | BasePoint::Class(1) => rat(1),
            BasePoint::Class(_) => non_norm(&self.d, self.place)?,
        };
        Ok(base * shift * det2(&self.h))
    }

    /// `⟨inv(δ̃, pin), s⟩`.
    pub fn inv_pairing(&self) -> Result<Phase> {
        let base = match self.base {
            BasePoint::KostantTrivial => Phase::one(),
            BasePoint::Class(c) => Phase::sign(c),
        };
        let a0 = self.base_a_data();
        let eta = ratio_in_base(&self.delta.a_data(), &a0).ok_or_else(|| Error::check("a-data is not trace zero"))?;
        let shift = eta_shift_pairing(&EtaShift { eta: vec![eta] }, &self.kappa, &self.d, self.place)?;
        let stable = self.stable_correction()?;
        Ok(self.normalization.orient(base.mul(shift).mul(stable)))
    }

    /// `⟨inv(δ_std, δ_h), s⟩` for the stable conjugate `Ad(h)`: the class of
    /// `det h` in `F^×/N(E^×)`, paired through `κ`.
    pub fn stable_correction(&self) -> Result<Phase> {
        let eta = EtaShift { eta: vec![det2(&self.h)] };
        eta_shift_pairing(&eta, &self.kappa, &self.d, self.place)
    }

    /// `inv_𝓗(γ_x, δ_±) = κ(γ_α/δ_α)`: the genuine character of
    /// `S(F)_{G/H} ⊕ S(F)_{x_H}` with trivial parameter.
    pub fn inv_h(&self) -> Result<Phase> {
        let r = ratio_in_base(&self.gamma_alpha, &self.delta.delta_alpha).ok_or_else(|| Error::check("γ and δ are not identified"))?;
        self.sign(&r)
    }

    fn delta_prime_at(&self) -> Result<Phase> {
        Ok(self.inv_pairing()?.inv().mul(self.inv_h()?))
    }

    /// `ε(1/2, X*(T)_ℂ − X*(T^H)_ℂ, Λ) = ε(1/2, χ_E, Λ)⁻¹` for split `PGL₂`.
    pub fn epsilon(&self, psi: AdditiveCharacter) -> Result<Phase> {
        Ok(epsilon_quadratic(&self.d, self.place, psi)?.inv())
    }
}

fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[rat(0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// A small element of `F^×` outside `N(E^×)`.
pub fn non_norm(d: &Rat, v: Place) -> Result<Rat> {
    let cands = (1..200i128).flat_map(|n| [rat(-n), rat(n)]);
    let p = match v {
        Place::Padic(p) => Some(p as i128),
        Place::Real => None,
    };
    for c in cands.chain(p.into_iter().map(rat)) {
        if kappa(&c, d, v)? == -1 {
            return Ok(c);
        }
    }
    Err(Error::unsupported("no small non-norm found"))
}

/// Everything computed for one evaluation.
#[derive(Clone, Debug, Serialize)]
pub struct TransferReport {
    pub place: String,
    pub related: bool,
    pub kappa: KappaCharacter,
    pub x_sigma: Option<String>,
    pub a_data: Option<String>,
    pub eta_pairing: Option<Phase>,
    pub stable_correction: Option<Phase>,
    pub inv_pairing: Option<Phase>,
    pub inv_h: Option<Phase>,
    pub delta_ii: Option<Phase>,
    pub epsilon: Option<Phase>,
    pub lift_check: Option<bool>,
    pub value: TransferValue,
}

/// `Δ′_x = ⟨inv(δ_±, pin), s⟩⁻¹ · inv_𝓗(γ_x, δ_±)`, times the ε-constant in
/// Whittaker normalization. Both `δ_±` lifts are evaluated and compared.
pub fn delta_prime(inp: &TransferInput, norm: FactorNormalization) -> Result<TransferValue> {
    Ok(transfer_report(inp, norm)?.value)
}

pub fn transfer_report(inp: &TransferInput, norm: FactorNormalization) -> Result<TransferReport> {
    let Some(rel) = inp.related() else {
        return Ok(TransferReport {
            place: inp.place.to_string(),
            related: false,
            kappa: inp.kappa.clone(),
            x_sigma: None,
            a_data: None,
            eta_pairing: None,
            stable_correction: None,
            inv_pairing: None,
            inv_h: None,
            delta_ii: None,
            epsilon: None,
            lift_check: None,
            value: TransferValue::Zero,
        });
    };
    let v0 = rel.delta_prime_at()?;
    let u = non_norm(&rel.d, rel.place)?;
    let mut other = rel.clone();
    other.delta = rel.delta.eta_shift(&u);
    let v1 = other.delta_prime_at()?;
    if v0 != v1 {
        return Err(Error::check(format!("Δ′_x depends on the δ_± lift: {v0} vs {v1}")));
    }
    let epsilon = match norm {
        FactorNormalization::Pinning => None,
        FactorNormalization::Whittaker { psi } => Some(rel.epsilon(psi)?),
    };
    let value = epsilon.map_or(v0, |e| e.mul(v0));
    let a = rel.delta.a_data();
    let eta = ratio_in_base(&a, &rel.base_a_data()).expect("trace zero");
    Ok(TransferReport {
        place: rel.place.to_string(),
        related: true,
        kappa: rel.kappa.clone(),
        x_sigma: Some(format!("α∨({a})·n(s_α)")),
        a_data: Some(a.to_string()),
        eta_pairing: Some(eta_shift_pairing(&EtaShift { eta: vec![eta] }, &rel.kappa, &rel.d, rel.place)?),
        stable_correction: Some(rel.stable_correction()?),
        inv_pairing: Some(rel.inv_pairing()?),
        inv_h: Some(rel.inv_h()?),
        delta_ii: match delta_ii_bridge(&rel.delta, &rel.chi) {
            Ok(p) => Some(p),
            Err(Error::Unsupported(_)) => None,
            Err(e) => return Err(e),
        },
        epsilon,
        lift_check: Some(true),
        value: TransferValue::Value(value),
    })
}

/// The fixture's `μ₁` on `H₁(F)_x`, `H₁ = Res_{E/F} 𝔾_m`: for
/// `γ_{1,±} = (γ₁, γ_x)`, `μ₁ = κ(γ_α/γ₁)`; it restricts to `κ_{E/F}` on
/// `Z₁(F) = F^×`.
pub fn mu1(gamma1: &QuadExtElement, gamma_alpha: &QuadExtElement) -> Result<Phase> {
    let r = ratio_in_base(gamma_alpha, gamma1).ok_or_else(|| Error::invalid("/gamma1", "γ₁ does not lift γ"))?;
    Ok(Phase::sign(kappa(&r, &gamma1.d, gamma1.place)?))
}
