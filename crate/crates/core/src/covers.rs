//! Cover descriptors `t = (z, [c])` for tori and quasi-split groups.
//!
//! Everything is phrased through the complex `T̂[n] → T̂_ad[n]`, where
//! `T̂[n] = Hom(X_*(T), ℤ/n)` and `T̂_ad[n] = Hom(Q∨, ℤ/n)`. A torus is the
//! case `Q∨ = 0`, so `T̂_ad[n] = 0` and `c` is empty.

use crate::cohomology::{
    cell_count, cochain_moduli, cohomology_group, differential, hyper_h2, Cochain, CohomologyGroup, HyperCocycle2,
    HyperH2, TwoTermComplex,
};
use crate::error::{Error, Result};
use crate::galois_module::{center_torsion_sequence, CenterSequence, FiniteGroup, FiniteModule, GaloisLattice};
use crate::lattice::{self, IMat};
use crate::linalg::{lcm, md, ModEchelon, Subquotient};
use crate::rootdata::{gauge_shift, tits_cocycle, AdmissibleSet, BasedRootDatum, Gauge};

/// What is being covered.
#[derive(Clone, Debug, PartialEq)]
pub enum CoverBase {
    /// A torus, given by `X_*(S)` with its Galois action.
    Torus(GaloisLattice),
    /// A connected reductive group: the root datum of `G` and the Galois
    /// action on `X_*(T)`, which must preserve the coroot lattice.
    Group {
        datum: BasedRootDatum,
        action: Vec<IMat>,
    },
}

impl CoverBase {
    pub fn torus(lattice: GaloisLattice) -> Self {
        CoverBase::Torus(lattice)
    }

    pub fn group(group: &FiniteGroup, datum: BasedRootDatum, action: Vec<IMat>) -> Result<Self> {
        let base = CoverBase::Group { datum, action };
        base.cocharacters(group)?;
        base.sequence(group, 1)?;
        Ok(base)
    }

    /// `X_*(T)` as a Galois lattice.
    pub fn cocharacters(&self, group: &FiniteGroup) -> Result<GaloisLattice> {
        match self {
            CoverBase::Torus(l) => Ok(l.clone()),
            CoverBase::Group { datum, action } => GaloisLattice::new(group, datum.rank(), action.clone()),
        }
    }

    /// Basis of `Q∨ ⊂ X_*(T)`.
    pub fn coroot_basis(&self) -> Vec<Vec<i64>> {
        match self {
            CoverBase::Torus(_) => vec![],
            CoverBase::Group { datum, .. } => datum.simple_coroots().to_vec(),
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            CoverBase::Torus(l) => l.rank,
            CoverBase::Group { datum, .. } => datum.rank(),
        }
    }

    /// Exponent of the torsion of `π₁ = X_*/Q∨` (1 for tori).
    pub fn pi1_torsion_exponent(&self) -> i64 {
        match self {
            CoverBase::Torus(_) => 1,
            CoverBase::Group { datum, .. } => datum.pi1().torsion().iter().fold(1, |a, &d| lcm(a, d)),
        }
    }

    /// `Z(Ĝ) = 1`, i.e. `π₁(G) = 0`.
    pub fn dual_center_trivial(&self) -> bool {
        match self {
            CoverBase::Torus(l) => l.rank == 0,
            CoverBase::Group { datum, .. } => {
                let p = datum.pi1();
                p.torsion().is_empty() && p.free_rank() == 0
            }
        }
    }

    /// `0 → Z(Ĝ)[n] → T̂[n] → T̂_ad[n]`.
    pub fn sequence(&self, group: &FiniteGroup, n: i64) -> Result<CenterSequence> {
        center_torsion_sequence(group, &self.cocharacters(group)?, &self.coroot_basis(), n)
    }

    pub fn complex(&self, group: &FiniteGroup, n: i64) -> Result<TwoTermComplex> {
        let seq = self.sequence(group, n)?;
        TwoTermComplex::new(group, seq.full, seq.adjoint, seq.projection)
    }
}

/// A cover descriptor: base, level and a hypercocycle `(z, c)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverDescriptor {
    pub group: FiniteGroup,
    pub base: CoverBase,
    pub n: i64,
    pub t: HyperCocycle2,
}

impl CoverDescriptor {
    pub fn new(group: FiniteGroup, base: CoverBase, n: i64, t: HyperCocycle2) -> Result<Self> {
        if n < 1 {
            return Err(Error::invalid("/n", "level must be positive"));
        }
        let complex = base.complex(&group, n)?;
        check_shape(&group, &complex, &t)?;
        let t = HyperCocycle2 {
            z: reduce_cochain(&complex.a, &t.z),
            c: reduce_cochain(&complex.b, &t.c),
        };
        if !differential(&group, &complex.a, &t.z)?.is_zero() {
            return Err(Error::invalid("/z", "z is not a 2-cocycle"));
        }
        if !complex.is_hypercocycle(&group, &t) {
            return Err(Error::invalid("/c", "∂c does not equal the image of z"));
        }
        Ok(CoverDescriptor { group, base, n, t })
    }

    pub fn trivial(group: &FiniteGroup, base: &CoverBase, n: i64) -> Result<Self> {
        let complex = base.complex(group, n)?;
        let t = HyperCocycle2 {
            z: Cochain::zero(group, &complex.a, 2),
            c: Cochain::zero(group, &complex.b, 1),
        };
        CoverDescriptor::new(group.clone(), base.clone(), n, t)
    }

    pub fn complex(&self) -> TwoTermComplex {
        self.base.complex(&self.group, self.n).expect("validated base")
    }

    pub fn h2(&self) -> HyperH2 {
        hyper_h2(&self.group, &self.complex())
    }

    /// Coordinates of the class of `t` in `H²(Γ, T̂[n] → T̂_ad[n])`.
    pub fn class(&self) -> Vec<i64> {
        self.h2().dlog(&self.t).expect("descriptor is a hypercocycle")
    }

    pub fn is_trivial_class(&self) -> bool {
        self.class().iter().all(|&a| a == 0)
    }

    fn same_setting(&self, other: &CoverDescriptor) -> Result<()> {
        if self.n != other.n {
            return Err(Error::invalid("/n", format!("level mismatch: {} vs {}", self.n, other.n)));
        }
        if self.base != other.base || self.group != other.group {
            return Err(Error::invalid("/base", "descriptors have different bases"));
        }
        Ok(())
    }

    /// Push out along `μ_n → μ_m` for a multiple `m` of `n`.
    pub fn raise_level(&self, m: i64) -> Result<CoverDescriptor> {
        if m < 1 || m % self.n != 0 {
            return Err(Error::invalid("/m", format!("{m} is not a multiple of {}", self.n)));
        }
        let k = m / self.n;
        let scale = |x: &Cochain| Cochain {
            degree: x.degree,
            values: x.values.iter().map(|v| v.iter().map(|&a| a * k).collect()).collect(),
        };
        let t = HyperCocycle2 {
            z: scale(&self.t.z),
            c: scale(&self.t.c),
        };
        CoverDescriptor::new(self.group.clone(), self.base.clone(), m, t)
    }
}

fn check_shape(group: &FiniteGroup, complex: &TwoTermComplex, t: &HyperCocycle2) -> Result<()> {
    let ok = |x: &Cochain, deg: usize, rank: usize| {
        x.degree == deg && x.values.len() == cell_count(group, deg) && x.values.iter().all(|v| v.len() == rank)
    };
    if !ok(&t.z, 2, complex.a.rank()) {
        return Err(Error::invalid(
            "/z",
            format!("expected a 2-cochain with values of length {}", complex.a.rank()),
        ));
    }
    if !ok(&t.c, 1, complex.b.rank()) {
        return Err(Error::invalid(
            "/c",
            format!("expected a 1-cochain with values of length {}", complex.b.rank()),
        ));
    }
    Ok(())
}

fn reduce_cochain(m: &FiniteModule, x: &Cochain) -> Cochain {
    Cochain {
        degree: x.degree,
        values: x.values.iter().map(|v| m.reduce(v)).collect(),
    }
}

/// Isomorphism classes of level-`n` covers of a base.
#[derive(Clone, Debug)]
pub struct Classification {
    pub h2: HyperH2,
    /// One normalized descriptor per class, in coordinate order.
    pub representatives: Vec<(Vec<i64>, CoverDescriptor)>,
}

pub fn classify_covers(group: &FiniteGroup, base: &CoverBase, n: i64) -> Result<Classification> {
    if n < 1 {
        return Err(Error::invalid("/n", "level must be positive"));
    }
    let complex = base.complex(group, n)?;
    let h2 = hyper_h2(group, &complex);
    let mut representatives = Vec::new();
    for coords in h2.group.coordinates() {
        let t = h2.element(group, &coords);
        representatives.push((coords, CoverDescriptor::new(group.clone(), base.clone(), n, t)?));
    }
    Ok(Classification { h2, representatives })
}

/// Classification for a torus with cocharacter lattice `l`: `H²(Γ, Ŝ[n])`.
pub fn classify_torus_covers(group: &FiniteGroup, l: &GaloisLattice, n: i64) -> Result<Classification> {
    classify_covers(group, &CoverBase::Torus(l.clone()), n)
}

/// `H¹(Γ, Ŝ)[n]` for tori and `H¹(Γ, Z(Ĝ))[n]` for groups, computed as
/// `{x ∈ Z¹(T̂[n]) : x̄ ∈ B¹(T̂_ad[n])}` modulo `{∂s : s ∈ T̂[N], n∂s = 0}`
/// inside `C¹(T̂[N])`, `N = n·|Γ|`.
#[derive(Clone, Debug)]
pub struct AutomorphismGroup {
    pub n: i64,
    /// The torsion level `N` of the model.
    pub level: i64,
    sq: Subquotient,
    rank: usize,
    cells: usize,
    /// Generators of `{∂s : s ∈ T̂[N], n∂s = 0}` at level `N`.
    boundaries: Vec<Vec<i64>>,
}

impl AutomorphismGroup {
    pub fn invariants(&self) -> &[i64] {
        self.sq.invariants()
    }

    pub fn order(&self) -> u128 {
        self.sq.order()
    }

    fn up(&self, x: &Cochain) -> Vec<i64> {
        let k = self.level / self.n;
        x.flatten().iter().map(|&a| md(a * k, self.level)).collect()
    }

    fn down(&self, v: &[i64]) -> Cochain {
        let k = self.level / self.n;
        let flat: Vec<i64> = v.iter().map(|&a| {
            debug_assert_eq!(a % k, 0);
            a / k
        }).collect();
        Cochain::unflatten(1, self.rank, self.cells, &flat)
    }

    /// Coordinates of the automorphism given by a level-`n` cochain.
    pub fn dlog(&self, x: &Cochain) -> Option<Vec<i64>> {
        self.sq.dlog(&self.up(x))
    }

    /// A level-`n` cocycle representing the given coordinates.
    pub fn element(&self, coords: &[i64]) -> Cochain {
        self.down(&self.sq.element(coords))
    }

    /// Whether a level-`n` 1-cochain lies in `B¹(Γ, T̂)`.
    pub fn is_torus_coboundary(&self, x: &Cochain) -> bool {
        let ambient = self.sq.ambient().to_vec();
        let e = vec![self.level; self.boundaries.len()];
        ModEchelon::new(&self.boundaries, &ambient, &e).contains(&self.up(x))
    }
}

/// Kernel generators of the linear map sending the `l`-th basis vector
/// (with modulus `coef[l]`) to `images[l]` in `⊕ ℤ/target_i`.
fn kernel(images: &[Vec<i64>], target: &[i64], coef: &[i64]) -> Vec<Vec<i64>> {
    ModEchelon::new(images, target, coef).relations().to_vec()
}

fn basis_cochain(group: &FiniteGroup, m: &FiniteModule, degree: usize, l: usize) -> Cochain {
    let mut x = Cochain::zero(group, m, degree);
    let r = m.rank();
    x.values[l / r][l % r] = 1 % m.factors[l % r];
    x
}

pub fn automorphism_group(group: &FiniteGroup, base: &CoverBase, n: i64) -> Result<AutomorphismGroup> {
    let complex = base.complex(group, n)?;
    let level = n * group.order() as i64;
    let big = base.complex(group, level)?;
    let r = complex.a.rank();
    let cells = cell_count(group, 1);
    let k = level / n;
    let num: Vec<Vec<i64>> = complex
        .z1_generators(group)
        .into_iter()
        .map(|(x, _)| x.flatten().iter().map(|&a| md(a * k, level)).collect())
        .collect();
    // s ∈ T̂[N] with n∂s = 0
    let ta = &big.a;
    let images: Vec<Vec<i64>> = (0..r)
        .map(|l| {
            let s = basis_cochain(group, ta, 0, l);
            differential(group, ta, &s).unwrap().scale(ta, n).flatten()
        })
        .collect();
    let rels = kernel(&images, &cochain_moduli(group, ta, 1), &vec![level; r]);
    let boundaries: Vec<Vec<i64>> = rels
        .iter()
        .map(|c| {
            let s = Cochain::unflatten(0, r, 1, c);
            differential(group, ta, &s).unwrap().flatten()
        })
        .collect();
    let ambient = cochain_moduli(group, ta, 1);
    let sq = Subquotient::new(&ambient, num, &boundaries);
    Ok(AutomorphismGroup {
        n,
        level,
        sq,
        rank: r,
        cells,
        boundaries,
    })
}

/// An isomorphism `t → t′`: `∂h = z′ − z` and `h̄ = c′ − c + ∂b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsomorphismWitness {
    pub h: Cochain,
    pub b: Cochain,
}

impl IsomorphismWitness {
    pub fn verify(&self, t: &CoverDescriptor, t2: &CoverDescriptor) -> bool {
        let complex = t.complex();
        let d = complex.coboundary(&t.group, &self.h, &self.b);
        d.z == t2.t.z.sub(&complex.a, &t.t.z) && d.c == t2.t.c.sub(&complex.b, &t.t.c)
    }

    /// `h₁₂` followed by `h₂₃`.
    pub fn compose(&self, next: &IsomorphismWitness, complex: &TwoTermComplex) -> IsomorphismWitness {
        IsomorphismWitness {
            h: self.h.add(&complex.a, &next.h),
            b: self.b.add(&complex.b, &next.b),
        }
    }
}

/// One witness per automorphism, or none if the classes differ.
pub fn cover_isomorphisms(t: &CoverDescriptor, t2: &CoverDescriptor) -> Result<Vec<IsomorphismWitness>> {
    t.same_setting(t2)?;
    let complex = t.complex();
    let diff = HyperCocycle2 {
        z: t2.t.z.sub(&complex.a, &t.t.z),
        c: t2.t.c.sub(&complex.b, &t.t.c),
    };
    let Some((h0, b0)) = complex.solve_coboundary(&t.group, &diff) else {
        return Ok(vec![]);
    };
    let aut = automorphism_group(&t.group, &t.base, t.n)?;
    let gens = complex.z1_generators(&t.group);
    let mut out = Vec::new();
    for coords in crate::linalg::enumerate_coords(aut.invariants()) {
        let a = aut.element(&coords);
        // the hypercocycle (a, b_a) with a as first component
        let b = gens
            .iter()
            .find_map(|_| solve_b(&t.group, &complex, &a))
            .unwrap_or_else(|| Cochain::zero(&t.group, &complex.b, 0));
        out.push(IsomorphismWitness {
            h: h0.add(&complex.a, &a),
            b: b0.add(&complex.b, &b),
        });
    }
    Ok(out)
}

/// `b` with `f(a) + ∂b = 0` for a hyper-1-cocycle component `a`.
fn solve_b(group: &FiniteGroup, complex: &TwoTermComplex, a: &Cochain) -> Option<Cochain> {
    let target = a.map(&complex.map, &complex.b).neg(&complex.b);
    let rb = complex.b.rank();
    let images: Vec<Vec<i64>> = (0..rb)
        .map(|l| {
            let s = basis_cochain(group, &complex.b, 0, l);
            differential(group, &complex.b, &s).unwrap().flatten()
        })
        .collect();
    let coef = complex.b.factors.clone();
    let sol = ModEchelon::new(&images, &cochain_moduli(group, &complex.b, 1), &coef).solve(&target.flatten())?;
    Some(Cochain::unflatten(0, rb, 1, &sol))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaerOp {
    Sum,
    Inverse,
}

/// Baer sum or inverse of descriptors.
pub fn baer(t1: &CoverDescriptor, t2: Option<&CoverDescriptor>, op: BaerOp) -> Result<CoverDescriptor> {
    let complex = t1.complex();
    let t = match op {
        BaerOp::Sum => {
            let t2 = t2.ok_or_else(|| Error::invalid("/t2", "Baer sum needs two descriptors"))?;
            t1.same_setting(t2)?;
            HyperCocycle2 {
                z: t1.t.z.add(&complex.a, &t2.t.z),
                c: t1.t.c.add(&complex.b, &t2.t.c),
            }
        }
        BaerOp::Inverse => HyperCocycle2 {
            z: t1.t.z.neg(&complex.a),
            c: t1.t.c.neg(&complex.b),
        },
    };
    CoverDescriptor::new(t1.group.clone(), t1.base.clone(), t1.n, t)
}

/// Image of `t` in `H²(Γ, T̂ → T̂_ad) = H²(Γ, Z(Ĝ))`, evaluated at the level
/// `N = n·|Γ|·e` with `e` the exponent of the torsion of `π₁`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentObstruction {
    pub level: i64,
    pub invariants: Vec<i64>,
    pub coords: Vec<i64>,
}

impl DescentObstruction {
    /// The cover becomes split after pushing out to a large enough level.
    pub fn splits_after_pushout(&self) -> bool {
        self.coords.iter().all(|&a| a == 0)
    }
}

pub fn descent_obstruction(t: &CoverDescriptor) -> Result<DescentObstruction> {
    let level = t.n * t.group.order() as i64 * t.base.pi1_torsion_exponent();
    descent_obstruction_at(t, level)
}

pub fn descent_obstruction_at(t: &CoverDescriptor, level: i64) -> Result<DescentObstruction> {
    let up = t.raise_level(level)?;
    let h2 = up.h2();
    Ok(DescentObstruction {
        level,
        invariants: h2.invariants().to_vec(),
        coords: h2.dlog(&up.t).expect("hypercocycle"),
    })
}

/// Covers obtained from characters of `π̃₁`: the group `H²(Γ, Z(Ĝ)[n])` and
/// its quotient by `∂` of `H̃¹(Γ, Z(Ĝ))[n]`.
#[derive(Clone, Debug)]
pub struct TildePi1Classes {
    pub h2_center: CohomologyGroup,
    pub quotient_invariants: Vec<i64>,
    pub quotient_order: u128,
    pub level: i64,
}

pub fn tilde_pi1_classes(group: &FiniteGroup, base: &CoverBase, n: i64) -> Result<TildePi1Classes> {
    let seq_n = base.sequence(group, n)?;
    let h2_center = cohomology_group(group, &seq_n.kernel, 2)?;
    let level = n * group.order() as i64 * base.pi1_torsion_exponent();
    let big = base.sequence(group, level)?;
    let (ta, tb) = (&big.full, &big.adjoint);
    let r = ta.rank();
    let k = level / n;
    // Z²(Γ, Z(Ĝ)[n]) inside C²(T̂[n])
    let small = &seq_n.full;
    let c2 = cell_count(group, 2);
    let z2_images: Vec<Vec<i64>> = (0..c2 * r)
        .map(|l| {
            let x = basis_cochain(group, small, 2, l);
            let mut v = x.map(&seq_n.projection, &seq_n.adjoint).flatten();
            v.extend(differential(group, small, &x).unwrap().flatten());
            v
        })
        .collect();
    let mut target = cochain_moduli(group, &seq_n.adjoint, 2);
    target.extend(cochain_moduli(group, small, 3));
    let num = kernel(&z2_images, &target, &cochain_moduli(group, small, 2));
    // (h, s) with h ∈ C¹(Z[N]), s ∈ Z[N], n·h = ∂s; contributes ∂h
    let c1 = cell_count(group, 1);
    let mut images = Vec::new();
    let mut tgt = cochain_moduli(group, tb, 1);
    tgt.extend(cochain_moduli(group, tb, 0));
    tgt.extend(cochain_moduli(group, ta, 1));
    for l in 0..c1 * r {
        let h = basis_cochain(group, ta, 1, l);
        let mut v = h.map(&big.projection, tb).flatten();
        v.extend(vec![0; tb.rank()]);
        v.extend(h.scale(ta, n).flatten());
        images.push(v);
    }
    for l in 0..r {
        let s = basis_cochain(group, ta, 0, l);
        let mut v = vec![0; c1 * tb.rank()];
        v.extend(s.map(&big.projection, tb).flatten());
        v.extend(differential(group, ta, &s).unwrap().neg(ta).flatten());
        images.push(v);
    }
    let rels = kernel(&images, &tgt, &vec![level; images.len()]);
    let mut den = Vec::new();
    for rel in rels {
        let h = Cochain::unflatten(1, r, c1, &rel[..c1 * r]);
        let dh = differential(group, ta, &h).unwrap().flatten();
        den.push(
            dh.iter()
                .map(|&a| {
                    debug_assert_eq!(a % k, 0);
                    a / k
                })
                .collect(),
        );
    }
    let sq = Subquotient::new(&cochain_moduli(group, small, 2), num, &den);
    Ok(TildePi1Classes {
        h2_center,
        quotient_invariants: sq.invariants().to_vec(),
        quotient_order: sq.order(),
        level,
    })
}

/// The double cover attached to an admissible set `R → X*(T)`, a gauge and
/// an α-splitting `c_p` with `∂c_p = z̄_p`, together with the descriptors and
/// gauge-shift witnesses for other gauges.
#[derive(Clone, Debug)]
pub struct AdmissibleCover {
    pub descriptor: CoverDescriptor,
    pub gauge: Gauge,
    pub shifts: Vec<GaugeShiftLink>,
    /// `s_{r/q} + s_{q/p} − s_{r/p} ∈ B¹(Γ, T̂)` for every triple checked.
    pub coherent: bool,
}

#[derive(Clone, Debug)]
pub struct GaugeShiftLink {
    pub gauge: Gauge,
    pub shift: Cochain,
    pub descriptor: CoverDescriptor,
}

pub fn double_cover_from_admissible(
    group: &FiniteGroup,
    base: &CoverBase,
    set: &AdmissibleSet,
    p: &Gauge,
    c_p: Option<Cochain>,
    others: &[Gauge],
) -> Result<AdmissibleCover> {
    let x = base.cocharacters(group)?;
    if set.lattice != x.dual(group) {
        return Err(Error::invalid("/set/lattice", "admissible set must map to X*(T)"));
    }
    let complex = base.complex(group, 2)?;
    let z = tits_cocycle(group, set, p);
    let c = match c_p {
        Some(c) => c,
        None if complex.b.rank() == 0 => Cochain::zero(group, &complex.b, 1),
        None => return Err(Error::invalid("/c_p", "a splitting cochain is required for groups")),
    };
    let descriptor = CoverDescriptor::new(group.clone(), base.clone(), 2, HyperCocycle2 { z, c })
        .map_err(|e| match e {
            Error::Invalid { path, msg } if path == "/c" => Error::invalid("/c_p", format!("splitting inconsistency: {msg}")),
            other => other,
        })?;
    let aut = automorphism_group(group, base, 2)?;
    let mut shifts = Vec::new();
    for q in others {
        let s = gauge_shift(group, set, p, q);
        let t = HyperCocycle2 {
            z: tits_cocycle(group, set, q),
            c: descriptor.t.c.add(&complex.b, &s.map(&complex.map, &complex.b)),
        };
        let d = CoverDescriptor::new(group.clone(), base.clone(), 2, t)?;
        shifts.push(GaugeShiftLink {
            gauge: q.clone(),
            shift: s,
            descriptor: d,
        });
    }
    let mut coherent = true;
    for a in others {
        for b in others {
            let s_ba = gauge_shift(group, set, a, b);
            let s_ap = gauge_shift(group, set, p, a);
            let s_bp = gauge_shift(group, set, p, b);
            let defect = s_ba.add(&complex.a, &s_ap).sub(&complex.a, &s_bp);
            coherent &= aut.is_torus_coboundary(&defect);
        }
    }
    Ok(AdmissibleCover {
        descriptor,
        gauge: p.clone(),
        shifts,
        coherent,
    })
}

/// Brute-force count of `Z²(Γ, M) / B²(Γ, M)` by enumerating all cochains.
pub fn brute_force_h2_order(group: &FiniteGroup, m: &FiniteModule) -> u128 {
    let moduli = cochain_moduli(group, m, 2);
    let mut cocycles = 0u128;
    let total: u128 = moduli.iter().map(|&d| d as u128).product();
    let mut v = vec![0i64; moduli.len()];
    let c2 = cell_count(group, 2);
    for _ in 0..total {
        let z = Cochain::unflatten(2, m.rank(), c2, &v);
        if differential(group, m, &z).unwrap().is_zero() {
            cocycles += 1;
        }
        for (x, &d) in v.iter_mut().zip(&moduli) {
            *x += 1;
            if *x < d {
                break;
            }
            *x = 0;
        }
    }
    let mut bset = std::collections::HashSet::new();
    let m1 = cochain_moduli(group, m, 1);
    let total1: u128 = m1.iter().map(|&d| d as u128).product();
    let mut w = vec![0i64; m1.len()];
    let c1 = cell_count(group, 1);
    for _ in 0..total1 {
        let y = Cochain::unflatten(1, m.rank(), c1, &w);
        bset.insert(differential(group, m, &y).unwrap().flatten());
        for (x, &d) in w.iter_mut().zip(&m1) {
            *x += 1;
            if *x < d {
                break;
            }
            *x = 0;
        }
    }
    cocycles / bset.len() as u128
}

/// The image of `B¹(Γ, Ŝ) ∩ C¹(Γ, Ŝ[n])` found by enumerating `s ∈ Ŝ[n|Γ|]`,
/// and `B¹(Γ, Ŝ[n])`, both as sets of level-`n` cochains.
pub fn enumerate_torsion_coboundaries(
    group: &FiniteGroup,
    l: &GaloisLattice,
    n: i64,
) -> Result<(std::collections::BTreeSet<Vec<i64>>, std::collections::BTreeSet<Vec<i64>>)> {
    let big_n = n * group.order() as i64;
    let k = big_n / n;
    let mbig = crate::galois_module::dual_torsion_module(group, l, big_n)?;
    let msmall = crate::galois_module::dual_torsion_module(group, l, n)?;
    let mut big = std::collections::BTreeSet::new();
    for s in mbig.elements() {
        let ds = differential(group, &mbig, &Cochain { degree: 0, values: vec![s] })?.flatten();
        if ds.iter().all(|&a| a % k == 0) {
            big.insert(ds.iter().map(|&a| a / k).collect());
        }
    }
    let mut small = std::collections::BTreeSet::new();
    for s in msmall.elements() {
        small.insert(differential(group, &msmall, &Cochain { degree: 0, values: vec![s] })?.flatten());
    }
    Ok((big, small))
}

/// The 1-dimensional torus split by a quadratic extension, `X_* = ℤ` with
/// `σ = −1`.
pub fn anisotropic_torus() -> (FiniteGroup, GaloisLattice) {
    let g = FiniteGroup::cyclic(2);
    let l = GaloisLattice::new(&g, 1, vec![vec![vec![1]], vec![vec![-1]]]).expect("lattice");
    (g, l)
}

/// `Res_{E/F} G_m` for `Γ_{E/F} = group`: the regular permutation lattice.
pub fn induced_torus(group: &FiniteGroup) -> GaloisLattice {
    GaloisLattice::regular(group)
}

/// `Ind_{Γ'}^{Γ} ℤ`: the permutation lattice on the left cosets of `Γ'`.
pub fn induced_lattice(group: &FiniteGroup, subgroup: &[usize]) -> Result<GaloisLattice> {
    let closed = subgroup.contains(&group.identity())
        && subgroup.iter().all(|&a| subgroup.iter().all(|&b| subgroup.contains(&group.mul(a, b))));
    if !closed {
        return Err(Error::invalid("/subgroup", "not a subgroup"));
    }
    let coset = |g: usize| -> Vec<usize> {
        let mut c: Vec<usize> = subgroup.iter().map(|&h| group.mul(g, h)).collect();
        c.sort_unstable();
        c
    };
    let mut cosets: Vec<Vec<usize>> = Vec::new();
    for g in group.elements() {
        let c = coset(g);
        if !cosets.contains(&c) {
            cosets.push(c);
        }
    }
    let perm: Vec<Vec<usize>> = group
        .elements()
        .map(|g| {
            cosets
                .iter()
                .map(|c| cosets.iter().position(|d| *d == coset(group.mul(g, c[0]))).expect("coset"))
                .collect()
        })
        .collect();
    Ok(GaloisLattice::permutation(&perm))
}

/// The map `H¹(Γ, Ŝ[n]) → H¹(Γ, Ŝ)[n]`, by enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionLifting {
    pub n: i64,
    /// `|H¹(Γ, Ŝ[n])|`.
    pub source_order: u128,
    /// `|H¹(Γ, Ŝ)[n]|` in the torsion model.
    pub target_order: u128,
    /// Classes of `H¹(Γ, Ŝ[n])` that die in `H¹(Γ, Ŝ)`.
    pub kernel_order: u128,
}

impl TorsionLifting {
    pub fn injective(&self) -> bool {
        self.kernel_order == 1
    }

    pub fn surjective(&self) -> bool {
        self.source_order / self.kernel_order == self.target_order
    }

    pub fn bijective(&self) -> bool {
        self.injective() && self.surjective()
    }
}

pub fn torsion_lifting(group: &FiniteGroup, l: &GaloisLattice, n: i64) -> Result<TorsionLifting> {
    let m = crate::galois_module::dual_torsion_module(group, l, n)?;
    let source = cohomology_group(group, &m, 1)?.order();
    let (big, small) = enumerate_torsion_coboundaries(group, l, n)?;
    let target = automorphism_group(group, &CoverBase::Torus(l.clone()), n)?.order();
    Ok(TorsionLifting {
        n,
        source_order: source,
        target_order: target,
        kernel_order: (big.len() / small.len()) as u128,
    })
}

/// Whether a matrix permutes the given vectors.
pub fn permutes(m: &IMat, vs: &[Vec<i64>]) -> bool {
    vs.iter().all(|v| vs.contains(&lattice::mat_vec(m, v)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn anisotropic_torus_has_two_classes() {
        let (g, l) = anisotropic_torus();
        let cl = classify_torus_covers(&g, &l, 2).unwrap();
        assert_eq!(cl.h2.order(), 2);
        assert_eq!(cl.representatives.len(), 2);
        let m = crate::galois_module::dual_torsion_module(&g, &l, 2).unwrap();
        assert_eq!(brute_force_h2_order(&g, &m), 2);
    }

    #[test]
    fn split_torus_has_one_class() {
        let g = FiniteGroup::trivial();
        for n in 1..=4 {
            let cl = classify_torus_covers(&g, &GaloisLattice::trivial(&g, 2), n).unwrap();
            assert_eq!(cl.h2.order(), 1);
        }
        // trivial action of a nontrivial group: H²(ℤ/2, ℤ/n) = ℤ/gcd(2, n)
        let g = FiniteGroup::cyclic(2);
        for n in 1..=4 {
            let cl = classify_torus_covers(&g, &GaloisLattice::trivial(&g, 1), n).unwrap();
            let m = crate::galois_module::dual_torsion_module(&g, &GaloisLattice::trivial(&g, 1), n).unwrap();
            assert_eq!(cl.h2.order(), brute_force_h2_order(&g, &m));
            assert_eq!(cl.h2.order(), crate::linalg::gcd(2, n) as u128);
        }
    }

    #[test]
    fn anisotropic_isomorphisms_and_baer() {
        let (g, l) = anisotropic_torus();
        let cl = classify_torus_covers(&g, &l, 2).unwrap();
        let t0 = &cl.representatives[0].1;
        let t1 = &cl.representatives[1].1;
        assert!(cover_isomorphisms(t0, t1).unwrap().is_empty());
        // H¹(Γ, Ŝ[2]) = ℤ/2 dies in H¹(Γ, Ŝ): the image of π₀(Ŝ^Γ) = μ₂
        let aut = automorphism_group(&g, &t0.base, 2).unwrap();
        assert_eq!(aut.order(), 1);
        let m = crate::galois_module::dual_torsion_module(&g, &l, 2).unwrap();
        assert_eq!(cohomology_group(&g, &m, 1).unwrap().order(), 2);
        let w = cover_isomorphisms(t1, t1).unwrap();
        assert_eq!(w.len(), 1);
        assert!(w.iter().all(|x| x.verify(t1, t1)));
        let s = baer(t1, Some(t1), BaerOp::Sum).unwrap();
        assert!(s.is_trivial_class());
        assert_eq!(baer(t1, None, BaerOp::Inverse).unwrap().class(), t1.class());
    }

    #[test]
    fn split_torus_automorphisms_are_homs_to_mu_n() {
        let g = FiniteGroup::cyclic(2);
        let base = CoverBase::Torus(GaloisLattice::trivial(&g, 1));
        assert_eq!(automorphism_group(&g, &base, 2).unwrap().order(), 2);
        assert_eq!(automorphism_group(&g, &base, 3).unwrap().order(), 1);
        assert_eq!(automorphism_group(&g, &base, 4).unwrap().order(), 2);
    }

    #[test]
    fn induced_torus_lifting_is_bijective() {
        for g in [FiniteGroup::cyclic(2), FiniteGroup::cyclic(3), FiniteGroup::klein_four()] {
            let l = induced_torus(&g);
            for n in 2..=3 {
                let (big, small) = enumerate_torsion_coboundaries(&g, &l, n).unwrap();
                assert_eq!(big, small);
            }
        }
        let (g, l) = anisotropic_torus();
        let (big, small) = enumerate_torsion_coboundaries(&g, &l, 2).unwrap();
        assert!(big.len() > small.len());
    }

    #[test]
    fn adjoint_group_has_no_automorphisms() {
        let g = FiniteGroup::cyclic(2);
        // simply connected G has X_* = Q∨, hence Z(Ĝ) = 1
        let rd = BasedRootDatum::preset("C2.sc").unwrap();
        let base = CoverBase::group(&g, rd, vec![lattice::identity(2); 2]).unwrap();
        assert!(base.dual_center_trivial());
        assert_eq!(automorphism_group(&g, &base, 2).unwrap().order(), 1);
    }

    #[test]
    fn pgl2_obstruction_is_nontrivial_for_nontrivial_class() {
        // G = PGL2: X_* = ℤ, Q∨ = 2ℤ, so Z(Ĝ) = μ₂.
        let g = FiniteGroup::cyclic(2);
        let rd = BasedRootDatum::preset("A1.ad").unwrap();
        let base = CoverBase::group(&g, rd, vec![vec![vec![1]], vec![vec![-1]]]).unwrap();
        let cl = classify_covers(&g, &base, 2).unwrap();
        // T̂[2] → T̂_ad[2] is zero here, so H² of the complex is H²(T̂[2]) ⊕ H¹(T̂_ad[2])
        assert!(!base.sequence(&g, 2).unwrap().projection_is_surjective());
        assert_eq!(cl.h2.order(), 4);
        // at level 4 the projection onto T̂_ad[2]-data is surjective
        let seq4 = base.sequence(&g, 4).unwrap();
        let center = base.sequence(&g, 2).unwrap().kernel;
        assert_eq!(cohomology_group(&g, &center, 2).unwrap().order(), 2);
        let _ = seq4;
        let mut nontrivial = 0;
        for (coords, t) in &cl.representatives {
            let o = descent_obstruction(t).unwrap();
            assert_eq!(o, descent_obstruction_at(t, 2 * o.level).map(|mut x| {
                x.level = o.level;
                x
            }).unwrap());
            if coords.iter().any(|&a| a != 0) {
                nontrivial += usize::from(!o.splits_after_pushout());
            } else {
                assert!(o.splits_after_pushout());
            }
        }
        assert!(nontrivial > 0);
    }

    #[test]
    fn level_raising_can_identify_classes() {
        let g = FiniteGroup::cyclic(2);
        let cl = classify_torus_covers(&g, &GaloisLattice::trivial(&g, 1), 2).unwrap();
        let t1 = cl.representatives[1].1.raise_level(4).unwrap();
        assert!(t1.is_trivial_class());
        // the anisotropic class survives every finite level over Γ_{E/F}
        let (g, l) = anisotropic_torus();
        let cl = classify_torus_covers(&g, &l, 2).unwrap();
        for m in [4, 6, 8] {
            assert!(!cl.representatives[1].1.raise_level(m).unwrap().is_trivial_class());
        }
    }

    #[test]
    fn admissible_double_cover_of_anisotropic_torus() {
        let (g, l) = anisotropic_torus();
        let rd = BasedRootDatum::preset("A1.sc").unwrap();
        // R = {±α} with σα = −α, mapping to X*(S) = ℤ
        let set = AdmissibleSet::new(&g, vec![vec![0, 1], vec![1, 0]], vec![1, 0], vec![vec![1], vec![-1]], l.dual(&g))
            .unwrap();
        let _ = rd;
        let p = Gauge::from_transversal(&set, &[true]);
        let q = Gauge::from_transversal(&set, &[false]);
        let base = CoverBase::Torus(l);
        let cov = double_cover_from_admissible(&g, &base, &set, &p, None, &[p.clone(), q]).unwrap();
        assert!(!cov.descriptor.is_trivial_class());
        assert!(cov.coherent);
        for link in &cov.shifts {
            let w = cover_isomorphisms(&cov.descriptor, &link.descriptor).unwrap();
            assert!(!w.is_empty());
        }
    }

    #[test]
    fn tilde_pi1_quotient_of_torus() {
        let (g, l) = anisotropic_torus();
        let r = tilde_pi1_classes(&g, &CoverBase::Torus(l), 2).unwrap();
        assert_eq!(r.h2_center.order(), 2);
        assert!(r.quotient_order <= 2);
    }
}
