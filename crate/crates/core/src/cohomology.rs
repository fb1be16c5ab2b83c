//! Inhomogeneous cochains of a finite group, their cohomology, Tate groups of
//! lattices and the degree-2 hypercohomology of a two-term complex.
//!
//! Everything is written additively with a left action:
//! `(∂c)(g₁,…,g_{i+1}) = g₁·c(g₂,…) + Σ_j (−1)^j c(…,g_j g_{j+1},…) + (−1)^{i+1} c(g₁,…,g_i)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::galois_module::{FiniteGroup, FiniteModule, GaloisLattice, ModuleMap};
use crate::lattice::{self, IMat};
use crate::linalg::{enumerate_coords, md, ModEchelon, SnfQuotient, Subquotient};

/// Largest input degree accepted by [`differential`].
pub const MAX_DEGREE: usize = 3;

/// A map `Γ^i → M`, stored densely. Cells are ordered lexicographically, so
/// the cell `(g₁,…,g_i)` has index `Σ g_j |Γ|^{i−j}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cochain {
    pub degree: usize,
    pub values: Vec<Vec<i64>>,
}

pub fn cell_count(group: &FiniteGroup, degree: usize) -> usize {
    group.order().pow(degree as u32)
}

pub fn cell_index(group: &FiniteGroup, cell: &[usize]) -> usize {
    cell.iter().fold(0, |a, &g| a * group.order() + g)
}

pub fn cell_of(group: &FiniteGroup, degree: usize, mut idx: usize) -> Vec<usize> {
    let n = group.order();
    let mut out = vec![0; degree];
    for k in (0..degree).rev() {
        out[k] = idx % n;
        idx /= n;
    }
    out
}

impl Cochain {
    pub fn zero(group: &FiniteGroup, module: &FiniteModule, degree: usize) -> Self {
        Cochain {
            degree,
            values: vec![module.zero(); cell_count(group, degree)],
        }
    }

    pub fn from_fn(
        group: &FiniteGroup,
        module: &FiniteModule,
        degree: usize,
        f: impl Fn(&[usize]) -> Vec<i64>,
    ) -> Self {
        let values = (0..cell_count(group, degree))
            .map(|i| module.reduce(&f(&cell_of(group, degree, i))))
            .collect();
        Cochain { degree, values }
    }

    pub fn at(&self, group: &FiniteGroup, cell: &[usize]) -> &[i64] {
        &self.values[cell_index(group, cell)]
    }

    pub fn add(&self, module: &FiniteModule, other: &Cochain) -> Cochain {
        assert_eq!(self.degree, other.degree);
        Cochain {
            degree: self.degree,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| module.add(a, b))
                .collect(),
        }
    }

    pub fn neg(&self, module: &FiniteModule) -> Cochain {
        Cochain {
            degree: self.degree,
            values: self.values.iter().map(|a| module.neg(a)).collect(),
        }
    }

    pub fn sub(&self, module: &FiniteModule, other: &Cochain) -> Cochain {
        self.add(module, &other.neg(module))
    }

    pub fn scale(&self, module: &FiniteModule, k: i64) -> Cochain {
        Cochain {
            degree: self.degree,
            values: self
                .values
                .iter()
                .map(|a| module.reduce(&a.iter().map(|&x| x * k).collect::<Vec<_>>()))
                .collect(),
        }
    }

    /// Applies a module map valuewise.
    pub fn map(&self, f: &ModuleMap, target: &FiniteModule) -> Cochain {
        Cochain {
            degree: self.degree,
            values: self.values.iter().map(|a| f.apply(target, a)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.iter().all(|&x| x == 0))
    }

    /// Flattened coordinates, `cell · rank + coord`.
    pub fn flatten(&self) -> Vec<i64> {
        self.values.iter().flatten().copied().collect()
    }

    pub fn unflatten(degree: usize, rank: usize, cells: usize, flat: &[i64]) -> Cochain {
        let values = if rank == 0 {
            vec![vec![]; cells]
        } else {
            flat.chunks(rank).map(|c| c.to_vec()).collect()
        };
        Cochain { degree, values }
    }

    fn check_shape(&self, group: &FiniteGroup, module: &FiniteModule) -> Result<()> {
        if self.values.len() != cell_count(group, self.degree)
            || self.values.iter().any(|v| v.len() != module.rank())
        {
            return Err(Error::invalid(
                "/values",
                format!("a degree-{} cochain needs {} values of length {}", self.degree, cell_count(group, self.degree), module.rank()),
            ));
        }
        Ok(())
    }
}

/// Moduli of the flattened cochain group `C^i(Γ, M)`.
pub fn cochain_moduli(group: &FiniteGroup, module: &FiniteModule, degree: usize) -> Vec<i64> {
    let mut out = Vec::with_capacity(cell_count(group, degree) * module.rank());
    for _ in 0..cell_count(group, degree) {
        out.extend_from_slice(&module.factors);
    }
    out
}

pub fn differential(group: &FiniteGroup, module: &FiniteModule, x: &Cochain) -> Result<Cochain> {
    if x.degree > MAX_DEGREE {
        return Err(Error::unsupported(format!(
            "differential of degree {} cochains (at most {MAX_DEGREE})",
            x.degree
        )));
    }
    x.check_shape(group, module)?;
    Ok(differential_unchecked(group, module, x))
}

fn differential_unchecked(group: &FiniteGroup, module: &FiniteModule, x: &Cochain) -> Cochain {
    let i = x.degree;
    let cells = cell_count(group, i + 1);
    let mut values = Vec::with_capacity(cells);
    let mut sub = vec![0usize; i];
    for idx in 0..cells {
        let g = cell_of(group, i + 1, idx);
        let mut acc = module.act(g[0], x.at(group, &g[1..]));
        for j in 1..=i {
            sub.clear();
            sub.extend_from_slice(&g[..j - 1]);
            sub.push(group.mul(g[j - 1], g[j]));
            sub.extend_from_slice(&g[j + 1..]);
            let v = &x.values[cell_index(group, &sub)];
            if j % 2 == 1 {
                acc = module.add(&acc, &module.neg(v));
            } else {
                acc = module.add(&acc, v);
            }
        }
        let last = x.at(group, &g[..i]);
        if (i + 1) % 2 == 1 {
            acc = module.add(&acc, &module.neg(last));
        } else {
            acc = module.add(&acc, last);
        }
        values.push(acc);
    }
    Cochain {
        degree: i + 1,
        values,
    }
}

/// Images of the basis vectors `e_{cell,coord}` of `C^i` under `∂`, flattened.
fn differential_images(group: &FiniteGroup, module: &FiniteModule, degree: usize) -> Vec<Vec<i64>> {
    let k = module.rank();
    let cells = cell_count(group, degree);
    let mut out = Vec::with_capacity(cells * k);
    for c in 0..cells {
        for j in 0..k {
            let mut x = Cochain::zero(group, module, degree);
            x.values[c][j] = 1 % module.factors[j];
            out.push(differential_unchecked(group, module, &x).flatten());
        }
    }
    out
}

/// Finds `y ∈ C^degree(Γ, M)` with `∂y = target`, if one exists.
pub fn solve_differential(group: &FiniteGroup, module: &FiniteModule, degree: usize, target: &Cochain) -> Option<Cochain> {
    if target.degree != degree + 1 {
        return None;
    }
    let images = differential_images(group, module, degree);
    let ech = ModEchelon::new(
        &images,
        &cochain_moduli(group, module, degree + 1),
        &cochain_moduli(group, module, degree),
    );
    let sol = ech.solve(&target.flatten())?;
    Some(Cochain::unflatten(degree, module.rank(), cell_count(group, degree), &sol))
}

/// Generators of `ker(∂)` given the images of basis vectors with the given
/// coefficient moduli.
fn kernel_gens(images: &[Vec<i64>], target: &[i64], coef: &[i64]) -> Vec<Vec<i64>> {
    ModEchelon::new(images, target, coef).relations().to_vec()
}

/// A finite cohomology group with explicit cocycle lifts and discrete logs.
#[derive(Clone, Debug)]
pub struct CohomologyGroup {
    pub degree: usize,
    /// Rank of each cochain value (the coefficient module's rank, or the
    /// combined ranks for hypercohomology).
    rank: usize,
    cells: usize,
    sq: Subquotient,
    /// Cocycle test: `d` applied to a flattened cochain.
    cocycle_images: ModEchelonCheck,
}

/// Cocycle membership, kept as the list of generators' images so that a
/// cochain's differential can be evaluated linearly.
#[derive(Clone, Debug)]
struct ModEchelonCheck {
    images: Vec<Vec<i64>>,
    target: Vec<i64>,
}

impl ModEchelonCheck {
    fn is_cocycle(&self, flat: &[i64]) -> bool {
        let mut acc = vec![0i128; self.target.len()];
        for (x, img) in flat.iter().zip(&self.images) {
            if *x == 0 {
                continue;
            }
            for (a, &v) in acc.iter_mut().zip(img) {
                *a += *x as i128 * v as i128;
            }
        }
        acc.iter()
            .zip(&self.target)
            .all(|(&a, &m)| a.rem_euclid(m as i128) == 0)
    }
}

impl CohomologyGroup {
    fn build(
        degree: usize,
        rank: usize,
        cells: usize,
        ambient: Vec<i64>,
        images: Vec<Vec<i64>>,
        target: Vec<i64>,
        boundaries: Vec<Vec<i64>>,
    ) -> Self {
        let z = kernel_gens(&images, &target, &ambient);
        let sq = Subquotient::new(&ambient, z, &boundaries);
        CohomologyGroup {
            degree,
            rank,
            cells,
            sq,
            cocycle_images: ModEchelonCheck { images, target },
        }
    }

    pub fn invariants(&self) -> &[i64] {
        self.sq.invariants()
    }

    pub fn order(&self) -> u128 {
        self.sq.order()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    /// The cocycle representing the `k`-th generator.
    pub fn lift(&self, k: usize) -> Cochain {
        Cochain::unflatten(self.degree, self.rank, self.cells, &self.sq.lift(k))
    }

    /// A cocycle with the given coordinates.
    pub fn element(&self, coords: &[i64]) -> Cochain {
        Cochain::unflatten(self.degree, self.rank, self.cells, &self.sq.element(coords))
    }

    pub fn is_cocycle(&self, x: &Cochain) -> bool {
        self.cocycle_images.is_cocycle(&x.flatten())
    }

    /// Coordinates of the class of `x`, or `None` if `x` is not a cocycle.
    pub fn dlog(&self, x: &Cochain) -> Option<Vec<i64>> {
        let flat = x.flatten();
        if !self.cocycle_images.is_cocycle(&flat) {
            return None;
        }
        self.sq.dlog(&flat)
    }

    /// Whether `x` is a coboundary.
    pub fn is_coboundary(&self, x: &Cochain) -> bool {
        self.dlog(x).map_or(false, |c| c.iter().all(|&a| a == 0))
    }

    /// All coordinate vectors, in lexicographic order.
    pub fn coordinates(&self) -> Vec<Vec<i64>> {
        enumerate_coords(self.invariants())
    }

    pub fn add_coords(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        a.iter()
            .zip(b)
            .zip(self.invariants())
            .map(|((&x, &y), &d)| md(x + y, d))
            .collect()
    }
}

/// `H^i(Γ, M)` for `i ≤ 2`.
pub fn cohomology_group(group: &FiniteGroup, module: &FiniteModule, degree: usize) -> Result<CohomologyGroup> {
    if degree > 2 {
        return Err(Error::unsupported(format!("cohomology in degree {degree}")));
    }
    let ambient = cochain_moduli(group, module, degree);
    let images = differential_images(group, module, degree);
    let target = cochain_moduli(group, module, degree + 1);
    let boundaries = if degree == 0 {
        vec![]
    } else {
        differential_images(group, module, degree - 1)
    };
    Ok(CohomologyGroup::build(
        degree,
        module.rank(),
        cell_count(group, degree),
        ambient,
        images,
        target,
        boundaries,
    ))
}

/// Normalizes a 2-cocycle so that `z(1,·) = z(·,1) = 0`, returning the
/// constant 1-cochain `y` with `z − ∂y` normalized.
pub fn normalize_2cocycle(group: &FiniteGroup, module: &FiniteModule, z: &Cochain) -> (Cochain, Cochain) {
    let e = group.identity();
    let m = z.at(group, &[e, e]).to_vec();
    let y = Cochain::from_fn(group, module, 1, |_| m.clone());
    let dy = differential_unchecked(group, module, &y);
    (z.sub(module, &dy), y)
}

/// Tate `Ĥ⁻¹(Γ, L) = ker(N) / I_Γ L` of a lattice.
#[derive(Clone, Debug)]
pub struct TateGroup {
    /// Basis of `ker N` as vectors in `L`.
    pub kernel_basis: Vec<Vec<i64>>,
    snf: SnfQuotient,
}

impl TateGroup {
    pub fn invariants(&self) -> &[i64] {
        &self.snf.invariants
    }

    pub fn order(&self) -> u128 {
        self.snf.order()
    }

    /// A vector of `ker N` representing the `k`-th generator.
    pub fn lift(&self, k: usize) -> Vec<i64> {
        let c = self.snf.lift(k);
        combine(&self.kernel_basis, &c, self.kernel_basis.first().map_or(0, |v| v.len()))
    }

    /// Coordinates of `x ∈ ker N`, or `None` if `N x ≠ 0`.
    pub fn dlog(&self, x: &[i64]) -> Option<Vec<i64>> {
        let c = lattice::solve_integer(&self.kernel_basis, x)?;
        Some(self.snf.coords(&c))
    }
}

fn combine(basis: &[Vec<i64>], c: &[i64], rank: usize) -> Vec<i64> {
    let mut out = vec![0; rank];
    for (b, &a) in basis.iter().zip(c) {
        for (o, &x) in out.iter_mut().zip(b) {
            *o += a * x;
        }
    }
    out
}

pub fn tate_h_minus1(group: &FiniteGroup, l: &GaloisLattice) -> TateGroup {
    let r = l.rank;
    let kernel_basis = lattice::integer_kernel(&l.norm_matrix(), r);
    let mut rels = Vec::new();
    for g in group.elements() {
        for j in 0..r {
            let mut v: Vec<i64> = l.action[g].iter().map(|row| row[j]).collect();
            v[j] -= 1;
            let c = lattice::solve_integer(&kernel_basis, &v).expect("augmentation lies in ker N");
            rels.push(c);
        }
    }
    let snf = SnfQuotient::new(kernel_basis.len(), group.order() as i64, &rels);
    TateGroup { kernel_basis, snf }
}

/// Coinvariants `H₀(Γ, L) = L / I_Γ L`, possibly infinite.
#[derive(Clone, Debug)]
pub struct Coinvariants {
    /// Invariant factors; `0` marks a free summand.
    pub factors: Vec<i64>,
    /// Row `k` gives the `k`-th coordinate functional on `L`.
    functionals: IMat,
}

impl Coinvariants {
    pub fn coords(&self, x: &[i64]) -> Vec<i64> {
        self.functionals
            .iter()
            .zip(&self.factors)
            .map(|(f, &d)| {
                let v = lattice::dot(f, x);
                if d == 0 {
                    v
                } else {
                    md(v, d)
                }
            })
            .collect()
    }

    pub fn free_rank(&self) -> usize {
        self.factors.iter().filter(|&&d| d == 0).count()
    }
}

pub fn coinvariants(group: &FiniteGroup, l: &GaloisLattice) -> Coinvariants {
    let r = l.rank;
    let mut cols: Vec<Vec<i64>> = Vec::new();
    for g in group.elements() {
        for j in 0..r {
            let mut v: Vec<i64> = l.action[g].iter().map(|row| row[j]).collect();
            v[j] -= 1;
            if v.iter().any(|&x| x != 0) {
                cols.push(v);
            }
        }
    }
    let ncols = cols.len().max(1);
    let a: IMat = (0..r)
        .map(|i| (0..ncols).map(|j| cols.get(j).map_or(0, |c| c[i])).collect())
        .collect();
    let s = lattice::smith(&a, r, ncols);
    let mut d = s.d.clone();
    d.resize(r, 0);
    let mut factors = Vec::new();
    let mut functionals = Vec::new();
    for (k, &dk) in d.iter().enumerate() {
        if dk != 1 {
            factors.push(dk);
            functionals.push(s.u[k].clone());
        }
    }
    Coinvariants { factors, functionals }
}

/// A two-term complex `A → B` of finite modules.
#[derive(Clone, Debug)]
pub struct TwoTermComplex {
    pub a: FiniteModule,
    pub b: FiniteModule,
    pub map: ModuleMap,
}

/// A hypercocycle `(z, c)`: `z ∈ Z²(Γ, A)`, `c ∈ C¹(Γ, B)` with `∂c = f(z)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperCocycle2 {
    pub z: Cochain,
    pub c: Cochain,
}

impl TwoTermComplex {
    pub fn new(group: &FiniteGroup, a: FiniteModule, b: FiniteModule, map: ModuleMap) -> Result<Self> {
        map.validate(group, &a, &b)?;
        Ok(TwoTermComplex { a, b, map })
    }

    /// `d(y₁, y₂) = (∂y₁, f(y₁) + ∂y₂)` on `C^i(A) ⊕ C^{i−1}(B)`, and
    /// `d(z, c) = (∂z, f(z) − ∂c)` one degree up. Signs alternate with the
    /// degree of the `A` component.
    pub fn d(&self, group: &FiniteGroup, x: &Cochain, y: &Cochain) -> (Cochain, Cochain) {
        let dx = differential_unchecked(group, &self.a, x);
        let fx = x.map(&self.map, &self.b);
        let dy = differential_unchecked(group, &self.b, y);
        let second = if x.degree % 2 == 1 {
            fx.add(&self.b, &dy)
        } else {
            fx.sub(&self.b, &dy)
        };
        (dx, second)
    }

    fn moduli(&self, group: &FiniteGroup, degree: usize) -> Vec<i64> {
        let mut m = cochain_moduli(group, &self.a, degree);
        if degree > 0 {
            m.extend(cochain_moduli(group, &self.b, degree - 1));
        }
        m
    }

    fn images(&self, group: &FiniteGroup, degree: usize) -> Vec<Vec<i64>> {
        let ka = self.a.rank();
        let kb = self.b.rank();
        let mut out = Vec::new();
        let zb = |g: &FiniteGroup| {
            if degree == 0 {
                None
            } else {
                Some(Cochain::zero(g, &self.b, degree - 1))
            }
        };
        for c in 0..cell_count(group, degree) {
            for j in 0..ka {
                let mut x = Cochain::zero(group, &self.a, degree);
                x.values[c][j] = 1 % self.a.factors[j];
                let y = zb(group).unwrap_or(Cochain {
                    degree: 0,
                    values: vec![],
                });
                out.push(self.d_flat(group, &x, &y));
            }
        }
        if degree > 0 {
            for c in 0..cell_count(group, degree - 1) {
                for j in 0..kb {
                    let x = Cochain::zero(group, &self.a, degree);
                    let mut y = Cochain::zero(group, &self.b, degree - 1);
                    y.values[c][j] = 1 % self.b.factors[j];
                    out.push(self.d_flat(group, &x, &y));
                }
            }
        }
        out
    }

    fn d_flat(&self, group: &FiniteGroup, x: &Cochain, y: &Cochain) -> Vec<i64> {
        let dx = differential_unchecked(group, &self.a, x);
        let fx = x.map(&self.map, &self.b);
        let second = if y.values.is_empty() {
            fx
        } else {
            let dy = differential_unchecked(group, &self.b, y);
            if x.degree % 2 == 1 {
                fx.add(&self.b, &dy)
            } else {
                fx.sub(&self.b, &dy)
            }
        };
        let mut v = dx.flatten();
        v.extend(second.flatten());
        v
    }

    /// Whether `∂z = 0` and `∂c = f(z)`.
    pub fn is_hypercocycle(&self, group: &FiniteGroup, t: &HyperCocycle2) -> bool {
        let (dz, rest) = self.d(group, &t.z, &t.c);
        dz.is_zero() && rest.is_zero()
    }

    /// Normalized representative: `z(1,·) = z(·,1) = 0` and `c(1) = 0`.
    pub fn normalize(&self, group: &FiniteGroup, t: &HyperCocycle2) -> HyperCocycle2 {
        let (z, y) = normalize_2cocycle(group, &self.a, &t.z);
        let c = t.c.sub(&self.b, &y.map(&self.map, &self.b));
        HyperCocycle2 { z, c }
    }

    /// Writes `t` as `d(y₁, y₂)` if it is a hypercoboundary.
    pub fn solve_coboundary(&self, group: &FiniteGroup, t: &HyperCocycle2) -> Option<(Cochain, Cochain)> {
        let images = self.images(group, 1);
        let target = self.moduli(group, 2);
        let coef = self.moduli(group, 1);
        let ech = ModEchelon::new(&images, &target, &coef);
        let mut flat = t.z.flatten();
        flat.extend(t.c.flatten());
        let sol = ech.solve(&flat)?;
        Some(self.split1(group, &sol))
    }

    fn split1(&self, group: &FiniteGroup, flat: &[i64]) -> (Cochain, Cochain) {
        let c1 = cell_count(group, 1);
        let na = c1 * self.a.rank();
        (
            Cochain::unflatten(1, self.a.rank(), c1, &flat[..na]),
            Cochain::unflatten(0, self.b.rank(), 1, &flat[na..]),
        )
    }

    /// Generators of the degree-1 hypercocycles `(x, b)`: `∂x = 0` and
    /// `f(x) + ∂b = 0`.
    pub fn z1_generators(&self, group: &FiniteGroup) -> Vec<(Cochain, Cochain)> {
        let images = self.images(group, 1);
        let target = self.moduli(group, 2);
        let coef = self.moduli(group, 1);
        ModEchelon::new(&images, &target, &coef)
            .relations()
            .iter()
            .map(|r| self.split1(group, r))
            .collect()
    }

    /// The coboundary `d(y₁, y₂)` of a degree-1 hypercochain.
    pub fn coboundary(&self, group: &FiniteGroup, y1: &Cochain, y2: &Cochain) -> HyperCocycle2 {
        let (z, c) = self.d(group, y1, y2);
        HyperCocycle2 { z, c }
    }
}

/// The hypercohomology group `H²(Γ, A → B)`.
#[derive(Clone, Debug)]
pub struct HyperH2 {
    pub group: CohomologyGroup,
    complex: TwoTermComplex,
    cells2: usize,
    cells1: usize,
}

impl HyperH2 {
    pub fn invariants(&self) -> &[i64] {
        self.group.invariants()
    }

    pub fn order(&self) -> u128 {
        self.group.order()
    }

    fn flat(&self, t: &HyperCocycle2) -> Vec<i64> {
        let mut v = t.z.flatten();
        v.extend(t.c.flatten());
        v
    }

    fn unflat(&self, flat: &[i64]) -> HyperCocycle2 {
        let na = self.cells2 * self.complex.a.rank();
        HyperCocycle2 {
            z: Cochain::unflatten(2, self.complex.a.rank(), self.cells2, &flat[..na]),
            c: Cochain::unflatten(1, self.complex.b.rank(), self.cells1, &flat[na..]),
        }
    }

    pub fn dlog(&self, t: &HyperCocycle2) -> Option<Vec<i64>> {
        let flat = self.flat(t);
        if !self.group.cocycle_images.is_cocycle(&flat) {
            return None;
        }
        self.group.sq.dlog(&flat)
    }

    /// Normalized hypercocycle with the given coordinates.
    pub fn element(&self, group: &FiniteGroup, coords: &[i64]) -> HyperCocycle2 {
        let t = self.unflat(&self.group.sq.element(coords));
        self.complex.normalize(group, &t)
    }

    pub fn lift(&self, group: &FiniteGroup, k: usize) -> HyperCocycle2 {
        let t = self.unflat(&self.group.sq.lift(k));
        self.complex.normalize(group, &t)
    }

    pub fn complex(&self) -> &TwoTermComplex {
        &self.complex
    }
}

pub fn hyper_h2(group: &FiniteGroup, complex: &TwoTermComplex) -> HyperH2 {
    let ambient = complex.moduli(group, 2);
    let images = complex.images(group, 2);
    let target = complex.moduli(group, 3);
    let boundaries = complex.images(group, 1);
    // flattening of hypercochains is handled by HyperH2
    let group_h = CohomologyGroup::build(2, 0, 0, ambient, images, target, boundaries);
    HyperH2 {
        group: group_h,
        complex: complex.clone(),
        cells2: cell_count(group, 2),
        cells1: cell_count(group, 1),
    }
}

/// For each `σ`, the roots `α` of `orbit` with `p(α) = +` and `p(σ⁻¹α) = −`.
///
/// `action[σ][α]` is the image of root index `α` under `σ`; `positive[α]` is
/// the gauge. The class of the resulting 1-cochain `σ ↦ Σ α∨(η_α)` in
/// `H¹(Γ, J_O)` does not depend on the gauge; see `transfer` for its value.
pub fn shapiro_1cochain(
    group: &FiniteGroup,
    action: &[Vec<usize>],
    orbit: &[usize],
    positive: &[bool],
) -> Vec<Vec<usize>> {
    group
        .elements()
        .map(|s| {
            let si = group.inv(s);
            orbit
                .iter()
                .copied()
                .filter(|&a| positive[a] && !positive[action[si][a]])
                .collect()
        })
        .collect()
}
