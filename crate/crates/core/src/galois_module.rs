//! Finite groups, lattices and finite modules with group actions.

use num::rational::Ratio;
use num::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{self, IMat};
use crate::linalg::{lcm, md, ModEchelon, Subquotient};

/// A finite group given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GroupTable", into = "GroupTable")]
pub struct FiniteGroup {
    names: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

/// Wire form of a group: element names and a multiplication table of indices.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupTable {
    pub elements: Vec<String>,
    pub table: Vec<Vec<usize>>,
}

impl TryFrom<GroupTable> for FiniteGroup {
    type Error = Error;
    fn try_from(t: GroupTable) -> Result<Self> {
        FiniteGroup::new(t.elements, t.table)
    }
}

impl From<FiniteGroup> for GroupTable {
    fn from(g: FiniteGroup) -> Self {
        GroupTable {
            elements: g.names,
            table: g.table,
        }
    }
}

impl FiniteGroup {
    pub fn new(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::invalid("/elements", "group must have at least one element"));
        }
        if table.len() != n {
            return Err(Error::invalid("/table", format!("expected {n} rows")));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::invalid(format!("/table/{i}"), format!("expected {n} entries")));
            }
            if let Some(j) = row.iter().position(|&x| x >= n) {
                return Err(Error::invalid(format!("/table/{i}/{j}"), "entry out of range"));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| Error::invalid("/table", "no identity element"))?;
        let mut inverse = vec![usize::MAX; n];
        for g in 0..n {
            inverse[g] = (0..n)
                .find(|&h| table[g][h] == identity && table[h][g] == identity)
                .ok_or_else(|| Error::invalid("/table", format!("element {} has no inverse", names[g])))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::invalid(
                            "/table",
                            format!("not associative at ({}, {}, {})", names[a], names[b], names[c]),
                        ));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            names,
            table,
            identity,
            inverse,
        })
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    pub fn cyclic(n: usize) -> Self {
        let names = (0..n)
            .map(|i| if i == 0 { "1".to_string() } else { format!("s{i}") })
            .collect();
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        FiniteGroup::new(names, table).expect("cyclic group")
    }

    /// Direct product, elements ordered lexicographically `(a, b)`.
    pub fn product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let (na, nb) = (a.order(), b.order());
        let mut names = Vec::new();
        for i in 0..na {
            for j in 0..nb {
                names.push(format!("({},{})", a.names[i], b.names[j]));
            }
        }
        let table = (0..na * nb)
            .map(|x| {
                (0..na * nb)
                    .map(|y| a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb))
                    .collect()
            })
            .collect();
        FiniteGroup::new(names, table).expect("product group")
    }

    pub fn klein_four() -> Self {
        let c = Self::cyclic(2);
        Self::product(&c, &c)
    }

    /// Dihedral group of order 2n, elements `r^i s^j` indexed `i + n j`.
    pub fn dihedral(n: usize) -> Self {
        let idx = |i: usize, j: usize| i % n + n * j;
        let mut names = Vec::new();
        for j in 0..2 {
            for i in 0..n {
                names.push(match (i, j) {
                    (0, 0) => "1".to_string(),
                    (i, 0) => format!("r{i}"),
                    (0, _) => "s".to_string(),
                    (i, _) => format!("r{i}s"),
                });
            }
        }
        let table = (0..2 * n)
            .map(|x| {
                let (i1, j1) = (x % n, x / n);
                (0..2 * n)
                    .map(|y| {
                        let (i2, j2) = (y % n, y / n);
                        // r^i1 s^j1 r^i2 s^j2 = r^(i1 ± i2) s^(j1+j2)
                        let i = if j1 == 0 { i1 + i2 } else { i1 + n - i2 };
                        idx(i, (j1 + j2) % 2)
                    })
                    .collect()
            })
            .collect();
        FiniteGroup::new(names, table).expect("dihedral group")
    }

    /// The groups of order at most 4, up to isomorphism.
    pub fn small_groups() -> Vec<(String, FiniteGroup)> {
        vec![
            ("1".into(), Self::trivial()),
            ("Z/2".into(), Self::cyclic(2)),
            ("Z/3".into(), Self::cyclic(3)),
            ("Z/4".into(), Self::cyclic(4)),
            ("Z/2xZ/2".into(), Self::klein_four()),
        ]
    }

    /// Builds a group from a table known to be a group table (used for
    /// generated Weyl groups, where the cubic associativity check is wasteful).
    pub(crate) fn from_trusted_table(names: Vec<String>, table: Vec<Vec<usize>>) -> Self {
        let n = names.len();
        let identity = (0..n).find(|&e| (0..n).all(|g| table[e][g] == g)).expect("identity");
        let inverse = (0..n)
            .map(|g| (0..n).find(|&h| table[g][h] == identity).expect("inverse"))
            .collect();
        FiniteGroup {
            names,
            table,
            identity,
            inverse,
        }
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    /// A generating set, found greedily.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut sub = vec![self.identity];
        for g in self.elements() {
            if sub.contains(&g) {
                continue;
            }
            gens.push(g);
            sub = self.closure(&gens);
        }
        gens
    }

    fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut sub = vec![self.identity];
        let mut i = 0;
        while i < sub.len() {
            for &g in gens {
                let h = self.mul(sub[i], g);
                if !sub.contains(&h) {
                    sub.push(h);
                }
            }
            i += 1;
        }
        sub.sort_unstable();
        sub
    }

    /// Elements written as words in `generators()`: `words[g]` is a list of
    /// generator indices whose product (left to right) is `g`.
    pub fn words(&self) -> Vec<Vec<usize>> {
        let gens = self.generators();
        let mut words: Vec<Option<Vec<usize>>> = vec![None; self.order()];
        words[self.identity] = Some(vec![]);
        let mut queue = vec![self.identity];
        let mut i = 0;
        while i < queue.len() {
            let x = queue[i];
            for (k, &g) in gens.iter().enumerate() {
                let y = self.mul(x, g);
                if words[y].is_none() {
                    let mut w = words[x].clone().unwrap();
                    w.push(k);
                    words[y] = Some(w);
                    queue.push(y);
                }
            }
            i += 1;
        }
        words.into_iter().map(|w| w.unwrap()).collect()
    }
}

/// A free ℤ-module of finite rank with a linear action of a finite group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaloisLattice {
    pub rank: usize,
    /// `action[g]` is the matrix of `g` acting on column vectors.
    pub action: Vec<IMat>,
}

impl GaloisLattice {
    pub fn new(group: &FiniteGroup, rank: usize, action: Vec<IMat>) -> Result<Self> {
        if action.len() != group.order() {
            return Err(Error::invalid("/action", format!("expected {} matrices", group.order())));
        }
        for (g, m) in action.iter().enumerate() {
            if m.len() != rank || m.iter().any(|r| r.len() != rank) {
                return Err(Error::invalid(format!("/action/{g}"), format!("expected {rank}x{rank} matrix")));
            }
            if lattice::det(m).abs() != 1 {
                return Err(Error::invalid(format!("/action/{g}"), "matrix is not invertible over ℤ"));
            }
        }
        for g in group.elements() {
            for h in group.elements() {
                if lattice::mat_mul(&action[g], &action[h]) != action[group.mul(g, h)] {
                    return Err(Error::invalid(
                        "/action",
                        format!("not a homomorphism at ({}, {})", group.name(g), group.name(h)),
                    ));
                }
            }
        }
        Ok(GaloisLattice { rank, action })
    }

    /// Trivial action.
    pub fn trivial(group: &FiniteGroup, rank: usize) -> Self {
        GaloisLattice {
            rank,
            action: vec![lattice::identity(rank); group.order()],
        }
    }

    /// The permutation lattice ℤ[Γ/H] for the left action on a list of cosets
    /// given as a permutation representation `perm[g][i]`.
    pub fn permutation(perm: &[Vec<usize>]) -> Self {
        let rank = perm.first().map_or(0, |p| p.len());
        let action = perm
            .iter()
            .map(|p| {
                let mut m = lattice::zeros(rank, rank);
                for (i, &j) in p.iter().enumerate() {
                    m[j][i] = 1;
                }
                m
            })
            .collect();
        GaloisLattice { rank, action }
    }

    /// The regular lattice ℤ[Γ].
    pub fn regular(group: &FiniteGroup) -> Self {
        let perm: Vec<Vec<usize>> = group
            .elements()
            .map(|g| group.elements().map(|h| group.mul(g, h)).collect())
            .collect();
        Self::permutation(&perm)
    }

    pub fn direct_sum(&self, other: &GaloisLattice) -> Self {
        let r = self.rank + other.rank;
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| {
                let mut m = lattice::zeros(r, r);
                for i in 0..self.rank {
                    m[i][..self.rank].copy_from_slice(&a[i]);
                }
                for i in 0..other.rank {
                    m[self.rank + i][self.rank..].copy_from_slice(&b[i]);
                }
                m
            })
            .collect();
        GaloisLattice { rank: r, action }
    }

    /// The dual lattice Hom(L, ℤ) with the contragredient action.
    pub fn dual(&self, group: &FiniteGroup) -> Self {
        let action = group
            .elements()
            .map(|g| lattice::transpose(&self.action[group.inv(g)]))
            .collect();
        GaloisLattice {
            rank: self.rank,
            action,
        }
    }

    /// `L / nL` with the same action.
    pub fn reduce_mod(&self, n: i64) -> FiniteModule {
        FiniteModule {
            factors: vec![n; self.rank],
            action: self
                .action
                .iter()
                .map(|m| m.iter().map(|r| r.iter().map(|&x| md(x, n)).collect()).collect())
                .collect(),
        }
    }

    /// Norm element `Σ_g g` as a matrix.
    pub fn norm_matrix(&self) -> IMat {
        let mut n = lattice::zeros(self.rank, self.rank);
        for m in &self.action {
            for i in 0..self.rank {
                for j in 0..self.rank {
                    n[i][j] += m[i][j];
                }
            }
        }
        n
    }
}

/// A finite abelian group `⊕ ℤ/d_i` with a group action by integer matrices
/// (entries read modulo the row's factor).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteModule {
    pub factors: Vec<i64>,
    pub action: Vec<IMat>,
}

impl FiniteModule {
    pub fn new(group: &FiniteGroup, factors: Vec<i64>, action: Vec<IMat>) -> Result<Self> {
        let k = factors.len();
        if let Some(i) = factors.iter().position(|&d| d < 1) {
            return Err(Error::invalid(format!("/factors/{i}"), "factor must be positive"));
        }
        if action.len() != group.order() {
            return Err(Error::invalid("/action", format!("expected {} matrices", group.order())));
        }
        let mut action = action;
        for (g, m) in action.iter_mut().enumerate() {
            if m.len() != k || m.iter().any(|r| r.len() != k) {
                return Err(Error::invalid(format!("/action/{g}"), format!("expected {k}x{k} matrix")));
            }
            for i in 0..k {
                for j in 0..k {
                    m[i][j] = md(m[i][j], factors[i]);
                    if md(m[i][j] * factors[j], factors[i]) != 0 {
                        return Err(Error::invalid(
                            format!("/action/{g}/{i}/{j}"),
                            "entry incompatible with the invariant factors",
                        ));
                    }
                }
            }
        }
        let module = FiniteModule { factors, action };
        let id = group.identity();
        for i in 0..k {
            let mut e = vec![0; k];
            e[i] = 1;
            if module.act(id, &e) != e {
                return Err(Error::invalid(format!("/action/{id}"), "identity must act trivially"));
            }
        }
        for g in group.elements() {
            for h in group.elements() {
                for i in 0..k {
                    let mut e = vec![0; k];
                    e[i] = 1;
                    let lhs = module.act(g, &module.act(h, &e));
                    let rhs = module.act(group.mul(g, h), &e);
                    if lhs != rhs {
                        return Err(Error::invalid(
                            "/action",
                            format!("not a homomorphism at ({}, {})", group.name(g), group.name(h)),
                        ));
                    }
                }
            }
        }
        Ok(module)
    }

    pub fn trivial_action(group: &FiniteGroup, factors: Vec<i64>) -> Self {
        let k = factors.len();
        FiniteModule {
            factors,
            action: vec![lattice::identity(k); group.order()],
        }
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> u128 {
        self.factors.iter().map(|&d| d as u128).product()
    }

    pub fn exponent(&self) -> i64 {
        self.factors.iter().fold(1, |a, &d| lcm(a, d))
    }

    pub fn reduce(&self, x: &[i64]) -> Vec<i64> {
        x.iter().zip(&self.factors).map(|(&a, &d)| md(a, d)).collect()
    }

    pub fn act(&self, g: usize, x: &[i64]) -> Vec<i64> {
        let m = &self.action[g];
        (0..self.rank())
            .map(|i| {
                let s: i128 = m[i].iter().zip(x).map(|(&a, &b)| a as i128 * b as i128).sum();
                s.rem_euclid(self.factors[i] as i128) as i64
            })
            .collect()
    }

    pub fn add(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        x.iter()
            .zip(y)
            .zip(&self.factors)
            .map(|((&a, &b), &d)| md(a + b, d))
            .collect()
    }

    pub fn neg(&self, x: &[i64]) -> Vec<i64> {
        x.iter().zip(&self.factors).map(|(&a, &d)| md(-a, d)).collect()
    }

    pub fn zero(&self) -> Vec<i64> {
        vec![0; self.rank()]
    }

    /// All elements, lexicographically.
    pub fn elements(&self) -> Vec<Vec<i64>> {
        crate::linalg::enumerate_coords(&self.factors)
    }
}

/// A homomorphism of finite modules given by an integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleMap {
    pub matrix: IMat,
}

impl ModuleMap {
    pub fn apply(&self, target: &FiniteModule, x: &[i64]) -> Vec<i64> {
        let v: Vec<i64> = self
            .matrix
            .iter()
            .map(|r| r.iter().zip(x).map(|(&a, &b)| a * b).sum())
            .collect();
        target.reduce(&v)
    }

    /// Checks well-definedness and equivariance.
    pub fn validate(&self, group: &FiniteGroup, src: &FiniteModule, dst: &FiniteModule) -> Result<()> {
        if self.matrix.len() != dst.rank() || self.matrix.iter().any(|r| r.len() != src.rank()) {
            return Err(Error::invalid("/map", "matrix shape does not match the modules"));
        }
        for j in 0..src.rank() {
            let mut e = vec![0; src.rank()];
            e[j] = src.factors[j];
            if self.apply(dst, &e).iter().any(|&x| x != 0) {
                return Err(Error::invalid(format!("/map/*/{j}"), "map is not well defined"));
            }
        }
        for g in group.elements() {
            for j in 0..src.rank() {
                let mut e = vec![0; src.rank()];
                e[j] = 1;
                if self.apply(dst, &src.act(g, &e)) != dst.act(g, &self.apply(dst, &e)) {
                    return Err(Error::invalid("/map", "map is not equivariant"));
                }
            }
        }
        Ok(())
    }
}

/// `Hom(L, ℤ/n)` with the contragredient action, in coordinates dual to the
/// standard basis of `L`.
pub fn dual_torsion_module(group: &FiniteGroup, l: &GaloisLattice, n: i64) -> Result<FiniteModule> {
    if n < 1 {
        return Err(Error::invalid("/n", "n must be positive"));
    }
    let d = l.dual(group);
    Ok(FiniteModule {
        factors: vec![n; l.rank],
        action: d
            .action
            .iter()
            .map(|m| m.iter().map(|r| r.iter().map(|&x| md(x, n)).collect()).collect())
            .collect(),
    })
}

/// The sequence `0 → K → Hom(X, ℤ/n) → Hom(Q, ℤ/n)` for a Γ-stable
/// sublattice `Q ⊂ X` with basis `q_basis`.
#[derive(Clone, Debug)]
pub struct CenterSequence {
    pub n: i64,
    /// `Hom(X, ℤ/n)`.
    pub full: FiniteModule,
    /// `Hom(Q, ℤ/n)` in coordinates dual to `q_basis`.
    pub adjoint: FiniteModule,
    /// `full → adjoint`, restriction to `Q`.
    pub projection: ModuleMap,
    /// The kernel, in invariant-factor form.
    pub kernel: FiniteModule,
    /// `kernel → full`.
    pub inclusion: ModuleMap,
    kernel_sq: Subquotient,
}

impl CenterSequence {
    /// Coordinates in `kernel` of an element of `full` lying in the kernel.
    pub fn kernel_coords(&self, x: &[i64]) -> Option<Vec<i64>> {
        if self.projection.apply(&self.adjoint, x).iter().any(|&a| a != 0) {
            return None;
        }
        self.kernel_sq.dlog(x)
    }

    /// Whether the projection hits every element of the adjoint module.
    pub fn projection_is_surjective(&self) -> bool {
        let cols: Vec<Vec<i64>> = (0..self.full.rank())
            .map(|j| {
                let mut e = vec![0; self.full.rank()];
                e[j] = 1;
                self.projection.apply(&self.adjoint, &e)
            })
            .collect();
        let ech = ModEchelon::new(&cols, &self.adjoint.factors, &vec![self.n; cols.len()]);
        ech.span_order() == self.adjoint.order()
    }
}

pub fn center_torsion_sequence(
    group: &FiniteGroup,
    x: &GaloisLattice,
    q_basis: &[Vec<i64>],
    n: i64,
) -> Result<CenterSequence> {
    let r = x.rank;
    let s = q_basis.len();
    if let Some(i) = q_basis.iter().position(|q| q.len() != r) {
        return Err(Error::invalid(format!("/q_basis/{i}"), "wrong length"));
    }
    // Q must be a Γ-stable sublattice with the given basis
    let mut q_action = Vec::with_capacity(group.order());
    for g in group.elements() {
        let mut m = lattice::zeros(s, s);
        for (j, q) in q_basis.iter().enumerate() {
            let img = lattice::mat_vec(&x.action[g], q);
            let c = lattice::solve_integer(q_basis, &img).ok_or_else(|| {
                Error::invalid("/q_basis", "sublattice is not stable under the group action")
            })?;
            for i in 0..s {
                m[i][j] = c[i];
            }
        }
        q_action.push(m);
    }
    if s > 0 && lattice::integer_kernel(&lattice::transpose(&q_basis.to_vec()), s).len() != 0 {
        return Err(Error::invalid("/q_basis", "basis vectors are linearly dependent"));
    }
    let full = dual_torsion_module(group, x, n)?;
    let qlat = GaloisLattice { rank: s, action: q_action };
    let adjoint = dual_torsion_module(group, &qlat, n)?;
    let projection = ModuleMap {
        matrix: q_basis.to_vec(),
    };
    projection.validate(group, &full, &adjoint)?;
    // kernel of the projection
    let cols: Vec<Vec<i64>> = (0..r)
        .map(|j| q_basis.iter().map(|q| md(q[j], n)).collect())
        .collect();
    let ech = ModEchelon::new(&cols, &vec![n; s], &vec![n; r]);
    let kgens: Vec<Vec<i64>> = ech.relations().to_vec();
    let sq = Subquotient::new(&vec![n; r], kgens, &[]);
    let factors = sq.invariants().to_vec();
    let k = factors.len();
    let gens: Vec<Vec<i64>> = (0..k).map(|a| sq.lift(a)).collect();
    let inclusion = ModuleMap {
        matrix: (0..r).map(|i| gens.iter().map(|g| g[i]).collect()).collect(),
    };
    let mut action = Vec::with_capacity(group.order());
    for g in group.elements() {
        let mut m = lattice::zeros(k, k);
        for (b, gen) in gens.iter().enumerate() {
            let img = full.act(g, gen);
            let c = sq.dlog(&img).ok_or_else(|| Error::check("kernel is not Γ-stable"))?;
            for a in 0..k {
                m[a][b] = c[a];
            }
        }
        action.push(m);
    }
    let kernel = FiniteModule::new(group, factors, action)?;
    Ok(CenterSequence {
        n,
        full,
        adjoint,
        projection,
        kernel,
        inclusion,
        kernel_sq: sq,
    })
}

/// A point of `Hom(X, ℚ/ℤ)`: coordinates are reduced fractions in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TorsionPoint {
    coords: Vec<(i64, i64)>,
}

impl TorsionPoint {
    pub fn new(coords: &[(i64, i64)]) -> Result<Self> {
        let mut out = Vec::with_capacity(coords.len());
        for (i, &(a, b)) in coords.iter().enumerate() {
            if b == 0 {
                return Err(Error::invalid(format!("/{i}"), "zero denominator"));
            }
            let r = Ratio::new(a, b);
            out.push(reduce01(r));
        }
        Ok(TorsionPoint { coords: out })
    }

    pub fn zero(rank: usize) -> Self {
        TorsionPoint {
            coords: vec![(0, 1); rank],
        }
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[(i64, i64)] {
        &self.coords
    }

    pub fn order(&self) -> i64 {
        self.coords.iter().fold(1, |a, &(_, d)| lcm(a, d))
    }

    /// `⟨x, s⟩ ∈ ℚ/ℤ` for an integer vector `x`.
    pub fn pair(&self, x: &[i64]) -> (i64, i64) {
        let mut s = Ratio::zero();
        for (&xi, &(a, b)) in x.iter().zip(&self.coords) {
            s += Ratio::new(xi * a, b);
        }
        reduce01(s)
    }

    /// Image under an integer matrix acting on the cocharacter side.
    pub fn map(&self, m: &IMat) -> Self {
        let coords = m
            .iter()
            .map(|row| {
                let mut s = Ratio::zero();
                for (&x, &(a, b)) in row.iter().zip(&self.coords) {
                    s += Ratio::new(x * a, b);
                }
                reduce01(s)
            })
            .collect();
        TorsionPoint { coords }
    }

    pub fn sub(&self, other: &TorsionPoint) -> Self {
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(&(a, b), &(c, d))| reduce01(Ratio::new(a, b) - Ratio::new(c, d)))
            .collect();
        TorsionPoint { coords }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&(a, _)| a == 0)
    }
}

fn reduce01(r: Ratio<i64>) -> (i64, i64) {
    let (n, d) = (*r.numer(), *r.denom());
    let (n, d) = if d < 0 { (-n, -d) } else { (n, d) };
    let n = n.rem_euclid(d);
    let g = crate::linalg::gcd(n, d).max(1);
    (n / g, d / g)
}
