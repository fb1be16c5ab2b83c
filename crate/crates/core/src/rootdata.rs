//! Based root data, Weyl and Tits groups, Chevalley structure constants,
//! admissible sets, gauges and Tits cocycles.
//!
//! Both lattices are `ℤ^r` and the pairing `⟨x, y⟩` is the dot product.

use std::collections::HashMap;

use num::rational::Ratio;
use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cohomology::Cochain;
use crate::error::{Error, Result};
use crate::galois_module::{FiniteGroup, FiniteModule, GaloisLattice};
use crate::lattice::{self, dot, IMat};
use crate::linalg::md;

/// Largest rank handled by the Weyl group and structure-constant routines.
pub const MAX_RANK: usize = 8;
const MAX_ROOTS: usize = 1000;

/// Wire form of a based root datum.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RootDatumSpec {
    pub rank: usize,
    pub simple_roots: Vec<Vec<i64>>,
    pub simple_coroots: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "RootDatumSpec", into = "RootDatumSpec")]
pub struct BasedRootDatum {
    rank: usize,
    simple_roots: Vec<Vec<i64>>,
    simple_coroots: Vec<Vec<i64>>,
    cartan: IMat,
    roots: Vec<Vec<i64>>,
    coroots: Vec<Vec<i64>>,
    /// Coordinates of each root in the simple roots.
    coords: Vec<Vec<i64>>,
    /// Coordinates of each coroot in the simple coroots.
    co_coords: Vec<Vec<i64>>,
    npos: usize,
    by_coords: HashMap<Vec<i64>, usize>,
    by_root: HashMap<Vec<i64>, usize>,
    by_coroot: HashMap<Vec<i64>, usize>,
}

impl PartialEq for BasedRootDatum {
    fn eq(&self, o: &Self) -> bool {
        self.rank == o.rank && self.simple_roots == o.simple_roots && self.simple_coroots == o.simple_coroots
    }
}

impl TryFrom<RootDatumSpec> for BasedRootDatum {
    type Error = Error;
    fn try_from(s: RootDatumSpec) -> Result<Self> {
        BasedRootDatum::new(s.rank, s.simple_roots, s.simple_coroots)
    }
}

impl From<BasedRootDatum> for RootDatumSpec {
    fn from(r: BasedRootDatum) -> Self {
        RootDatumSpec {
            rank: r.rank,
            simple_roots: r.simple_roots,
            simple_coroots: r.simple_coroots,
        }
    }
}

impl BasedRootDatum {
    pub fn new(rank: usize, simple_roots: Vec<Vec<i64>>, simple_coroots: Vec<Vec<i64>>) -> Result<Self> {
        let l = simple_roots.len();
        if simple_coroots.len() != l {
            return Err(Error::invalid("/simple_coroots", "need one coroot per simple root"));
        }
        if l > rank {
            return Err(Error::invalid("/simple_roots", "more simple roots than the rank"));
        }
        for (name, vs) in [("simple_roots", &simple_roots), ("simple_coroots", &simple_coroots)] {
            if let Some(i) = vs.iter().position(|v| v.len() != rank) {
                return Err(Error::invalid(format!("/{name}/{i}"), format!("expected length {rank}")));
            }
        }
        let cartan: IMat = (0..l)
            .map(|i| (0..l).map(|j| dot(&simple_roots[i], &simple_coroots[j])).collect())
            .collect();
        for i in 0..l {
            if cartan[i][i] != 2 {
                return Err(Error::invalid(format!("/simple_coroots/{i}"), "⟨α, α∨⟩ must be 2"));
            }
            for j in 0..l {
                if i != j && (cartan[i][j] > 0 || (cartan[i][j] == 0) != (cartan[j][i] == 0)) {
                    return Err(Error::invalid(
                        format!("/simple_roots/{i}"),
                        format!("pairings with simple root {j} do not form a Cartan matrix"),
                    ));
                }
            }
        }
        if lattice::det(&cartan) <= 0 {
            return Err(Error::invalid("/simple_roots", "Cartan matrix is not of finite type"));
        }
        // closure under simple reflections, tracking (root coords, coroot coords)
        let mut pairs: Vec<(Vec<i64>, Vec<i64>)> = Vec::new();
        let mut seen: HashMap<Vec<i64>, usize> = HashMap::new();
        for i in 0..l {
            let mut e = vec![0; l];
            e[i] = 1;
            seen.insert(e.clone(), pairs.len());
            pairs.push((e.clone(), e));
        }
        let mut k = 0;
        while k < pairs.len() {
            for j in 0..l {
                let (c, d) = pairs[k].clone();
                let pc: i64 = (0..l).map(|i| c[i] * cartan[i][j]).sum();
                let pd: i64 = (0..l).map(|i| cartan[j][i] * d[i]).sum();
                let mut c2 = c.clone();
                c2[j] -= pc;
                let mut d2 = d.clone();
                d2[j] -= pd;
                if !seen.contains_key(&c2) {
                    seen.insert(c2.clone(), pairs.len());
                    pairs.push((c2, d2));
                    if pairs.len() > MAX_ROOTS {
                        return Err(Error::invalid("/simple_roots", "root system is not finite"));
                    }
                }
            }
            k += 1;
        }
        let mut pos: Vec<(Vec<i64>, Vec<i64>)> = pairs
            .into_iter()
            .filter(|(c, _)| c.iter().all(|&x| x >= 0))
            .collect();
        pos.sort_by(|a, b| {
            let ha: i64 = a.0.iter().sum();
            let hb: i64 = b.0.iter().sum();
            ha.cmp(&hb).then_with(|| b.0.cmp(&a.0))
        });
        let npos = pos.len();
        let mut coords = Vec::with_capacity(2 * npos);
        let mut co_coords = Vec::with_capacity(2 * npos);
        for (c, d) in &pos {
            coords.push(c.clone());
            co_coords.push(d.clone());
        }
        for (c, d) in &pos {
            coords.push(c.iter().map(|x| -x).collect());
            co_coords.push(d.iter().map(|x| -x).collect());
        }
        let comb = |basis: &[Vec<i64>], c: &[i64]| -> Vec<i64> {
            let mut v = vec![0; rank];
            for (b, &a) in basis.iter().zip(c) {
                for (x, &y) in v.iter_mut().zip(b) {
                    *x += a * y;
                }
            }
            v
        };
        let roots: Vec<Vec<i64>> = coords.iter().map(|c| comb(&simple_roots, c)).collect();
        let coroots: Vec<Vec<i64>> = co_coords.iter().map(|d| comb(&simple_coroots, d)).collect();
        let by_coords = coords.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        let by_root: HashMap<Vec<i64>, usize> = roots.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        let by_coroot: HashMap<Vec<i64>, usize> = coroots.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        if by_root.len() != roots.len() || by_coroot.len() != coroots.len() {
            return Err(Error::invalid("/simple_roots", "simple roots are linearly dependent"));
        }
        Ok(BasedRootDatum {
            rank,
            simple_roots,
            simple_coroots,
            cartan,
            roots,
            coroots,
            coords,
            co_coords,
            npos,
            by_coords,
            by_root,
            by_coroot,
        })
    }

    /// A torus datum of the given rank (no roots).
    pub fn torus(rank: usize) -> Self {
        BasedRootDatum::new(rank, vec![], vec![]).expect("torus")
    }

    /// Simply connected datum of a Cartan matrix `C[i][j] = ⟨α_i, α_j∨⟩`.
    pub fn simply_connected(cartan: &IMat) -> Result<Self> {
        let l = cartan.len();
        BasedRootDatum::new(l, cartan.clone(), lattice::identity(l))
    }

    /// Adjoint datum of a Cartan matrix.
    pub fn adjoint(cartan: &IMat) -> Result<Self> {
        let l = cartan.len();
        BasedRootDatum::new(l, lattice::identity(l), lattice::transpose(cartan))
    }

    /// Named presets: `A1.sc`, `C2.ad`, `A1xA1.sc`, `G2.sc`, … and
    /// `A1xA1 in C2` (the long-root subsystem inside the simply connected C2
    /// datum).
    pub fn preset(name: &str) -> Result<Self> {
        if name == "A1xA1 in C2" {
            let c2 = Self::preset("C2.sc")?;
            let long: Vec<usize> = (0..c2.npos)
                .filter(|&a| c2.norm2()[a] == *c2.norm2().iter().max().unwrap())
                .collect();
            let sr = long.iter().map(|&a| c2.roots[a].clone()).collect();
            let sc = long.iter().map(|&a| c2.coroots[a].clone()).collect();
            return BasedRootDatum::new(2, sr, sc);
        }
        let (ty, form) = name
            .rsplit_once('.')
            .ok_or_else(|| Error::invalid("/preset", format!("unknown preset {name:?}")))?;
        let c = cartan_matrix(ty)?;
        match form {
            "sc" => Self::simply_connected(&c),
            "ad" => Self::adjoint(&c),
            _ => Err(Error::invalid("/preset", format!("unknown isogeny form {form:?}"))),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn semisimple_rank(&self) -> usize {
        self.simple_roots.len()
    }

    pub fn cartan(&self) -> &IMat {
        &self.cartan
    }

    pub fn simple_roots(&self) -> &[Vec<i64>] {
        &self.simple_roots
    }

    pub fn simple_coroots(&self) -> &[Vec<i64>] {
        &self.simple_coroots
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn num_positive(&self) -> usize {
        self.npos
    }

    pub fn root(&self, a: usize) -> &[i64] {
        &self.roots[a]
    }

    pub fn coroot(&self, a: usize) -> &[i64] {
        &self.coroots[a]
    }

    pub fn roots(&self) -> &[Vec<i64>] {
        &self.roots
    }

    pub fn coroots(&self) -> &[Vec<i64>] {
        &self.coroots
    }

    pub fn coords(&self, a: usize) -> &[i64] {
        &self.coords[a]
    }

    pub fn coroot_coords(&self, a: usize) -> &[i64] {
        &self.co_coords[a]
    }

    pub fn is_positive(&self, a: usize) -> bool {
        a < self.npos
    }

    pub fn neg(&self, a: usize) -> usize {
        if a < self.npos {
            a + self.npos
        } else {
            a - self.npos
        }
    }

    /// Index of the simple root `α_i`.
    pub fn simple_index(&self, i: usize) -> usize {
        let mut e = vec![0; self.semisimple_rank()];
        e[i] = 1;
        self.by_coords[&e]
    }

    pub fn height(&self, a: usize) -> i64 {
        self.coords[a].iter().sum()
    }

    pub fn index_of_root(&self, x: &[i64]) -> Option<usize> {
        self.by_root.get(x).copied()
    }

    pub fn index_of_coroot(&self, y: &[i64]) -> Option<usize> {
        self.by_coroot.get(y).copied()
    }

    pub fn index_of_coords(&self, c: &[i64]) -> Option<usize> {
        self.by_coords.get(c).copied()
    }

    /// Index of `a + b` if it is a root.
    pub fn sum(&self, a: usize, b: usize) -> Option<usize> {
        let c: Vec<i64> = self.coords[a].iter().zip(&self.coords[b]).map(|(x, y)| x + y).collect();
        self.index_of_coords(&c)
    }

    /// `⟨α, β∨⟩`.
    pub fn pairing(&self, a: usize, b: usize) -> i64 {
        dot(&self.roots[a], &self.coroots[b])
    }

    /// The dual datum (roots and coroots exchanged).
    pub fn dual(&self) -> Self {
        BasedRootDatum::new(self.rank, self.simple_coroots.clone(), self.simple_roots.clone()).expect("dual datum")
    }

    /// Connected components of the Dynkin diagram.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let l = self.semisimple_rank();
        let mut comp = vec![usize::MAX; l];
        let mut out = Vec::new();
        for s in 0..l {
            if comp[s] != usize::MAX {
                continue;
            }
            let mut stack = vec![s];
            comp[s] = out.len();
            let mut members = vec![];
            while let Some(i) = stack.pop() {
                members.push(i);
                for j in 0..l {
                    if self.cartan[i][j] != 0 && comp[j] == usize::MAX {
                        comp[j] = out.len();
                        stack.push(j);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Squared lengths of simple roots for a W-invariant form, integral and
    /// with the shortest root in each component of length 1.
    fn simple_norms(&self) -> Vec<i64> {
        let l = self.semisimple_rank();
        let mut len: Vec<Ratio<i64>> = vec![Ratio::zero(); l];
        for comp in self.components() {
            let s = comp[0];
            len[s] = Ratio::one();
            let mut stack = vec![s];
            while let Some(i) = stack.pop() {
                for &j in &comp {
                    if self.cartan[i][j] != 0 && len[j].is_zero() {
                        len[j] = len[i] * Ratio::from(self.cartan[j][i]) / Ratio::from(self.cartan[i][j]);
                        stack.push(j);
                    }
                }
            }
            let min = comp.iter().map(|&i| len[i]).min().unwrap();
            for &i in &comp {
                len[i] /= min;
            }
        }
        len.iter().map(|r| r.to_integer()).collect()
    }

    /// `(β, β)` for every root, in units where short simple roots have 1
    /// (doubled form, see [`Self::form2`]).
    pub fn norm2(&self) -> Vec<i64> {
        (0..self.num_roots()).map(|a| self.form2(a, a)).collect()
    }

    /// Twice the W-invariant form: `2(α, β)`; equals `(α, α)` on the diagonal
    /// up to the same factor for all roots of a component.
    pub fn form2(&self, a: usize, b: usize) -> i64 {
        let norms = self.simple_norms();
        let l = self.semisimple_rank();
        let mut s = 0;
        for i in 0..l {
            for j in 0..l {
                // 2(α_i, α_j) = C[i][j] (α_j, α_j)
                s += self.coords[a][i] * self.coords[b][j] * self.cartan[i][j] * norms[j];
            }
        }
        s / 2
    }

    /// Permutation of root indices induced by a matrix acting on `X*`.
    pub fn root_permutation(&self, m: &IMat) -> Option<Vec<usize>> {
        self.roots
            .iter()
            .map(|r| self.index_of_root(&lattice::mat_vec(m, r)))
            .collect()
    }

    /// Permutation of coroot indices induced by a matrix acting on `X_*`.
    pub fn coroot_permutation(&self, m: &IMat) -> Option<Vec<usize>> {
        self.coroots
            .iter()
            .map(|r| self.index_of_coroot(&lattice::mat_vec(m, r)))
            .collect()
    }

    /// `π₁ = X_* / Q∨`.
    pub fn pi1(&self) -> Pi1 {
        let r = self.rank;
        let ncols = self.simple_coroots.len().max(1);
        let a: IMat = (0..r)
            .map(|i| (0..ncols).map(|j| self.simple_coroots.get(j).map_or(0, |c| c[i])).collect())
            .collect();
        let s = lattice::smith(&a, r, ncols);
        let mut d = s.d.clone();
        d.resize(r, 0);
        let mut factors = Vec::new();
        let mut functionals = Vec::new();
        let mut lifts = Vec::new();
        for (k, &dk) in d.iter().enumerate() {
            if dk != 1 {
                factors.push(dk);
                functionals.push(s.u[k].clone());
                lifts.push((0..r).map(|i| s.u_inv[i][k]).collect());
            }
        }
        Pi1 {
            factors,
            functionals,
            lifts,
        }
    }
}

/// `π₁ = X_*/Q∨` as `⊕ ℤ/d_k` (with `d_k = 0` for free summands).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pi1 {
    pub factors: Vec<i64>,
    functionals: IMat,
    lifts: Vec<Vec<i64>>,
}

impl Pi1 {
    pub fn coords(&self, y: &[i64]) -> Vec<i64> {
        self.functionals
            .iter()
            .zip(&self.factors)
            .map(|(f, &d)| {
                let v = dot(f, y);
                if d == 0 {
                    v
                } else {
                    md(v, d)
                }
            })
            .collect()
    }

    /// A cocharacter representing the `k`-th generator.
    pub fn lift(&self, k: usize) -> &[i64] {
        &self.lifts[k]
    }

    pub fn torsion(&self) -> Vec<i64> {
        self.factors.iter().copied().filter(|&d| d != 0).collect()
    }

    pub fn free_rank(&self) -> usize {
        self.factors.iter().filter(|&&d| d == 0).count()
    }

    /// Matrix of a cocharacter automorphism on the generators.
    pub fn induced_action(&self, m: &IMat) -> IMat {
        let k = self.factors.len();
        let mut out = lattice::zeros(k, k);
        for b in 0..k {
            let img = self.coords(&lattice::mat_vec(m, &self.lifts[b]));
            for a in 0..k {
                out[a][b] = img[a];
            }
        }
        out
    }
}

/// Cartan matrix `C[i][j] = ⟨α_i, α_j∨⟩` for a type such as `A3`, `C2`,
/// `G2` or a product `A1xA1`, in Bourbaki numbering.
pub fn cartan_matrix(ty: &str) -> Result<IMat> {
    let parts: Vec<&str> = ty.split('x').collect();
    let mut blocks = Vec::new();
    for p in parts {
        let bad = || Error::invalid("/type", format!("unknown Cartan type {p:?}"));
        let mut ch = p.chars();
        let letter = ch.next().ok_or_else(bad)?;
        let n: usize = ch.as_str().parse().map_err(|_| bad())?;
        let mut c = lattice::zeros(n, n);
        for i in 0..n {
            c[i][i] = 2;
        }
        let link = |c: &mut IMat, i: usize, j: usize| {
            c[i][j] = -1;
            c[j][i] = -1;
        };
        match (letter, n) {
            ('A', n) if n >= 1 => (0..n - 1).for_each(|i| link(&mut c, i, i + 1)),
            ('B', n) if n >= 2 => {
                (0..n - 1).for_each(|i| link(&mut c, i, i + 1));
                c[n - 2][n - 1] = -2;
            }
            ('C', n) if n >= 2 => {
                (0..n - 1).for_each(|i| link(&mut c, i, i + 1));
                c[n - 1][n - 2] = -2;
            }
            ('D', n) if n >= 3 => {
                (0..n - 2).for_each(|i| link(&mut c, i, i + 1));
                link(&mut c, n - 3, n - 1);
            }
            ('G', 2) => {
                c[0][1] = -1;
                c[1][0] = -3;
            }
            ('F', 4) => {
                link(&mut c, 0, 1);
                link(&mut c, 1, 2);
                link(&mut c, 2, 3);
                c[1][2] = -2;
            }
            _ => return Err(bad()),
        }
        blocks.push(c);
    }
    let total: usize = blocks.iter().map(|b| b.len()).sum();
    let mut out = lattice::zeros(total, total);
    let mut off = 0;
    for b in blocks {
        for i in 0..b.len() {
            for j in 0..b.len() {
                out[off + i][off + j] = b[i][j];
            }
        }
        off += b.len();
    }
    Ok(out)
}

/// The Weyl group with its actions on `X*`, `X_*` and on root indices.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    pub group: FiniteGroup,
    /// `perm[w][α]` is the index of `w(α)`; the same indices serve coroots.
    pub perm: Vec<Vec<usize>>,
    pub mat_x: Vec<IMat>,
    pub mat_y: Vec<IMat>,
    /// Reduced words in the simple reflections.
    pub words: Vec<Vec<usize>>,
    simple: Vec<usize>,
    by_perm: HashMap<Vec<usize>, usize>,
}

const MAX_WEYL_ORDER: usize = 50_000;

pub fn weyl_group(rd: &BasedRootDatum) -> Result<WeylGroup> {
    if rd.semisimple_rank() > MAX_RANK {
        return Err(Error::unsupported(format!("Weyl groups of rank above {MAX_RANK}")));
    }
    let r = rd.rank();
    let l = rd.semisimple_rank();
    let sx: Vec<IMat> = (0..l)
        .map(|i| {
            let mut m = lattice::identity(r);
            for a in 0..r {
                for b in 0..r {
                    m[a][b] -= rd.simple_roots[i][a] * rd.simple_coroots[i][b];
                }
            }
            m
        })
        .collect();
    let sy: Vec<IMat> = (0..l)
        .map(|i| {
            let mut m = lattice::identity(r);
            for a in 0..r {
                for b in 0..r {
                    m[a][b] -= rd.simple_coroots[i][a] * rd.simple_roots[i][b];
                }
            }
            m
        })
        .collect();
    let sp: Vec<Vec<usize>> = sx.iter().map(|m| rd.root_permutation(m).expect("reflection")).collect();
    let id: Vec<usize> = (0..rd.num_roots()).collect();
    let mut perm = vec![id.clone()];
    let mut mat_x = vec![lattice::identity(r)];
    let mut mat_y = vec![lattice::identity(r)];
    let mut words: Vec<Vec<usize>> = vec![vec![]];
    let mut by_perm = HashMap::new();
    by_perm.insert(id, 0);
    let mut k = 0;
    while k < perm.len() {
        for i in 0..l {
            // w s_i: first s_i, then w
            let p: Vec<usize> = sp[i].iter().map(|&a| perm[k][a]).collect();
            if !by_perm.contains_key(&p) {
                by_perm.insert(p.clone(), perm.len());
                perm.push(p);
                mat_x.push(lattice::mat_mul(&mat_x[k], &sx[i]));
                mat_y.push(lattice::mat_mul(&mat_y[k], &sy[i]));
                let mut w = words[k].clone();
                w.push(i);
                words.push(w);
                if perm.len() > MAX_WEYL_ORDER {
                    return Err(Error::unsupported("Weyl group too large"));
                }
            }
        }
        k += 1;
    }
    let n = perm.len();
    let table: Vec<Vec<usize>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    let p: Vec<usize> = perm[b].iter().map(|&x| perm[a][x]).collect();
                    by_perm[&p]
                })
                .collect()
        })
        .collect();
    let names = words
        .iter()
        .map(|w| {
            if w.is_empty() {
                "1".to_string()
            } else {
                w.iter().map(|i| format!("s{}", i + 1)).collect::<Vec<_>>().join("")
            }
        })
        .collect();
    let simple = (0..l).map(|i| by_perm[&sp[i]]).collect();
    Ok(WeylGroup {
        group: FiniteGroup::from_trusted_table(names, table),
        perm,
        mat_x,
        mat_y,
        words,
        simple,
        by_perm,
    })
}

impl WeylGroup {
    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn simple(&self, i: usize) -> usize {
        self.simple[i]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.group.mul(a, b)
    }

    pub fn inv(&self, a: usize) -> usize {
        self.group.inv(a)
    }

    pub fn length(&self, w: usize) -> usize {
        self.words[w].len()
    }

    pub fn from_perm(&self, p: &[usize]) -> Option<usize> {
        self.by_perm.get(p).copied()
    }

    /// The Weyl element acting on `X*` by `m`, if any.
    pub fn from_matrix_x(&self, rd: &BasedRootDatum, m: &IMat) -> Option<usize> {
        let p = rd.root_permutation(m)?;
        let w = self.from_perm(&p)?;
        (self.mat_x[w] == *m).then_some(w)
    }

    /// Same as [`Self::from_matrix_x`] for a matrix on `X_*`.
    pub fn from_matrix_y(&self, rd: &BasedRootDatum, m: &IMat) -> Option<usize> {
        let p = rd.coroot_permutation(m)?;
        let w = self.from_perm(&p)?;
        (self.mat_y[w] == *m).then_some(w)
    }

    /// The reflection in the root `a`.
    pub fn reflection(&self, rd: &BasedRootDatum, a: usize) -> usize {
        let r = rd.rank();
        let mut m = lattice::identity(r);
        for i in 0..r {
            for j in 0..r {
                m[i][j] -= rd.root(a)[i] * rd.coroot(a)[j];
            }
        }
        self.from_matrix_x(rd, &m).expect("reflection lies in W")
    }
}

/// An automorphism of the based root datum preserving `Δ`, given by its
/// action on `X*`; `simple_perm[i] = j` when `α_i ↦ α_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PinnedAutomorphism {
    pub mat_x: IMat,
    pub mat_y: IMat,
    pub simple_perm: Vec<usize>,
    pub root_perm: Vec<usize>,
}

impl PinnedAutomorphism {
    pub fn identity(rd: &BasedRootDatum) -> Self {
        PinnedAutomorphism {
            mat_x: lattice::identity(rd.rank()),
            mat_y: lattice::identity(rd.rank()),
            simple_perm: (0..rd.semisimple_rank()).collect(),
            root_perm: (0..rd.num_roots()).collect(),
        }
    }

    pub fn from_matrix_x(rd: &BasedRootDatum, m: &IMat) -> Result<Self> {
        let mat_y = lattice::transpose(
            &lattice::inverse_unimodular(m).ok_or_else(|| Error::invalid("/action", "matrix is not invertible over ℤ"))?,
        );
        let root_perm = rd
            .root_permutation(m)
            .ok_or_else(|| Error::invalid("/action", "matrix does not preserve the roots"))?;
        let mut simple_perm = Vec::new();
        for i in 0..rd.semisimple_rank() {
            let img = root_perm[rd.simple_index(i)];
            let j = (0..rd.semisimple_rank())
                .find(|&j| rd.simple_index(j) == img)
                .ok_or_else(|| Error::invalid("/action", "matrix does not preserve the simple roots"))?;
            if lattice::mat_vec(&mat_y, &rd.simple_coroots[i]) != rd.simple_coroots[j] {
                return Err(Error::invalid("/action", "matrix does not preserve the simple coroots"));
            }
            simple_perm.push(j);
        }
        Ok(PinnedAutomorphism {
            mat_x: m.clone(),
            mat_y,
            simple_perm,
            root_perm,
        })
    }

    /// `σ w σ⁻¹`.
    pub fn conj_weyl(&self, weyl: &WeylGroup, w: usize) -> usize {
        let mut out = weyl.group.identity();
        for &i in &weyl.words[w] {
            out = weyl.mul(out, weyl.simple(self.simple_perm[i]));
        }
        out
    }
}

/// Chevalley structure constants `N_{α,β}` with `[X_α, X_β] = N_{α,β} X_{α+β}`.
/// Signs are fixed by `N = +(p+1)` on extraspecial pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChevalleyConstants {
    pub table: Vec<Vec<i64>>,
}

pub fn chevalley_constants(rd: &BasedRootDatum) -> Result<ChevalleyConstants> {
    if rd.semisimple_rank() > MAX_RANK || rd.components().iter().any(|c| c.len() > 4) {
        return Err(Error::unsupported("structure constants above rank 4 per component"));
    }
    let n = rd.num_roots();
    let norm = rd.norm2();
    let mut memo: HashMap<(usize, usize), Ratio<i64>> = HashMap::new();
    let mut table = vec![vec![0i64; n]; n];
    for a in 0..n {
        for b in 0..n {
            let v = structure_constant(rd, &norm, &mut memo, a, b, 0);
            if !v.is_integer() {
                return Err(Error::check("non-integral structure constant"));
            }
            table[a][b] = v.to_integer();
        }
    }
    Ok(ChevalleyConstants { table })
}

fn string_p(rd: &BasedRootDatum, a: usize, b: usize) -> i64 {
    // largest p with b − p·a a root
    let mut p = 0;
    let mut c: Vec<i64> = rd.coords(b).to_vec();
    loop {
        for (x, y) in c.iter_mut().zip(rd.coords(a)) {
            *x -= y;
        }
        if rd.index_of_coords(&c).is_none() {
            return p;
        }
        p += 1;
    }
}

fn structure_constant(
    rd: &BasedRootDatum,
    norm: &[i64],
    memo: &mut HashMap<(usize, usize), Ratio<i64>>,
    a: usize,
    b: usize,
    depth: usize,
) -> Ratio<i64> {
    assert!(depth < 200, "structure constant recursion");
    let Some(s) = rd.sum(a, b) else {
        return Ratio::zero();
    };
    if let Some(v) = memo.get(&(a, b)) {
        return *v;
    }
    let c = rd.neg(s);
    let pa = rd.is_positive(a);
    let pb = rd.is_positive(b);
    let pc = rd.is_positive(c);
    let r = |x: usize| Ratio::from(norm[x]);
    let v = if [pa, pb, pc].iter().filter(|&&x| x).count() < 2 {
        -structure_constant(rd, norm, memo, rd.neg(a), rd.neg(b), depth + 1)
    } else if pa && pb {
        if a > b {
            -structure_constant(rd, norm, memo, b, a, depth + 1)
        } else {
            // extraspecial pair of ξ = a + b
            let a0 = (0..rd.num_positive())
                .find(|&x| rd.sum(s, rd.neg(x)).map_or(false, |y| rd.is_positive(y)))
                .expect("extraspecial pair");
            let b0 = rd.sum(s, rd.neg(a0)).unwrap();
            if a == a0 {
                Ratio::from(string_p(rd, a0, b0) + 1)
            } else {
                let n0 = Ratio::from(string_p(rd, a0, b0) + 1);
                let mut acc = Ratio::zero();
                if let Some(x) = rd.sum(b, rd.neg(a0)) {
                    acc += structure_constant(rd, norm, memo, b, rd.neg(a0), depth + 1)
                        * structure_constant(rd, norm, memo, a, rd.neg(b0), depth + 1)
                        / r(x);
                }
                if let Some(x) = rd.sum(a, rd.neg(a0)) {
                    acc += structure_constant(rd, norm, memo, rd.neg(a0), a, depth + 1)
                        * structure_constant(rd, norm, memo, b, rd.neg(b0), depth + 1)
                        / r(x);
                }
                r(s) / n0 * acc
            }
        }
    } else if pa {
        // b < 0, a, c > 0: N_{a,b}/(c,c) = N_{c,a}/(b,b)
        r(c) / r(b) * structure_constant(rd, norm, memo, c, a, depth + 1)
    } else {
        // a < 0, b, c > 0: N_{a,b}/(c,c) = N_{b,c}/(a,a)
        r(c) / r(a) * structure_constant(rd, norm, memo, b, c, depth + 1)
    };
    memo.insert((a, b), v);
    v
}

/// The Lie algebra with Chevalley basis `h_i` (simple coroots) and `X_α`.
#[derive(Clone, Debug)]
pub struct ChevalleyAlgebra {
    pub rd: BasedRootDatum,
    pub constants: ChevalleyConstants,
}

type RVec = Vec<Ratio<i64>>;

impl ChevalleyAlgebra {
    pub fn new(rd: &BasedRootDatum) -> Result<Self> {
        Ok(ChevalleyAlgebra {
            rd: rd.clone(),
            constants: chevalley_constants(rd)?,
        })
    }

    pub fn dim(&self) -> usize {
        self.rd.semisimple_rank() + self.rd.num_roots()
    }

    pub fn root_vector(&self, a: usize) -> RVec {
        let mut v = vec![Ratio::zero(); self.dim()];
        v[self.rd.semisimple_rank() + a] = Ratio::one();
        v
    }

    fn bracket_basis(&self, i: usize, j: usize, out: &mut RVec, scale: Ratio<i64>) {
        let l = self.rd.semisimple_rank();
        let cm = self.rd.cartan();
        match (i < l, j < l) {
            (true, true) => {}
            (true, false) => {
                let b = j - l;
                let v: i64 = (0..l).map(|k| self.rd.coords(b)[k] * cm[k][i]).sum();
                out[j] += scale * Ratio::from(v);
            }
            (false, true) => {
                let a = i - l;
                let v: i64 = (0..l).map(|k| self.rd.coords(a)[k] * cm[k][j]).sum();
                out[i] -= scale * Ratio::from(v);
            }
            (false, false) => {
                let (a, b) = (i - l, j - l);
                if b == self.rd.neg(a) {
                    for k in 0..l {
                        out[k] += scale * Ratio::from(self.rd.coroot_coords(a)[k]);
                    }
                } else if let Some(s) = self.rd.sum(a, b) {
                    out[l + s] += scale * Ratio::from(self.constants.table[a][b]);
                }
            }
        }
    }

    pub fn bracket(&self, x: &RVec, y: &RVec) -> RVec {
        let mut out = vec![Ratio::zero(); self.dim()];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                self.bracket_basis(i, j, &mut out, xi * yj);
            }
        }
        out
    }

    /// `exp(ad x) v` for nilpotent `ad x`.
    pub fn exp_ad(&self, x: &RVec, v: &RVec) -> RVec {
        let mut out = v.clone();
        let mut term = v.clone();
        for k in 1..=6 {
            term = self.bracket(x, &term);
            if term.iter().all(|t| t.is_zero()) {
                break;
            }
            let f = Ratio::from(k as i64);
            term.iter_mut().for_each(|t| *t /= f);
            for (o, t) in out.iter_mut().zip(&term) {
                *o += t;
            }
        }
        out
    }

    /// `Ad(n_i)` on root vectors, `n_i = exp(X_i) exp(−X_{−i}) exp(X_i)`.
    pub fn simple_tits_action(&self, i: usize) -> SignedPerm {
        let l = self.rd.semisimple_rank();
        let a = self.rd.simple_index(i);
        let e = self.root_vector(a);
        let f: RVec = self.root_vector(self.rd.neg(a)).iter().map(|x| -x).collect();
        let mut perm = Vec::with_capacity(self.rd.num_roots());
        let mut sign = Vec::with_capacity(self.rd.num_roots());
        for b in 0..self.rd.num_roots() {
            let v = self.exp_ad(&e, &self.exp_ad(&f, &self.exp_ad(&e, &self.root_vector(b))));
            let nz: Vec<usize> = (0..v.len()).filter(|&k| !v[k].is_zero()).collect();
            assert!(nz.len() == 1 && nz[0] >= l, "Ad(n_i) must permute root lines");
            let s = v[nz[0]];
            assert!(s == Ratio::one() || s == -Ratio::one());
            perm.push(nz[0] - l);
            sign.push(if s.is_one() { 1 } else { -1 });
        }
        SignedPerm { perm, sign }
    }

    /// Action of a pinned automorphism on root vectors: `X_{±α_i} ↦ X_{±α_{π i}}`.
    pub fn pinned_action(&self, aut: &PinnedAutomorphism) -> SignedPerm {
        let rd = &self.rd;
        let n = rd.num_roots();
        let mut sign = vec![0i8; n];
        let perm = aut.root_perm.clone();
        for i in 0..rd.semisimple_rank() {
            let a = rd.simple_index(i);
            sign[a] = 1;
            sign[rd.neg(a)] = 1;
        }
        for g in 0..rd.num_positive() {
            if sign[g] != 0 {
                continue;
            }
            let (i, gp) = (0..rd.semisimple_rank())
                .find_map(|i| {
                    let a = rd.simple_index(i);
                    rd.sum(g, rd.neg(a)).filter(|&x| rd.is_positive(x)).map(|x| (a, x))
                })
                .expect("non-simple positive root decomposes");
            let t = &self.constants.table;
            let s = sign[gp] as i64 * t[perm[i]][perm[gp]] / t[i][gp];
            let ng = rd.neg(g);
            let (ni, ngp) = (rd.neg(i), rd.neg(gp));
            let sn = sign[ngp] as i64 * t[perm[ni]][perm[ngp]] / t[ni][ngp];
            sign[g] = s as i8;
            sign[ng] = sn as i8;
        }
        SignedPerm { perm, sign }
    }
}

/// A map `X_α ↦ ±X_{π α}` on root vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedPerm {
    pub perm: Vec<usize>,
    pub sign: Vec<i8>,
}

impl SignedPerm {
    pub fn identity(n: usize) -> Self {
        SignedPerm {
            perm: (0..n).collect(),
            sign: vec![1; n],
        }
    }

    /// `Ad(t)` for `t = y(−1)`, `y ∈ X_*`.
    pub fn torus(rd: &BasedRootDatum, y: &[i64]) -> Self {
        SignedPerm {
            perm: (0..rd.num_roots()).collect(),
            sign: (0..rd.num_roots())
                .map(|a| if md(dot(rd.root(a), y), 2) == 0 { 1 } else { -1 })
                .collect(),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SignedPerm) -> SignedPerm {
        let n = self.perm.len();
        SignedPerm {
            perm: (0..n).map(|a| self.perm[other.perm[a]]).collect(),
            sign: (0..n).map(|a| other.sign[a] * self.sign[other.perm[a]]).collect(),
        }
    }
}

/// Elements `t · n(w)` of the Tits group, `t ∈ X_*/2X_*`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TitsElement {
    pub t: Vec<i64>,
    pub w: usize,
}

/// The Tits group of a based root datum relative to its pinning.
#[derive(Clone, Debug)]
pub struct TitsGroup {
    pub rd: BasedRootDatum,
    pub weyl: WeylGroup,
}

impl TitsGroup {
    pub fn new(rd: &BasedRootDatum) -> Result<Self> {
        Ok(TitsGroup {
            rd: rd.clone(),
            weyl: weyl_group(rd)?,
        })
    }

    /// The Tits lift `n(w)`.
    pub fn lift(&self, w: usize) -> TitsElement {
        TitsElement {
            t: vec![0; self.rd.rank()],
            w,
        }
    }

    pub fn torus(&self, y: &[i64]) -> TitsElement {
        TitsElement {
            t: y.iter().map(|&a| md(a, 2)).collect(),
            w: self.weyl.group.identity(),
        }
    }

    fn mul_simple(&self, x: &TitsElement, i: usize) -> TitsElement {
        let ws = self.weyl.mul(x.w, self.weyl.simple(i));
        let a = self.rd.simple_index(i);
        if self.rd.is_positive(self.weyl.perm[x.w][a]) {
            TitsElement { t: x.t.clone(), w: ws }
        } else {
            // n(w) n_i = n(w s_i) n_i² and n_i² = α_i∨(−1)
            let y = lattice::mat_vec(&self.weyl.mat_y[ws], &self.rd.simple_coroots[i]);
            TitsElement {
                t: x.t.iter().zip(&y).map(|(&a, &b)| md(a + b, 2)).collect(),
                w: ws,
            }
        }
    }

    pub fn mul(&self, x: &TitsElement, y: &TitsElement) -> TitsElement {
        let wt = lattice::mat_vec(&self.weyl.mat_y[x.w], &y.t);
        let mut out = TitsElement {
            t: x.t.iter().zip(&wt).map(|(&a, &b)| md(a + b, 2)).collect(),
            w: x.w,
        };
        for &i in &self.weyl.words[y.w] {
            out = self.mul_simple(&out, i);
        }
        out
    }

    /// Image under a pinned automorphism.
    pub fn apply_pinned(&self, aut: &PinnedAutomorphism, x: &TitsElement) -> TitsElement {
        TitsElement {
            t: lattice::mat_vec(&aut.mat_y, &x.t).iter().map(|&a| md(a, 2)).collect(),
            w: aut.conj_weyl(&self.weyl, x.w),
        }
    }

    /// `Ad(x)` on root vectors.
    pub fn adjoint_action(&self, alg: &ChevalleyAlgebra, simple: &[SignedPerm], x: &TitsElement) -> SignedPerm {
        let mut acc = SignedPerm::torus(&self.rd, &x.t);
        for &i in &self.weyl.words[x.w] {
            acc = acc.compose(&simple[i]);
        }
        let _ = alg;
        acc
    }

    /// `Ad(n(w))` along an arbitrary (not necessarily reduced) word.
    pub fn word_action(simple: &[SignedPerm], word: &[usize], n: usize) -> SignedPerm {
        word.iter()
            .fold(SignedPerm::identity(n), |acc, &i| acc.compose(&simple[i]))
    }
}

/// A finite Σ-set `R`, `Σ = Γ × {±1}`, with an equivariant map to a lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibleSet {
    /// `action[σ][α]`.
    pub action: Vec<Vec<usize>>,
    /// The fixed-point-free involution `α ↦ −α`.
    pub neg: Vec<usize>,
    /// `map[α] ∈ Λ`.
    pub map: Vec<Vec<i64>>,
    pub lattice: GaloisLattice,
}

impl AdmissibleSet {
    pub fn new(
        group: &FiniteGroup,
        action: Vec<Vec<usize>>,
        neg: Vec<usize>,
        map: Vec<Vec<i64>>,
        lattice: GaloisLattice,
    ) -> Result<Self> {
        let m = neg.len();
        if action.len() != group.order() || action.iter().any(|p| p.len() != m) {
            return Err(Error::invalid("/action", "one permutation of R per group element"));
        }
        if map.len() != m || map.iter().any(|v| v.len() != lattice.rank) {
            return Err(Error::invalid("/map", "one lattice vector per element of R"));
        }
        for a in 0..m {
            if neg[a] >= m || neg[a] == a || neg[neg[a]] != a {
                return Err(Error::invalid(format!("/neg/{a}"), "negation must be a fixed-point-free involution"));
            }
            let mn: Vec<i64> = map[a].iter().map(|x| -x).collect();
            if map[neg[a]] != mn {
                return Err(Error::invalid(format!("/map/{a}"), "map is not odd"));
            }
        }
        for g in group.elements() {
            let mut seen = vec![false; m];
            for a in 0..m {
                let b = action[g][a];
                if b >= m || seen[b] {
                    return Err(Error::invalid(format!("/action/{g}"), "not a permutation"));
                }
                seen[b] = true;
                if action[g][neg[a]] != neg[b] {
                    return Err(Error::invalid(format!("/action/{g}"), "does not commute with negation"));
                }
                if lattice::mat_vec(&lattice.action[g], &map[a]) != map[b] {
                    return Err(Error::invalid(format!("/map/{a}"), "map is not equivariant"));
                }
            }
            for h in group.elements() {
                for a in 0..m {
                    if action[g][action[h][a]] != action[group.mul(g, h)][a] {
                        return Err(Error::invalid("/action", "not a group action"));
                    }
                }
            }
        }
        Ok(AdmissibleSet {
            action,
            neg,
            map,
            lattice,
        })
    }

    /// The coroots of a root datum with `Γ` acting on `X_*` by `action_y`
    /// (which must permute the coroots).
    pub fn from_coroots(rd: &BasedRootDatum, group: &FiniteGroup, action_y: &[IMat]) -> Result<Self> {
        let perms = action_y
            .iter()
            .map(|m| {
                rd.coroot_permutation(m)
                    .ok_or_else(|| Error::invalid("/action", "action does not preserve the coroots"))
            })
            .collect::<Result<Vec<_>>>()?;
        let lattice = GaloisLattice::new(group, rd.rank(), action_y.to_vec())?;
        AdmissibleSet::new(
            group,
            perms,
            (0..rd.num_roots()).map(|a| rd.neg(a)).collect(),
            rd.coroots().to_vec(),
            lattice,
        )
    }

    pub fn len(&self) -> usize {
        self.neg.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neg.is_empty()
    }

    /// Σ-orbits, each listed with `symmetric = true` when it is a single Γ-orbit.
    pub fn orbits(&self) -> Vec<(Vec<usize>, bool)> {
        let m = self.len();
        let mut done = vec![false; m];
        let mut out = Vec::new();
        for a in 0..m {
            if done[a] {
                continue;
            }
            let mut gamma_orbit: Vec<usize> = self.action.iter().map(|p| p[a]).collect();
            gamma_orbit.sort_unstable();
            gamma_orbit.dedup();
            let symmetric = gamma_orbit.contains(&self.neg[a]);
            let mut orbit = gamma_orbit.clone();
            if !symmetric {
                orbit.extend(gamma_orbit.iter().map(|&b| self.neg[b]));
            }
            orbit.sort_unstable();
            for &b in &orbit {
                done[b] = true;
            }
            out.push((orbit, symmetric));
        }
        out
    }

    /// `Λ/2Λ`, the coefficients of Tits cocycles.
    pub fn two_torsion(&self) -> FiniteModule {
        self.lattice.reduce_mod(2)
    }
}

/// A sign function with `p(−α) = −p(α)`, built from a choice on a transversal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Gauge {
    positive: Vec<bool>,
}

impl Gauge {
    /// `choice[k]` decides the sign of the `k`-th representative, where
    /// representatives are the smaller index of each pair `{α, −α}`.
    pub fn from_transversal(set: &AdmissibleSet, choice: &[bool]) -> Self {
        let reps: Vec<usize> = (0..set.len()).filter(|&a| a < set.neg[a]).collect();
        assert_eq!(reps.len(), choice.len());
        let mut positive = vec![false; set.len()];
        for (&a, &c) in reps.iter().zip(choice) {
            positive[a] = c;
            positive[set.neg[a]] = !c;
        }
        Gauge { positive }
    }

    /// The gauge of a positive system of a root datum.
    pub fn from_positive_system(rd: &BasedRootDatum) -> Self {
        Gauge {
            positive: (0..rd.num_roots()).map(|a| rd.is_positive(a)).collect(),
        }
    }

    /// `q(α) = p(π α)` for a permutation commuting with negation.
    pub fn pullback(&self, perm: &[usize]) -> Self {
        Gauge {
            positive: perm.iter().map(|&b| self.positive[b]).collect(),
        }
    }

    pub fn transversal_size(set: &AdmissibleSet) -> usize {
        set.len() / 2
    }

    pub fn is_positive(&self, a: usize) -> bool {
        self.positive[a]
    }

    pub fn all(set: &AdmissibleSet) -> Vec<Gauge> {
        let k = Self::transversal_size(set);
        (0..1u64 << k)
            .map(|bits| {
                let choice: Vec<bool> = (0..k).map(|i| bits >> i & 1 == 1).collect();
                Gauge::from_transversal(set, &choice)
            })
            .collect()
    }
}

fn sum_mod2(set: &AdmissibleSet, it: impl Iterator<Item = usize>) -> Vec<i64> {
    let mut v = vec![0; set.lattice.rank];
    for a in it {
        for (x, y) in v.iter_mut().zip(&set.map[a]) {
            *x += y;
        }
    }
    v.iter().map(|&x| md(x, 2)).collect()
}

/// `z_p(σ,τ) = Σ_{p(α)=+, p(σ⁻¹α)=−, p((στ)⁻¹α)=+} α`, valued in `Λ/2Λ`.
pub fn tits_cocycle(group: &FiniteGroup, set: &AdmissibleSet, p: &Gauge) -> Cochain {
    let module = set.two_torsion();
    Cochain::from_fn(group, &module, 2, |c| {
        let (s, t) = (c[0], c[1]);
        let si = group.inv(s);
        let sti = group.inv(group.mul(s, t));
        sum_mod2(
            set,
            (0..set.len()).filter(|&a| {
                p.positive[a] && !p.positive[set.action[si][a]] && p.positive[set.action[sti][a]]
            }),
        )
    })
}

/// The 1-cochain `s_{q/p}` with `∂s_{q/p} = z_q − z_p`: the sum of `α` over
/// `p(α)=+` with `(q(α), p(σ⁻¹α), q(σ⁻¹α))` equal to `(+,−,+)` or `(−,+,+)`.
pub fn gauge_shift(group: &FiniteGroup, set: &AdmissibleSet, p: &Gauge, q: &Gauge) -> Cochain {
    let module = set.two_torsion();
    Cochain::from_fn(group, &module, 1, |c| {
        let si = group.inv(c[0]);
        sum_mod2(
            set,
            (0..set.len()).filter(|&a| {
                let b = set.action[si][a];
                let key = (p.positive[a], q.positive[a], p.positive[b], q.positive[b]);
                key == (true, true, false, true) || key == (true, false, true, true)
            }),
        )
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::differential;

    #[test]
    fn root_counts() {
        for (ty, n) in [("A1", 2), ("A2", 6), ("B2", 8), ("C3", 18), ("D4", 24), ("G2", 12), ("F4", 48)] {
            let rd = BasedRootDatum::preset(&format!("{ty}.sc")).unwrap();
            assert_eq!(rd.num_roots(), n, "{ty}");
            for a in 0..n {
                assert_eq!(rd.pairing(a, a), 2);
            }
        }
    }

    #[test]
    fn weyl_orders() {
        for (ty, n) in [("A1", 2), ("A1xA1", 4), ("C2", 8), ("A3", 24), ("G2", 12)] {
            let rd = BasedRootDatum::preset(&format!("{ty}.ad")).unwrap();
            assert_eq!(weyl_group(&rd).unwrap().order(), n, "{ty}");
        }
    }

    #[test]
    fn pi1_examples() {
        assert_eq!(BasedRootDatum::preset("A1.sc").unwrap().pi1().factors, Vec::<i64>::new());
        assert_eq!(BasedRootDatum::preset("A1.ad").unwrap().pi1().factors, vec![2]);
        assert_eq!(BasedRootDatum::preset("C2.ad").unwrap().pi1().factors, vec![2]);
        let t = BasedRootDatum::torus(2).pi1();
        assert_eq!(t.free_rank(), 2);
    }

    #[test]
    fn long_roots_of_c2() {
        let h = BasedRootDatum::preset("A1xA1 in C2").unwrap();
        assert_eq!(h.num_roots(), 4);
        assert_eq!(h.cartan(), &vec![vec![2, 0], vec![0, 2]]);
    }

    #[test]
    fn a1_tits_lift_negates() {
        let rd = BasedRootDatum::preset("A1.sc").unwrap();
        let alg = ChevalleyAlgebra::new(&rd).unwrap();
        let n = alg.simple_tits_action(0);
        assert_eq!(n.perm, vec![1, 0]);
        assert_eq!(n.sign, vec![-1, -1]);
    }

    #[test]
    fn tits_cocycle_is_a_cocycle_for_sign_action() {
        let g = FiniteGroup::cyclic(2);
        let rd = BasedRootDatum::preset("A1.sc").unwrap();
        let set = AdmissibleSet::from_coroots(&rd, &g, &[vec![vec![1]], vec![vec![-1]]]).unwrap();
        let p = Gauge::from_positive_system(&rd);
        let z = tits_cocycle(&g, &set, &p);
        assert_eq!(z.at(&g, &[1, 1]), &[1]);
        assert!(differential(&g, &set.two_torsion(), &z).unwrap().is_zero());
    }

    fn sparse_bracket(alg: &ChevalleyAlgebra, x: &[(usize, i64)], y: &[(usize, i64)]) -> Vec<(usize, i64)> {
        let mut out = vec![Ratio::zero(); alg.dim()];
        for &(i, a) in x {
            for &(j, b) in y {
                alg.bracket_basis(i, j, &mut out, Ratio::from(a * b));
            }
        }
        out.iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(k, v)| (k, v.to_integer()))
            .collect()
    }

    #[test]
    fn jacobi_identity() {
        for ty in ["A2", "B2", "G2", "B3", "C3", "D4"] {
            let rd = BasedRootDatum::preset(&format!("{ty}.sc")).unwrap();
            let alg = ChevalleyAlgebra::new(&rd).unwrap();
            let d = alg.dim();
            for i in 0..d {
                for j in 0..d {
                    let ij = sparse_bracket(&alg, &[(i, 1)], &[(j, 1)]);
                    for k in 0..d {
                        let jk = sparse_bracket(&alg, &[(j, 1)], &[(k, 1)]);
                        let ki = sparse_bracket(&alg, &[(k, 1)], &[(i, 1)]);
                        let mut tot = vec![0i64; d];
                        for (x, v) in sparse_bracket(&alg, &[(i, 1)], &jk)
                            .into_iter()
                            .chain(sparse_bracket(&alg, &[(j, 1)], &ki))
                            .chain(sparse_bracket(&alg, &[(k, 1)], &ij))
                        {
                            tot[x] += v;
                        }
                        assert!(tot.iter().all(|&t| t == 0), "{ty}: ({i},{j},{k})");
                    }
                }
            }
        }
    }

    #[test]
    fn f4_constants_antisymmetric_and_integral() {
        let rd = BasedRootDatum::preset("F4.sc").unwrap();
        let c = chevalley_constants(&rd).unwrap();
        for a in 0..rd.num_roots() {
            for b in 0..rd.num_roots() {
                assert_eq!(c.table[a][b], -c.table[b][a]);
                if rd.sum(a, b).is_some() {
                    assert_eq!(c.table[a][b].abs(), string_p(&rd, a, b) + 1);
                }
            }
        }
    }

    #[test]
    fn braid_relations_hold_for_tits_lifts() {
        for ty in ["A2", "C2", "G2"] {
            let rd = BasedRootDatum::preset(&format!("{ty}.sc")).unwrap();
            let alg = ChevalleyAlgebra::new(&rd).unwrap();
            let simple: Vec<SignedPerm> = (0..2).map(|i| alg.simple_tits_action(i)).collect();
            let m = match ty {
                "A2" => 3,
                "C2" => 4,
                _ => 6,
            };
            let w1: Vec<usize> = (0..m).map(|k| k % 2).collect();
            let w2: Vec<usize> = (0..m).map(|k| (k + 1) % 2).collect();
            let n = rd.num_roots();
            assert_eq!(TitsGroup::word_action(&simple, &w1, n), TitsGroup::word_action(&simple, &w2, n), "{ty}");
        }
    }

    #[test]
    fn tits_multiplication_matches_adjoint_signs() {
        for name in ["A2.sc", "C2.sc", "C2.ad", "G2.sc", "A1xA1 in C2"] {
            let rd = BasedRootDatum::preset(name).unwrap();
            let alg = ChevalleyAlgebra::new(&rd).unwrap();
            let tits = TitsGroup::new(&rd).unwrap();
            let simple: Vec<SignedPerm> = (0..rd.semisimple_rank()).map(|i| alg.simple_tits_action(i)).collect();
            let w = &tits.weyl;
            for a in w.group.elements() {
                for b in w.group.elements() {
                    let x = tits.lift(a);
                    let y = tits.lift(b);
                    let xy = tits.mul(&x, &y);
                    let lhs = tits.adjoint_action(&alg, &simple, &x).compose(&tits.adjoint_action(&alg, &simple, &y));
                    assert_eq!(lhs, tits.adjoint_action(&alg, &simple, &xy), "{name}");
                }
            }
        }
    }

    #[test]
    fn tits_multiplication_matches_gauge_formula() {
        for name in ["A1.sc", "A2.sc", "C2.sc", "C2.ad", "G2.sc", "A3.sc", "B3.ad"] {
            let rd = BasedRootDatum::preset(name).unwrap();
            let tits = TitsGroup::new(&rd).unwrap();
            let w = &tits.weyl;
            let set = AdmissibleSet::from_coroots(&rd, &w.group, &w.mat_y).unwrap();
            let z = tits_cocycle(&w.group, &set, &Gauge::from_positive_system(&rd));
            for a in w.group.elements() {
                for b in w.group.elements() {
                    let xy = tits.mul(&tits.lift(a), &tits.lift(b));
                    assert_eq!(xy.w, w.mul(a, b));
                    assert_eq!(xy.t, z.at(&w.group, &[a, b]), "{name}: {a} {b}");
                }
            }
        }
    }

    #[test]
    fn gauge_shift_bounds_difference() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for name in ["A2.sc", "C2.ad", "G2.sc"] {
            let rd = BasedRootDatum::preset(name).unwrap();
            let w = weyl_group(&rd).unwrap();
            let set = AdmissibleSet::from_coroots(&rd, &w.group, &w.mat_y).unwrap();
            let k = Gauge::transversal_size(&set);
            let module = set.two_torsion();
            for _ in 0..10 {
                let p = Gauge::from_transversal(&set, &(0..k).map(|_| rng.gen()).collect::<Vec<bool>>());
                let q = Gauge::from_transversal(&set, &(0..k).map(|_| rng.gen()).collect::<Vec<bool>>());
                let s = gauge_shift(&w.group, &set, &p, &q);
                let lhs = differential(&w.group, &module, &s).unwrap();
                let rhs = tits_cocycle(&w.group, &set, &q).sub(&module, &tits_cocycle(&w.group, &set, &p));
                assert_eq!(lhs, rhs, "{name}");
            }
        }
    }

    #[test]
    fn pinned_automorphism_of_a2_is_a_lie_map() {
        let rd = BasedRootDatum::preset("A2.sc").unwrap();
        let alg = ChevalleyAlgebra::new(&rd).unwrap();
        // α1 ↔ α2 on X* = ℤ² in the sc datum (roots are rows of the Cartan matrix)
        let m = vec![vec![0, 1], vec![1, 0]];
        let aut = PinnedAutomorphism::from_matrix_x(&rd, &m).unwrap();
        assert_eq!(aut.simple_perm, vec![1, 0]);
        let sp = alg.pinned_action(&aut);
        let t = &alg.constants.table;
        for a in 0..rd.num_roots() {
            for b in 0..rd.num_roots() {
                if let Some(s) = rd.sum(a, b) {
                    let lhs = sp.sign[a] as i64 * sp.sign[b] as i64 * t[sp.perm[a]][sp.perm[b]];
                    assert_eq!(lhs, t[a][b] * sp.sign[s] as i64);
                }
            }
        }
    }
}
