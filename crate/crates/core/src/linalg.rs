//! Integer linear algebra over products of cyclic groups.
//!
//! Everything here works with vectors in `⊕ ℤ/m_i` (a modulus of 0 is not
//! allowed; lattices are handled separately in `lattice`).

/// Nonnegative gcd.
pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: i64, b: i64) -> i64 {
    if a == 0 || b == 0 {
        return 0;
    }
    (a / gcd(a, b) * b).abs()
}

/// Returns `(g, x, y)` with `g = gcd(a, b) = x*a + y*b` and `g >= 0`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a as i128, b as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (r0, s0, t0) = (-r0, -s0, -t0);
    }
    (r0 as i64, s0 as i64, t0 as i64)
}

#[inline]
pub fn md(a: i64, m: i64) -> i64 {
    a.rem_euclid(m)
}

#[inline]
fn mulmod(a: i64, b: i64, m: i64) -> i64 {
    ((a as i128 * b as i128).rem_euclid(m as i128)) as i64
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: i64, m: i64) -> Option<i64> {
    let (g, x, _) = ext_gcd(md(a, m), m);
    if g == 1 {
        Some(md(x, m))
    } else {
        None
    }
}

fn reduce(v: &mut [i64], moduli: &[i64]) {
    for (x, &m) in v.iter_mut().zip(moduli) {
        *x = md(*x, m);
    }
}

#[derive(Clone, Debug)]
struct Column {
    v: Vec<i64>,
    c: Vec<i64>,
}

/// Echelon form of a finite family of generators of a subgroup of
/// `⊕ ℤ/m_i`, keeping track of how each echelon vector is written in the
/// original generators.
///
/// Rows are eliminated in order. For a row with modulus `m` the pivot entry
/// is normalized to a divisor `g` of `m`, and `(m/g)` times the pivot is fed
/// back into the remaining rows, so membership tests are complete (Howell
/// style).
#[derive(Clone, Debug)]
pub struct ModEchelon {
    moduli: Vec<i64>,
    coef_moduli: Vec<i64>,
    pivots: Vec<Option<Column>>,
    kernel: Vec<Vec<i64>>,
}

impl ModEchelon {
    /// `gens[l]` is a vector of length `moduli.len()`. `coef_moduli[l]` must be
    /// a multiple of the additive order of `gens[l]`; coefficients are kept
    /// reduced modulo it.
    pub fn new(gens: &[Vec<i64>], moduli: &[i64], coef_moduli: &[i64]) -> Self {
        assert_eq!(gens.len(), coef_moduli.len());
        let ng = gens.len();
        let mut active: Vec<Column> = gens
            .iter()
            .enumerate()
            .map(|(l, g)| {
                assert_eq!(g.len(), moduli.len());
                let mut v = g.clone();
                reduce(&mut v, moduli);
                let mut c = vec![0; ng];
                c[l] = md(1, coef_moduli[l]);
                Column { v, c }
            })
            .collect();
        let mut pivots = vec![None; moduli.len()];
        for (i, &m) in moduli.iter().enumerate() {
            if m == 1 {
                continue;
            }
            let mut piv: Option<Column> = None;
            let mut rest = Vec::with_capacity(active.len());
            for col in active.drain(..) {
                if col.v[i] == 0 {
                    rest.push(col);
                    continue;
                }
                match piv.take() {
                    None => piv = Some(col),
                    Some(p) => {
                        let (a, b) = (p.v[i], col.v[i]);
                        let (g, x, y) = ext_gcd(a, b);
                        let (ag, bg) = (a / g, b / g);
                        let np = combine(&p, x, &col, y, moduli, coef_moduli);
                        let nc = combine(&p, bg, &col, -ag, moduli, coef_moduli);
                        debug_assert_eq!(nc.v[i], 0);
                        piv = Some(np);
                        rest.push(nc);
                    }
                }
            }
            active = rest;
            if let Some(p) = piv {
                let (g, x, _) = ext_gcd(p.v[i], m);
                let np = scale(&p, x, moduli, coef_moduli);
                debug_assert_eq!(np.v[i], g % m);
                let extra = scale(&p, m / g, moduli, coef_moduli);
                debug_assert_eq!(extra.v[i], 0);
                active.push(extra);
                pivots[i] = Some(np);
            }
        }
        let mut kernel = Vec::new();
        for col in active {
            debug_assert!(col.v.iter().all(|&x| x == 0));
            if col.c.iter().any(|&x| x != 0) {
                kernel.push(col.c);
            }
        }
        ModEchelon {
            moduli: moduli.to_vec(),
            coef_moduli: coef_moduli.to_vec(),
            pivots,
            kernel,
        }
    }

    /// Generators of the relation module: coefficient vectors `c` with
    /// `Σ c_l gens[l] = 0`. The trivial relations `coef_moduli[l]·e_l` are
    /// implied and not listed.
    pub fn relations(&self) -> &[Vec<i64>] {
        &self.kernel
    }

    /// Writes `x` as a combination of the generators, if possible.
    pub fn solve(&self, x: &[i64]) -> Option<Vec<i64>> {
        let mut r = x.to_vec();
        reduce(&mut r, &self.moduli);
        let mut coef = vec![0i64; self.coef_moduli.len()];
        for (i, &m) in self.moduli.iter().enumerate() {
            if r[i] == 0 {
                continue;
            }
            let p = self.pivots[i].as_ref()?;
            let g = p.v[i];
            if r[i] % g != 0 {
                return None;
            }
            let t = r[i] / g;
            for (k, rk) in r.iter_mut().enumerate() {
                *rk = md(*rk - mulmod(t, p.v[k], self.moduli[k]), self.moduli[k]);
            }
            for (l, cl) in coef.iter_mut().enumerate() {
                let cm = self.coef_moduli[l];
                *cl = md(*cl + mulmod(t, p.c[l], cm), cm);
            }
            debug_assert_eq!(r[i], 0, "row {i} modulus {m}");
        }
        Some(coef)
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.solve(x).is_some()
    }

    /// Order of the generated subgroup.
    pub fn span_order(&self) -> u128 {
        let mut ord: u128 = 1;
        for (i, p) in self.pivots.iter().enumerate() {
            if let Some(c) = p {
                ord *= (self.moduli[i] / c.v[i]) as u128;
            }
        }
        ord
    }
}

fn combine(a: &Column, x: i64, b: &Column, y: i64, moduli: &[i64], cm: &[i64]) -> Column {
    let v = a
        .v
        .iter()
        .zip(&b.v)
        .zip(moduli)
        .map(|((&p, &q), &m)| md(mulmod(x, p, m) + mulmod(y, q, m), m))
        .collect();
    let c = a
        .c
        .iter()
        .zip(&b.c)
        .zip(cm)
        .map(|((&p, &q), &m)| md(mulmod(x, p, m) + mulmod(y, q, m), m))
        .collect();
    Column { v, c }
}

fn scale(a: &Column, x: i64, moduli: &[i64], cm: &[i64]) -> Column {
    Column {
        v: a.v.iter().zip(moduli).map(|(&p, &m)| mulmod(x, p, m)).collect(),
        c: a.c.iter().zip(cm).map(|(&p, &m)| mulmod(x, p, m)).collect(),
    }
}

/// The quotient `ℤ^r / L` for a lattice `L ⊇ Eℤ^r`, in Smith form.
///
/// `coords(c)` gives the invariant-factor coordinates of a coefficient vector
/// and `lift(k)` a coefficient vector representing the k-th generator.
#[derive(Clone, Debug)]
pub struct SnfQuotient {
    pub rank: usize,
    pub exponent: i64,
    /// Invariant factors `d_1 | d_2 | ...`, all > 1.
    pub invariants: Vec<i64>,
    keep: Vec<usize>,
    v: Vec<Vec<i64>>,
    vinv: Vec<Vec<i64>>,
}

impl SnfQuotient {
    /// `rels` generate `L` together with `E·e_l`.
    pub fn new(rank: usize, exponent: i64, rels: &[Vec<i64>]) -> Self {
        let e = exponent.max(1);
        let mut a: Vec<Vec<i64>> = rels
            .iter()
            .map(|r| r.iter().map(|&x| md(x, e)).collect())
            .filter(|r: &Vec<i64>| r.iter().any(|&x| x != 0))
            .collect();
        let mut v = identity(rank);
        let mut vinv = identity(rank);
        let mut diag = vec![e; rank];
        let mut t = 0;
        while t < rank {
            // pick the entry generating the largest ideal of ℤ/E
            let mut best: Option<(i64, usize, usize)> = None;
            for (i, row) in a.iter().enumerate().skip(t) {
                for j in t..rank {
                    if row[j] != 0 {
                        let g = gcd(row[j], e);
                        if best.map_or(true, |(bg, _, _)| g < bg) {
                            best = Some((g, i, j));
                        }
                    }
                }
            }
            let Some((_, bi, bj)) = best else { break };
            a.swap(t, bi);
            swap_cols(&mut a, &mut v, &mut vinv, t, bj);
            let mut guard = 0;
            'pivot: loop {
                guard += 1;
                assert!(guard < 10_000, "smith form did not converge");
                // scale row t so the pivot is gcd(pivot, E)
                let p = a[t][t];
                let g = gcd(p, e);
                let u = unit_to_gcd(p, e);
                for j in t..rank {
                    a[t][j] = mulmod(u, a[t][j], e);
                }
                debug_assert_eq!(a[t][t], g % e);
                for i in (t + 1)..a.len() {
                    let q = a[i][t];
                    if q == 0 {
                        continue;
                    }
                    if q % g == 0 {
                        let k = q / g;
                        for j in t..rank {
                            a[i][j] = md(a[i][j] - mulmod(k, a[t][j], e), e);
                        }
                    } else {
                        let (p, q) = (a[t][t], q);
                        let (g2, x, y) = ext_gcd(p, q);
                        let (pg, qg) = (p / g2, q / g2);
                        for j in t..rank {
                            let (u, w) = (a[t][j], a[i][j]);
                            a[t][j] = md(mulmod(x, u, e) + mulmod(y, w, e), e);
                            a[i][j] = md(mulmod(-qg, u, e) + mulmod(pg, w, e), e);
                        }
                        continue 'pivot;
                    }
                }
                for j in (t + 1)..rank {
                    let q = a[t][j];
                    if q == 0 {
                        continue;
                    }
                    if q % g == 0 {
                        col_op(&mut a, &mut v, &mut vinv, t, j, 1, 0, 1, q / g, e);
                    } else {
                        let p = a[t][t];
                        let (g2, x, y) = ext_gcd(p, q);
                        col_op(&mut a, &mut v, &mut vinv, t, j, x, y, p / g2, q / g2, e);
                        continue 'pivot;
                    }
                }
                break;
            }
            diag[t] = gcd(a[t][t], e);
            if diag[t] == 0 {
                diag[t] = e;
            }
            t += 1;
        }
        // the pivot a[t][t] generates the same ideal as diag[t]; coordinates
        // are read modulo diag[t], so no unit rescaling is needed.
        // Normalize the diagonal into a divisibility chain.
        loop {
            let mut changed = false;
            for i in 0..rank {
                for j in (i + 1)..rank {
                    let (p, q) = (diag[i], diag[j]);
                    if q % p != 0 {
                        let (g, x, y) = ext_gcd(p, q);
                        let l = p / g * q;
                        // V <- V * [[1, -y q/g],[1, x p/g]]
                        let (a11, a12, a21, a22) = (1, -y * (q / g), 1, x * (p / g));
                        let (b11, b12, b21, b22) = (x * (p / g), y * (q / g), -1, 1);
                        for row in v.iter_mut() {
                            let (u, w) = (row[i], row[j]);
                            row[i] = md(mulmod(u, a11, e) + mulmod(w, a21, e), e);
                            row[j] = md(mulmod(u, a12, e) + mulmod(w, a22, e), e);
                        }
                        for k in 0..rank {
                            let (u, w) = (vinv[i][k], vinv[j][k]);
                            vinv[i][k] = md(mulmod(b11, u, e) + mulmod(b12, w, e), e);
                            vinv[j][k] = md(mulmod(b21, u, e) + mulmod(b22, w, e), e);
                        }
                        diag[i] = g;
                        diag[j] = l;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let keep: Vec<usize> = (0..rank).filter(|&k| diag[k] != 1).collect();
        let invariants = keep.iter().map(|&k| diag[k]).collect();
        SnfQuotient {
            rank,
            exponent: e,
            invariants,
            keep,
            v,
            vinv,
        }
    }

    pub fn order(&self) -> u128 {
        self.invariants.iter().map(|&d| d as u128).product()
    }

    pub fn coords(&self, c: &[i64]) -> Vec<i64> {
        self.keep
            .iter()
            .zip(&self.invariants)
            .map(|(&k, &d)| {
                let mut s: i128 = 0;
                for (l, &cl) in c.iter().enumerate() {
                    s += cl as i128 * self.v[l][k] as i128;
                }
                s.rem_euclid(d as i128) as i64
            })
            .collect()
    }

    pub fn lift(&self, k: usize) -> Vec<i64> {
        self.vinv[self.keep[k]].clone()
    }
}

/// A subquotient `(⟨num⟩ + ⟨den⟩) / ⟨den⟩` of `⊕ ℤ/m_i`, presented in Smith
/// form: coordinates of elements and explicit lifts of generators.
#[derive(Clone, Debug)]
pub struct Subquotient {
    ambient: Vec<i64>,
    num: Vec<Vec<i64>>,
    echelon: ModEchelon,
    snf: SnfQuotient,
}

impl Subquotient {
    pub fn new(ambient: &[i64], num: Vec<Vec<i64>>, den: &[Vec<i64>]) -> Self {
        let e = ambient.iter().fold(1, |a, &m| lcm(a, m));
        let mut gens = num.clone();
        gens.extend(den.iter().cloned());
        let cm = vec![e; gens.len()];
        let echelon = ModEchelon::new(&gens, ambient, &cm);
        let r = num.len();
        let rels: Vec<Vec<i64>> = echelon
            .relations()
            .iter()
            .map(|c| c[..r].to_vec())
            .collect();
        let snf = SnfQuotient::new(r, e, &rels);
        Subquotient {
            ambient: ambient.to_vec(),
            num,
            echelon,
            snf,
        }
    }

    pub fn invariants(&self) -> &[i64] {
        &self.snf.invariants
    }

    pub fn order(&self) -> u128 {
        self.snf.order()
    }

    pub fn ambient(&self) -> &[i64] {
        &self.ambient
    }

    /// Coordinates of `x`, or `None` if `x ∉ ⟨num⟩ + ⟨den⟩`.
    pub fn dlog(&self, x: &[i64]) -> Option<Vec<i64>> {
        let c = self.echelon.solve(x)?;
        Some(self.snf.coords(&c[..self.num.len()]))
    }

    /// An ambient vector representing the `k`-th invariant-factor generator.
    pub fn lift(&self, k: usize) -> Vec<i64> {
        let c = self.snf.lift(k);
        self.combine(&c)
    }

    /// Ambient representative of a coordinate vector.
    pub fn element(&self, coords: &[i64]) -> Vec<i64> {
        let mut out = vec![0; self.ambient.len()];
        for (k, &a) in coords.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let l = self.lift(k);
            for (i, o) in out.iter_mut().enumerate() {
                *o = md(*o + mulmod(a, l[i], self.ambient[i]), self.ambient[i]);
            }
        }
        out
    }

    fn combine(&self, c: &[i64]) -> Vec<i64> {
        let mut out = vec![0; self.ambient.len()];
        for (l, &cl) in c.iter().enumerate() {
            if cl == 0 {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let m = self.ambient[i];
                *o = md(*o + mulmod(cl, self.num[l][i], m), m);
            }
        }
        out
    }
}

/// Enumerates all coordinate vectors of a finite abelian group with the given
/// invariant factors, in lexicographic order.
pub fn enumerate_coords(inv: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for &d in inv {
        let mut next = Vec::with_capacity(out.len() * d as usize);
        for v in &out {
            for a in 0..d {
                let mut w = v.clone();
                w.push(a);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

fn swap_cols(a: &mut [Vec<i64>], v: &mut [Vec<i64>], vinv: &mut [Vec<i64>], s: usize, t: usize) {
    if s == t {
        return;
    }
    for row in a.iter_mut() {
        row.swap(s, t);
    }
    for row in v.iter_mut() {
        row.swap(s, t);
    }
    vinv.swap(s, t);
}

#[allow(clippy::too_many_arguments)]
/// A unit `u` modulo `e` with `u·p ≡ gcd(p, e)`.
fn unit_to_gcd(p: i64, e: i64) -> i64 {
    let g = gcd(p, e);
    if e == 1 {
        return 0;
    }
    let eg = e / g;
    let u0 = if eg == 1 { 1 } else { inv_mod(md(p / g, eg), eg).expect("coprime") };
    let mut u = u0;
    while gcd(u, e) != 1 {
        u += eg;
    }
    md(u, e)
}

fn col_op(
    a: &mut [Vec<i64>],
    v: &mut [Vec<i64>],
    vinv: &mut [Vec<i64>],
    t: usize,
    j: usize,
    x: i64,
    y: i64,
    pg: i64,
    qg: i64,
    e: i64,
) {
    // new col t = x col_t + y col_j ; new col j = -qg col_t + pg col_j
    for row in a.iter_mut().chain(v.iter_mut()) {
        let (u, w) = (row[t], row[j]);
        row[t] = md(mulmod(x, u, e) + mulmod(y, w, e), e);
        row[j] = md(mulmod(-qg, u, e) + mulmod(pg, w, e), e);
    }
    // inverse acts on rows of vinv: [[pg, qg], [-y, x]]
    let n = vinv[t].len();
    for k in 0..n {
        let (u, w) = (vinv[t][k], vinv[j][k]);
        vinv[t][k] = md(mulmod(pg, u, e) + mulmod(qg, w, e), e);
        vinv[j][k] = md(mulmod(-y, u, e) + mulmod(x, w, e), e);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ext_gcd_identity() {
        for a in -20..20 {
            for b in -20..20 {
                let (g, x, y) = ext_gcd(a, b);
                assert_eq!(g, gcd(a, b));
                assert_eq!(x * a + y * b, g);
            }
        }
    }

    #[test]
    fn echelon_membership_matches_enumeration() {
        // subgroup of Z/4 x Z/6 generated by (2,3)
        let moduli = [4, 6];
        let e = ModEchelon::new(&[vec![2, 3]], &moduli, &[12]);
        let mut span = std::collections::HashSet::new();
        for k in 0..12 {
            span.insert([md(2 * k, 4), md(3 * k, 6)]);
        }
        for a in 0..4 {
            for b in 0..6 {
                assert_eq!(e.contains(&[a, b]), span.contains(&[a, b]));
            }
        }
        assert_eq!(e.span_order(), 2);
        // relations: 2·(2,3) = 0
        assert!(e.relations().iter().all(|r| md(r[0], 2) == 0));
    }

    #[test]
    fn smith_of_diagonal() {
        let q = SnfQuotient::new(2, 12, &[vec![4, 0], vec![0, 6]]);
        assert_eq!(q.invariants, vec![2, 12]);
        assert_eq!(q.order(), 24);
        for k in 0..2 {
            let c = q.lift(k);
            let co = q.coords(&c);
            for (i, &x) in co.iter().enumerate() {
                assert_eq!(x, i64::from(i == k));
            }
        }
    }
}
