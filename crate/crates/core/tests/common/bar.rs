//! Inhomogeneous cochains written out from the textbook formula, kept apart
//! from the library's own differential.

use endocover::cohomology::Cochain;
use endocover::galois_module::{FiniteGroup, FiniteModule};
use rand::Rng;

pub fn red(m: &FiniteModule, x: &[i64]) -> Vec<i64> {
    x.iter().zip(&m.factors).map(|(&a, &d)| a.rem_euclid(d)).collect()
}

pub fn act(m: &FiniteModule, g: usize, x: &[i64]) -> Vec<i64> {
    let a = &m.action[g];
    let v: Vec<i64> = a.iter().map(|row| row.iter().zip(x).map(|(&p, &q)| p * q).sum()).collect();
    red(m, &v)
}

fn cell(q: usize, k: usize, mut idx: usize) -> Vec<usize> {
    let mut out = vec![0; k];
    for slot in out.iter_mut().rev() {
        *slot = idx % q;
        idx /= q;
    }
    out
}

fn index(q: usize, c: &[usize]) -> usize {
    c.iter().fold(0, |a, &g| a * q + g)
}

/// `(dx)(g₁…g_{k+1}) = g₁x(g₂…) + Σ (−1)^i x(…, g_i g_{i+1}, …) + (−1)^{k+1} x(g₁…g_k)`.
pub fn d(group: &FiniteGroup, m: &FiniteModule, x: &Cochain) -> Cochain {
    let q = group.order();
    let k = x.degree;
    let r = m.factors.len();
    let values = (0..q.pow(k as u32 + 1))
        .map(|idx| {
            let g = cell(q, k + 1, idx);
            let mut acc = act(m, g[0], &x.values[index(q, &g[1..])]);
            for i in 1..=k {
                let mut c = g[..i - 1].to_vec();
                c.push(group.mul(g[i - 1], g[i]));
                c.extend_from_slice(&g[i + 1..]);
                let s = if i % 2 == 0 { 1 } else { -1 };
                for (a, b) in acc.iter_mut().zip(&x.values[index(q, &c)]) {
                    *a += s * b;
                }
            }
            let s = if (k + 1) % 2 == 0 { 1 } else { -1 };
            for (a, b) in acc.iter_mut().zip(&x.values[index(q, &g[..k])]) {
                *a += s * b;
            }
            debug_assert_eq!(acc.len(), r);
            red(m, &acc)
        })
        .collect();
    Cochain { degree: k + 1, values }
}

pub fn is_zero(x: &Cochain) -> bool {
    x.values.iter().all(|v| v.iter().all(|&a| a == 0))
}

/// `log₂ |C^k(Γ, M)|`, as a float to avoid overflow.
pub fn log_size(group: &FiniteGroup, m: &FiniteModule, k: usize) -> f64 {
    let per_cell: f64 = m.factors.iter().map(|&d| (d as f64).log2()).sum();
    per_cell * group.order().pow(k as u32) as f64
}

/// Every cochain of degree `k`, in mixed-radix order.
pub fn all_cochains(group: &FiniteGroup, m: &FiniteModule, k: usize) -> impl Iterator<Item = Cochain> {
    let cells = group.order().pow(k as u32);
    let r = m.factors.len();
    let moduli: Vec<i64> = (0..cells).flat_map(|_| m.factors.iter().copied()).collect();
    let total: u64 = moduli.iter().map(|&x| x as u64).product();
    let mut v = vec![0i64; moduli.len()];
    (0..total).map(move |step| {
        if step > 0 {
            for (x, &dd) in v.iter_mut().zip(&moduli) {
                *x += 1;
                if *x < dd {
                    break;
                }
                *x = 0;
            }
        }
        let values = if r == 0 { vec![vec![]; cells] } else { v.chunks(r).map(<[i64]>::to_vec).collect() };
        Cochain { degree: k, values }
    })
}

pub fn random_cochain(group: &FiniteGroup, m: &FiniteModule, k: usize, rng: &mut impl Rng) -> Cochain {
    let cells = group.order().pow(k as u32);
    Cochain { degree: k, values: (0..cells).map(|_| m.factors.iter().map(|&dd| rng.gen_range(0..dd)).collect()).collect() }
}
