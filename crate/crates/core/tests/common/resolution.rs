//! Cohomology orders from the small periodic resolutions of cyclic groups and
//! their tensor square for `ℤ/2 × ℤ/2`, counted by enumerating cochains.

use std::collections::HashSet;

use endocover::galois_module::{FiniteGroup, FiniteModule};

use super::bar::{act, red};

fn elements(m: &FiniteModule) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for &d in &m.factors {
        out = out.into_iter().flat_map(|v: Vec<i64>| (0..d).map(move |a| [v.clone(), vec![a]].concat())).collect();
    }
    out
}

fn add(m: &FiniteModule, x: &[i64], y: &[i64]) -> Vec<i64> {
    red(m, &x.iter().zip(y).map(|(a, b)| a + b).collect::<Vec<_>>())
}

fn sub(m: &FiniteModule, x: &[i64], y: &[i64]) -> Vec<i64> {
    red(m, &x.iter().zip(y).map(|(a, b)| a - b).collect::<Vec<_>>())
}

fn power(group: &FiniteGroup, g: usize, k: usize) -> usize {
    (0..k).fold(group.identity(), |a, _| group.mul(a, g))
}

fn order_of(group: &FiniteGroup, g: usize) -> usize {
    (1..=group.order()).find(|&k| power(group, g, k) == group.identity()).unwrap()
}

/// `(g − 1)x` and `(1 + g + … + g^{n−1})x`.
fn minus_one(m: &FiniteModule, g: usize, x: &[i64]) -> Vec<i64> {
    sub(m, &act(m, g, x), x)
}

fn norm(group: &FiniteGroup, m: &FiniteModule, g: usize, x: &[i64]) -> Vec<i64> {
    let n = order_of(group, g);
    (0..n).fold(vec![0; x.len()], |acc, k| add(m, &acc, &act(m, power(group, g, k), x)))
}

/// `|H^k(Γ, M)|` for `k ≤ 2` and `|Γ| ≤ 4`.
pub fn order(group: &FiniteGroup, m: &FiniteModule, k: usize) -> u128 {
    let els = elements(m);
    let q = group.order();
    if q == 1 {
        return if k == 0 { els.len() as u128 } else { 1 };
    }
    if let Some(g) = group.elements().find(|&g| order_of(group, g) == q) {
        // 0 → M --(g−1)--> M --N--> M --(g−1)--> M
        let e = |i: usize, x: &[i64]| if i % 2 == 0 { minus_one(m, g, x) } else { norm(group, m, g, x) };
        let kernel = els.iter().filter(|x| e(k, x).iter().all(|&a| a == 0)).count() as u128;
        if k == 0 {
            return kernel;
        }
        let image: HashSet<Vec<i64>> = els.iter().map(|x| e(k - 1, x)).collect();
        return kernel / image.len() as u128;
    }
    assert_eq!(q, 4, "only groups of order at most 4");
    let gens: Vec<usize> = group.elements().filter(|&g| g != group.identity()).take(2).collect();
    let (a, b) = (gens[0], gens[1]);
    let e = |gen: usize, i: usize, x: &[i64]| if i % 2 == 0 { minus_one(m, gen, x) } else { norm(group, m, gen, x) };
    // C^k = ⊕_{i+j=k} M, component (i, j) maps to (i+1, j) by e_a(i) and to (i, j+1) by (−1)^i e_b(j)
    let delta = |k: usize, xs: &[Vec<i64>]| -> Vec<Vec<i64>> {
        (0..=k + 1)
            .map(|i| {
                let j = k + 1 - i;
                let mut acc = vec![0; m.factors.len()];
                if i >= 1 {
                    acc = add(m, &acc, &e(a, i - 1, &xs[i - 1]));
                }
                if j >= 1 {
                    let t = e(b, j - 1, &xs[i]);
                    acc = if i % 2 == 0 { add(m, &acc, &t) } else { sub(m, &acc, &t) };
                }
                acc
            })
            .collect()
    };
    let tuples = |k: usize| -> Vec<Vec<Vec<i64>>> {
        let mut out = vec![vec![]];
        for _ in 0..=k {
            out = out.into_iter().flat_map(|t: Vec<Vec<i64>>| els.iter().map(move |x| [t.clone(), vec![x.clone()]].concat())).collect();
        }
        out
    };
    let cocycles = tuples(k).iter().filter(|t| delta(k, t).iter().all(|v| v.iter().all(|&x| x == 0))).count() as u128;
    if k == 0 {
        return cocycles;
    }
    let boundaries: HashSet<Vec<Vec<i64>>> = tuples(k - 1).iter().map(|t| delta(k - 1, t)).collect();
    cocycles / boundaries.len() as u128
}
