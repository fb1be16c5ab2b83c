//! Every finite `Γ`-module with `|Γ| ≤ 4` and `|M| ≤ 16`, up to isomorphism
//! of modules (conjugation by `Aut(M)`).

use std::collections::{HashMap, HashSet, VecDeque};

use endocover::galois_module::{FiniteGroup, FiniteModule};

/// Invariant factors `d₁ | d₂ | …` with product at most `bound`; `[]` is the zero module.
pub fn abelian_types(bound: i64) -> Vec<Vec<i64>> {
    fn go(prefix: Vec<i64>, prod: i64, bound: i64, out: &mut Vec<Vec<i64>>) {
        if !prefix.is_empty() {
            out.push(prefix.clone());
        }
        let last = prefix.last().copied().unwrap_or(1);
        let mut d = if prefix.is_empty() { 2 } else { last };
        while prod * d <= bound {
            if d % last == 0 {
                let mut p = prefix.clone();
                p.push(d);
                go(p, prod * d, bound, out);
            }
            d += 1;
        }
    }
    let mut out = vec![vec![]];
    go(vec![], 1, bound, &mut out);
    out
}

fn elements(f: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for &d in f {
        out = out.into_iter().flat_map(|v: Vec<i64>| (0..d).map(move |a| [v.clone(), vec![a]].concat())).collect();
    }
    out
}

fn apply(f: &[i64], a: &[Vec<i64>], x: &[i64]) -> Vec<i64> {
    a.iter().zip(f).map(|(row, &d)| row.iter().zip(x).map(|(p, q)| p * q).sum::<i64>().rem_euclid(d)).collect()
}

type Perm = Vec<u8>;

struct Aut {
    mats: Vec<Vec<Vec<i64>>>,
    perms: Vec<Perm>,
    index: HashMap<Perm, usize>,
}

fn compose(p: &Perm, q: &Perm) -> Perm {
    q.iter().map(|&i| p[i as usize]).collect()
}

fn invert(p: &Perm) -> Perm {
    let mut out = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        out[j as usize] = i as u8;
    }
    out
}

fn automorphisms(f: &[i64]) -> Aut {
    let els = elements(f);
    let pos: HashMap<Vec<i64>, usize> = els.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
    let r = f.len();
    // entry (i, j) is t mod d_i with t·d_j ≡ 0 mod d_i
    let choices: Vec<Vec<i64>> = (0..r * r)
        .map(|k| {
            let (i, j) = (k / r, k % r);
            (0..f[i]).filter(|t| (t * f[j]) % f[i] == 0).collect()
        })
        .collect();
    let mut mats = Vec::new();
    let mut perms = Vec::new();
    let mut idx = vec![0usize; r * r];
    loop {
        let a: Vec<Vec<i64>> = (0..r).map(|i| (0..r).map(|j| choices[i * r + j][idx[i * r + j]]).collect()).collect();
        let p: Perm = els.iter().map(|x| pos[&apply(f, &a, x)] as u8).collect();
        let mut seen = vec![false; els.len()];
        if p.iter().all(|&i| !std::mem::replace(&mut seen[i as usize], true)) {
            mats.push(a);
            perms.push(p);
        }
        let mut k = 0;
        loop {
            if k == r * r {
                let index = perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
                return Aut { mats, perms, index };
            }
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// A generating set found greedily.
fn generators(aut: &Aut) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut closure: HashSet<usize> = HashSet::from([aut.index[&aut.perms[0].iter().enumerate().map(|(i, _)| i as u8).collect::<Perm>()]]);
    for (i, _) in aut.perms.iter().enumerate() {
        if closure.contains(&i) {
            continue;
        }
        gens.push(i);
        let mut queue: VecDeque<usize> = closure.iter().copied().collect();
        while let Some(x) = queue.pop_front() {
            for &g in &gens {
                let y = aut.index[&compose(&aut.perms[x], &aut.perms[g])];
                if closure.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        if closure.len() == aut.perms.len() {
            break;
        }
    }
    gens
}

fn power(group: &FiniteGroup, g: usize, k: usize) -> usize {
    (0..k).fold(group.identity(), |a, _| group.mul(a, g))
}

fn order_of(group: &FiniteGroup, g: usize) -> usize {
    (1..=group.order()).find(|&k| power(group, g, k) == group.identity()).unwrap()
}

pub fn small_groups() -> Vec<(&'static str, FiniteGroup)> {
    vec![
        ("1", FiniteGroup::trivial()),
        ("Z/2", FiniteGroup::cyclic(2)),
        ("Z/3", FiniteGroup::cyclic(3)),
        ("Z/4", FiniteGroup::cyclic(4)),
        ("V4", FiniteGroup::klein_four()),
    ]
}

/// All `(Γ, M)` up to isomorphism, `|Γ| ≤ 4`, `|M| ≤ bound`.
pub fn all_modules(bound: i64) -> Vec<(String, FiniteGroup, FiniteModule)> {
    let mut out = Vec::new();
    for f in abelian_types(bound) {
        let aut = automorphisms(&f);
        let id_perm: Perm = (0..aut.perms[0].len() as u8).collect();
        let gens_aut = generators(&aut);
        for (gname, group) in small_groups() {
            // generators of Γ and, for each element, its word in them
            let gens: Vec<usize> = if group.order() == 1 {
                vec![]
            } else if let Some(g) = group.elements().find(|&g| order_of(&group, g) == group.order()) {
                vec![g]
            } else {
                group.elements().filter(|&g| g != group.identity()).take(2).collect()
            };
            let words: Vec<Vec<usize>> = group
                .elements()
                .map(|x| {
                    let mut exps = vec![0; gens.len()];
                    loop {
                        let y = gens.iter().zip(&exps).fold(group.identity(), |acc, (&g, &e)| group.mul(acc, power(&group, g, e)));
                        if y == x {
                            return exps;
                        }
                        let mut k = 0;
                        loop {
                            exps[k] += 1;
                            if exps[k] < order_of(&group, gens[k]) {
                                break;
                            }
                            exps[k] = 0;
                            k += 1;
                        }
                    }
                })
                .collect();
            let candidates: Vec<Vec<usize>> = gens
                .iter()
                .map(|&g| {
                    let n = order_of(&group, g);
                    (0..aut.perms.len()).filter(|&i| (0..n).fold(id_perm.clone(), |acc, _| compose(&acc, &aut.perms[i])) == id_perm).collect()
                })
                .collect();
            let mut tuples: Vec<Vec<usize>> = vec![vec![]];
            for c in &candidates {
                tuples = tuples.into_iter().flat_map(|t| c.iter().map(move |&i| [t.clone(), vec![i]].concat())).collect();
            }
            // the generators of Γ commute, so their images must too
            tuples.retain(|t| t.iter().all(|&x| t.iter().all(|&y| compose(&aut.perms[x], &aut.perms[y]) == compose(&aut.perms[y], &aut.perms[x]))));
            let set: HashSet<Vec<usize>> = tuples.iter().cloned().collect();
            let mut done: HashSet<Vec<usize>> = HashSet::new();
            for t in &tuples {
                if done.contains(t) {
                    continue;
                }
                let mut queue = VecDeque::from([t.clone()]);
                done.insert(t.clone());
                while let Some(x) = queue.pop_front() {
                    for &g in &gens_aut {
                        let (p, pi) = (&aut.perms[g], invert(&aut.perms[g]));
                        let y: Vec<usize> = x.iter().map(|&i| aut.index[&compose(&compose(p, &aut.perms[i]), &pi)]).collect();
                        debug_assert!(set.contains(&y));
                        if done.insert(y.clone()) {
                            queue.push_back(y);
                        }
                    }
                }
                let action: Vec<Vec<Vec<i64>>> = words
                    .iter()
                    .map(|w| {
                        let p = w.iter().zip(t).fold(id_perm.clone(), |acc, (&e, &i)| (0..e).fold(acc, |a, _| compose(&a, &aut.perms[i])));
                        aut.mats[aut.index[&p]].clone()
                    })
                    .collect();
                let m = FiniteModule::new(&group, f.clone(), action).expect("a module");
                out.push((format!("{gname} on {f:?}"), group.clone(), m));
            }
        }
    }
    out
}
