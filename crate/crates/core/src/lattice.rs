//! Exact integer matrices for small lattices (rank ≤ 8 in practice).

use crate::linalg::ext_gcd;

pub type IMat = Vec<Vec<i64>>;

pub fn identity(n: usize) -> IMat {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn zeros(r: usize, c: usize) -> IMat {
    vec![vec![0; c]; r]
}

pub fn mat_mul(a: &IMat, b: &IMat) -> IMat {
    let n = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| row.iter().zip(b).map(|(&x, br)| x * br[j]).sum())
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &IMat, v: &[i64]) -> Vec<i64> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(&x, &y)| x * y).sum())
        .collect()
}

pub fn transpose(a: &IMat) -> IMat {
    let c = a.first().map_or(0, |r| r.len());
    (0..c).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

/// Determinant by fraction-free elimination.
pub fn det(a: &IMat) -> i64 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut m: Vec<Vec<i128>> = a
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| m[i][k] != 0) else {
                return 0;
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    (sign * m[n - 1][n - 1]) as i64
}

/// Inverse of a unimodular matrix, `None` if the determinant is not ±1.
pub fn inverse_unimodular(a: &IMat) -> Option<IMat> {
    let n = a.len();
    let d = det(a);
    if d.abs() != 1 {
        return None;
    }
    // Gauss–Jordan over ℚ is exact here because the result is integral;
    // we use i128 fractions with a common denominator via the adjugate.
    let mut inv = zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let minor: IMat = (0..n)
                .filter(|&r| r != j)
                .map(|r| (0..n).filter(|&c| c != i).map(|c| a[r][c]).collect())
                .collect();
            let cof = det(&minor) * if (i + j) % 2 == 0 { 1 } else { -1 };
            inv[i][j] = cof * d;
        }
    }
    Some(inv)
}

/// Column-style Hermite reduction of `a` (m×n) carrying an n×n transform `t`
/// with `a · t = h`. Returns `(h, t, rank)`; the last `n - rank` columns of
/// `h` are zero, so the matching columns of `t` span the integer kernel.
pub fn column_echelon(a: &IMat, n: usize) -> (IMat, IMat, usize) {
    let m = a.len();
    let mut h: Vec<Vec<i128>> = a
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut t: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect();
    let mut rank = 0;
    for i in 0..m {
        if rank == n {
            break;
        }
        // gcd-combine columns rank..n in row i into column `rank`
        for j in rank + 1..n {
            if h[i][j] == 0 {
                continue;
            }
            let (p, q) = (h[i][rank], h[i][j]);
            let (g, x, y) = ext_gcd(p as i64, q as i64);
            let (g, x, y) = (g as i128, x as i128, y as i128);
            let (pg, qg) = (p / g, q / g);
            for row in h.iter_mut().chain(t.iter_mut()) {
                let (u, w) = (row[rank], row[j]);
                row[rank] = x * u + y * w;
                row[j] = -qg * u + pg * w;
            }
        }
        if h[i][rank] != 0 {
            if h[i][rank] < 0 {
                for row in h.iter_mut().chain(t.iter_mut()) {
                    row[rank] = -row[rank];
                }
            }
            rank += 1;
        }
    }
    let cv = |v: Vec<Vec<i128>>| -> IMat {
        v.into_iter()
            .map(|r| r.into_iter().map(|x| i64::try_from(x).expect("overflow")).collect())
            .collect()
    };
    (cv(h), cv(t), rank)
}

/// Basis (as columns, returned as a list of vectors) of `{x ∈ ℤ^n : a x = 0}`.
pub fn integer_kernel(a: &IMat, n: usize) -> Vec<Vec<i64>> {
    let (_, t, rank) = column_echelon(a, n);
    (rank..n).map(|j| t.iter().map(|r| r[j]).collect()).collect()
}

/// Solves `Σ c_j cols[j] = v` over ℤ, if possible.
pub fn solve_integer(cols: &[Vec<i64>], v: &[i64]) -> Option<Vec<i64>> {
    let m = v.len();
    let n = cols.len();
    let a: IMat = (0..m).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
    let (h, t, rank) = column_echelon(&a, n);
    // forward substitution on the echelon columns
    let mut r: Vec<i128> = v.iter().map(|&x| x as i128).collect();
    let mut coef = vec![0i128; n];
    let mut col = 0;
    for i in 0..m {
        if col < rank && h[i][col] != 0 {
            let p = h[i][col] as i128;
            if r[i] % p != 0 {
                return None;
            }
            let q = r[i] / p;
            for k in 0..m {
                r[k] -= q * h[k][col] as i128;
            }
            coef[col] = q;
            col += 1;
        } else if r[i] != 0 {
            return None;
        }
    }
    if r.iter().any(|&x| x != 0) {
        return None;
    }
    Some(
        (0..n)
            .map(|i| (0..n).map(|j| t[i][j] as i128 * coef[j]).sum::<i128>() as i64)
            .collect(),
    )
}

/// Smith form of an integer matrix: `u · a · v = diag(d)`.
#[derive(Clone, Debug)]
pub struct IntSmith {
    pub d: Vec<i64>,
    pub u: IMat,
    pub u_inv: IMat,
    pub v: IMat,
}

pub fn smith(a: &IMat, rows: usize, cols: usize) -> IntSmith {
    let mut m: Vec<Vec<i128>> = (0..rows)
        .map(|i| (0..cols).map(|j| a[i][j] as i128).collect())
        .collect();
    let id = |n: usize| -> Vec<Vec<i128>> {
        (0..n)
            .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
            .collect()
    };
    let mut u = id(rows);
    let mut ui = id(rows);
    let mut v = id(cols);
    let k = rows.min(cols);
    for t in 0..k {
        loop {
            // smallest nonzero absolute entry in the remaining block
            let mut best: Option<(i128, usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = m[i][j].abs();
                    if x != 0 && best.map_or(true, |(b, _, _)| x < b) {
                        best = Some((x, i, j));
                    }
                }
            }
            let Some((_, bi, bj)) = best else { break };
            m.swap(t, bi);
            u.swap(t, bi);
            for row in ui.iter_mut() {
                row.swap(t, bi);
            }
            for row in m.iter_mut().chain(v.iter_mut()) {
                row.swap(t, bj);
            }
            let p = m[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let q = m[i][t].div_euclid(p);
                if q != 0 {
                    for j in 0..cols {
                        m[i][j] -= q * m[t][j];
                    }
                    for j in 0..rows {
                        u[i][j] -= q * u[t][j];
                    }
                    for r in ui.iter_mut() {
                        r[t] += q * r[i];
                    }
                }
                if m[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let q = m[t][j].div_euclid(p);
                if q != 0 {
                    for row in m.iter_mut().chain(v.iter_mut()) {
                        let w = row[t];
                        row[j] -= q * w;
                    }
                }
                if m[t][j] != 0 {
                    clean = false;
                }
            }
            if clean {
                // enforce divisibility of the remaining block
                let mut bad = None;
                'o: for i in t + 1..rows {
                    for j in t + 1..cols {
                        if m[i][j] % p != 0 {
                            bad = Some(i);
                            break 'o;
                        }
                    }
                }
                match bad {
                    None => break,
                    Some(i) => {
                        for j in 0..cols {
                            m[t][j] += m[i][j];
                        }
                        for j in 0..rows {
                            u[t][j] += u[i][j];
                        }
                        for r in ui.iter_mut() {
                            r[i] -= r[t];
                        }
                    }
                }
            }
        }
        if m[t][t] < 0 {
            for j in 0..cols {
                m[t][j] = -m[t][j];
            }
            for j in 0..rows {
                u[t][j] = -u[t][j];
            }
            for r in ui.iter_mut() {
                r[t] = -r[t];
            }
        }
    }
    let cv = |x: Vec<Vec<i128>>| -> IMat {
        x.into_iter()
            .map(|r| r.into_iter().map(|e| e as i64).collect())
            .collect()
    };
    let d = (0..k).map(|t| m[t][t] as i64).collect();
    IntSmith {
        d,
        u: cv(u),
        u_inv: cv(ui),
        v: cv(v),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smith_transforms_are_consistent() {
        let a = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        let s = smith(&a, 3, 3);
        assert_eq!(s.d, vec![2, 6, 12]);
        let prod = mat_mul(&mat_mul(&s.u, &a), &s.v);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(prod[i][j], if i == j { s.d[i] } else { 0 });
            }
        }
        assert_eq!(mat_mul(&s.u, &s.u_inv), identity(3));
    }

    #[test]
    fn kernel_and_solve() {
        let a = vec![vec![1, 1, 1]];
        let k = integer_kernel(&a, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(dot(&a[0], v), 0);
        }
        let c = solve_integer(&[vec![2, 0], vec![0, 3]], &[4, 9]).unwrap();
        assert_eq!(c, vec![2, 3]);
        assert!(solve_integer(&[vec![2, 0]], &[1, 0]).is_none());
    }

    #[test]
    fn unimodular_inverse() {
        let a = vec![vec![2, 1], vec![1, 1]];
        let b = inverse_unimodular(&a).unwrap();
        assert_eq!(mat_mul(&a, &b), identity(2));
        assert!(inverse_unimodular(&vec![vec![2, 0], vec![0, 1]]).is_none());
    }
}
