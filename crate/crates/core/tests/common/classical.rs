//! The classical transfer factor for the elliptic torus of `PGL₂`, computed
//! from scratch with `2×2` matrices over `E` and a hand-rolled `χ`.

use endocover::localfield::{rat, Place, QuadExtElement, Rat};
use endocover::transfer::{ChiData, Mat2};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type E = QuadExtElement;
pub type M = [[E; 2]; 2];

pub fn c(v: Place, d: Rat, a: Rat, b: Rat) -> E {
    E { place: v, d, a, b }
}

pub fn mmul(x: &M, y: &M) -> M {
    let e = |i: usize, j: usize| x[i][0].mul(&y[0][j]).add(&x[i][1].mul(&y[1][j]));
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

pub fn minv(x: &M) -> M {
    let det = x[0][0].mul(&x[1][1]).sub(&x[0][1].mul(&x[1][0]));
    let di = det.inv().unwrap();
    let z = c(x[0][0].place, x[0][0].d, rat(0), rat(0));
    [[x[1][1].mul(&di), z.sub(&x[0][1]).mul(&di)], [z.sub(&x[1][0]).mul(&di), x[0][0].mul(&di)]]
}

pub fn mconj(x: &M) -> M {
    [[x[0][0].conj(), x[0][1].conj()], [x[1][0].conj(), x[1][1].conj()]]
}

/// `y ∈ F^×` with `g' α∨(a) n σ(g')⁻¹ = g' α∨(y) g'⁻¹`.
pub fn relative_class(v: Place, d: Rat, h: &Mat2, a: &E) -> Rat {
    let f = |q: Rat| c(v, d, q, rat(0));
    let half = rat(1) / rat(2);
    let s = c(v, d, rat(0), rat(1));
    let g_std: M = [[s.clone(), f(-half)], [f(rat(1)), s.inv().unwrap().scale(half)]];
    let hm: M = [[f(h[0][0]), f(h[0][1])], [f(h[1][0]), f(h[1][1])]];
    let dh = h[0][0] * h[1][1] - h[0][1] * h[1][0];
    let corr: M = [[f(rat(1)), f(rat(0))], [f(rat(0)), f(rat(1) / dh)]];
    let g = mmul(&mmul(&hm, &g_std), &corr);
    let det = g[0][0].mul(&g[1][1]).sub(&g[0][1].mul(&g[1][0]));
    assert_eq!(det.as_base(), Some(rat(1)), "g' not in SL₂");
    let coroot: M = [[a.clone(), f(rat(0))], [f(rat(0)), a.inv().unwrap()]];
    let n: M = [[f(rat(0)), f(rat(1))], [f(rat(-1)), f(rat(0))]];
    let m = mmul(&mmul(&coroot, &n), &mmul(&minv(&mconj(&g)), &g));
    assert!(m[0][1].is_zero() && m[1][0].is_zero(), "not in the torus");
    let y = m[0][0].as_base().expect("class not in F^×");
    assert_eq!(m[1][1].as_base(), Some(rat(1) / y));
    y
}

pub type C = (f64, f64);

pub fn cmul(x: C, y: C) -> C {
    (x.0 * y.0 - x.1 * y.1, x.0 * y.1 + x.1 * y.0)
}

pub fn cinv(x: C) -> C {
    let n = x.0 * x.0 + x.1 * x.1;
    (x.0 / n, -x.1 / n)
}

pub fn vp(q: &Rat, p: i128) -> i64 {
    let (mut n, mut d, mut k) = (*q.numer(), *q.denom(), 0);
    while n % p == 0 {
        n /= p;
        k += 1;
    }
    while d % p == 0 {
        d /= p;
        k -= 1;
    }
    k
}

pub fn euler(q: &Rat, p: i128) -> i8 {
    let r = |x: i128| x.rem_euclid(p);
    let pw = |mut b: i128, mut e: i128| {
        let mut out = 1;
        b = r(b);
        while e > 0 {
            if e & 1 == 1 {
                out = r(out * b);
            }
            b = r(b * b);
            e >>= 1;
        }
        out
    };
    let u = r(*q.numer() * pw(*q.denom(), p - 2));
    if pw(u, (p - 1) / 2) == 1 {
        1
    } else {
        -1
    }
}

/// χ from first principles: `χ|F^× = κ_{E/F}`, `χ(σz) = χ(z)⁻¹`.
pub enum Chi {
    Unram(i128),
    Ram { p: i128, zeta: C },
    Real(i64),
}

impl Chi {
    pub fn eval(&self, z: &E) -> C {
        match *self {
            Chi::Unram(p) => {
                let k = vp(&z.norm(), p);
                assert_eq!(k % 2, 0);
                (if (k / 2) % 2 == 0 { 1.0 } else { -1.0 }, 0.0)
            }
            Chi::Ram { p, zeta } => {
                let inf = i64::MAX / 4;
                let va = if z.a == rat(0) { inf } else { 2 * vp(&z.a, p) };
                let vb = if z.b == rat(0) { inf } else { 2 * vp(&z.b, p) + 1 };
                let k = va.min(vb);
                let m = k.div_euclid(2);
                let dm = pow(&z.d, m);
                let res = if k % 2 == 0 { z.a / dm } else { z.b / dm };
                let mut out = (euler(&res, p) as f64, 0.0);
                for _ in 0..k.rem_euclid(4) {
                    out = cmul(out, zeta);
                }
                out
            }
            Chi::Real(k) => {
                let t = (z.b.to_f64() * (-z.d.to_f64()).sqrt()).atan2(z.a.to_f64()) * k as f64;
                (t.cos(), t.sin())
            }
        }
    }
}

pub trait ToF {
    fn to_f64(&self) -> f64;
}

impl ToF for Rat {
    fn to_f64(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}

pub fn pow(x: &Rat, k: i64) -> Rat {
    let mut out = rat(1);
    for _ in 0..k.unsigned_abs() {
        out = if k > 0 { out * x } else { out / x };
    }
    out
}

pub struct Case {
    pub v: Place,
    pub d: i128,
    pub chi_lib: ChiData,
    pub chi: Chi,
}

pub fn cases() -> Vec<Case> {
    vec![
        Case { v: Place::Padic(3), d: 2, chi_lib: ChiData::Unramified, chi: Chi::Unram(3) },
        Case { v: Place::Padic(3), d: 3, chi_lib: ChiData::Ramified { zeta_turns: (1, 4) }, chi: Chi::Ram { p: 3, zeta: (0.0, 1.0) } },
        Case { v: Place::Padic(3), d: 6, chi_lib: ChiData::Ramified { zeta_turns: (1, 4) }, chi: Chi::Ram { p: 3, zeta: (0.0, 1.0) } },
        Case { v: Place::Padic(5), d: 2, chi_lib: ChiData::Unramified, chi: Chi::Unram(5) },
        Case { v: Place::Padic(5), d: 5, chi_lib: ChiData::Ramified { zeta_turns: (0, 1) }, chi: Chi::Ram { p: 5, zeta: (1.0, 0.0) } },
        Case { v: Place::Padic(5), d: 10, chi_lib: ChiData::Ramified { zeta_turns: (1, 2) }, chi: Chi::Ram { p: 5, zeta: (-1.0, 0.0) } },
        Case { v: Place::Real, d: -1, chi_lib: ChiData::Real { k: 1 }, chi: Chi::Real(1) },
        Case { v: Place::Real, d: -1, chi_lib: ChiData::Real { k: 3 }, chi: Chi::Real(3) },
    ]
}

pub fn nz(rng: &mut ChaCha8Rng, lim: i128) -> i128 {
    loop {
        let x = rng.gen_range(-lim..=lim);
        if x != 0 {
            return x;
        }
    }
}

pub fn close(x: C, y: C) -> bool {
    (x.0 - y.0).abs() < 1e-9 && (x.1 - y.1).abs() < 1e-9
}

