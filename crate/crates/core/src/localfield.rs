//! `ℚ_p` and `ℝ` with their quadratic étale extensions, exactly.
//!
//! Elements are rationals; valuations and unit residues are computed
//! symbolically. Roots of unity are carried as exact [`Phase`]s.

use std::fmt;
use std::str::FromStr;

use num::rational::Ratio;
use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rat = Ratio<i128>;

/// A place of `ℚ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "p")]
pub enum Place {
    Real,
    Padic(u32),
}

impl Place {
    pub fn padic(p: u32) -> Result<Place> {
        if !is_prime(p as u64) {
            return Err(Error::invalid("/place", format!("{p} is not prime")));
        }
        Ok(Place::Padic(p))
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Real => write!(f, "real"),
            Place::Padic(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for Place {
    type Err = Error;
    fn from_str(s: &str) -> Result<Place> {
        match s.trim() {
            "real" | "inf" | "∞" | "R" => Ok(Place::Real),
            t => t
                .parse::<u32>()
                .map_err(|_| Error::invalid("/place", format!("unknown place {t:?}")))
                .and_then(Place::padic),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Primes up to `bound`.
pub fn primes_up_to(bound: u32) -> Vec<u32> {
    (2..=bound).filter(|&p| is_prime(p as u64)).collect()
}

/// How local class field theory is normalized: the reciprocity map sends
/// uniformizers to geometric (Deligne) or arithmetic (Artin) Frobenius.
/// Quadratic characters do not see the difference; higher-order pairings
/// are conjugated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    #[default]
    Deligne,
    Artin,
}

impl Normalization {
    pub fn orient(self, x: Phase) -> Phase {
        match self {
            Normalization::Deligne => x,
            Normalization::Artin => x.inv(),
        }
    }
}

impl FromStr for Normalization {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "deligne" => Ok(Normalization::Deligne),
            "artin" => Ok(Normalization::Artin),
            t => Err(Error::invalid("/normalization", format!("expected deligne or artin, got {t:?}"))),
        }
    }
}

/// `exp(2πi·q)` for rational `q`, kept reduced in `[0, 1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Phase(Ratio<i64>);

impl Phase {
    pub fn one() -> Phase {
        Phase(Ratio::zero())
    }

    pub fn new(num: i64, den: i64) -> Phase {
        let q = Ratio::new(num, den);
        Phase(q - q.floor())
    }

    pub fn sign(s: i8) -> Phase {
        if s < 0 {
            Phase::new(1, 2)
        } else {
            Phase::one()
        }
    }

    pub fn i() -> Phase {
        Phase::new(1, 4)
    }

    pub fn turns(self) -> Ratio<i64> {
        self.0
    }

    pub fn mul(self, o: Phase) -> Phase {
        let q = self.0 + o.0;
        Phase(q - q.floor())
    }

    pub fn inv(self) -> Phase {
        Phase::one().div(self)
    }

    pub fn div(self, o: Phase) -> Phase {
        let q = self.0 - o.0;
        Phase(q - q.floor())
    }

    pub fn pow(self, k: i64) -> Phase {
        let q = self.0 * k;
        Phase(q - q.floor())
    }

    pub fn order(self) -> i64 {
        *self.0.denom()
    }

    pub fn is_one(self) -> bool {
        self.0.is_zero()
    }

    /// `±1` if the phase is real.
    pub fn as_sign(self) -> Option<i8> {
        if self.0.is_zero() {
            Some(1)
        } else if self.0 == Ratio::new(1, 2) {
            Some(-1)
        } else {
            None
        }
    }

    pub fn to_complex(self) -> (f64, f64) {
        let t = 2.0 * std::f64::consts::PI * (*self.0.numer() as f64) / (*self.0.denom() as f64);
        (t.cos(), t.sin())
    }
}

impl fmt::Debug for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_sign() {
            Some(1) => write!(f, "1"),
            Some(_) => write!(f, "-1"),
            None if self.0 == Ratio::new(1, 4) => write!(f, "i"),
            None if self.0 == Ratio::new(3, 4) => write!(f, "-i"),
            None => write!(f, "e(2πi·{}/{})", self.0.numer(), self.0.denom()),
        }
    }
}

impl Serialize for Phase {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    Rat::from_str(s.trim()).map_err(|_| Error::invalid("", format!("not a rational number: {s:?}")))
}

pub fn rat(n: i128) -> Rat {
    Rat::from_integer(n)
}

fn vp_int(mut n: i128, p: i128) -> (i64, i128) {
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    (v, n)
}

/// `(v_p(x), x / p^{v_p(x)})` with the unit part as a reduced fraction.
pub fn valuation(x: &Rat, p: u32) -> (i64, Rat) {
    assert!(!x.is_zero());
    let p = p as i128;
    let (a, n) = vp_int(*x.numer(), p);
    let (b, d) = vp_int(*x.denom(), p);
    (a - b, Rat::new(n, d))
}

fn mod_pow(mut b: i128, mut e: i128, m: i128) -> i128 {
    let mut r = 1 % m;
    b = b.rem_euclid(m);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// A `p`-adic unit reduced modulo `m` (`m` a power of `p`).
fn unit_residue(u: &Rat, m: i128) -> i128 {
    let d = u.denom().rem_euclid(m);
    // inverse by Euler: d^{φ(m)−1}; m is a prime power so brute is fine
    let inv = (1..m).find(|&k| d * k % m == 1).expect("unit");
    (u.numer().rem_euclid(m) * inv).rem_euclid(m)
}

/// Legendre symbol of a unit residue.
fn legendre(a: i128, p: i128) -> i8 {
    if mod_pow(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

fn nonzero(x: &Rat, what: &str) -> Result<()> {
    if x.is_zero() {
        Err(Error::invalid(format!("/{what}"), "must be nonzero"))
    } else {
        Ok(())
    }
}

/// The Hilbert symbol `(a, b)_v`.
pub fn hilbert_symbol(a: &Rat, b: &Rat, v: Place) -> Result<i8> {
    nonzero(a, "a")?;
    nonzero(b, "b")?;
    Ok(match v {
        Place::Real => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Padic(2) => {
            let (al, u) = valuation(a, 2);
            let (be, w) = valuation(b, 2);
            let u = unit_residue(&u, 8);
            let w = unit_residue(&w, 8);
            let eps = |x: i128| ((x - 1) / 2) & 1;
            let omega = |x: i128| ((x * x - 1) / 8) & 1;
            let e = eps(u) * eps(w) + (al as i128) * omega(w) + (be as i128) * omega(u);
            if e & 1 == 0 {
                1
            } else {
                -1
            }
        }
        Place::Padic(p) => {
            let pi = p as i128;
            let (al, u) = valuation(a, p);
            let (be, w) = valuation(b, p);
            let mut s: i8 = if (al * be) & 1 == 1 && (pi - 1) / 2 % 2 == 1 { -1 } else { 1 };
            if be & 1 == 1 {
                s *= legendre(unit_residue(&u, pi), pi);
            }
            if al & 1 == 1 {
                s *= legendre(unit_residue(&w, pi), pi);
            }
            s
        }
    })
}

/// Whether `x` is a square in `F_v`.
pub fn is_local_square(x: &Rat, v: Place) -> Result<bool> {
    nonzero(x, "x")?;
    Ok(match v {
        Place::Real => x.is_positive(),
        Place::Padic(2) => {
            let (a, u) = valuation(x, 2);
            a % 2 == 0 && unit_residue(&u, 8) == 1
        }
        Place::Padic(p) => {
            let (a, u) = valuation(x, p);
            a % 2 == 0 && legendre(unit_residue(&u, p as i128), p as i128) == 1
        }
    })
}

/// Canonical representative of the square class of `x` in `F_v^×/F_v^{×2}`:
/// `±1` at `ℝ`; `u·p^e` with `e ∈ {0,1}` and `u` a small positive integer
/// otherwise.
pub fn square_class(x: &Rat, v: Place) -> Result<Rat> {
    nonzero(x, "x")?;
    Ok(match v {
        Place::Real => rat(if x.is_positive() { 1 } else { -1 }),
        Place::Padic(2) => {
            let (a, u) = valuation(x, 2);
            rat(unit_residue(&u, 8) * if a % 2 == 0 { 1 } else { 2 })
        }
        Place::Padic(p) => {
            let (a, u) = valuation(x, p);
            let pi = p as i128;
            let unit = if legendre(unit_residue(&u, pi), pi) == 1 {
                1
            } else {
                (2..pi).find(|&k| legendre(k, pi) == -1).unwrap()
            };
            rat(unit * if a % 2 == 0 { 1 } else { pi })
        }
    })
}

/// `a + b√d` in the quadratic étale algebra `F_v(√d)`; `d` is a nonsquare.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadExtElement {
    pub place: Place,
    pub d: Rat,
    pub a: Rat,
    pub b: Rat,
}

impl QuadExtElement {
    pub fn new(place: Place, d: Rat, a: Rat, b: Rat) -> Result<Self> {
        nonzero(&d, "d")?;
        if is_local_square(&d, place)? {
            return Err(Error::invalid("/d", format!("{d} is a square at {place}")));
        }
        Ok(QuadExtElement { place, d, a, b })
    }

    pub fn from_base(place: Place, d: Rat, a: Rat) -> Result<Self> {
        Self::new(place, d, a, Rat::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn same_field(&self, o: &Self) {
        assert!(self.place == o.place && self.d == o.d, "elements of different fields");
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.same_field(o);
        QuadExtElement {
            place: self.place,
            d: self.d,
            a: self.a * o.a + self.d * self.b * o.b,
            b: self.a * o.b + self.b * o.a,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.same_field(o);
        QuadExtElement { a: self.a + o.a, b: self.b + o.b, ..self.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.same_field(o);
        QuadExtElement { a: self.a - o.a, b: self.b - o.b, ..self.clone() }
    }

    /// The nontrivial automorphism.
    pub fn conj(&self) -> Self {
        QuadExtElement { b: -self.b, ..self.clone() }
    }

    pub fn norm(&self) -> Rat {
        self.a * self.a - self.d * self.b * self.b
    }

    pub fn trace(&self) -> Rat {
        self.a + self.a
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::invalid("", "not invertible"));
        }
        Ok(QuadExtElement { a: self.a / n, b: -self.b / n, ..self.clone() })
    }

    pub fn scale(&self, q: Rat) -> Self {
        QuadExtElement { a: self.a * q, b: self.b * q, ..self.clone() }
    }

    /// The element as a base-field scalar, if it is one.
    pub fn as_base(&self) -> Option<Rat> {
        self.b.is_zero().then_some(self.a)
    }
}

impl fmt::Display for QuadExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}·√{}", self.a, self.b, self.d)
    }
}

/// `κ(η) = (d, η)_v`: `+1` iff `η` is a norm from `F_v(√d)`.
pub fn kappa(eta: &Rat, d: &Rat, v: Place) -> Result<i8> {
    nonzero(eta, "eta")?;
    if is_local_square(d, v)? {
        // split algebra: everything is a norm
        return Ok(1);
    }
    hilbert_symbol(d, eta, v)
}

/// Additive character `ψ(x) = exp(±2πi{x}_v)` with `ψ_a(x) = ψ(ax)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdditiveCharacter {
    /// `+1` for `exp(2πi{x})`, `−1` for `exp(−2πi{x})`.
    pub sign: i8,
    pub a: (i128, i128),
}

impl Default for AdditiveCharacter {
    fn default() -> Self {
        AdditiveCharacter { sign: 1, a: (1, 1) }
    }
}

impl AdditiveCharacter {
    pub fn scale(&self) -> Rat {
        Rat::new(self.a.0, self.a.1)
    }
}

/// Quadratic Gauss sum `Σ_{x mod p} (x/p) e(±x/p) / √p`, evaluated in
/// floating point and snapped to the fourth roots of unity.
pub fn normalized_gauss_sum(p: u32, sign: i8) -> Phase {
    let pi = p as i128;
    let (mut re, mut im) = (0.0f64, 0.0f64);
    for x in 1..pi {
        let l = legendre(x, pi) as f64;
        let t = sign as f64 * 2.0 * std::f64::consts::PI * x as f64 / p as f64;
        re += l * t.cos();
        im += l * t.sin();
    }
    let r = (p as f64).sqrt();
    let candidates = [(1.0, 0.0, Phase::one()), (0.0, 1.0, Phase::i()), (-1.0, 0.0, Phase::sign(-1)), (0.0, -1.0, Phase::new(3, 4))];
    candidates
        .iter()
        .min_by(|a, b| {
            let da = (re / r - a.0).powi(2) + (im / r - a.1).powi(2);
            let db = (re / r - b.0).powi(2) + (im / r - b.1).powi(2);
            da.total_cmp(&db)
        })
        .unwrap()
        .2
}

/// `ε(1/2, χ_d, ψ)` for the quadratic character `χ_d = (d, ·)_v`.
///
/// Unramified characters give `χ_d(a)`; tamely ramified ones at odd `p`
/// give `χ_d(a)·χ_d(p)·g_p/√p`; the real sign character gives `±i`.
/// Wild ramification at `2` is unsupported.
pub fn epsilon_quadratic(d: &Rat, v: Place, psi: AdditiveCharacter) -> Result<Phase> {
    nonzero(d, "d")?;
    if psi.a.0 == 0 || psi.a.1 == 0 || psi.sign.abs() != 1 {
        return Err(Error::invalid("/psi", "additive character must be nontrivial with sign ±1"));
    }
    let scale = psi.scale();
    let chi_a = Phase::sign(kappa(&scale, d, v)?);
    if is_local_square(d, v)? {
        return Ok(Phase::one());
    }
    let base = match v {
        Place::Real => {
            if psi.sign > 0 {
                Phase::i()
            } else {
                Phase::new(3, 4)
            }
        }
        Place::Padic(2) => {
            let (e, u) = valuation(d, 2);
            if e % 2 == 0 && unit_residue(&u, 4) == 1 {
                Phase::one()
            } else {
                return Err(Error::unsupported("ε-factor of a ramified character at 2"));
            }
        }
        Place::Padic(p) => {
            let (e, _) = valuation(d, p);
            if e % 2 == 0 {
                Phase::one()
            } else {
                let chi_p = Phase::sign(kappa(&rat(p as i128), d, v)?);
                chi_p.mul(normalized_gauss_sum(p, psi.sign))
            }
        }
    };
    Ok(base.mul(chi_a))
}
