//! Exact coefficient arithmetic: rationals, cyclotomic fields Q(ζ_n), and
//! p-adic valuations.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

/// Exact rational number.
pub type Q = BigRational;
/// Arbitrary precision integer.
pub type Z = BigInt;

/// Rational from an integer.
pub fn q(n: i64) -> Q {
    Q::from_integer(Z::from(n))
}

/// Rational `a/b`.
pub fn qf(a: i64, b: i64) -> Q {
    Q::new(Z::from(a), Z::from(b))
}

/// Parse `"a"` or `"a/b"`.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Invalid(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((a, b)) => {
            let a: Z = a.trim().parse().map_err(|_| bad())?;
            let b: Z = b.trim().parse().map_err(|_| bad())?;
            if b.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(a, b))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Render a rational as `"a"` or `"a/b"`.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Integer power of a rational; negative exponents invert.
pub fn qpow(x: &Q, e: i64) -> Q {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

/// Floor of a rational as an `i64`.
pub fn floor_i64(x: &Q) -> i64 {
    x.floor().to_integer().to_i64().expect("floor fits in i64")
}

/// Ceiling of a rational as an `i64`.
pub fn ceil_i64(x: &Q) -> i64 {
    x.ceil().to_integer().to_i64().expect("ceil fits in i64")
}

/// Binomial coefficient C(n, k) for integer `n` (possibly negative) and `k ≥ 0`.
pub fn binom(n: i64, k: i64) -> Q {
    if k < 0 {
        return Q::zero();
    }
    let mut num = Z::one();
    let mut den = Z::one();
    for j in 0..k {
        num *= Z::from(n - j);
        den *= Z::from(j + 1);
    }
    Q::new(num, den)
}

/// Binomial coefficient C(y, k) for rational `y`.
pub fn binom_q(y: &Q, k: usize) -> Q {
    let mut acc = Q::one();
    for j in 0..k {
        acc = acc * (y - q(j as i64)) / q(j as i64 + 1);
    }
    acc
}

/// Factorial as an integer.
pub fn factorial(n: u64) -> Z {
    (1..=n).fold(Z::one(), |a, b| a * Z::from(b))
}

/// Extended rational: −∞, a finite value, or +∞.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Val {
    /// Unbounded below.
    NegInf,
    /// Finite value.
    Fin(Q),
    /// Plus infinity (valuation of zero).
    PosInf,
}

impl Val {
    /// Finite value from a rational.
    pub fn fin(x: Q) -> Val {
        Val::Fin(x)
    }
    /// Finite value from an integer.
    pub fn int(n: i64) -> Val {
        Val::Fin(q(n))
    }
    /// True when finite.
    pub fn is_finite(&self) -> bool {
        matches!(self, Val::Fin(_))
    }
    /// The finite value, if any.
    pub fn as_q(&self) -> Option<&Q> {
        match self {
            Val::Fin(x) => Some(x),
            _ => None,
        }
    }
    /// Shift by a rational.
    pub fn plus(&self, x: &Q) -> Val {
        match self {
            Val::Fin(y) => Val::Fin(y + x),
            other => other.clone(),
        }
    }
    /// Sum; −∞ absorbs +∞.
    pub fn add(&self, o: &Val) -> Val {
        match (self, o) {
            (Val::NegInf, _) | (_, Val::NegInf) => Val::NegInf,
            (Val::PosInf, _) | (_, Val::PosInf) => Val::PosInf,
            (Val::Fin(a), Val::Fin(b)) => Val::Fin(a + b),
        }
    }
    /// Negation.
    pub fn neg(&self) -> Val {
        match self {
            Val::NegInf => Val::PosInf,
            Val::PosInf => Val::NegInf,
            Val::Fin(a) => Val::Fin(-a),
        }
    }
    /// Difference `self − o`; undefined combinations give −∞.
    pub fn sub(&self, o: &Val) -> Val {
        match (self, o) {
            (Val::Fin(a), Val::Fin(b)) => Val::Fin(a - b),
            (Val::PosInf, Val::Fin(_)) | (Val::PosInf, Val::NegInf) => Val::PosInf,
            _ => Val::NegInf,
        }
    }
    /// Minimum.
    pub fn min(self, o: Val) -> Val {
        std::cmp::min(self, o)
    }
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::NegInf => write!(f, "-inf"),
            Val::PosInf => write!(f, "+inf"),
            Val::Fin(x) => write!(f, "{}", fmt_q(x)),
        }
    }
}

impl Serialize for Val {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Val {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Val, D::Error> {
        let s = String::deserialize(d)?;
        match s.trim() {
            "+inf" | "inf" => Ok(Val::PosInf),
            "-inf" => Ok(Val::NegInf),
            other => parse_q(other).map(Val::Fin).map_err(serde::de::Error::custom),
        }
    }
}

/// p-adic valuation: an exact rational or +∞ for zero.
pub type Valuation = Val;

/// A rational prime, checked at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Prime(u64);

impl Prime {
    /// Checked constructor.
    pub fn new(p: u64) -> Result<Prime> {
        if p < 2 || (2..).take_while(|d| d * d <= p).any(|d| p % d == 0) {
            return Err(Error::NotPrime(p));
        }
        Ok(Prime(p))
    }
    /// The prime as an integer.
    pub fn get(self) -> u64 {
        self.0
    }
    /// The prime as a big integer.
    pub fn z(self) -> Z {
        Z::from(self.0)
    }
    /// The prime as a rational.
    pub fn q(self) -> Q {
        q(self.0 as i64)
    }
    /// `p^e` as an integer.
    pub fn pow(self, e: u32) -> u64 {
        self.0.pow(e)
    }
    /// Default generator value u: 1+p for odd p, 5 for p = 2.
    pub fn default_u(self) -> Q {
        if self.0 == 2 {
            q(5)
        } else {
            q(self.0 as i64 + 1)
        }
    }
}

/// Exponent of `p` in a nonzero integer.
pub fn ordp_int(x: &Z, p: Prime) -> i64 {
    debug_assert!(!x.is_zero());
    let pz = p.z();
    let mut x = x.abs();
    let mut v = 0;
    loop {
        let (qt, r) = x.div_rem(&pz);
        if !r.is_zero() {
            return v;
        }
        x = qt;
        v += 1;
    }
}

/// Exact p-adic order of a rational; +∞ for zero.
pub fn ordp_rational(x: &Q, p: Prime) -> Valuation {
    if x.is_zero() {
        Val::PosInf
    } else {
        Val::int(ordp_int(x.numer(), p) - ordp_int(x.denom(), p))
    }
}

/// p-adic order of a nonzero rational as `i64`.
pub fn ordp_i64(x: &Q, p: Prime) -> i64 {
    ordp_int(x.numer(), p) - ordp_int(x.denom(), p)
}

/// Replace `x` by a representative with small numerator and denominator
/// agreeing with `x` modulo `p^prec`.
pub fn round_padic(x: &Q, p: Prime, prec: i64) -> Q {
    if x.is_zero() {
        return Q::zero();
    }
    let v = ordp_i64(x, p);
    if v >= prec {
        return Q::zero();
    }
    let dv = ordp_int(x.denom(), p);
    let n = prec + dv;
    let modulus = num_traits::pow(p.z(), n as usize);
    let pdv = num_traits::pow(p.z(), dv as usize);
    let bprime = x.denom() / &pdv;
    let inv = mod_inverse(&bprime, &modulus);
    let z = (x.numer() * inv).mod_floor(&modulus);
    Q::new(z, pdv)
}

/// Inverse of `a` modulo `m` (gcd(a, m) = 1).
pub fn mod_inverse(a: &Z, m: &Z) -> Z {
    let e = a.mod_floor(m).extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    let mut n0 = n;
    let mut r = n;
    let mut d = 2;
    while d * d <= n0 {
        if n0 % d == 0 {
            while n0 % d == 0 {
                n0 /= d;
            }
            r -= r / d;
        }
        d += 1;
    }
    if n0 > 1 {
        r -= r / n0;
    }
    r
}

/// Greatest common divisor of two machine integers.
pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Least common multiple of two machine integers.
pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// The cyclotomic field Q(ζ_n) with minimal polynomial Φ_n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycloField {
    /// Conductor n.
    pub conductor: u64,
    /// Φ_n, low degree first, monic.
    pub minimal_poly: Vec<Z>,
    /// φ(n).
    pub degree: usize,
}

fn cyclotomic_poly(n: u64) -> Vec<Z> {
    // x^n − 1 divided by Φ_d for every proper divisor d.
    let mut num = vec![Z::zero(); n as usize + 1];
    num[0] = -Z::one();
    num[n as usize] = Z::one();
    for d in 1..n {
        if n % d == 0 {
            let den = cyclo_field(d).minimal_poly.clone();
            num = int_poly_exact_div(&num, &den);
        }
    }
    num
}

fn int_poly_exact_div(a: &[Z], b: &[Z]) -> Vec<Z> {
    let db = b.len() - 1;
    let mut rem = a.to_vec();
    let mut out = vec![Z::zero(); a.len() - db];
    for i in (0..out.len()).rev() {
        let c = rem[i + db].clone();
        for (j, bj) in b.iter().enumerate() {
            rem[i + j] -= &c * bj;
        }
        out[i] = c;
    }
    debug_assert!(rem.iter().all(|x| x.is_zero()));
    out
}

/// Shared handle to Q(ζ_n), cached per conductor.
pub fn cyclo_field(n: u64) -> Arc<CycloField> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<CycloField>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(f) = cache.lock().unwrap().get(&n) {
        return f.clone();
    }
    let poly = if n == 1 {
        vec![-Z::one(), Z::one()]
    } else {
        cyclotomic_poly(n)
    };
    let field = Arc::new(CycloField {
        conductor: n,
        degree: poly.len() - 1,
        minimal_poly: poly,
    });
    cache.lock().unwrap().insert(n, field.clone());
    field
}

/// Element of Q(ζ_n) as coordinates in the power basis 1, ζ, …, ζ^{φ(n)−1}.
#[derive(Debug, Clone)]
pub struct CycloScalar {
    conductor: u64,
    coords: Vec<Q>,
}

fn reduce_mod_phi(n: u64, poly: Vec<Q>) -> Vec<Q> {
    let field = cyclo_field(n);
    let deg = field.degree;
    // Fold exponents modulo n first.
    let mut folded = if poly.len() > n as usize {
        let mut f = vec![Q::zero(); n as usize];
        for (i, c) in poly.into_iter().enumerate() {
            f[i % n as usize] += c;
        }
        f
    } else {
        poly
    };
    for i in (deg..folded.len()).rev() {
        let c = std::mem::take(&mut folded[i]);
        if c.is_zero() {
            continue;
        }
        for (j, m) in field.minimal_poly.iter().enumerate().take(deg) {
            if !m.is_zero() {
                folded[i - deg + j] -= &c * Q::from_integer(m.clone());
            }
        }
    }
    folded.resize(deg, Q::zero());
    folded
}

impl CycloScalar {
    /// Element from power-basis coordinates (any length; reduced mod Φ_n).
    pub fn from_coeffs(n: u64, coeffs: Vec<Q>) -> CycloScalar {
        assert!(n >= 1);
        CycloScalar {
            conductor: n,
            coords: reduce_mod_phi(n, coeffs),
        }
    }
    /// Rational element of Q = Q(ζ_1).
    pub fn from_q(x: Q) -> CycloScalar {
        CycloScalar {
            conductor: 1,
            coords: vec![x],
        }
    }
    /// Integer element.
    pub fn from_int(n: i64) -> CycloScalar {
        Self::from_q(q(n))
    }
    /// Zero of Q.
    pub fn zero() -> CycloScalar {
        Self::from_int(0)
    }
    /// One of Q.
    pub fn one() -> CycloScalar {
        Self::from_int(1)
    }
    /// ζ_n^j.
    pub fn root_of_unity(n: u64, j: i64) -> CycloScalar {
        let e = j.rem_euclid(n as i64) as usize;
        let mut c = vec![Q::zero(); e + 1];
        c[e] = Q::one();
        Self::from_coeffs(n, c)
    }
    /// Conductor n of the ambient field.
    pub fn conductor(&self) -> u64 {
        self.conductor
    }
    /// Power-basis coordinates.
    pub fn coords(&self) -> &[Q] {
        &self.coords
    }
    /// True when zero.
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
    /// The rational value when the element lies in Q.
    pub fn as_rational(&self) -> Option<Q> {
        if self.coords.iter().skip(1).all(|c| c.is_zero()) {
            Some(self.coords[0].clone())
        } else {
            // ζ-combinations may still be rational, e.g. ζ_3 + ζ_3² = −1.
            let trace_only = self.minimal_rational();
            trace_only
        }
    }
    fn minimal_rational(&self) -> Option<Q> {
        // x is rational iff x·ζ = ζ·x trivially; test by embedding 1.
        let x0 = CycloScalar::from_q(self.coords[0].clone()).embed(self.conductor);
        let d = self.sub(&x0);
        if d.is_zero() {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }
    /// True when the element is rational.
    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }
    /// Image under ζ_n ↦ ζ_N^{N/n}; requires n | N.
    pub fn embed(&self, target: u64) -> CycloScalar {
        assert!(
            target % self.conductor == 0,
            "target conductor must be a multiple"
        );
        if target == self.conductor {
            return self.clone();
        }
        let step = (target / self.conductor) as usize;
        let mut c = vec![Q::zero(); (self.coords.len().max(1) - 1) * step + 1];
        for (j, x) in self.coords.iter().enumerate() {
            c[j * step] = x.clone();
        }
        Self::from_coeffs(target, c)
    }
    fn common(&self, o: &CycloScalar) -> (CycloScalar, CycloScalar) {
        if self.conductor == o.conductor {
            return (self.clone(), o.clone());
        }
        let n = lcm_u64(self.conductor, o.conductor);
        (self.embed(n), o.embed(n))
    }
    /// Sum.
    pub fn add(&self, o: &CycloScalar) -> CycloScalar {
        if self.conductor == o.conductor {
            let coords = self
                .coords
                .iter()
                .zip(&o.coords)
                .map(|(a, b)| a + b)
                .collect();
            return CycloScalar {
                conductor: self.conductor,
                coords,
            };
        }
        let (a, b) = self.common(o);
        a.add(&b)
    }
    /// Difference.
    pub fn sub(&self, o: &CycloScalar) -> CycloScalar {
        self.add(&o.neg())
    }
    /// Negation.
    pub fn neg(&self) -> CycloScalar {
        CycloScalar {
            conductor: self.conductor,
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
    /// Product.
    pub fn mul(&self, o: &CycloScalar) -> CycloScalar {
        if self.conductor != o.conductor {
            let (a, b) = self.common(o);
            return a.mul(&b);
        }
        if self.conductor == 1 {
            return CycloScalar::from_q(&self.coords[0] * &o.coords[0]);
        }
        let mut prod = vec![Q::zero(); self.coords.len() + o.coords.len() - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coords.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        CycloScalar::from_coeffs(self.conductor, prod)
    }
    /// Product with a rational.
    pub fn scale(&self, c: &Q) -> CycloScalar {
        CycloScalar {
            conductor: self.conductor,
            coords: self.coords.iter().map(|x| x * c).collect(),
        }
    }
    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<CycloScalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let m = self.mult_matrix();
        let deg = self.coords.len();
        let mut rhs = vec![Q::zero(); deg];
        rhs[0] = Q::one();
        let sol = linalg::solve(m, rhs).ok_or(Error::DivisionByZero)?;
        Ok(CycloScalar {
            conductor: self.conductor,
            coords: sol,
        })
    }
    /// Quotient.
    pub fn div(&self, o: &CycloScalar) -> Result<CycloScalar> {
        Ok(self.mul(&o.inv()?))
    }
    /// Integer power; negative exponents invert.
    pub fn pow(&self, e: i64) -> Result<CycloScalar> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = CycloScalar::one().embed(self.conductor);
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            k >>= 1;
        }
        Ok(acc)
    }
    /// Image under ζ ↦ ζ^{-1} (complex conjugation).
    pub fn conj(&self) -> CycloScalar {
        let n = self.conductor as usize;
        let mut c = vec![Q::zero(); n.max(1)];
        for (j, x) in self.coords.iter().enumerate() {
            c[(n - j) % n] += x;
        }
        CycloScalar::from_coeffs(self.conductor, c)
    }
    /// Matrix of multiplication by `self` in the power basis (columns are images of ζ^j).
    fn mult_matrix(&self) -> Vec<Vec<Q>> {
        let deg = self.coords.len();
        let mut cols = Vec::with_capacity(deg);
        for j in 0..deg {
            let mut e = vec![Q::zero(); j + 1];
            e[j] = Q::one();
            let basis = CycloScalar::from_coeffs(self.conductor, e);
            cols.push(self.mul(&basis).coords);
        }
        (0..deg)
            .map(|i| (0..deg).map(|j| cols[j][i].clone()).collect())
            .collect()
    }
    /// Field norm to Q (determinant of multiplication, equal to the resultant with Φ_n).
    pub fn norm(&self) -> Q {
        linalg::det(self.mult_matrix())
    }
}

impl PartialEq for CycloScalar {
    fn eq(&self, o: &CycloScalar) -> bool {
        let (a, b) = self.common(o);
        a.coords == b.coords
    }
}
impl Eq for CycloScalar {}

impl fmt::Display for CycloScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = vec![];
        for (j, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            match j {
                0 => parts.push(fmt_q(c)),
                1 => parts.push(format!("({})*z{}", fmt_q(c), self.conductor)),
                _ => parts.push(format!("({})*z{}^{}", fmt_q(c), self.conductor, j)),
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl Add for &CycloScalar {
    type Output = CycloScalar;
    fn add(self, o: &CycloScalar) -> CycloScalar {
        CycloScalar::add(self, o)
    }
}
impl Sub for &CycloScalar {
    type Output = CycloScalar;
    fn sub(self, o: &CycloScalar) -> CycloScalar {
        CycloScalar::sub(self, o)
    }
}
impl Mul for &CycloScalar {
    type Output = CycloScalar;
    fn mul(self, o: &CycloScalar) -> CycloScalar {
        CycloScalar::mul(self, o)
    }
}
impl Neg for &CycloScalar {
    type Output = CycloScalar;
    fn neg(self) -> CycloScalar {
        CycloScalar::neg(self)
    }
}

fn p_power_exponent(n: u64, p: u64) -> Option<u32> {
    let mut m = n;
    let mut e = 0;
    while m % p == 0 {
        m /= p;
        e += 1;
    }
    // Q(ζ_{2p^m}) = Q(ζ_{p^m}) for odd p.
    if m == 1 || (m == 2 && p != 2) {
        Some(e)
    } else {
        None
    }
}

/// p-adic valuation on Q(ζ_n) when p is totally ramified (n = p^m or 2p^m),
/// or on rational elements of any cyclotomic field.
pub fn ordp_cyclo(x: &CycloScalar, p: Prime) -> Result<Valuation> {
    if let Some(r) = x.as_rational() {
        return Ok(ordp_rational(&r, p));
    }
    let n = x.conductor();
    match p_power_exponent(n, p.get()) {
        Some(_) => {
            let deg = cyclo_field(n).degree as i64;
            match ordp_rational(&x.norm(), p) {
                Val::Fin(v) => Ok(Val::Fin(v / q(deg))),
                other => Ok(other),
            }
        }
        None => Err(Error::UnsupportedField {
            conductor: n,
            p: p.get(),
        }),
    }
}

/// JSON form of a cyclotomic scalar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycloJson {
    /// Conductor n.
    pub conductor: u64,
    /// Coordinates as `"num/den"` strings.
    pub coords: Vec<String>,
}

impl From<&CycloScalar> for CycloJson {
    fn from(x: &CycloScalar) -> CycloJson {
        CycloJson {
            conductor: x.conductor,
            coords: x.coords.iter().map(fmt_q).collect(),
        }
    }
}

impl TryFrom<&CycloJson> for CycloScalar {
    type Error = Error;
    fn try_from(j: &CycloJson) -> Result<CycloScalar> {
        if j.conductor == 0 {
            return Err(Error::Invalid("conductor must be positive".into()));
        }
        let coeffs = j
            .coords
            .iter()
            .map(|s| parse_q(s))
            .collect::<Result<Vec<_>>>()?;
        if coeffs.len() != cyclo_field(j.conductor).degree {
            return Err(Error::Invalid("coordinate count must equal phi(n)".into()));
        }
        Ok(CycloScalar::from_coeffs(j.conductor, coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_valuations() {
        let p3 = Prime::new(3).unwrap();
        assert_eq!(ordp_rational(&qf(9, 2), p3), Val::int(2));
        assert_eq!(ordp_rational(&qf(10, 27), p3), Val::int(-3));
        assert_eq!(ordp_rational(&q(0), Prime::new(5).unwrap()), Val::PosInf);
        assert!(Prime::new(9).is_err());
    }

    #[test]
    fn cyclotomic_polys() {
        let f = cyclo_field(9);
        assert_eq!(f.degree, 6);
        let expect: Vec<Z> = [1, 0, 0, 1, 0, 0, 1].iter().map(|&x| Z::from(x)).collect();
        assert_eq!(f.minimal_poly, expect);
        assert_eq!(cyclo_field(12).degree, 4);
    }

    #[test]
    fn field_examples() {
        let p3 = Prime::new(3).unwrap();
        let z3 = CycloScalar::root_of_unity(3, 1);
        let one_plus = CycloScalar::one().add(&z3);
        assert_eq!(one_plus.inv().unwrap(), z3.neg());
        assert_eq!(z3.embed(9), CycloScalar::root_of_unity(9, 3));
        assert_eq!(z3.mul(&CycloScalar::root_of_unity(3, 2)), CycloScalar::one());
        let z9m1 = CycloScalar::root_of_unity(9, 1).sub(&CycloScalar::one());
        assert_eq!(ordp_cyclo(&z9m1, p3).unwrap(), Val::Fin(qf(1, 6)));
        assert_eq!(
            ordp_cyclo(&CycloScalar::from_int(3).embed(9), p3).unwrap(),
            Val::int(1)
        );
        assert_eq!(ordp_cyclo(&z3, p3).unwrap(), Val::int(0));
        let z5 = CycloScalar::root_of_unity(5, 1);
        assert!(ordp_cyclo(&z5, p3).is_err());
    }

    #[test]
    fn rounding_keeps_residue() {
        let p = Prime::new(5).unwrap();
        let x = qf(7, 3 * 25);
        let r = round_padic(&x, p, 4);
        let d = &x - &r;
        assert!(ordp_rational(&d, p) >= Val::int(4));
        assert_eq!(round_padic(&q(125), p, 3), q(0));
    }
}
