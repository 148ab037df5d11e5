//! Logarithmic-order growth: the valuations v_H and v′_h, the comparison
//! constants, and the window polynomials Ω_m^{[d,e]}.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{floor_i64, ordp_i64, ordp_int, factorial, q, qf, qpow, Prime, Val, Q};
use crate::poly::Poly;
use crate::series::{coord_min, BoundTerm, Region, TruncSeries, ValuationReport};

pub use crate::series::ell;

/// Growth vector h with non-negative rational entries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthClass {
    /// One entry per variable.
    pub h: Vec<Q>,
}

impl GrowthClass {
    /// Validates non-negativity.
    pub fn new(h: Vec<Q>) -> Result<GrowthClass> {
        if h.iter().any(|x| x.is_negative()) {
            return Err(Error::Invalid("growth entries must be non-negative".into()));
        }
        Ok(GrowthClass { h })
    }
    /// Same growth on every one of `k` variables.
    pub fn uniform(k: usize, h: Q) -> Result<GrowthClass> {
        Self::new(vec![h; k])
    }
    /// Number of variables.
    pub fn vars(&self) -> usize {
        self.h.len()
    }
    /// Componentwise sum.
    pub fn add(&self, o: &GrowthClass) -> GrowthClass {
        GrowthClass {
            h: self.h.iter().zip(&o.h).map(|(a, b)| a + b).collect(),
        }
    }
}

/// Window [d,e] per variable with the topological generator images u_i.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    /// Lower ends.
    pub d: Vec<i64>,
    /// Upper ends.
    pub e: Vec<i64>,
    /// Generator images u_i = χ_i(γ_i).
    pub u: Vec<Q>,
}

impl Window {
    /// Validates e ≥ d and u ≡ 1 mod 2p in Z_p.
    pub fn new(p: Prime, d: Vec<i64>, e: Vec<i64>, u: Vec<Q>) -> Result<Window> {
        if d.len() != e.len() || d.len() != u.len() {
            return Err(Error::IncompatibleShapes("window arity".into()));
        }
        if d.iter().zip(&e).any(|(a, b)| b < a) {
            return Err(Error::Invalid("window needs e >= d".into()));
        }
        let need = if p.get() == 2 { 2 } else { 1 };
        for x in &u {
            let y = x - Q::one();
            if y.is_zero() || ordp_i64(&y, p) < need {
                return Err(Error::Invalid(format!("u = {x} is not 1 mod 2p")));
            }
        }
        Ok(Window { d, e, u })
    }
    /// Window with the default generator image on each variable.
    pub fn with_default_u(p: Prime, d: Vec<i64>, e: Vec<i64>) -> Result<Window> {
        let u = vec![p.default_u(); d.len()];
        Self::new(p, d, e, u)
    }
    /// Number of variables.
    pub fn vars(&self) -> usize {
        self.d.len()
    }
    /// e_i − d_i per variable.
    pub fn widths(&self) -> Vec<i64> {
        self.d.iter().zip(&self.e).map(|(a, b)| b - a).collect()
    }
}

/// Ω_{m_i}^{[d_i,e_i]}(X_i) for each variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowPoly {
    /// The window.
    pub window: Window,
    /// Level per variable.
    pub level: Vec<u64>,
    /// One-variable polynomials.
    pub polys: Vec<Poly>,
}

impl WindowPoly {
    /// Ω for variable `i` as a `k`-variable exact series.
    pub fn series(&self, p: Prime, i: usize) -> TruncSeries {
        let k = self.window.vars();
        TruncSeries::polynomial(
            p,
            k,
            self.polys[i].coeffs().iter().enumerate().map(|(j, c)| {
                let mut n = vec![0; k];
                n[i] = j as u64;
                (n, c.clone())
            }),
        )
    }
    /// All variables as exact series.
    pub fn all_series(&self, p: Prime) -> Vec<TruncSeries> {
        (0..self.polys.len()).map(|i| self.series(p, i)).collect()
    }
}

/// ∏_{i=d}^{e} ((1+X)^{p^m} − u^{i p^m}).
pub fn omega_one(p: Prime, u: &Q, d: i64, e: i64, m: u64) -> Poly {
    let pm = p.pow(m as u32);
    let base = Poly::from_ints(&[1, 1]).pow(pm);
    let mut out = Poly::constant(Q::one());
    for i in d..=e {
        let c = qpow(u, i * pm as i64);
        out = out.mul(&base.sub(&Poly::constant(c)));
    }
    out
}

/// Window polynomials at level `m`.
pub fn omega_poly(p: Prime, window: &Window, m: &[u64]) -> Result<WindowPoly> {
    if m.len() != window.vars() {
        return Err(Error::IncompatibleShapes("level arity".into()));
    }
    let polys = (0..m.len())
        .map(|i| omega_one(p, &window.u[i], window.d[i], window.e[i], m[i]))
        .collect();
    Ok(WindowPoly {
        window: window.clone(),
        level: m.to_vec(),
        polys,
    })
}

/// t_n = 1/(p^n (p−1)).
pub fn t_level(p: Prime, n: u64) -> Q {
    Q::new(BigInt::one(), num_traits::pow(p.z(), n as usize) * (p.z() - 1))
}

/// Closed form (d_{t_n}, v_{t_n}) of Ω_m^{[d,e]} for n ≤ m.
pub fn omega_valuation(p: Prime, d: i64, e: i64, m: u64, n: u64) -> Result<(u64, Q)> {
    if n > m {
        return Err(Error::Invalid(format!("level n = {n} exceeds m = {m}")));
    }
    let w = (e - d + 1) as u64;
    let deg = w * p.pow(n as u32);
    let val = q(w as i64) * (q(m as i64 - n as i64) + qf(1, p.get() as i64 - 1));
    Ok((deg, val))
}

/// True when gcd(f, f′) is constant.
pub fn is_separable(f: &Poly) -> bool {
    f.gcd(&f.derivative()).degree() == Some(0)
}

/// v_H(f) for a growth class.
pub fn vh(f: &TruncSeries, h: &GrowthClass) -> ValuationReport {
    f.vh(&h.h)
}

// ---------------------------------------------------------------------------
// v′_h

/// min_{n ≥ 0} (m·t_n + h·n); 0 when h = 0 (the infimum as n → ∞).
fn level_min(m: u64, h: &Q, p: Prime) -> Q {
    if h.is_zero() || m == 0 {
        return Q::zero();
    }
    let mq = q(m as i64);
    let mut n = 0u64;
    // Increment from n to n+1 is h − m/p^{n+1}, increasing in n.
    loop {
        let step = h - &mq / Q::from_integer(num_traits::pow(p.z(), (n + 1) as usize));
        if !step.is_negative() {
            break;
        }
        n += 1;
    }
    &mq * t_level(p, n) + h * q(n as i64)
}

/// min_{i ≥ 0} (p^i/(p−1) − λ i) for λ > 0.
fn block_constant(lam: &Q, p: Prime) -> Q {
    let pm1 = q(p.get() as i64 - 1);
    let mut best: Option<Q> = None;
    let mut i = 0u64;
    loop {
        let pi = Q::from_integer(num_traits::pow(p.z(), i as usize));
        let v = &pi / &pm1 - lam * q(i as i64);
        if best.as_ref().map_or(true, |b| v < *b) {
            best = Some(v);
        }
        if pi >= *lam {
            break;
        }
        i += 1;
    }
    best.expect("loop runs once")
}

/// Lower bound of min over m in [lo, hi) of φ(m) − w·m − λ·ℓ(m), where
/// φ(m) = min_n (m t_n + h n). Levels n ≤ depth are scanned exactly and
/// deeper levels use an asymptotic bound.
fn coord_level_min(h: &Q, w: &Q, lam: &Q, lo: u64, hi: Option<u64>, depth: u64, p: Prime) -> Val {
    let neg_lam = -lam.clone();
    if h.is_zero() {
        return coord_min(Some(&(-w.clone())), &neg_lam, lo, hi, p);
    }
    let mut best = Val::PosInf;
    for n in 0..=depth {
        let a = t_level(p, n) - w;
        let v = coord_min(Some(&a), &neg_lam, lo, hi, p);
        best = best.min(v.plus(&(h * q(n as i64))));
    }
    let n1 = q(depth as i64 + 1);
    let deep = match hi {
        // φ is increasing in n beyond the scan once the index range is finite.
        Some(_) => coord_min(Some(&(-w.clone())), &neg_lam, lo, hi, p).plus(&(h * &n1)),
        None => {
            if w.is_positive() {
                Val::NegInf
            } else if !lam.is_positive() {
                Val::Fin(h * &n1)
            } else if h < lam {
                Val::NegInf
            } else {
                let c = block_constant(lam, p) - lam;
                let c = if c.is_negative() { c } else { Q::zero() };
                Val::Fin((h - lam) * &n1 + c)
            }
        }
    };
    best.min(deep)
}

fn clause_level_min(t: &BoundTerm, region: &Region, h: &[Q], depth: u64, p: Prime) -> Val {
    if t.floor == Val::NegInf {
        return Val::NegInf;
    }
    let k = h.len();
    let f = |i: usize, lo: u64, hi: Option<u64>| {
        coord_level_min(&h[i], &t.weight[i], &t.log[i], lo, hi, depth, p)
    };
    let total = match region {
        Region::Inside(tr) => (0..k).fold(Val::int(0), |acc, i| acc.add(&f(i, 0, Some(tr[i])))),
        Region::Outside(tr) => {
            let full: Vec<Val> = (0..k).map(|i| f(i, 0, None)).collect();
            let mut best = Val::PosInf;
            for i in 0..k {
                let mut acc = f(i, tr[i], None);
                for (j, v) in full.iter().enumerate() {
                    if j != i {
                        acc = acc.add(v);
                    }
                }
                best = best.min(acc);
            }
            best
        }
    };
    match total {
        Val::PosInf => Val::PosInf,
        other => t.floor.add(&other),
    }
}

/// Default depth of the exact level scan: ℓ of the largest truncation plus 2.
pub fn default_depth(f: &TruncSeries) -> u64 {
    let p = f.prime();
    f.trunc().iter().map(|&t| ell(t, p)).max().unwrap_or(0) + 2
}

/// v′_h(f) = inf over levels n of v_{t_n}(f) + ⟨h,n⟩.
///
/// The infimum over n is taken coefficientwise, so retained coefficients are
/// handled exactly; the truncation bounds are scanned to `depth` levels and
/// bounded asymptotically beyond.
pub fn vh_prime(f: &TruncSeries, h: &GrowthClass, depth: Option<u64>) -> Result<ValuationReport> {
    let k = f.vars();
    if h.vars() != k {
        return Err(Error::IncompatibleShapes("growth arity".into()));
    }
    let p = f.prime();
    let depth = depth.unwrap_or_else(|| default_depth(f));
    let mut retained = Val::PosInf;
    for (n, c) in f.coeffs() {
        let mut v = q(ordp_i64(c, p));
        for i in 0..k {
            v += level_min(n[i], &h.h[i], p);
        }
        retained = retained.min(Val::Fin(v));
    }
    let tail = f
        .tail()
        .terms
        .iter()
        .map(|t| clause_level_min(t, &Region::Outside(f.trunc().to_vec()), &h.h, depth, p))
        .min()
        .unwrap_or(Val::PosInf);
    let err = f
        .err()
        .terms
        .iter()
        .map(|t| clause_level_min(t, &Region::Inside(f.trunc().to_vec()), &h.h, depth, p))
        .min()
        .unwrap_or(Val::PosInf);
    if retained.is_finite() && tail.clone().min(err.clone()) == Val::NegInf {
        return Err(Error::InsufficientTruncation(
            "truncation bounds do not control deep levels".into(),
        ));
    }
    let exact = (retained <= tail && retained < err) || (retained == Val::PosInf && tail == Val::PosInf && err == Val::PosInf);
    Ok(ValuationReport {
        retained_min: retained,
        tail_bound: tail.min(err),
        exact,
    })
}

// ---------------------------------------------------------------------------
// Rigorous interval evaluation of real logarithms.

/// Closed rational interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    /// Lower end.
    pub lo: Q,
    /// Upper end.
    pub hi: Q,
}

impl Interval {
    fn point(x: Q) -> Interval {
        Interval { lo: x.clone(), hi: x }
    }
    fn add(&self, o: &Interval) -> Interval {
        Interval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }
    fn neg(&self) -> Interval {
        Interval { lo: -self.hi.clone(), hi: -self.lo.clone() }
    }
    fn mul(&self, o: &Interval) -> Interval {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        Interval {
            lo: c.iter().min().unwrap().clone(),
            hi: c.iter().max().unwrap().clone(),
        }
    }
    fn recip_pos(&self) -> Interval {
        assert!(self.lo.is_positive());
        Interval { lo: self.hi.recip(), hi: self.lo.recip() }
    }
    fn max0(&self) -> Interval {
        let z = Q::zero();
        Interval {
            lo: if self.lo.is_negative() { z.clone() } else { self.lo.clone() },
            hi: if self.hi.is_negative() { z } else { self.hi.clone() },
        }
    }
    /// Common floor of both ends, if any.
    pub fn floor(&self) -> Option<i64> {
        let a = floor_i64(&self.lo);
        (a == floor_i64(&self.hi)).then_some(a)
    }
}

fn round_out(lo: &Q, hi: &Q, bits: u32) -> Interval {
    let s = Q::from_integer(BigInt::one() << bits);
    Interval {
        lo: (lo * &s).floor() / &s,
        hi: (hi * &s).ceil() / &s,
    }
}

/// Enclosure of 2·atanh(z) for |z| ≤ 1/3.
fn two_atanh(z: &Q, bits: u32) -> Interval {
    let eps = Q::new(BigInt::one(), BigInt::one() << (bits + 2));
    let z2 = z * z;
    let mut term = z.clone();
    let mut sum = Q::zero();
    let mut j = 0i64;
    loop {
        sum += &term / q(2 * j + 1);
        term *= &z2;
        j += 1;
        // Remainder ≤ |z|^{2j+1} / ((2j+1)(1 − z²)).
        let rem = term.abs() / (q(2 * j + 1) * (Q::one() - &z2));
        if rem < eps {
            let two = q(2);
            return round_out(&(&two * (&sum - &rem)), &(&two * (&sum + &rem)), bits);
        }
    }
}

/// Enclosure of ln x for rational x > 0, width about 2^{-bits}.
pub fn ln_interval(x: &Q, bits: u32) -> Interval {
    assert!(x.is_positive(), "ln of a non-positive number");
    let two = q(2);
    let mut y = x.clone();
    let mut k = 0i64;
    while y > qf(4, 3) {
        y /= &two;
        k += 1;
    }
    while y < qf(2, 3) {
        y *= &two;
        k -= 1;
    }
    let z = (&y - Q::one()) / (&y + Q::one());
    let mut out = two_atanh(&z, bits + 4);
    if k != 0 {
        let ln2 = two_atanh(&qf(1, 3), bits + 8);
        out = out.add(&ln2.mul(&Interval::point(q(k))));
    }
    round_out(&out.lo, &out.hi, bits)
}

fn ln_of_interval(x: &Interval, bits: u32) -> Interval {
    Interval {
        lo: ln_interval(&x.lo, bits).lo,
        hi: ln_interval(&x.hi, bits).hi,
    }
}

/// Enclosure of max{0, h − (h/ln p)(1 + ln(ln p/((p−1)h)))} for h > 0.
fn log_excess(h: &Q, p: Prime, bits: u32) -> Interval {
    let lp = ln_interval(&p.q(), bits + 8);
    let c = q(p.get() as i64 - 1) * h;
    let ratio = lp.mul(&Interval::point(c.recip()));
    let inner = ln_of_interval(&ratio, bits + 4).add(&Interval::point(Q::one()));
    let coef = lp.recip_pos().mul(&Interval::point(h.clone()));
    let a = Interval::point(h.clone()).add(&coef.mul(&inner).neg());
    a.max0()
}

const PRECISIONS: [u32; 4] = [30, 60, 120, 240];

/// α_h^{[d,e]} for one variable.
pub fn alpha_window_one(h: &Q, d: i64, e: i64, p: Prime) -> Result<i64> {
    if h.is_zero() {
        return Ok(0);
    }
    let base = qf(e - d + 1, p.get() as i64 - 1);
    for bits in PRECISIONS {
        let x = log_excess(h, p, bits).add(&Interval::point(base.clone()));
        if let Some(f) = x.floor() {
            return Ok(f + 1);
        }
    }
    Err(Error::IntervalUndecided)
}

/// β_h for one variable in the windowed comparison.
pub fn beta_window_one(h: &Q, p: Prime) -> i64 {
    if h.is_zero() {
        return 0;
    }
    let pp = qf(p.get() as i64, p.get() as i64 - 1);
    let m = if *h > pp { h.clone() } else { pp };
    -floor_i64(&m) - 1
}

/// (α_h^{[d,e]}, β_h) summed over the variables.
pub fn alpha_beta_window(h: &GrowthClass, window: &Window, p: Prime) -> Result<(i64, i64)> {
    if h.vars() != window.vars() {
        return Err(Error::IncompatibleShapes("growth and window arity".into()));
    }
    let mut a = 0;
    let mut b = 0;
    for i in 0..h.vars() {
        a += alpha_window_one(&h.h[i], window.d[i], window.e[i], p)?;
        b += beta_window_one(&h.h[i], p);
    }
    Ok((a, b))
}

/// Enclosure of the windowless α_h (irrational in general), summed over variables.
pub fn alpha_free(h: &GrowthClass, p: Prime, bits: u32) -> Interval {
    let mut acc = Interval::point(Q::zero());
    for x in &h.h {
        if x.is_positive() {
            acc = acc.add(&log_excess(x, p, bits).neg());
        }
    }
    acc
}

/// Windowless β_h summed over variables.
pub fn beta_free(h: &GrowthClass, p: Prime) -> Q {
    let pp = qf(p.get() as i64, p.get() as i64 - 1);
    h.h.iter()
        .filter(|x| x.is_positive())
        .map(|x| {
            let v = &pp - x;
            if v.is_negative() {
                Q::zero()
            } else {
                v
            }
        })
        .sum()
}

/// c^{[d,e]} for one variable.
pub fn c_constant_one(d: i64, e: i64, p: Prime) -> i64 {
    if d == e {
        return 0;
    }
    let w = e - d;
    ordp_int(&factorial(w as u64), p) + 2 * w + (w + 1) / (p.get() as i64 - 1) + 1
}

/// c^{[d,e]} summed over variables.
pub fn c_constant(window: &Window, p: Prime) -> i64 {
    (0..window.vars())
        .map(|i| c_constant_one(window.d[i], window.e[i], p))
        .sum()
}
