//! Projective systems of remainders modulo the window polynomials: extraction
//! from series, reconstruction, vanishing tests, window projection and the
//! binomial lifting of single-exponent components.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::growth::{c_constant, omega_one, t_level, GrowthClass, Window};
use crate::padic::{binom, floor_i64, parse_q, q, Prime, Val, Q};
use crate::poly::Poly;
use crate::series::{Index, SeriesJson, TruncSeries};
use crate::weierstrass::{multi_divide, padic_log};

/// Level vector m ∈ [0,M]^k.
pub type Level = Vec<u64>;

/// Remainders of a compatible family on the full grid [0,M]^k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowSystem {
    /// Prime.
    pub p: Prime,
    /// Window [d,e] with generator images.
    pub window: Window,
    /// Growth h.
    pub growth: GrowthClass,
    /// Top level M.
    pub top: u64,
    /// Remainder representative per level.
    pub levels: BTreeMap<Level, TruncSeries>,
}

/// Every level of [0,M]^k in lexicographic order.
pub fn grid(k: usize, top: u64) -> Vec<Level> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        let mut next = vec![];
        for m in &out {
            for j in 0..=top {
                let mut v: Vec<u64> = m.clone();
                v.push(j);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// Window polynomials at level `m` as exact one-variable polynomials.
pub fn omega_polys(window: &Window, m: &[u64], p: Prime) -> Vec<Poly> {
    (0..window.vars())
        .map(|i| omega_one(p, &window.u[i], window.d[i], window.e[i], m[i]))
        .collect()
}

/// Window polynomials at level `m` as `k`-variable series.
pub fn omega_series(window: &Window, m: &[u64], p: Prime) -> Vec<TruncSeries> {
    let k = window.vars();
    omega_polys(window, m, p)
        .iter()
        .enumerate()
        .map(|(i, w)| embed_axis(p, k, i, w))
        .collect()
}

fn embed_axis(p: Prime, k: usize, axis: usize, w: &Poly) -> TruncSeries {
    TruncSeries::polynomial(
        p,
        k,
        w.coeffs().iter().enumerate().map(|(j, c)| {
            let mut n = vec![0; k];
            n[axis] = j as u64;
            (n, c.clone())
        }),
    )
}

/// Slices along `axis`: other indices → polynomial in the axis variable.
fn slices_of(g: &TruncSeries, axis: usize) -> BTreeMap<Index, Vec<Q>> {
    let mut out: BTreeMap<Index, Vec<Q>> = BTreeMap::new();
    for (n, c) in g.coeffs() {
        let mut o = n.clone();
        let j = o.remove(axis) as usize;
        let v = out.entry(o).or_default();
        if v.len() <= j {
            v.resize(j + 1, Q::zero());
        }
        v[j] = c.clone();
    }
    out
}

fn from_slices(p: Prime, k: usize, axis: usize, parts: &BTreeMap<Index, Poly>) -> TruncSeries {
    let mut terms = vec![];
    for (o, poly) in parts {
        for (j, c) in poly.coeffs().iter().enumerate() {
            let mut n = o.clone();
            n.insert(axis, j as u64);
            terms.push((n, c.clone()));
        }
    }
    TruncSeries::polynomial(p, k, terms)
}

/// Applies a one-variable polynomial map to every slice along `axis`.
pub(crate) fn map_axis(g: &TruncSeries, axis: usize, f: impl Fn(&Poly) -> Poly) -> TruncSeries {
    let parts: BTreeMap<Index, Poly> = slices_of(g, axis)
        .into_iter()
        .map(|(o, v)| (o, f(&Poly::new(v))))
        .collect();
    from_slices(g.prime(), g.vars(), axis, &parts)
}

/// Remainder of `g` modulo the ideal generated by the one-variable monic
/// polynomials `polys[i](X_i)`. Exact inputs use long division; otherwise the
/// certified multi-variable division at radii t_{m_i} is used.
pub fn remainder_mod(g: &TruncSeries, polys: &[Poly], radii: &[Q]) -> Result<TruncSeries> {
    let k = g.vars();
    if polys.len() != k {
        return Err(Error::IncompatibleShapes("one divisor per variable".into()));
    }
    if g.is_exact() {
        let mut out = g.clone();
        for (axis, w) in polys.iter().enumerate() {
            out = map_axis(&out, axis, |s| s.rem(w));
        }
        return Ok(out);
    }
    let p = g.prime();
    let fs: Vec<TruncSeries> = polys
        .iter()
        .map(|w| TruncSeries::poly1(p, w.coeffs()))
        .collect();
    Ok(multi_divide(g, &fs, radii)?.remainder)
}

/// Remainder of `g` modulo (Ω_m^{[d,e]}).
pub fn remainder(g: &TruncSeries, window: &Window, m: &[u64]) -> Result<TruncSeries> {
    let p = g.prime();
    let radii: Vec<Q> = m.iter().map(|&x| t_level(p, x)).collect();
    remainder_mod(g, &omega_polys(window, m, p), &radii)
}

/// True when `g` lies in (Ω_m^{[d,e]}).
pub fn in_omega_ideal(g: &TruncSeries, window: &Window, m: &[u64]) -> Result<bool> {
    let r = remainder(g, window, m)?;
    Ok(r.coeffs().is_empty() && r.err().is_zero())
}

impl WindowSystem {
    /// Number of variables.
    pub fn vars(&self) -> usize {
        self.window.vars()
    }

    /// Remainder at level `m`.
    pub fn at(&self, m: &[u64]) -> Result<&TruncSeries> {
        self.levels
            .get(m)
            .ok_or_else(|| Error::InsufficientLevels(format!("level {m:?} not stored")))
    }

    /// Remainder at the top level (M,…,M).
    pub fn top_remainder(&self) -> Result<&TruncSeries> {
        self.at(&vec![self.top; self.vars()])
    }

    /// inf over stored levels of v_0(s_m) + ⟨h,m⟩ (certified lower bound).
    pub fn denom_bound(&self) -> Val {
        let k = self.vars();
        let zero = vec![Q::zero(); k];
        self.levels
            .iter()
            .map(|(m, s)| {
                let shift: Q = m
                    .iter()
                    .zip(&self.growth.h)
                    .map(|(a, h)| q(*a as i64) * h)
                    .sum();
                s.vr(&zero).lower().plus(&shift)
            })
            .min()
            .unwrap_or(Val::PosInf)
    }

    /// True when p^{⟨h,m⟩} s_m is integral at every stored level.
    pub fn is_integral(&self) -> bool {
        self.denom_bound() >= Val::int(0)
    }

    /// Checks s_{m+e_i} ≡ s_m mod (Ω_m) for every stored neighbour pair, which
    /// gives compatibility on the whole grid by transitivity.
    pub fn check_compatibility(&self) -> Result<bool> {
        for (m, s) in &self.levels {
            for i in 0..m.len() {
                let mut up = m.clone();
                up[i] += 1;
                if let Some(t) = self.levels.get(&up) {
                    let diff = t.sub(s)?;
                    if !in_omega_ideal(&diff, &self.window, m)? {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    fn check_grid(&self) -> Result<()> {
        for m in grid(self.vars(), self.top) {
            if !self.levels.contains_key(&m) {
                return Err(Error::InsufficientLevels(format!("level {m:?} missing")));
            }
        }
        Ok(())
    }

    /// Builds a system from stored remainders on the full grid.
    pub fn from_levels(
        p: Prime,
        window: Window,
        growth: GrowthClass,
        levels: BTreeMap<Level, TruncSeries>,
    ) -> Result<WindowSystem> {
        if growth.vars() != window.vars() {
            return Err(Error::IncompatibleShapes("growth and window arity".into()));
        }
        let k = window.vars();
        let top = levels.keys().flat_map(|m| m.iter().copied()).max().unwrap_or(0);
        let s = WindowSystem {
            p,
            window,
            growth,
            top,
            levels,
        };
        if s.levels.is_empty() {
            return Err(Error::InsufficientLevels("no levels".into()));
        }
        for (m, r) in &s.levels {
            if m.len() != k || r.vars() != k {
                return Err(Error::IncompatibleShapes("level arity".into()));
            }
            for i in 0..k {
                let bound = (s.window.e[i] - s.window.d[i] + 1) as u64 * p.pow(m[i] as u32);
                if r.degree_in(i).map_or(false, |d| d >= bound) {
                    return Err(Error::Invalid(format!("remainder at {m:?} is not reduced")));
                }
            }
        }
        s.check_grid()?;
        Ok(s)
    }
}

/// Remainders of `f` modulo (Ω_m^{[d,e]}) for every m ∈ [0,M]^k.
pub fn system_from_series(f: &TruncSeries, h: &GrowthClass, window: &Window, top: u64) -> Result<WindowSystem> {
    let k = f.vars();
    if window.vars() != k || h.vars() != k {
        return Err(Error::IncompatibleShapes("series, growth and window arity".into()));
    }
    let p = f.prime();
    let mut levels = BTreeMap::new();
    // Reducing from the top level down keeps the polynomial degrees small.
    let top_level = vec![top; k];
    let top_rem = remainder(f, window, &top_level)?;
    for m in grid(k, top) {
        let r = if f.is_exact() {
            remainder(&top_rem, window, &m)?
        } else {
            remainder(f, window, &m)?
        };
        levels.insert(m, r);
    }
    Ok(WindowSystem {
        p,
        window: window.clone(),
        growth: h.clone(),
        top,
        levels,
    })
}

fn check_width(window: &Window, h: &GrowthClass) -> Result<()> {
    for i in 0..window.vars() {
        let width = window.e[i] - window.d[i];
        let needed = floor_i64(&h.h[i]);
        if width < needed {
            return Err(Error::WindowTooNarrow { width, needed });
        }
    }
    Ok(())
}

/// The series determined by the system: with finitely many levels this is the
/// top-level remainder, the unique representative of degree below deg Ω_M
/// that agrees with every stored remainder.
pub fn reconstruct(s: &WindowSystem) -> Result<TruncSeries> {
    check_width(&s.window, &s.growth)?;
    s.check_grid()?;
    Ok(s.top_remainder()?.clone())
}

/// Per diagonal level m ≤ M: whether f vanishes modulo Ω_m^{[d,d+⌊h⌋]}.
pub fn vanishing_levels(f: &TruncSeries, h: &GrowthClass, d: &[i64], top: u64) -> Result<Vec<bool>> {
    let k = f.vars();
    if d.len() != k || h.vars() != k {
        return Err(Error::IncompatibleShapes("series, growth and d arity".into()));
    }
    let p = f.prime();
    let e: Vec<i64> = (0..k).map(|i| d[i] + floor_i64(&h.h[i])).collect();
    let window = Window::with_default_u(p, d.to_vec(), e)?;
    (0..=top)
        .map(|m| in_omega_ideal(f, &window, &vec![m; k]))
        .collect()
}

/// True iff f vanishes modulo Ω_m^{[d,d+⌊h⌋]} at every level m ≤ M.
pub fn vanishing_test(f: &TruncSeries, h: &GrowthClass, d: &[i64], top: u64) -> Result<bool> {
    Ok(vanishing_levels(f, h, d, top)?.into_iter().all(|x| x))
}

/// Reduces every remainder modulo the Ω ideals of a subwindow.
pub fn project_window(s: &WindowSystem, sub: &Window) -> Result<WindowSystem> {
    let k = s.vars();
    if sub.vars() != k {
        return Err(Error::IncompatibleShapes("subwindow arity".into()));
    }
    for i in 0..k {
        if sub.d[i] < s.window.d[i] || sub.e[i] > s.window.e[i] || sub.u[i] != s.window.u[i] {
            return Err(Error::Invalid("subwindow not contained in the window".into()));
        }
    }
    let mut levels = BTreeMap::new();
    for (m, r) in &s.levels {
        levels.insert(m.clone(), remainder(r, sub, m)?);
    }
    Ok(WindowSystem {
        p: s.p,
        window: sub.clone(),
        growth: s.growth.clone(),
        top: s.top,
        levels,
    })
}

/// Single-exponent systems s^{[i]} for every i ∈ [d,e].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentFamily {
    /// Window [d,e] of the family.
    pub window: Window,
    /// System over [i,i] per exponent i.
    pub members: BTreeMap<Vec<i64>, WindowSystem>,
}

/// Every exponent vector of the window.
pub fn exponents(window: &Window) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for i in 0..window.vars() {
        let mut next = vec![];
        for v in &out {
            for j in window.d[i]..=window.e[i] {
                let mut w: Vec<i64> = v.clone();
                w.push(j);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

fn point_window(window: &Window, i: &[i64]) -> Window {
    Window {
        d: i.to_vec(),
        e: i.to_vec(),
        u: window.u.clone(),
    }
}

/// Projections of a system to each single exponent.
pub fn components(s: &WindowSystem) -> Result<ComponentFamily> {
    let mut members = BTreeMap::new();
    for i in exponents(&s.window) {
        members.insert(i.clone(), project_window(s, &point_window(&s.window, &i))?);
    }
    Ok(ComponentFamily {
        window: s.window.clone(),
        members,
    })
}

/// θ_j at level m: Σ_{i ∈ [d,j]} ∏ C(j−d, i−d)(−1)^{j−i} s̃^{[i]}_m.
pub fn theta(family: &ComponentFamily, j: &[i64], m: &[u64]) -> Result<TruncSeries> {
    let w = &family.window;
    let k = w.vars();
    let first = family
        .members
        .values()
        .next()
        .ok_or_else(|| Error::InsufficientLevels("empty family".into()))?;
    let mut acc = TruncSeries::zero(first.p, k);
    for i in exponents(w) {
        if (0..k).any(|a| i[a] > j[a]) {
            continue;
        }
        let mut c = Q::one();
        for a in 0..k {
            c *= binom(j[a] - w.d[a], i[a] - w.d[a]);
            if (j[a] - i[a]) % 2 == 1 {
                c = -c;
            }
        }
        let s = family
            .members
            .get(&i)
            .ok_or_else(|| Error::InsufficientLevels(format!("component {i:?} missing")))?;
        acc = acc.add(&s.at(m)?.scale(&c))?;
    }
    Ok(acc)
}

/// Lagrange idempotents in Y = (1+X)^{p^m}: e_i ≡ 1 mod Ω^{[i]}_m and
/// ≡ 0 mod Ω^{[j]}_m for j ≠ i, as polynomials in X of degree < deg Ω^{[d,e]}_m.
pub fn idempotents(p: Prime, u: &Q, d: i64, e: i64, m: u64) -> Vec<Poly> {
    let pm = p.pow(m as u32) as i64;
    let c: Vec<Q> = (d..=e).map(|i| crate::padic::qpow(u, i * pm)).collect();
    let y = Poly::from_ints(&[1, 1]).pow(pm as u64);
    (0..c.len())
        .map(|a| {
            let mut num = Poly::constant(Q::one());
            for b in 0..c.len() {
                if b != a {
                    let lin = Poly::new(vec![-c[b].clone(), Q::one()]).scale(&(&c[a] - &c[b]).recip());
                    num = num.mul(&lin);
                }
            }
            num.compose(&y)
        })
        .collect()
}

/// Polynomial λ ≡ i mod Ω^{[i]}_m for every i ∈ [d,e] (the discrete logarithm
/// log(1+X)/log u modulo Ω^{[d,e]}_m).
pub fn discrete_log_poly(p: Prime, u: &Q, d: i64, e: i64, m: u64) -> Poly {
    idempotents(p, u, d, e, m)
        .iter()
        .zip(d..=e)
        .fold(Poly::zero(), |acc, (ei, i)| acc.add(&ei.scale(&q(i))))
}

/// Same polynomial computed from a truncated logarithm: p-adic approximation
/// of log u to `prec` digits and log(1+X) with `trunc` terms, reduced mod Ω.
pub fn discrete_log_poly_via_series(p: Prime, u: &Q, d: i64, e: i64, m: u64, trunc: u64, prec: i64) -> Poly {
    let lg = padic_log(trunc, p);
    let log_series = Poly::new(padic_log(4 * prec as u64 + 8, p).dense1());
    let log_u = crate::padic::round_padic(&log_series.eval(&(u - Q::one())), p, prec);
    let poly = Poly::new(lg.dense1()).scale(&log_u.recip());
    poly.rem(&omega_one(p, u, d, e, m))
}

/// Lifts single-exponent components to a system over [d,e].
///
/// Checks the hypothesis v_0(θ_j) + ⟨m, h − (j−d)⟩ ≥ −n at every stored level
/// and j, then solves the congruences exactly with Lagrange idempotents.
pub fn lift_components(family: &ComponentFamily, h: &GrowthClass, slack: i64) -> Result<WindowSystem> {
    let w = &family.window;
    let k = w.vars();
    if h.vars() != k {
        return Err(Error::IncompatibleShapes("growth arity".into()));
    }
    let first = family
        .members
        .values()
        .next()
        .ok_or_else(|| Error::InsufficientLevels("empty family".into()))?;
    let top = first.top;
    for s in family.members.values() {
        if s.top != top {
            return Err(Error::LevelMismatch("components stored to different levels".into()));
        }
    }
    let zero = vec![Q::zero(); k];
    for m in grid(k, top) {
        for j in exponents(w) {
            let th = theta(family, &j, &m)?;
            let shift: Q = (0..k)
                .map(|a| q(m[a] as i64) * (&h.h[a] - q(j[a] - w.d[a])))
                .sum();
            let v = th.vr(&zero).lower().plus(&shift);
            if v < Val::int(-slack) {
                return Err(Error::HypothesisFailed {
                    level: m.iter().map(|&x| x as u32).collect(),
                    j,
                });
            }
        }
    }
    combine_components(family, h)
}

/// Solves the congruences s ≡ s^{[i]} mod Ω^{[i]}_m exactly with Lagrange
/// idempotents, without checking the lifting hypothesis.
pub fn combine_components(family: &ComponentFamily, h: &GrowthClass) -> Result<WindowSystem> {
    let w = &family.window;
    let k = w.vars();
    let first = family
        .members
        .values()
        .next()
        .ok_or_else(|| Error::InsufficientLevels("empty family".into()))?;
    let p = first.p;
    let top = first.top;
    let mut levels = BTreeMap::new();
    for m in grid(k, top) {
        let idem: Vec<Vec<Poly>> = (0..k)
            .map(|a| idempotents(p, &w.u[a], w.d[a], w.e[a], m[a]))
            .collect();
        let mut acc = TruncSeries::zero(p, k);
        for i in exponents(w) {
            let mut term = family.members[&i].at(&m)?.clone();
            for a in 0..k {
                let e_poly = &idem[a][(i[a] - w.d[a]) as usize];
                term = map_axis(&term, a, |s| s.mul(e_poly));
            }
            acc = acc.add(&term)?;
        }
        levels.insert(m, acc);
    }
    Ok(WindowSystem {
        p,
        window: w.clone(),
        growth: h.clone(),
        top,
        levels,
    })
}

/// Smallest slack n ≥ 0 for which the lifting hypothesis holds.
pub fn minimal_slack(family: &ComponentFamily, h: &GrowthClass) -> Result<i64> {
    let w = &family.window;
    let k = w.vars();
    let top = family.members.values().next().map_or(0, |s| s.top);
    let zero = vec![Q::zero(); k];
    let mut worst = Val::PosInf;
    for m in grid(k, top) {
        for j in exponents(w) {
            let th = theta(family, &j, &m)?;
            let shift: Q = (0..k)
                .map(|a| q(m[a] as i64) * (&h.h[a] - q(j[a] - w.d[a])))
                .sum();
            worst = worst.min(th.vr(&zero).lower().plus(&shift));
        }
    }
    match worst {
        Val::PosInf => Ok(0),
        Val::NegInf => Err(Error::InexactValuation),
        Val::Fin(x) => Ok((-x).ceil().to_integer().try_into().unwrap_or(i64::MAX).max(0)),
    }
}

/// Denominator floor −(c^{[d,e]} + n) promised for a lift with slack n.
pub fn lift_denominator_floor(window: &Window, p: Prime, slack: i64) -> i64 {
    -(c_constant(window, p) + slack)
}

// ---------------------------------------------------------------------------
// JSON

/// Window as JSON.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WindowJson {
    /// Lower ends.
    pub d: Vec<i64>,
    /// Upper ends.
    pub e: Vec<i64>,
    /// Generator images as rational strings; defaults per prime when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<Vec<String>>,
}

impl WindowJson {
    /// Validated window.
    pub fn to_window(&self, p: Prime) -> Result<Window> {
        match &self.u {
            None => Window::with_default_u(p, self.d.clone(), self.e.clone()),
            Some(us) => {
                let u = us.iter().map(|s| parse_q(s)).collect::<Result<Vec<_>>>()?;
                Window::new(p, self.d.clone(), self.e.clone(), u)
            }
        }
    }
}

impl From<&Window> for WindowJson {
    fn from(w: &Window) -> Self {
        WindowJson {
            d: w.d.clone(),
            e: w.e.clone(),
            u: Some(w.u.iter().map(crate::padic::fmt_q).collect()),
        }
    }
}

/// One stored level.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LevelJson {
    /// Level vector.
    pub m: Vec<u64>,
    /// Remainder.
    pub remainder: SeriesJson,
}

/// A system as JSON.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SystemJson {
    /// Prime.
    pub p: u64,
    /// Window.
    pub window: WindowJson,
    /// Growth as rational strings.
    pub growth: Vec<String>,
    /// Levels.
    pub levels: Vec<LevelJson>,
}

impl From<&WindowSystem> for SystemJson {
    fn from(s: &WindowSystem) -> Self {
        SystemJson {
            p: s.p.get(),
            window: (&s.window).into(),
            growth: s.growth.h.iter().map(crate::padic::fmt_q).collect(),
            levels: s
                .levels
                .iter()
                .map(|(m, r)| LevelJson {
                    m: m.clone(),
                    remainder: r.into(),
                })
                .collect(),
        }
    }
}

impl TryFrom<&SystemJson> for WindowSystem {
    type Error = Error;
    fn try_from(j: &SystemJson) -> Result<WindowSystem> {
        let p = Prime::new(j.p)?;
        let window = j.window.to_window(p)?;
        let h = GrowthClass::new(j.growth.iter().map(|s| parse_q(s)).collect::<Result<Vec<_>>>()?)?;
        let mut levels = BTreeMap::new();
        for l in &j.levels {
            let r = TruncSeries::try_from(&l.remainder)?;
            if r.prime() != p {
                return Err(Error::Invalid("remainder prime differs from the system prime".into()));
            }
            levels.insert(l.m.clone(), r);
        }
        WindowSystem::from_levels(p, window, h, levels)
    }
}
