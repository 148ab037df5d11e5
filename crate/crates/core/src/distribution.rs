//! Admissible distributions on Γ = Γ_1×…×Γ_k as finite-level moment tables,
//! their valuation, convolution, the correspondence with group-ring elements
//! and with projective systems, and restriction/extension between windows.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::growth::{GrowthClass, Window};
use crate::padic::{binom, fmt_q, ordp_i64, parse_q, q, qpow, CycloScalar, Prime, Val, Q};
use crate::poly::Poly;
use crate::projsys::{
    combine_components, exponents, grid, map_axis, project_window, ComponentFamily, Level, WindowJson,
    WindowSystem,
};
use crate::series::{TruncSeries, ValuationReport};

/// Coset γ^l Γ^{p^m} given by its representative exponents l_j ∈ [0, p^{m_j}).
pub type Coset = Vec<u64>;

/// Moment table of a distribution to level M on the full grid [0,M]^k.
///
/// Stored as plain moments ∫_{aΓ^{p^m}} χ^w dμ for w ∈ [d,e]; the re-centred
/// moments ∫ (χ−χ(a))^{i−d} χ^d dμ are derived from them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distribution {
    /// Prime.
    pub p: Prime,
    /// Window with generator images.
    pub window: Window,
    /// Growth.
    pub growth: GrowthClass,
    /// Top level M.
    pub top: u64,
    plain: BTreeMap<(Level, Coset, Vec<i64>), Q>,
}

/// Finite character of Γ: φ_j(γ_j) = ζ_{p^{m_j}}^{a_j}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteCharacter {
    /// Level per factor.
    pub level: Vec<u64>,
    /// Exponent of the root of unity per factor.
    pub exps: Vec<u64>,
}

impl FiniteCharacter {
    /// Trivial character.
    pub fn trivial(k: usize) -> FiniteCharacter {
        FiniteCharacter {
            level: vec![0; k],
            exps: vec![0; k],
        }
    }
    /// φ_j(γ_j) as a root of unity.
    pub fn value_on_generator(&self, j: usize, p: Prime) -> CycloScalar {
        let n = p.pow(self.level[j] as u32);
        CycloScalar::root_of_unity(n.max(1), self.exps[j] as i64)
    }
    /// φ(γ^l).
    pub fn value(&self, l: &[u64], p: Prime) -> CycloScalar {
        let mut acc = CycloScalar::one();
        for j in 0..l.len() {
            let n = p.pow(self.level[j] as u32).max(1);
            acc = acc.mul(&CycloScalar::root_of_unity(n, (self.exps[j] * l[j]) as i64 % n as i64));
        }
        acc
    }
    /// Every character of Γ/Γ^{p^m}.
    pub fn all(m: &[u64], p: Prime) -> Vec<FiniteCharacter> {
        let mut out = vec![FiniteCharacter {
            level: m.to_vec(),
            exps: vec![],
        }];
        for &mj in m {
            let n = p.pow(mj as u32);
            let mut next = vec![];
            for c in &out {
                for a in 0..n {
                    let mut e = c.exps.clone();
                    e.push(a);
                    next.push(FiniteCharacter {
                        level: m.to_vec(),
                        exps: e,
                    });
                }
            }
            out = next;
        }
        out
    }
}

/// Arithmetic specialization κ = ∏ χ_j^{w_j} φ_j.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Specialization {
    /// Weight vector.
    pub weight: Vec<i64>,
    /// Finite part.
    pub finite: FiniteCharacter,
}

impl Specialization {
    /// κ(γ_j) − 1 per factor: the point X_j = u_j^{w_j} φ_j(γ_j) − 1.
    pub fn point(&self, window: &Window, p: Prime) -> Vec<CycloScalar> {
        (0..self.weight.len())
            .map(|j| {
                self.finite
                    .value_on_generator(j, p)
                    .scale(&qpow(&window.u[j], self.weight[j]))
                    .sub(&CycloScalar::one())
            })
            .collect()
    }
}

/// Every coset representative at level m.
pub fn cosets(m: &[u64], p: Prime) -> Vec<Coset> {
    let mut out = vec![vec![]];
    for &mj in m {
        let n = p.pow(mj as u32);
        let mut next = vec![];
        for c in &out {
            for a in 0..n {
                let mut v: Vec<u64> = c.clone();
                v.push(a);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

fn chi_at(window: &Window, j: usize, l: i64) -> Q {
    qpow(&window.u[j], l)
}

fn check_arity(window: &Window, growth: &GrowthClass) -> Result<()> {
    if window.vars() != growth.vars() {
        return Err(Error::IncompatibleShapes("window and growth arity".into()));
    }
    Ok(())
}

/// Expansion of χ^w around χ(a) in powers (χ−χ(a))^k χ^d, k ∈ [0, cap]:
/// coefficients C(w−d, k) χ(a)^{w−d−k}.
fn expand_around(chi_a: &Q, w: i64, d: i64, cap: i64) -> Vec<(i64, Q)> {
    (0..=cap)
        .filter_map(|k| {
            let c = binom(w - d, k);
            (!c.is_zero()).then(|| (k, c * qpow(chi_a, w - d - k)))
        })
        .collect()
}

/// Cartesian product of per-coordinate term lists.
fn product_terms(lists: &[Vec<(i64, Q)>]) -> Vec<(Vec<i64>, Q)> {
    let mut out = vec![(vec![], Q::one())];
    for l in lists {
        let mut next = vec![];
        for (ks, c) in &out {
            for (k, x) in l {
                let mut v: Vec<i64> = ks.clone();
                v.push(*k);
                next.push((v, c * x));
            }
        }
        out = next;
    }
    out
}

impl Distribution {
    /// Number of factors.
    pub fn vars(&self) -> usize {
        self.window.vars()
    }

    /// ∫_{aΓ^{p^m}} χ^w dμ for w ∈ [d,e].
    pub fn plain_moment(&self, m: &[u64], a: &[u64], w: &[i64]) -> Result<Q> {
        self.plain
            .get(&(m.to_vec(), a.to_vec(), w.to_vec()))
            .cloned()
            .ok_or_else(|| Error::LevelMismatch(format!("no moment at level {m:?}, coset {a:?}, exponent {w:?}")))
    }

    /// ∫_{aΓ^{p^m}} ∏ (χ_j−χ_j(a))^{i_j−d_j} χ_j^{d_j} dμ.
    pub fn moment(&self, m: &[u64], a: &[u64], i: &[i64]) -> Result<Q> {
        let k = self.vars();
        let lists: Vec<Vec<(i64, Q)>> = (0..k)
            .map(|j| {
                let n = i[j] - self.window.d[j];
                let ca = chi_at(&self.window, j, a[j] as i64);
                // (χ−χ(a))^n χ^d = Σ_t C(n,t)(−χ(a))^{n−t} χ^{d+t}
                (0..=n)
                    .map(|t| (t, binom(n, t) * qpow(&(-ca.clone()), n - t)))
                    .collect()
            })
            .collect();
        let mut acc = Q::zero();
        for (ts, c) in product_terms(&lists) {
            let w: Vec<i64> = (0..k).map(|j| self.window.d[j] + ts[j]).collect();
            acc += c * self.plain_moment(m, a, &w)?;
        }
        Ok(acc)
    }

    /// Builds a table from plain moments, checking that the grid is complete.
    pub fn from_plain(
        p: Prime,
        window: Window,
        growth: GrowthClass,
        top: u64,
        plain: BTreeMap<(Level, Coset, Vec<i64>), Q>,
    ) -> Result<Distribution> {
        check_arity(&window, &growth)?;
        let d = Distribution {
            p,
            window,
            growth,
            top,
            plain,
        };
        for m in grid(d.vars(), top) {
            for a in cosets(&m, p) {
                for w in exponents(&d.window) {
                    if !d.plain.contains_key(&(m.clone(), a.clone(), w)) {
                        return Err(Error::LevelMismatch(format!("missing moment at level {m:?}")));
                    }
                }
            }
        }
        Ok(d)
    }

    /// Builds a table from re-centred moments keyed by (m, coset, i).
    pub fn from_moments(
        p: Prime,
        window: Window,
        growth: GrowthClass,
        top: u64,
        moments: &BTreeMap<(Level, Coset, Vec<i64>), Q>,
    ) -> Result<Distribution> {
        check_arity(&window, &growth)?;
        let k = window.vars();
        let mut plain = BTreeMap::new();
        for m in grid(k, top) {
            for a in cosets(&m, p) {
                for w in exponents(&window) {
                    let lists: Vec<Vec<(i64, Q)>> = (0..k)
                        .map(|j| {
                            let ca = chi_at(&window, j, a[j] as i64);
                            expand_around(&ca, w[j], window.d[j], w[j] - window.d[j])
                        })
                        .collect();
                    let mut acc = Q::zero();
                    for (ks, c) in product_terms(&lists) {
                        let i: Vec<i64> = (0..k).map(|j| window.d[j] + ks[j]).collect();
                        let v = moments
                            .get(&(m.clone(), a.clone(), i.clone()))
                            .ok_or_else(|| Error::LevelMismatch(format!("missing moment {m:?} {a:?} {i:?}")))?;
                        acc += c * v;
                    }
                    plain.insert((m.clone(), a.clone(), w), acc);
                }
            }
        }
        Self::from_plain(p, window, growth, top, plain)
    }

    /// Finite combination of Dirac measures Σ c·δ_{γ^l}.
    pub fn from_points(
        p: Prime,
        window: Window,
        growth: GrowthClass,
        top: u64,
        points: &[(Vec<i64>, Q)],
    ) -> Result<Distribution> {
        check_arity(&window, &growth)?;
        let k = window.vars();
        let mut plain = BTreeMap::new();
        for m in grid(k, top) {
            for a in cosets(&m, p) {
                for w in exponents(&window) {
                    plain.insert((m.clone(), a.clone(), w), Q::zero());
                }
            }
        }
        for (l, c) in points {
            if l.len() != k {
                return Err(Error::IncompatibleShapes("point arity".into()));
            }
            for m in grid(k, top) {
                let a: Coset = (0..k)
                    .map(|j| l[j].rem_euclid(p.pow(m[j] as u32) as i64) as u64)
                    .collect();
                for w in exponents(&window) {
                    let mut v = c.clone();
                    for j in 0..k {
                        v *= qpow(&chi_at(&window, j, l[j]), w[j]);
                    }
                    *plain.get_mut(&(m.clone(), a.clone(), w)).unwrap() += v;
                }
            }
        }
        Ok(Distribution {
            p,
            window,
            growth,
            top,
            plain,
        })
    }

    /// Dirac measure at γ^l.
    pub fn dirac(p: Prime, window: Window, growth: GrowthClass, top: u64, l: &[i64]) -> Result<Distribution> {
        Self::from_points(p, window, growth, top, &[(l.to_vec(), Q::one())])
    }

    /// Scalar multiple.
    pub fn scale(&self, c: &Q) -> Distribution {
        let mut out = self.clone();
        for v in out.plain.values_mut() {
            *v *= c;
        }
        out
    }

    /// Sum of two tables on the same window and levels.
    pub fn add(&self, o: &Distribution) -> Result<Distribution> {
        if self.window != o.window || self.top != o.top {
            return Err(Error::LevelMismatch("tables differ in window or level".into()));
        }
        let mut out = self.clone();
        for (key, v) in &o.plain {
            *out.plain.entry(key.clone()).or_insert_with(Q::zero) += v;
        }
        Ok(out)
    }

    /// Refinement additivity: every moment equals the sum over sub-cosets one
    /// level up in each factor.
    pub fn check_additivity(&self) -> bool {
        let p = self.p;
        for ((m, a, w), v) in &self.plain {
            for j in 0..m.len() {
                if m[j] >= self.top {
                    continue;
                }
                let mut up = m.clone();
                up[j] += 1;
                let step = p.pow(m[j] as u32);
                let mut sum = Q::zero();
                for t in 0..p.get() {
                    let mut b = a.clone();
                    b[j] += t * step;
                    match self.plain.get(&(up.clone(), b, w.clone())) {
                        Some(x) => sum += x,
                        None => return false,
                    }
                }
                if sum != *v {
                    return false;
                }
            }
        }
        true
    }

    /// v_h^{[d,e]}: inf over stored (m,a,i) of ord_p(moment) + ⟨h − (i−d), m⟩.
    pub fn vhde(&self) -> ValuationReport {
        let k = self.vars();
        let mut best = Val::PosInf;
        for m in grid(k, self.top) {
            for a in cosets(&m, self.p) {
                for i in exponents(&self.window) {
                    let v = self.moment(&m, &a, &i).expect("complete table");
                    if v.is_zero() {
                        continue;
                    }
                    let shift: Q = (0..k)
                        .map(|j| q(m[j] as i64) * (&self.growth.h[j] - q(i[j] - self.window.d[j])))
                        .sum();
                    best = best.min(Val::Fin(q(ordp_i64(&v, self.p)) + shift));
                }
            }
        }
        ValuationReport {
            retained_min: best.clone(),
            tail_bound: Val::PosInf,
            exact: true,
        }
    }

    /// ∫ κ dμ for a specialization with weight in the window and level ≤ M.
    pub fn integrate_specialization(&self, kappa: &Specialization) -> Result<CycloScalar> {
        let k = self.vars();
        let m = &kappa.finite.level;
        if m.iter().any(|&x| x > self.top) {
            return Err(Error::LevelMismatch("specialization level above the table".into()));
        }
        if (0..k).any(|j| kappa.weight[j] < self.window.d[j] || kappa.weight[j] > self.window.e[j]) {
            return Err(Error::Invalid("weight outside the window".into()));
        }
        let mut acc = CycloScalar::zero();
        for a in cosets(m, self.p) {
            let c = self.plain_moment(m, &a, &kappa.weight)?;
            if c.is_zero() {
                continue;
            }
            acc = acc.add(&kappa.finite.value(&a, self.p).scale(&c));
        }
        Ok(acc)
    }

    /// Pairing with a locally polynomial function given as terms
    /// (m, a, i, c) meaning c·1_{aΓ^{p^m}}(χ−χ(a))^{i−d}χ^d.
    pub fn integrate_locally_polynomial(&self, f: &[(Level, Coset, Vec<i64>, Q)]) -> Result<Q> {
        let mut acc = Q::zero();
        for (m, a, i, c) in f {
            if m.iter().any(|&x| x > self.top) {
                return Err(Error::LevelMismatch("function level above the table".into()));
            }
            acc += c * self.moment(m, a, i)?;
        }
        Ok(acc)
    }

    /// Restriction to a subwindow [b,c] ⊆ [d,e].
    pub fn restrict_window(&self, sub: &Window) -> Result<Distribution> {
        let k = self.vars();
        if sub.vars() != k {
            return Err(Error::IncompatibleShapes("subwindow arity".into()));
        }
        for j in 0..k {
            if sub.d[j] < self.window.d[j] || sub.e[j] > self.window.e[j] || sub.u[j] != self.window.u[j] {
                return Err(Error::Invalid("subwindow not contained in the window".into()));
            }
        }
        let plain = self
            .plain
            .iter()
            .filter(|((_, _, w), _)| (0..k).all(|j| w[j] >= sub.d[j] && w[j] <= sub.e[j]))
            .map(|(key, v)| (key.clone(), v.clone()))
            .collect();
        Ok(Distribution {
            p: self.p,
            window: sub.clone(),
            growth: self.growth.clone(),
            top: self.top,
            plain,
        })
    }

    /// Extension to a larger window when the current one has width ≥ ⌊h⌋.
    ///
    /// At the top level each χ^w is expanded around χ(a) in the available
    /// re-centred moments; lower levels are the sums over sub-cosets.
    pub fn extend_window(&self, target: &Window) -> Result<Distribution> {
        let k = self.vars();
        let (b, c) = (&self.window.d, &self.window.e);
        for j in 0..k {
            let width = c[j] - b[j];
            let needed = crate::padic::floor_i64(&self.growth.h[j]);
            if width < needed {
                return Err(Error::WindowTooNarrow { width, needed });
            }
            if target.d[j] > b[j] || target.e[j] < c[j] || target.u[j] != self.window.u[j] {
                return Err(Error::Invalid("target window does not contain the window".into()));
            }
        }
        let p = self.p;
        let top_level = vec![self.top; k];
        let mut top_plain: BTreeMap<(Coset, Vec<i64>), Q> = BTreeMap::new();
        for a in cosets(&top_level, p) {
            for w in exponents(target) {
                let lists: Vec<Vec<(i64, Q)>> = (0..k)
                    .map(|j| {
                        let ca = chi_at(&self.window, j, a[j] as i64);
                        expand_around(&ca, w[j], b[j], c[j] - b[j])
                    })
                    .collect();
                let mut acc = Q::zero();
                for (ks, coef) in product_terms(&lists) {
                    let i: Vec<i64> = (0..k).map(|j| b[j] + ks[j]).collect();
                    acc += coef * self.moment(&top_level, &a, &i)?;
                }
                top_plain.insert((a.clone(), w), acc);
            }
        }
        let mut plain = BTreeMap::new();
        for m in grid(k, self.top) {
            for a in cosets(&m, p) {
                for w in exponents(target) {
                    plain.insert((m.clone(), a.clone(), w), Q::zero());
                }
            }
        }
        for ((l, w), v) in &top_plain {
            for m in grid(k, self.top) {
                let a: Coset = (0..k).map(|j| l[j] % p.pow(m[j] as u32)).collect();
                *plain.get_mut(&(m, a, w.clone())).unwrap() += v;
            }
        }
        Ok(Distribution {
            p,
            window: target.clone(),
            growth: self.growth.clone(),
            top: self.top,
            plain,
        })
    }

    /// Group-ring element at level m: coset → nonzero mass, for h = 0 and window [0,0].
    pub fn to_group_ring(&self, m: &[u64]) -> Result<BTreeMap<Coset, Q>> {
        if self.window.d.iter().chain(&self.window.e).any(|&x| x != 0) || self.growth.h.iter().any(|x| !x.is_zero()) {
            return Err(Error::Invalid("group-ring correspondence needs h = 0 and window [0,0]".into()));
        }
        let w = vec![0; self.vars()];
        cosets(m, self.p)
            .into_iter()
            .map(|a| Ok((a.clone(), self.plain_moment(m, &a, &w)?)))
            .filter(|r: &Result<(Coset, Q)>| r.as_ref().map_or(true, |(_, c)| !c.is_zero()))
            .collect()
    }
}

/// Group-ring element Σ c_a [γ^a] at level M as a bounded measure with window [0,0].
pub fn measure_from_group_ring(p: Prime, u: Vec<Q>, top: u64, elt: &BTreeMap<Coset, Q>) -> Result<Distribution> {
    let k = u.len();
    let window = Window::new(p, vec![0; k], vec![0; k], u)?;
    let points: Vec<(Vec<i64>, Q)> = elt.iter().map(|(a, c)| (a.iter().map(|&x| x as i64).collect(), c.clone())).collect();
    Distribution::from_points(p, window, GrowthClass::new(vec![Q::zero(); k])?, top, &points)
}

/// The group-ring element as a polynomial in X via [γ_j] ↦ 1+X_j.
pub fn group_ring_poly(p: Prime, elt: &BTreeMap<Coset, Q>, k: usize) -> TruncSeries {
    let mut acc = TruncSeries::zero(p, k);
    for (a, c) in elt {
        let mut t = TruncSeries::constant(p, k, c.clone());
        for (j, &aj) in a.iter().enumerate() {
            let b = Poly::from_ints(&[1, 1]).pow(aj);
            t = map_axis(&t, j, |s| s.mul(&b));
        }
        acc = acc.add(&t).expect("same shape");
    }
    acc
}

/// Convolution μ1 * μ2: plain moments multiply over coset pairs b·c = a.
pub fn convolve(mu1: &Distribution, mu2: &Distribution) -> Result<Distribution> {
    if mu1.window != mu2.window || mu1.p != mu2.p {
        return Err(Error::IncompatibleShapes("convolution needs the same group and window".into()));
    }
    if mu1.top != mu2.top {
        return Err(Error::LevelMismatch(format!("levels {} and {}", mu1.top, mu2.top)));
    }
    let p = mu1.p;
    let k = mu1.vars();
    let mut plain = BTreeMap::new();
    for m in grid(k, mu1.top) {
        let cs = cosets(&m, p);
        for w in exponents(&mu1.window) {
            let mut acc: BTreeMap<Coset, Q> = cs.iter().map(|a| (a.clone(), Q::zero())).collect();
            for b in &cs {
                let x = mu1.plain_moment(&m, b, &w)?;
                if x.is_zero() {
                    continue;
                }
                for c in &cs {
                    let y = mu2.plain_moment(&m, c, &w)?;
                    if y.is_zero() {
                        continue;
                    }
                    let a: Coset = (0..k).map(|j| (b[j] + c[j]) % p.pow(m[j] as u32)).collect();
                    *acc.get_mut(&a).unwrap() += &x * &y;
                }
            }
            for (a, v) in acc {
                plain.insert((m.clone(), a, w.clone()), v);
            }
        }
    }
    Ok(Distribution {
        p,
        window: mu1.window.clone(),
        growth: mu1.growth.add(&mu2.growth),
        top: mu1.top,
        plain,
    })
}

/// Distribution attached to a system: the component modulo Ω^{[w]}_m read in
/// the chart 1+X_j = u_j^{w_j} Z_j gives the plain moments over cosets.
pub fn system_to_distribution(s: &WindowSystem) -> Result<Distribution> {
    let p = s.p;
    let k = s.vars();
    let mut plain = BTreeMap::new();
    for w in exponents(&s.window) {
        let pw = Window {
            d: w.clone(),
            e: w.clone(),
            u: s.window.u.clone(),
        };
        let comp = project_window(s, &pw)?;
        for (m, r) in &comp.levels {
            if !r.is_exact() {
                return Err(Error::InexactValuation);
            }
            let mut z = r.clone();
            for j in 0..k {
                let sub = Poly::new(vec![-Q::one(), qpow(&s.window.u[j], w[j])]);
                z = map_axis(&z, j, |x| x.compose(&sub));
            }
            for a in cosets(m, p) {
                plain.insert((m.clone(), a.clone(), w.clone()), z.coeff(&a));
            }
        }
    }
    Distribution::from_plain(p, s.window.clone(), s.growth.clone(), s.top, plain)
}

/// System attached to a distribution: components Σ_l c_l (u^{−w}(1+X))^l,
/// combined over the window by the Chinese remainder theorem.
pub fn distribution_to_system(mu: &Distribution) -> Result<WindowSystem> {
    let p = mu.p;
    let k = mu.vars();
    let mut members = BTreeMap::new();
    for w in exponents(&mu.window) {
        let pw = Window {
            d: w.clone(),
            e: w.clone(),
            u: mu.window.u.clone(),
        };
        let mut levels = BTreeMap::new();
        for m in grid(k, mu.top) {
            let terms: Vec<(Vec<u64>, Q)> = cosets(&m, p)
                .into_iter()
                .map(|a| {
                    let c = mu.plain_moment(&m, &a, &w).expect("complete table");
                    (a, c)
                })
                .collect();
            let mut r = TruncSeries::polynomial(p, k, terms);
            for j in 0..k {
                let sub = Poly::new(vec![Q::one(), Q::one()]).scale(&qpow(&mu.window.u[j], -w[j]));
                r = map_axis(&r, j, |x| x.compose(&sub));
            }
            levels.insert(m, r);
        }
        members.insert(
            w,
            WindowSystem {
                p,
                window: pw,
                growth: mu.growth.clone(),
                top: mu.top,
                levels,
            },
        );
    }
    combine_components(
        &ComponentFamily {
            window: mu.window.clone(),
            members,
        },
        &mu.growth,
    )
}

/// κ(s̃_m) for the system remainder at the level of κ's finite part.
pub fn interpolate_system(s: &WindowSystem, kappa: &Specialization) -> Result<CycloScalar> {
    let r = s.at(&kappa.finite.level)?;
    let pt = kappa.point(&s.window, s.p);
    let zero = vec![Q::zero(); s.vars()];
    Ok(r.eval_cyclo(&pt, &zero)?.0)
}

/// Every specialization with weight in the window and finite level ≤ M.
pub fn specializations(window: &Window, top: u64, p: Prime) -> Vec<Specialization> {
    let k = window.vars();
    let mut out = vec![];
    for m in grid(k, top) {
        for fc in FiniteCharacter::all(&m, p) {
            // Keep only characters whose level is exact in every factor.
            let exact = (0..k).all(|j| m[j] == 0 || fc.exps[j] % p.get() != 0);
            if !exact {
                continue;
            }
            for w in exponents(window) {
                out.push(Specialization {
                    weight: w,
                    finite: fc.clone(),
                });
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// JSON

/// One moment entry.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MomentEntry {
    /// Level.
    pub m: Vec<u64>,
    /// Coset representative exponents.
    pub coset: Vec<u64>,
    /// Exponent i ∈ [d,e].
    pub i: Vec<i64>,
    /// Rational value.
    pub value: String,
}

/// Moment table as JSON.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MomentTableJson {
    /// Prime.
    pub p: u64,
    /// Window.
    pub window: WindowJson,
    /// Growth.
    pub growth: Vec<String>,
    /// Top level.
    pub level: u64,
    /// Re-centred moments.
    pub entries: Vec<MomentEntry>,
}

impl From<&Distribution> for MomentTableJson {
    fn from(d: &Distribution) -> Self {
        let mut entries = vec![];
        for m in grid(d.vars(), d.top) {
            for a in cosets(&m, d.p) {
                for i in exponents(&d.window) {
                    let v = d.moment(&m, &a, &i).expect("complete table");
                    entries.push(MomentEntry {
                        m: m.clone(),
                        coset: a.clone(),
                        i,
                        value: fmt_q(&v),
                    });
                }
            }
        }
        MomentTableJson {
            p: d.p.get(),
            window: (&d.window).into(),
            growth: d.growth.h.iter().map(fmt_q).collect(),
            level: d.top,
            entries,
        }
    }
}

impl TryFrom<&MomentTableJson> for Distribution {
    type Error = Error;
    fn try_from(j: &MomentTableJson) -> Result<Distribution> {
        let p = Prime::new(j.p)?;
        let window = j.window.to_window(p)?;
        let growth = GrowthClass::new(j.growth.iter().map(|s| parse_q(s)).collect::<Result<Vec<_>>>()?)?;
        let mut moments = BTreeMap::new();
        for e in &j.entries {
            moments.insert((e.m.clone(), e.coset.clone(), e.i.clone()), parse_q(&e.value)?);
        }
        Distribution::from_moments(p, window, growth, j.level, &moments)
    }
}
