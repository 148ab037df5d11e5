//! Weierstrass division and preparation, leading indices, Newton data and the
//! truncated logarithm.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::padic::{ordp_i64, ordp_rational, q, Prime, Val, Q};
use crate::poly::Poly;
use crate::series::{ell, Bound, BoundTerm, Index, Region, TruncSeries, ValuationReport, Weight};

/// Options for division of truncated series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivideOpts {
    /// Truncation used when both inputs are exact but the quotient is infinite.
    pub trunc: u64,
}

impl Default for DivideOpts {
    fn default() -> Self {
        DivideOpts { trunc: 40 }
    }
}

/// Output of one-variable division `g = f·q + t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisionResult {
    /// Quotient with certified bounds.
    pub quotient: TruncSeries,
    /// Remainder, degree below the leading index of the divisor.
    pub remainder: TruncSeries,
    /// True when v_r(g) = min{v_r(f)+v_r(q), v_r(t)} was verified.
    pub certified: bool,
    /// Leading index d_r(f).
    pub leading_index: u64,
}

/// Output of multi-variable division `g = Σ f_i q_i + t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiDivisionResult {
    /// Quotients, one per divisor.
    pub quotients: Vec<TruncSeries>,
    /// Remainder.
    pub remainder: TruncSeries,
    /// True when the valuation identity was verified.
    pub certified: bool,
}

fn one_var(f: &TruncSeries) -> Result<()> {
    if f.vars() != 1 {
        return Err(Error::IncompatibleShapes(format!(
            "expected one variable, got {}",
            f.vars()
        )));
    }
    Ok(())
}

/// Minimal index attaining v_r(f) for a one-variable series.
pub fn leading_index(f: &TruncSeries, r: &Q) -> Result<u64> {
    one_var(f)?;
    if f.is_zero() {
        return Err(Error::ZeroSeries);
    }
    let rep = f.vr(std::slice::from_ref(r));
    if !rep.exact {
        return Err(Error::InexactValuation);
    }
    let v = rep.retained_min;
    for (n, c) in f.coeffs() {
        let w = q(ordp_i64(c, f.prime())) + r * q(n[0] as i64);
        if Val::Fin(w) == v {
            return Ok(n[0]);
        }
    }
    Err(Error::ZeroSeries)
}

/// Number of roots with ord_p > r counted with multiplicity (equal to d_r(f)).
pub fn count_roots(f: &TruncSeries, r: &Q) -> Result<u64> {
    leading_index(f, r)
}

fn conv(a: &[Q], b: &[Q]) -> Vec<Q> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn unknown_part(s: &TruncSeries, w: &Q) -> Val {
    let wt = [Weight::Fin(w.clone())];
    let h = [Q::zero()];
    s.tail()
        .min_over(&Region::Outside(s.trunc().to_vec()), &wt, &h, s.prime())
        .min(s.err().min_over(&Region::Inside(s.trunc().to_vec()), &wt, &h, s.prime()))
}

fn dense_vr(c: &[Q], r: &Q, p: Prime) -> Val {
    c.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(n, x)| Val::Fin(q(ordp_i64(x, p)) + r * q(n as i64)))
        .min()
        .unwrap_or(Val::PosInf)
}

/// Next Newton break of `f` above `r` among indices below `s`.
fn next_break(f: &TruncSeries, r: &Q, s: u64) -> Option<Q> {
    let p = f.prime();
    let os = q(ordp_i64(&f.coeff(&[s]), p));
    f.coeffs()
        .iter()
        .filter(|(n, _)| n[0] < s)
        .map(|(n, c)| (q(ordp_i64(c, p)) - &os) / q((s - n[0]) as i64))
        .filter(|b| b > r)
        .min()
}

/// Valuation identity check used to certify division results.
fn identity_holds(vg: &ValuationReport, terms: &[(Val, ValuationReport)], vt: &ValuationReport) -> bool {
    // terms: (v_r(f_i), report of q_i)
    let Some(g) = vg.value() else { return false };
    let mut lower = vt.lower();
    let mut attained = vt.value() == Some(g);
    for (vf, rq) in terms {
        let lo = vf.add(&rq.lower());
        lower = lower.min(lo);
        if rq.value().map(|v| vf.add(v)) == Some(g.clone()) {
            attained = true;
        }
    }
    lower >= *g && attained
}

/// One-variable Weierstrass division with default options.
pub fn divide(g: &TruncSeries, f: &TruncSeries, r: &Q) -> Result<DivisionResult> {
    divide_with(g, f, r, &DivideOpts::default())
}

/// One-variable Weierstrass division `g = f q + t` with deg t < d_r(f).
///
/// The quotient is the exact solution of the X-adic linear system to order T;
/// the neglected part `E = g − f q − t` is divided again in principle, and
/// its valuation at a radius `r' ∈ (r, next break)` with unchanged leading
/// index certifies the error bounds of `q` and `t`.
pub fn divide_with(g: &TruncSeries, f: &TruncSeries, r: &Q, opts: &DivideOpts) -> Result<DivisionResult> {
    one_var(g)?;
    one_var(f)?;
    if g.prime() != f.prime() {
        return Err(Error::IncompatibleShapes("different primes".into()));
    }
    let p = f.prime();
    if f.is_zero() {
        return Err(Error::ZeroDivisor);
    }
    let s = match leading_index(f, r) {
        Err(Error::ZeroSeries) => return Err(Error::ZeroDivisor),
        other => other?,
    };
    let rs = std::slice::from_ref(r);
    let fdeg = f.degree_in(0).unwrap_or(0);

    if f.is_exact() && g.is_exact() && fdeg == s {
        let (qp, tp) = Poly::new(g.dense1()).divrem(&Poly::new(f.dense1()));
        let quotient = TruncSeries::poly1(p, qp.coeffs());
        let remainder = TruncSeries::poly1(p, tp.coeffs());
        let certified = identity_holds(
            &g.vr(rs),
            &[(f.vr(rs).retained_min, quotient.vr(rs))],
            &remainder.vr(rs),
        );
        return Ok(DivisionResult {
            quotient,
            remainder,
            certified,
            leading_index: s,
        });
    }

    let t_len = match (g.tail().is_zero(), f.tail().is_zero()) {
        (true, true) => opts
            .trunc
            .max(g.degree_in(0).unwrap_or(0) + 1)
            .max(fdeg + 1),
        (false, true) => g.trunc()[0],
        (true, false) => f.trunc()[0],
        (false, false) => g.trunc()[0].min(f.trunc()[0]),
    };
    if t_len <= s {
        return Err(Error::NonconvergentPrecision(format!(
            "truncation {t_len} does not exceed leading index {s}"
        )));
    }
    let n = (t_len - s) as usize;
    let fc = f.dense1();
    let gc = g.dense1();
    let fat = |i: i64| -> Q {
        if i < 0 || i as usize >= fc.len() {
            Q::zero()
        } else {
            fc[i as usize].clone()
        }
    };
    let mat: Vec<Vec<Q>> = (0..n)
        .map(|row| (0..n).map(|j| fat(row as i64 + s as i64 - j as i64)).collect())
        .collect();
    let rhs: Vec<Q> = (0..n)
        .map(|row| gc.get(row + s as usize).cloned().unwrap_or_else(Q::zero))
        .collect();
    let qv = linalg::solve(mat, rhs)
        .ok_or_else(|| Error::NonconvergentPrecision("singular division system".into()))?;
    let fq = conv(&fc, &qv);
    let at = |v: &[Q], i: usize| v.get(i).cloned().unwrap_or_else(Q::zero);
    let tv: Vec<Q> = (0..s as usize).map(|i| at(&gc, i) - at(&fq, i)).collect();
    let elen = gc.len().max(fq.len());
    let mut ev: Vec<Q> = (0..elen).map(|i| at(&gc, i) - at(&fq, i)).collect();
    for (i, x) in tv.iter().enumerate() {
        ev[i] -= x;
    }
    debug_assert!(ev.iter().take(t_len as usize).all(|x| x.is_zero()));

    // Radius r' > r with the same leading index.
    let mut rp = match next_break(f, r, s) {
        Some(b) => {
            let mid = (r + &b) / q(2);
            std::cmp::min(mid, r + q(1))
        }
        None => r + q(1),
    };
    let mut ok = false;
    for _ in 0..16 {
        if let Ok(s2) = leading_index(f, &rp) {
            if s2 == s {
                ok = true;
                break;
            }
        }
        rp = (r + &rp) / q(2);
    }
    if !ok {
        return Err(Error::NonconvergentPrecision(
            "no radius above r keeps the leading index".into(),
        ));
    }
    let vfp = f.vr(std::slice::from_ref(&rp)).retained_min;
    let vqp = dense_vr(&qv, &rp, p);
    let ve = dense_vr(&ev, &rp, p)
        .min(unknown_part(g, &rp))
        .min(unknown_part(f, &rp).add(&vqp));
    if ve == Val::NegInf {
        return Err(Error::NonconvergentPrecision(
            "uncertified part of the inputs is unbounded at the certifying radius".into(),
        ));
    }
    let rps = std::slice::from_ref(&rp);
    let remainder = {
        let coeffs: BTreeMap<Index, Q> = tv
            .iter()
            .enumerate()
            .map(|(i, x)| (vec![i as u64], x.clone()))
            .collect();
        let err = if s == 0 {
            Bound::zero()
        } else {
            Bound::single(BoundTerm::weighted(ve.clone(), rps))
        };
        TruncSeries::new(p, vec![s.max(1)], coeffs, Bound::zero(), err)?
    };
    let vf = f.vr(rs).retained_min;
    let gt = g.sub(&remainder)?;
    let l_floor = gt.vr(rs).lower().sub(&vf);
    let quotient = {
        let coeffs: BTreeMap<Index, Q> = qv
            .iter()
            .enumerate()
            .map(|(i, x)| (vec![i as u64], x.clone()))
            .collect();
        TruncSeries::new(
            p,
            vec![n as u64],
            coeffs,
            Bound::single(BoundTerm::weighted(l_floor, rs)),
            Bound::single(BoundTerm::weighted(ve.sub(&vfp), rps)),
        )?
    };
    let certified = identity_holds(&g.vr(rs), &[(vf, quotient.vr(rs))], &remainder.vr(rs));
    Ok(DivisionResult {
        quotient,
        remainder,
        certified,
        leading_index: s,
    })
}

/// Split a series with vanishing tail into one-variable slices along `axis`,
/// keyed by the remaining indices.
fn slices(g: &TruncSeries, axis: usize, r: &[Q]) -> Result<BTreeMap<Index, TruncSeries>> {
    if !g.tail().is_zero() {
        return Err(Error::NonconvergentPrecision(
            "multi-variable division needs a dividend with vanishing tail".into(),
        ));
    }
    let k = g.vars();
    let mut raw: BTreeMap<Index, BTreeMap<Index, Q>> = BTreeMap::new();
    for (n, c) in g.coeffs() {
        let mut other = n.clone();
        let ni = other.remove(axis);
        raw.entry(other).or_default().insert(vec![ni], c.clone());
    }
    let mut out = BTreeMap::new();
    for (m, coeffs) in raw {
        // Restrict error clauses to the slice.
        let err = Bound {
            terms: g
                .err()
                .terms
                .iter()
                .map(|t| {
                    let mut shift = Q::zero();
                    let mut j = 0;
                    for i in 0..k {
                        if i == axis {
                            continue;
                        }
                        shift += &t.weight[i] * q(m[j] as i64)
                            + &t.log[i] * q(ell(m[j], g.prime()) as i64);
                        j += 1;
                    }
                    BoundTerm {
                        floor: t.floor.plus(&-shift),
                        weight: vec![t.weight[axis].clone()],
                        log: vec![t.log[axis].clone()],
                    }
                })
                .collect(),
        };
        let _ = r;
        out.insert(
            m,
            TruncSeries::new(g.prime(), vec![g.trunc()[axis]], coeffs, Bound::zero(), err)?,
        );
    }
    Ok(out)
}

/// Reassemble one-variable slices along `axis` into a k-variable series whose
/// other coordinates lie in the box `other_trunc`.
fn assemble(
    p: Prime,
    parts: &BTreeMap<Index, TruncSeries>,
    axis: usize,
    other_trunc: &[u64],
    r: &[Q],
) -> Result<TruncSeries> {
    let k = other_trunc.len() + 1;
    let mut coeffs = BTreeMap::new();
    let mut ax_trunc = 1;
    let mut tail_terms: BTreeMap<(Vec<Q>, Vec<Q>), Val> = BTreeMap::new();
    let mut err_terms: BTreeMap<(Vec<Q>, Vec<Q>), Val> = BTreeMap::new();
    let lift = |m: &Index, t: &BoundTerm, acc: &mut BTreeMap<(Vec<Q>, Vec<Q>), Val>| {
        let mut weight = Vec::with_capacity(k);
        let mut log = Vec::with_capacity(k);
        let mut shift = Q::zero();
        let mut j = 0;
        for i in 0..k {
            if i == axis {
                weight.push(t.weight[0].clone());
                log.push(t.log[0].clone());
            } else {
                weight.push(r[i].clone());
                log.push(Q::zero());
                shift += &r[i] * q(m[j] as i64);
                j += 1;
            }
        }
        let fl = t.floor.plus(&shift);
        let e = acc.entry((weight, log)).or_insert(Val::PosInf);
        *e = e.clone().min(fl);
    };
    for (m, s) in parts {
        ax_trunc = ax_trunc.max(s.trunc()[0]);
        for (n, c) in s.coeffs() {
            let mut idx = m.clone();
            idx.insert(axis, n[0]);
            coeffs.insert(idx, c.clone());
        }
        for t in &s.tail().terms {
            lift(m, t, &mut tail_terms);
        }
        for t in &s.err().terms {
            lift(m, t, &mut err_terms);
        }
    }
    // Slices with a shorter box than the assembled one must be exact there.
    for s in parts.values() {
        if s.trunc()[0] < ax_trunc && !s.tail().is_zero() {
            return Err(Error::NonconvergentPrecision("slices have unequal truncation".into()));
        }
    }
    let mk = |m: BTreeMap<(Vec<Q>, Vec<Q>), Val>| Bound {
        terms: m
            .into_iter()
            .filter(|(_, f)| *f != Val::PosInf)
            .map(|((weight, log), floor)| BoundTerm { floor, weight, log })
            .collect(),
    };
    let mut trunc = other_trunc.to_vec();
    trunc.insert(axis, ax_trunc);
    TruncSeries::new(p, trunc, coeffs, mk(tail_terms), mk(err_terms))
}

/// Multi-variable division `g = Σ f_i(X_i) q_i + t` with deg_{X_i} t < s_i and
/// deg_{X_j} q_i < s_j for j > i. Divides by the last variable first.
pub fn multi_divide(g: &TruncSeries, fs: &[TruncSeries], r: &[Q]) -> Result<MultiDivisionResult> {
    multi_divide_with(g, fs, r, &DivideOpts::default())
}

/// [`multi_divide`] with explicit options.
pub fn multi_divide_with(
    g: &TruncSeries,
    fs: &[TruncSeries],
    r: &[Q],
    opts: &DivideOpts,
) -> Result<MultiDivisionResult> {
    let k = g.vars();
    if fs.len() != k || r.len() != k {
        return Err(Error::IncompatibleShapes("one divisor and one radius per variable".into()));
    }
    for f in fs {
        one_var(f)?;
    }
    if k == 1 {
        let d = divide_with(g, &fs[0], &r[0], opts)?;
        return Ok(MultiDivisionResult {
            quotients: vec![d.quotient],
            remainder: d.remainder,
            certified: d.certified,
        });
    }
    let p = g.prime();
    let mut rem = g.clone();
    let mut quotients = vec![TruncSeries::zero(p, k); k];
    for axis in (0..k).rev() {
        let parts = slices(&rem, axis, r)?;
        let mut other_trunc = rem.trunc().to_vec();
        other_trunc.remove(axis);
        let mut qs = BTreeMap::new();
        let mut ts = BTreeMap::new();
        let s = leading_index(&fs[axis], &r[axis]).map_err(|e| match e {
            Error::ZeroSeries => Error::ZeroDivisor,
            e => e,
        })?;
        // A common truncation keeps the slices assemblable.
        let common = parts
            .values()
            .map(|x| x.degree_in(0).unwrap_or(0) + 1)
            .max()
            .unwrap_or(1)
            .max(opts.trunc);
        let sub_opts = DivideOpts { trunc: common };
        for (m, slice) in &parts {
            let d = divide_with(slice, &fs[axis], &r[axis], &sub_opts)?;
            qs.insert(m.clone(), d.quotient);
            ts.insert(m.clone(), d.remainder);
        }
        let q_axis = if qs.is_empty() {
            TruncSeries::zero(p, k)
        } else {
            assemble(p, &qs, axis, &other_trunc, r)?
        };
        rem = if ts.is_empty() {
            TruncSeries::zero(p, k)
        } else {
            let mut t = assemble(p, &ts, axis, &other_trunc, r)?;
            if s == 0 {
                t = TruncSeries::zero(p, k);
            }
            t
        };
        quotients[axis] = q_axis;
    }
    let terms: Vec<(Val, ValuationReport)> = (0..k)
        .map(|i| (fs[i].vr(std::slice::from_ref(&r[i])).retained_min, quotients[i].vr(r)))
        .collect();
    let certified = identity_holds(&g.vr(r), &terms, &rem.vr(r));
    Ok(MultiDivisionResult {
        quotients,
        remainder: rem,
        certified,
    })
}

/// True iff the multi-remainder of `g` modulo the given one-variable divisors
/// is zero (membership in the ideal they generate).
pub fn divisibility_test(g: &TruncSeries, divisors: &[TruncSeries], r: &[Q]) -> Result<bool> {
    let d = multi_divide(g, divisors, r)?;
    Ok(d.remainder.coeffs().is_empty() && d.remainder.err().is_zero())
}

/// Distinguished polynomial and unit with `f = g·u`, `u(0) = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preparation {
    /// Polynomial of degree d_r(f).
    pub poly: TruncSeries,
    /// Unit of B_r with constant term 1.
    pub unit: TruncSeries,
    /// Leading index d_r(f).
    pub degree: u64,
}

/// Weierstrass preparation: divide X^s by f, then invert the quotient.
pub fn prepare(f: &TruncSeries, r: &Q) -> Result<Preparation> {
    prepare_with(f, r, &DivideOpts::default())
}

/// [`prepare`] with explicit options.
pub fn prepare_with(f: &TruncSeries, r: &Q, opts: &DivideOpts) -> Result<Preparation> {
    one_var(f)?;
    let p = f.prime();
    let s = leading_index(f, r)?;
    let xs = TruncSeries::polynomial(p, 1, [(vec![s], Q::one())]);
    let d = divide_with(&xs, f, r, opts)?;
    let q0 = d.quotient.coeff(&[0]);
    if q0.is_zero() {
        return Err(Error::NonconvergentPrecision("quotient has vanishing constant term".into()));
    }
    // g = q0^{-1}(X^s − l)
    let poly = xs.sub(&d.remainder)?.scale(&q0.recip());
    // u = q0 · q^{-1}
    let one = TruncSeries::constant(p, 1, Q::one());
    let inv = divide_with(&one, &d.quotient, r, opts)?;
    let unit = inv.quotient.scale(&q0);
    Ok(Preparation {
        poly,
        unit,
        degree: s,
    })
}

/// Truncated p-adic logarithm log(1+X) = Σ (−1)^{k−1} X^k / k for k < trunc,
/// with the tail bound ord(1/k) + ℓ(k) ≥ 1.
pub fn padic_log(trunc: u64, p: Prime) -> TruncSeries {
    let coeffs: BTreeMap<Index, Q> = (1..trunc)
        .map(|k| {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            (vec![k], Q::new(sign.into(), (k as i64).into()))
        })
        .collect();
    let tail = Bound::single(BoundTerm {
        floor: Val::int(1),
        weight: vec![Q::zero()],
        log: vec![Q::one()],
    });
    TruncSeries::new(p, vec![trunc.max(1)], coeffs, tail, Bound::zero())
        .expect("log coefficients lie in the box")
}

/// Newton data of a one-variable series on a certified interval.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NewtonData {
    /// Lower end (exclusive) of the certified interval.
    pub t_min: Q,
    /// Upper end (inclusive).
    pub t_max: Q,
    /// Break points in (t_min, t_max], ascending.
    pub break_points: Vec<Q>,
    /// n_f on consecutive intervals: before the first break, then from each break on.
    pub segment_degrees: Vec<u64>,
    /// m_f at each break point.
    pub segment_values: Vec<Q>,
    hull: Vec<(u64, Q)>,
}

impl NewtonData {
    /// m_f(t) for t in the certified interval.
    pub fn value_at(&self, t: &Q) -> Q {
        self.hull
            .iter()
            .map(|(n, o)| o + t * q(*n as i64))
            .min()
            .expect("nonempty hull")
    }
    /// n_f(t) = d_t(f) for t in the certified interval.
    pub fn degree_at(&self, t: &Q) -> u64 {
        let m = self.value_at(t);
        self.hull
            .iter()
            .filter(|(n, o)| o + t * q(*n as i64) == m)
            .map(|(n, _)| *n)
            .min()
            .expect("nonempty hull")
    }
}

fn lower_hull(pts: &[(u64, Q)]) -> Vec<(u64, Q)> {
    let mut h: Vec<(u64, Q)> = Vec::new();
    for pt in pts {
        while h.len() >= 2 {
            let (x1, y1) = &h[h.len() - 2];
            let (x2, y2) = &h[h.len() - 1];
            // Remove the middle point if it lies on or above the chord.
            let lhs = (y2 - y1) * q((pt.0 - x1) as i64);
            let rhs = (&pt.1 - y1) * q((x2 - x1) as i64);
            if lhs >= rhs {
                h.pop();
            } else {
                break;
            }
        }
        h.push(pt.clone());
    }
    h
}

/// Candidate lines t ↦ c + a·t for one bound clause over a region (None if the
/// clause is unbounded somewhere in (t_min, ∞)).
fn clause_lines(t: &BoundTerm, region: &Region, t_min: &Q, p: Prime) -> Option<Vec<(Q, Q)>> {
    let Val::Fin(floor) = &t.floor else {
        return None;
    };
    let w = &t.weight[0];
    let lam = &t.log[0];
    let line = |n: u64| -> (Q, Q) {
        // value = floor + (t − w) n − λ ℓ(n) = [floor − w n − λ ℓ(n)] + n t
        (floor - w * q(n as i64) - lam * q(ell(n, p) as i64), q(n as i64))
    };
    match region {
        Region::Inside(tr) => {
            let tr = tr[0];
            let mut ns = vec![];
            if tr > 0 {
                ns.push(0);
            }
            let mut start = 1u64;
            while start < tr {
                let end = (start.saturating_mul(p.get()) - 1).min(tr - 1);
                ns.push(start);
                ns.push(end);
                start = start.saturating_mul(p.get());
            }
            Some(ns.into_iter().map(line).collect())
        }
        Region::Outside(tr) => {
            let tr = tr[0];
            let a0 = t_min - w;
            if !a0.is_positive() {
                if lam.is_positive() {
                    return None;
                }
                if a0.is_negative() {
                    return None;
                }
            }
            let mut lines = vec![line(tr)];
            if lam.is_positive() {
                let l0 = ell(tr, p);
                let mut j = l0 + 1;
                loop {
                    let n = match p.get().checked_pow((j - 1) as u32) {
                        Some(n) => n,
                        None => break,
                    };
                    let lhs = &a0 * q((n - tr) as i64);
                    let rhs = lam * q((j - l0) as i64);
                    if lhs > rhs {
                        break;
                    }
                    lines.push(line(n));
                    j += 1;
                }
            }
            Some(lines)
        }
    }
}

/// Newton data of `f` on (t_min, t_max]. Raises `InsufficientTruncation`
/// unless the retained coefficients provably determine m_f there.
pub fn newton(f: &TruncSeries, t_min: &Q, t_max: &Q) -> Result<NewtonData> {
    one_var(f)?;
    if f.coeffs().is_empty() {
        return Err(Error::ZeroSeries);
    }
    if t_min >= t_max {
        return Err(Error::Invalid("empty interval".into()));
    }
    let p = f.prime();
    let pts: Vec<(u64, Q)> = f
        .coeffs()
        .iter()
        .map(|(n, c)| (n[0], q(ordp_i64(c, p))))
        .collect();
    let hull = lower_hull(&pts);
    let m_at = |t: &Q| -> Q {
        hull.iter()
            .map(|(n, o)| o + t * q(*n as i64))
            .min()
            .unwrap()
    };
    let mut hull_breaks: Vec<Q> = hull
        .windows(2)
        .map(|w| (&w[0].1 - &w[1].1) / q((w[1].0 - w[0].0) as i64))
        .collect();
    hull_breaks.sort();
    hull_breaks.dedup();

    // Certification at all kinks of the retained and uncertified parts.
    let tail_region = Region::Outside(f.trunc().to_vec());
    let err_region = Region::Inside(f.trunc().to_vec());
    let mut kinks: Vec<Q> = vec![t_min.clone(), t_max.clone()];
    kinks.extend(hull_breaks.iter().filter(|b| *b > t_min && *b <= t_max).cloned());
    for (bound, region) in [(f.tail(), &tail_region), (f.err(), &err_region)] {
        let mut lines = vec![];
        for t in &bound.terms {
            match clause_lines(t, region, t_min, p) {
                Some(l) => lines.extend(l),
                None => {
                    return Err(Error::InsufficientTruncation(format!(
                        "bound clause unbounded on ({t_min}, {t_max}]"
                    )))
                }
            }
        }
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                let (c1, a1) = &lines[i];
                let (c2, a2) = &lines[j];
                if a1 != a2 {
                    let x = (c2 - c1) / (a1 - a2);
                    if &x > t_min && &x < t_max {
                        kinks.push(x);
                    }
                }
            }
        }
        // Crossings of clause lines with hull lines are also kinks of the difference.
        for (c, a) in &lines {
            for (n, o) in &hull {
                let an = q(*n as i64);
                if *a != an {
                    let x = (o - c) / (a - &an);
                    if &x > t_min && &x < t_max {
                        kinks.push(x);
                    }
                }
            }
        }
    }
    kinks.sort();
    kinks.dedup();
    let wt = |t: &Q| [Weight::Fin(t.clone())];
    let h0 = [Q::zero()];
    for t in &kinks {
        let m = Val::Fin(m_at(t));
        let tail = f.tail().min_over(&tail_region, &wt(t), &h0, p);
        let err = f.err().min_over(&err_region, &wt(t), &h0, p);
        if tail < m || err <= m {
            return Err(Error::InsufficientTruncation(format!(
                "retained coefficients do not determine the valuation at t = {t}"
            )));
        }
    }

    let break_points: Vec<Q> = hull_breaks
        .into_iter()
        .filter(|b| b > t_min && b <= t_max)
        .collect();
    let data = NewtonData {
        t_min: t_min.clone(),
        t_max: t_max.clone(),
        break_points: break_points.clone(),
        segment_degrees: vec![],
        segment_values: vec![],
        hull,
    };
    // n_f just above t_min, then at each break.
    let first = match break_points.first() {
        Some(b) => (t_min + b) / q(2),
        None => (t_min + t_max) / q(2),
    };
    let mut degrees = vec![data.degree_at(&first)];
    let mut values = vec![];
    for b in &break_points {
        degrees.push(data.degree_at(b));
        values.push(data.value_at(b));
    }
    Ok(NewtonData {
        segment_degrees: degrees,
        segment_values: values,
        ..data
    })
}

/// Order of a rational coefficient, exposed for reports.
pub fn coeff_order(c: &Q, p: Prime) -> Val {
    ordp_rational(c, p)
}
