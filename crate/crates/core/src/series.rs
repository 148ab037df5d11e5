//! Truncated multi-variable power series with certified bounds on the
//! discarded part, and the weighted valuations v_r and v_H.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{
    binom, fmt_q, ordp_cyclo, ordp_i64, ordp_rational, parse_q, q, CycloScalar, Prime, Val, Q,
};

/// Multi-index of a coefficient.
pub type Index = Vec<u64>;

/// The smallest n ≥ 0 with p^n > i.
pub fn ell(i: u64, p: Prime) -> u64 {
    let mut n = 0;
    let mut pw: u128 = 1;
    while pw <= i as u128 {
        pw *= p.get() as u128;
        n += 1;
    }
    n
}

/// One clause of a coefficient bound: every covered coefficient c_n satisfies
/// `ord_p(c_n) + ⟨weight, n⟩ + ⟨log, ℓ(n)⟩ ≥ floor`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundTerm {
    /// Lower bound; `NegInf` carries no information.
    pub floor: Val,
    /// Linear weight on the index.
    pub weight: Vec<Q>,
    /// Weight on ℓ of each index coordinate.
    pub log: Vec<Q>,
}

impl BoundTerm {
    /// Scalar floor with zero weights.
    pub fn flat(k: usize, floor: Val) -> BoundTerm {
        BoundTerm {
            floor,
            weight: vec![Q::zero(); k],
            log: vec![Q::zero(); k],
        }
    }
    /// Floor at weight `r`.
    pub fn weighted(floor: Val, r: &[Q]) -> BoundTerm {
        BoundTerm {
            floor,
            weight: r.to_vec(),
            log: vec![Q::zero(); r.len()],
        }
    }
}

/// Bound on a set of coefficients: each coefficient satisfies at least one
/// clause's inequality (the minimum of the clauses). No clauses means the
/// covered coefficients are exactly zero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Bound {
    /// Clauses.
    pub terms: Vec<BoundTerm>,
}

impl Bound {
    /// Covered coefficients are exactly zero.
    pub fn zero() -> Bound {
        Bound { terms: vec![] }
    }
    /// Single clause.
    pub fn single(t: BoundTerm) -> Bound {
        if t.floor == Val::PosInf {
            Bound::zero()
        } else {
            Bound { terms: vec![t] }
        }
    }
    /// True when the covered coefficients are known to vanish.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    /// Union of clauses (bound for a sum).
    pub fn union(&self, o: &Bound) -> Bound {
        let mut terms = self.terms.clone();
        for t in &o.terms {
            if !terms.contains(t) {
                terms.push(t.clone());
            }
        }
        Bound { terms }
    }
    /// Shift every floor by `c` (scalar multiplication by an element of order `c`).
    pub fn shifted(&self, c: &Val) -> Bound {
        if *c == Val::PosInf {
            return Bound::zero();
        }
        Bound {
            terms: self
                .terms
                .iter()
                .map(|t| BoundTerm {
                    floor: t.floor.add(c),
                    ..t.clone()
                })
                .collect(),
        }
    }
    /// Lower bound of `ord(c_n) + ⟨r,n⟩ + ⟨h,ℓ(n)⟩` over the region.
    pub fn min_over(&self, region: &Region, r: &[Weight], h: &[Q], p: Prime) -> Val {
        self.terms
            .iter()
            .map(|t| term_min(t, region, r, h, p))
            .min()
            .unwrap_or(Val::PosInf)
    }
}

/// Weight of an index coordinate: finite, or infinite (only n = 0 contributes).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Weight {
    /// Ordinary rational weight.
    Fin(Q),
    /// Infinite weight, used for evaluation at 0.
    Inf,
}

impl Weight {
    fn from_q(r: &[Q]) -> Vec<Weight> {
        r.iter().map(|x| Weight::Fin(x.clone())).collect()
    }
}

/// Index region relative to a truncation box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Region {
    /// Indices with every n_i < T_i.
    Inside(Vec<u64>),
    /// Indices with some n_i ≥ T_i.
    Outside(Vec<u64>),
}

fn term_min(t: &BoundTerm, region: &Region, r: &[Weight], h: &[Q], p: Prime) -> Val {
    if t.floor == Val::NegInf {
        return Val::NegInf;
    }
    let k = t.weight.len();
    let coef = |i: usize| -> (Option<Q>, Q) {
        let a = match &r[i] {
            Weight::Fin(x) => Some(x - &t.weight[i]),
            Weight::Inf => None,
        };
        (a, &h[i] - &t.log[i])
    };
    // The clause is ord ≥ floor − w·n − λ·ℓ(n), so the weighted value is
    // floor + Σ (r_i − w_i) n_i + (h_i − λ_i) ℓ(n_i).
    let total = match region {
        Region::Inside(tr) => {
            let mut acc = Val::int(0);
            for i in 0..k {
                let (a, b) = coef(i);
                acc = acc.add(&coord_min(a.as_ref(), &b, 0, Some(tr[i]), p));
            }
            acc
        }
        Region::Outside(tr) => {
            let full: Vec<Val> = (0..k)
                .map(|i| {
                    let (a, b) = coef(i);
                    coord_min(a.as_ref(), &b, 0, None, p)
                })
                .collect();
            let mut best = Val::PosInf;
            for i in 0..k {
                let (a, b) = coef(i);
                let mut acc = coord_min(a.as_ref(), &b, tr[i], None, p);
                for (j, f) in full.iter().enumerate() {
                    if j != i {
                        acc = acc.add(f);
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

/// Minimum of `a·n + b·ℓ(n)` over integers `lo ≤ n < hi` (`hi = None` for ∞).
/// `a = None` is an infinite weight: only n = 0 contributes.
pub fn coord_min(a: Option<&Q>, b: &Q, lo: u64, hi: Option<u64>, p: Prime) -> Val {
    if let Some(h) = hi {
        if lo >= h {
            return Val::PosInf;
        }
    }
    let Some(a) = a else {
        return if lo == 0 { Val::int(0) } else { Val::PosInf };
    };
    let pz = BigInt::from(p.get());
    let at = |n: &BigInt, j: u64| -> Q { a * Q::from_integer(n.clone()) + b * q(j as i64) };
    // Blocks: {0} with ℓ = 0, then [p^{j−1}, p^j − 1] with ℓ = j.
    let lo_z = BigInt::from(lo);
    let mut best: Option<Q> = None;
    let push = |v: Q, best: &mut Option<Q>| {
        if best.as_ref().map_or(true, |b| v < *b) {
            *best = Some(v);
        }
    };
    match hi {
        Some(h) => {
            let h_z = BigInt::from(h);
            if lo == 0 {
                push(Q::zero(), &mut best);
            }
            let mut j = 1u64;
            let mut start = BigInt::one();
            loop {
                let end: BigInt = &start * &pz - 1; // inclusive block end
                if start >= h_z {
                    break;
                }
                let s = std::cmp::max(start.clone(), lo_z.clone());
                let e = std::cmp::min(end.clone(), &h_z - 1);
                if s <= e {
                    let n = if a.is_negative() { e } else { s };
                    push(at(&n, j), &mut best);
                }
                start = end + 1;
                j += 1;
            }
            best.map_or(Val::PosInf, Val::Fin)
        }
        None => {
            if a.is_negative() || (a.is_zero() && b.is_negative()) {
                return Val::NegInf;
            }
            let j0 = ell(lo, p);
            if !b.is_negative() {
                return Val::Fin(at(&lo_z, j0));
            }
            // a > 0, b < 0: the value at lo, then block starts p^{j-1} above lo.
            // Successive block-start differences a·p^{j-1}(p-1) + b increase in j.
            push(at(&lo_z, j0), &mut best);
            let pm1 = Q::from_integer(&pz - 1);
            let mut j = j0 + 1;
            loop {
                let start = num_traits::pow(pz.clone(), (j - 1) as usize);
                push(at(&start, j), &mut best);
                let inc = a * Q::from_integer(start) * &pm1 + b;
                if !inc.is_negative() {
                    break;
                }
                j += 1;
            }
            best.map_or(Val::PosInf, Val::Fin)
        }
    }
}

/// Certified valuation of a truncated series.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValuationReport {
    /// Minimum over retained coefficients.
    pub retained_min: Val,
    /// Lower bound over everything not retained exactly.
    pub tail_bound: Val,
    /// True when the true value equals `retained_min`.
    pub exact: bool,
}

impl ValuationReport {
    /// Certified lower bound on the true value.
    pub fn lower(&self) -> Val {
        if self.exact {
            self.retained_min.clone()
        } else {
            self.retained_min.clone().min(self.tail_bound.clone())
        }
    }
    /// The exact value, if certified.
    pub fn value(&self) -> Option<&Val> {
        self.exact.then_some(&self.retained_min)
    }
}

/// Truncated power series in `k` variables with rational coefficients.
///
/// Coefficients with every `n_i < trunc_i` are stored (zeros omitted). `tail`
/// bounds the true coefficients outside that box and `err` bounds the
/// difference between true and stored coefficients inside it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncSeries {
    p: Prime,
    trunc: Vec<u64>,
    coeffs: BTreeMap<Index, Q>,
    tail: Bound,
    err: Bound,
}

fn in_box(n: &[u64], t: &[u64]) -> bool {
    n.iter().zip(t).all(|(a, b)| a < b)
}

impl TruncSeries {
    /// General constructor; coefficients outside the box are rejected.
    pub fn new(
        p: Prime,
        trunc: Vec<u64>,
        coeffs: BTreeMap<Index, Q>,
        tail: Bound,
        err: Bound,
    ) -> Result<TruncSeries> {
        let k = trunc.len();
        if k == 0 {
            return Err(Error::Invalid("series needs at least one variable".into()));
        }
        for n in coeffs.keys() {
            if n.len() != k || !in_box(n, &trunc) {
                return Err(Error::Invalid(format!("index {n:?} outside truncation")));
            }
        }
        for t in tail.terms.iter().chain(&err.terms) {
            if t.weight.len() != k || t.log.len() != k {
                return Err(Error::IncompatibleShapes("bound arity".into()));
            }
        }
        let coeffs = coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(TruncSeries {
            p,
            trunc,
            coeffs,
            tail,
            err,
        })
    }
    /// Exact polynomial from (index, coefficient) pairs; the box is the tightest one.
    pub fn polynomial(p: Prime, k: usize, terms: impl IntoIterator<Item = (Index, Q)>) -> TruncSeries {
        let mut coeffs = BTreeMap::new();
        let mut trunc = vec![1u64; k];
        for (n, c) in terms {
            assert_eq!(n.len(), k);
            if c.is_zero() {
                continue;
            }
            for i in 0..k {
                trunc[i] = trunc[i].max(n[i] + 1);
            }
            *coeffs.entry(n).or_insert_with(Q::zero) += c;
        }
        coeffs.retain(|_, c: &mut Q| !c.is_zero());
        TruncSeries {
            p,
            trunc,
            coeffs,
            tail: Bound::zero(),
            err: Bound::zero(),
        }
    }
    /// Exact one-variable polynomial from dense coefficients.
    pub fn poly1(p: Prime, c: &[Q]) -> TruncSeries {
        Self::polynomial(p, 1, c.iter().enumerate().map(|(i, x)| (vec![i as u64], x.clone())))
    }
    /// Exact one-variable polynomial from integer coefficients.
    pub fn poly1_int(p: Prime, c: &[i64]) -> TruncSeries {
        Self::poly1(p, &c.iter().map(|&x| q(x)).collect::<Vec<_>>())
    }
    /// One-variable truncated series with a tail bound.
    pub fn series1(p: Prime, c: &[Q], trunc: u64, tail: Bound) -> Result<TruncSeries> {
        let coeffs = c
            .iter()
            .enumerate()
            .map(|(i, x)| (vec![i as u64], x.clone()))
            .collect();
        Self::new(p, vec![trunc], coeffs, tail, Bound::zero())
    }
    /// The constant series.
    pub fn constant(p: Prime, k: usize, c: Q) -> TruncSeries {
        Self::polynomial(p, k, [(vec![0; k], c)])
    }
    /// The zero series.
    pub fn zero(p: Prime, k: usize) -> TruncSeries {
        Self::polynomial(p, k, [])
    }
    /// The variable X_i.
    pub fn var(p: Prime, k: usize, i: usize) -> TruncSeries {
        let mut n = vec![0; k];
        n[i] = 1;
        Self::polynomial(p, k, [(n, Q::one())])
    }

    /// Prime of the valuation.
    pub fn prime(&self) -> Prime {
        self.p
    }
    /// Number of variables.
    pub fn vars(&self) -> usize {
        self.trunc.len()
    }
    /// Truncation box.
    pub fn trunc(&self) -> &[u64] {
        &self.trunc
    }
    /// Stored nonzero coefficients.
    pub fn coeffs(&self) -> &BTreeMap<Index, Q> {
        &self.coeffs
    }
    /// Stored coefficient at `n` (zero if absent).
    pub fn coeff(&self, n: &[u64]) -> Q {
        self.coeffs.get(n).cloned().unwrap_or_else(Q::zero)
    }
    /// Bound outside the box.
    pub fn tail(&self) -> &Bound {
        &self.tail
    }
    /// Bound on errors of stored coefficients.
    pub fn err(&self) -> &Bound {
        &self.err
    }
    /// True when the series is an exactly known polynomial.
    pub fn is_exact(&self) -> bool {
        self.tail.is_zero() && self.err.is_zero()
    }
    /// True when every stored coefficient is zero and nothing is unknown.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.is_exact()
    }
    /// Dense coefficients of a one-variable series, length `trunc`.
    pub fn dense1(&self) -> Vec<Q> {
        assert_eq!(self.vars(), 1);
        let mut v = vec![Q::zero(); self.trunc[0] as usize];
        for (n, c) in &self.coeffs {
            v[n[0] as usize] = c.clone();
        }
        v
    }
    /// Highest stored exponent in variable `i` (None if no coefficients).
    pub fn degree_in(&self, i: usize) -> Option<u64> {
        self.coeffs.keys().map(|n| n[i]).max()
    }
    /// The stored coefficients as an exact polynomial.
    pub fn retained_poly(&self) -> TruncSeries {
        TruncSeries::polynomial(self.p, self.vars(), self.coeffs.clone())
    }
    /// Replace the tail and error bounds.
    pub fn with_bounds(mut self, tail: Bound, err: Bound) -> TruncSeries {
        self.tail = tail;
        self.err = err;
        self
    }

    fn check_shape(&self, o: &TruncSeries) -> Result<()> {
        if self.vars() != o.vars() {
            return Err(Error::IncompatibleShapes(format!(
                "{} vs {} variables",
                self.vars(),
                o.vars()
            )));
        }
        if self.p != o.p {
            return Err(Error::IncompatibleShapes("different primes".into()));
        }
        Ok(())
    }

    /// Report for `ord(c_n) + ⟨r,n⟩ + ⟨h,ℓ(n)⟩` with general weights.
    pub fn report_weighted(&self, r: &[Weight], h: &[Q]) -> ValuationReport {
        let p = self.p;
        let mut retained = Val::PosInf;
        for (n, c) in &self.coeffs {
            let mut v = q(ordp_i64(c, p));
            let mut skip = false;
            for i in 0..n.len() {
                match &r[i] {
                    Weight::Fin(x) => v += x * q(n[i] as i64),
                    Weight::Inf => {
                        if n[i] > 0 {
                            skip = true;
                        }
                    }
                }
                v += &h[i] * q(ell(n[i], p) as i64);
            }
            if !skip {
                retained = retained.min(Val::Fin(v));
            }
        }
        let tail = self
            .tail
            .min_over(&Region::Outside(self.trunc.clone()), r, h, p);
        let err = self
            .err
            .min_over(&Region::Inside(self.trunc.clone()), r, h, p);
        let exact = retained <= tail && retained < err || (retained == Val::PosInf && tail == Val::PosInf && err == Val::PosInf);
        ValuationReport {
            retained_min: retained,
            tail_bound: tail.min(err),
            exact,
        }
    }

    /// v_r with weight vector `r`.
    pub fn vr(&self, r: &[Q]) -> ValuationReport {
        let k = self.vars();
        assert_eq!(r.len(), k, "weight arity");
        self.report_weighted(&Weight::from_q(r), &vec![Q::zero(); k])
    }

    /// v_H with growth vector `h`: inf of ord(c_n) + ⟨h, ℓ(n)⟩.
    pub fn vh(&self, h: &[Q]) -> ValuationReport {
        let k = self.vars();
        assert_eq!(h.len(), k, "growth arity");
        self.report_weighted(&Weight::from_q(&vec![Q::zero(); k]), h)
    }

    /// Certified lower bound on v_r.
    pub fn vr_lower(&self, r: &[Q]) -> Val {
        self.vr(r).lower()
    }

    /// Componentwise sum.
    pub fn add(&self, o: &TruncSeries) -> Result<TruncSeries> {
        self.check_shape(o)?;
        let k = self.vars();
        let eff = |s: &TruncSeries, i: usize| -> Option<u64> {
            if s.tail.is_zero() {
                None
            } else {
                Some(s.trunc[i])
            }
        };
        let mut trunc = Vec::with_capacity(k);
        for i in 0..k {
            trunc.push(match (eff(self, i), eff(o, i)) {
                (None, None) => self.trunc[i].max(o.trunc[i]),
                (Some(a), None) => a,
                (None, Some(b)) => b,
                (Some(a), Some(b)) => a.min(b),
            });
        }
        // Stored coefficients beyond the new box move into the tail at weight 0.
        let mut coeffs: BTreeMap<Index, Q> = BTreeMap::new();
        let mut dropped = Val::PosInf;
        for s in [self, o] {
            for (n, c) in &s.coeffs {
                if in_box(n, &trunc) {
                    *coeffs.entry(n.clone()).or_insert_with(Q::zero) += c;
                } else {
                    dropped = dropped.min(ordp_rational(c, self.p));
                }
            }
        }
        let mut tail = self.tail.union(&o.tail);
        if dropped != Val::PosInf {
            tail = tail.union(&Bound::single(BoundTerm::flat(k, dropped)));
        }
        TruncSeries::new(self.p, trunc, coeffs, tail, self.err.union(&o.err))
    }

    /// Negation.
    pub fn neg(&self) -> TruncSeries {
        let mut out = self.clone();
        for c in out.coeffs.values_mut() {
            *c = -c.clone();
        }
        out
    }

    /// Difference.
    pub fn sub(&self, o: &TruncSeries) -> Result<TruncSeries> {
        self.add(&o.neg())
    }

    /// Multiplication by a rational scalar.
    pub fn scale(&self, c: &Q) -> TruncSeries {
        if c.is_zero() {
            return TruncSeries {
                coeffs: BTreeMap::new(),
                tail: Bound::zero(),
                err: Bound::zero(),
                ..self.clone()
            };
        }
        let v = ordp_rational(c, self.p);
        TruncSeries {
            p: self.p,
            trunc: self.trunc.clone(),
            coeffs: self.coeffs.iter().map(|(n, x)| (n.clone(), x * c)).collect(),
            tail: self.tail.shifted(&v),
            err: self.err.shifted(&v),
        }
    }

    /// Multiplication by X^e (monomial shift of indices).
    pub fn mul_monomial(&self, e: &[u64]) -> TruncSeries {
        let k = self.vars();
        let trunc = (0..k).map(|i| self.trunc[i] + e[i]).collect();
        let coeffs = self
            .coeffs
            .iter()
            .map(|(n, c)| ((0..k).map(|i| n[i] + e[i]).collect(), c.clone()))
            .collect();
        // Index shift changes weighted bounds by ⟨w, e⟩; ℓ terms are only
        // monotone, so log-weighted clauses are weakened to their floors.
        let shift_bound = |b: &Bound| Bound {
            terms: b
                .terms
                .iter()
                .map(|t| {
                    let we: Q = (0..k).map(|i| &t.weight[i] * q(e[i] as i64)).sum();
                    let floor = if t.log.iter().all(|l| !l.is_negative()) {
                        t.floor.plus(&we)
                    } else if e.iter().all(|&x| x == 0) {
                        t.floor.clone()
                    } else {
                        Val::NegInf
                    };
                    BoundTerm { floor, ..t.clone() }
                })
                .collect(),
        };
        let tail = shift_bound(&self.tail);
        TruncSeries {
            p: self.p,
            trunc,
            coeffs,
            tail,
            err: shift_bound(&self.err),
        }
    }

    /// Cauchy product. Bounds on the result are certified at weight `r`.
    pub fn mul(&self, o: &TruncSeries, r: &[Q]) -> Result<TruncSeries> {
        self.check_shape(o)?;
        let k = self.vars();
        if self.is_zero() || o.is_zero() {
            return Ok(TruncSeries::zero(self.p, k));
        }
        let trunc: Vec<u64> = (0..k)
            .map(|i| match (self.tail.is_zero(), o.tail.is_zero()) {
                (true, true) => self.trunc[i] + o.trunc[i] - 1,
                (false, true) => self.trunc[i],
                (true, false) => o.trunc[i],
                (false, false) => self.trunc[i].min(o.trunc[i]),
            })
            .collect();
        let mut coeffs: BTreeMap<Index, Q> = BTreeMap::new();
        for (a, x) in &self.coeffs {
            for (b, y) in &o.coeffs {
                let n: Index = (0..k).map(|i| a[i] + b[i]).collect();
                if in_box(&n, &trunc) {
                    *coeffs.entry(n).or_insert_with(Q::zero) += x * y;
                }
            }
        }
        let w = Weight::from_q(r);
        let h = vec![Q::zero(); k];
        let parts = |s: &TruncSeries| {
            let rep = s.report_weighted(&w, &h);
            let err = s.err.min_over(&Region::Inside(s.trunc.clone()), &w, &h, s.p);
            let tail = s.tail.min_over(&Region::Outside(s.trunc.clone()), &w, &h, s.p);
            (rep.retained_min, err, tail)
        };
        let (rf, ef, tf) = parts(self);
        let (rg, eg, tg) = parts(o);
        let err_floor = rf.add(&eg).min(ef.add(&rg)).min(ef.add(&eg));
        let err = Bound::single(BoundTerm::weighted(err_floor, r));
        let lower_f = rf.min(ef).min(tf);
        let lower_g = rg.min(eg).min(tg);
        let tail = if self.tail.is_zero() && o.tail.is_zero() {
            Bound::zero()
        } else {
            Bound::single(BoundTerm::weighted(lower_f.add(&lower_g), r))
        };
        TruncSeries::new(self.p, trunc, coeffs, tail, err)
    }

    /// Substitution X ↦ X + a (coordinatewise). Requires ord_p(a_i) > r_i.
    pub fn shift(&self, a: &[Q], r: &[Q]) -> Result<TruncSeries> {
        let k = self.vars();
        if a.len() != k || r.len() != k {
            return Err(Error::IncompatibleShapes("shift arity".into()));
        }
        for i in 0..k {
            if ordp_rational(&a[i], self.p) <= Val::Fin(r[i].clone()) {
                return Err(Error::ShiftOutOfDisk);
            }
        }
        let mut coeffs: BTreeMap<Index, Q> = BTreeMap::new();
        for (l, m) in &self.coeffs {
            // Expand ∏ (X_i + a_i)^{l_i}.
            let mut terms: Vec<(Index, Q)> = vec![(vec![], m.clone())];
            for i in 0..k {
                let mut next = Vec::new();
                for (idx, c) in &terms {
                    for n in 0..=l[i] {
                        let f = binom(l[i] as i64, n as i64)
                            * crate::padic::qpow(&a[i], (l[i] - n) as i64);
                        if f.is_zero() {
                            continue;
                        }
                        let mut idx2 = idx.clone();
                        idx2.push(n);
                        next.push((idx2, c * f));
                    }
                }
                terms = next;
            }
            for (n, c) in terms {
                *coeffs.entry(n).or_insert_with(Q::zero) += c;
            }
        }
        if self.is_exact() {
            return TruncSeries::new(self.p, self.trunc.clone(), coeffs, Bound::zero(), Bound::zero());
        }
        // Unknown input coefficients feed every output coefficient; at weight r
        // their contribution is bounded by the input's uncertified part.
        let w = Weight::from_q(r);
        let h = vec![Q::zero(); k];
        let unk = self
            .tail
            .min_over(&Region::Outside(self.trunc.clone()), &w, &h, self.p)
            .min(self.err.min_over(&Region::Inside(self.trunc.clone()), &w, &h, self.p));
        let lower = self.vr(r).lower();
        TruncSeries::new(
            self.p,
            self.trunc.clone(),
            coeffs,
            Bound::single(BoundTerm::weighted(lower, r)),
            Bound::single(BoundTerm::weighted(unk, r)),
        )
    }

    /// Evaluation at a rational point with ord_p(b_i) > r_i. Returns the partial
    /// sum and a lower bound on the order of the omitted remainder.
    pub fn eval(&self, b: &[Q], r: &[Q]) -> Result<(Q, Val)> {
        let k = self.vars();
        if b.len() != k || r.len() != k {
            return Err(Error::IncompatibleShapes("eval arity".into()));
        }
        let mut w = Vec::with_capacity(k);
        for i in 0..k {
            let o = ordp_rational(&b[i], self.p);
            if o <= Val::Fin(r[i].clone()) {
                return Err(Error::EvalOutOfDisk);
            }
            w.push(match o {
                Val::Fin(x) => Weight::Fin(x),
                _ => Weight::Inf,
            });
        }
        let mut sum = Q::zero();
        for (n, c) in &self.coeffs {
            let mut t = c.clone();
            for i in 0..k {
                t *= crate::padic::qpow(&b[i], n[i] as i64);
            }
            sum += t;
        }
        Ok((sum, self.remainder_bound(&w)))
    }

    /// Evaluation at cyclotomic points with ord_p(b_i) > r_i.
    pub fn eval_cyclo(&self, b: &[CycloScalar], r: &[Q]) -> Result<(CycloScalar, Val)> {
        let k = self.vars();
        if b.len() != k || r.len() != k {
            return Err(Error::IncompatibleShapes("eval arity".into()));
        }
        let mut w = Vec::with_capacity(k);
        for i in 0..k {
            let o = ordp_cyclo(&b[i], self.p)?;
            if o <= Val::Fin(r[i].clone()) {
                return Err(Error::EvalOutOfDisk);
            }
            w.push(match o {
                Val::Fin(x) => Weight::Fin(x),
                _ => Weight::Inf,
            });
        }
        let mut pows: Vec<Vec<CycloScalar>> = Vec::with_capacity(k);
        for i in 0..k {
            let d = self.degree_in(i).unwrap_or(0) as usize;
            let mut v = vec![CycloScalar::one()];
            for j in 1..=d {
                let nx = v[j - 1].mul(&b[i]);
                v.push(nx);
            }
            pows.push(v);
        }
        let mut sum = CycloScalar::zero();
        for (n, c) in &self.coeffs {
            let mut t = CycloScalar::from_q(c.clone());
            for i in 0..k {
                t = t.mul(&pows[i][n[i] as usize]);
            }
            sum = sum.add(&t);
        }
        Ok((sum, self.remainder_bound(&w)))
    }

    fn remainder_bound(&self, w: &[Weight]) -> Val {
        let h = vec![Q::zero(); self.vars()];
        self.tail
            .min_over(&Region::Outside(self.trunc.clone()), w, &h, self.p)
            .min(self.err.min_over(&Region::Inside(self.trunc.clone()), w, &h, self.p))
    }

    /// Drop stored coefficients outside a smaller box, recording them in the
    /// tail at weight `r`.
    pub fn truncate(&self, trunc: &[u64], r: &[Q]) -> TruncSeries {
        let k = self.vars();
        let trunc: Vec<u64> = (0..k).map(|i| trunc[i].min(self.trunc[i])).collect();
        let mut kept = BTreeMap::new();
        let mut dropped = Val::PosInf;
        for (n, c) in &self.coeffs {
            if in_box(n, &trunc) {
                kept.insert(n.clone(), c.clone());
            } else {
                let wn: Q = (0..k).map(|i| &r[i] * q(n[i] as i64)).sum();
                dropped = dropped.min(ordp_rational(c, self.p).plus(&wn));
            }
        }
        let mut tail = self.tail.clone();
        if dropped != Val::PosInf {
            tail = tail.union(&Bound::single(BoundTerm::weighted(dropped, r)));
        }
        TruncSeries {
            p: self.p,
            trunc,
            coeffs: kept,
            tail,
            err: self.err.clone(),
        }
    }

    /// View as a one-variable series in the last variable with coefficients in
    /// the series ring of the remaining variables.
    pub fn nest(&self) -> Result<NestedSeries> {
        let k = self.vars();
        if k < 2 {
            return Err(Error::Invalid("nest needs at least two variables".into()));
        }
        let tk = self.trunc[k - 1];
        let inner_trunc = self.trunc[..k - 1].to_vec();
        let restrict = |b: &Bound, nk: u64| -> Bound {
            // Fixing n_k moves its weighted part into the floor.
            Bound {
                terms: b
                    .terms
                    .iter()
                    .map(|t| BoundTerm {
                        floor: t
                            .floor
                            .plus(&-(&t.weight[k - 1] * q(nk as i64) + &t.log[k - 1] * q(ell(nk, self.p) as i64))),
                        weight: t.weight[..k - 1].to_vec(),
                        log: t.log[..k - 1].to_vec(),
                    })
                    .collect(),
            }
        };
        let mut coeffs = Vec::with_capacity(tk as usize);
        for nk in 0..tk {
            let inner: BTreeMap<Index, Q> = self
                .coeffs
                .iter()
                .filter(|(n, _)| n[k - 1] == nk)
                .map(|(n, c)| (n[..k - 1].to_vec(), c.clone()))
                .collect();
            coeffs.push(TruncSeries::new(
                self.p,
                inner_trunc.clone(),
                inner,
                restrict(&self.tail, nk),
                restrict(&self.err, nk),
            )?);
        }
        Ok(NestedSeries {
            p: self.p,
            coeffs,
            outer_tail: self.tail.clone(),
            outer_err: self.err.clone(),
            full_trunc: self.trunc.clone(),
        })
    }

    /// Zero test from sampled values. For exact polynomials, returns true iff the
    /// polynomial is zero, which is certified when it vanishes on a grid with more
    /// points per variable than its degree. Otherwise the result is evidence only.
    pub fn zero_test_small_disk(&self, samples: &[Vec<Q>]) -> bool {
        let k = self.vars();
        if self.is_zero() {
            return true;
        }
        if samples.len() != k {
            return false;
        }
        for i in 0..k {
            let deg = self.degree_in(i).unwrap_or(0) as usize;
            let mut pts = samples[i].clone();
            pts.sort();
            pts.dedup();
            if pts.len() <= deg {
                return false;
            }
        }
        let mut idx = vec![0usize; k];
        loop {
            let pt: Vec<Q> = (0..k).map(|i| samples[i][idx[i]].clone()).collect();
            let mut sum = Q::zero();
            for (n, c) in &self.coeffs {
                let mut t = c.clone();
                for i in 0..k {
                    t *= crate::padic::qpow(&pt[i], n[i] as i64);
                }
                sum += t;
            }
            if !sum.is_zero() {
                return false;
            }
            let mut i = 0;
            loop {
                if i == k {
                    return true;
                }
                idx[i] += 1;
                if idx[i] < samples[i].len() {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
        }
    }
}

/// One-variable series in the last variable whose coefficients are series in
/// the remaining variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NestedSeries {
    p: Prime,
    /// Coefficient of X_k^n for n below the truncation.
    pub coeffs: Vec<TruncSeries>,
    outer_tail: Bound,
    outer_err: Bound,
    full_trunc: Vec<u64>,
}

impl NestedSeries {
    /// v_{r_k} over B_{r'} where `r = (r', r_k)`.
    pub fn vr(&self, r: &[Q]) -> ValuationReport {
        let k = r.len();
        let rk = &r[k - 1];
        let mut retained = Val::PosInf;
        let mut inner_bound = Val::PosInf;
        for (n, c) in self.coeffs.iter().enumerate() {
            let rep = c.vr(&r[..k - 1]);
            let sh = rk * q(n as i64);
            retained = retained.min(rep.retained_min.plus(&sh));
            inner_bound = inner_bound.min(rep.tail_bound.plus(&sh));
        }
        // Indices with n_k < T_k are covered by the inner tails; only
        // n_k ≥ T_k remains.
        let outer = if self.outer_tail.is_zero() {
            Val::PosInf
        } else {
            let mut o = Val::PosInf;
            for t in &self.outer_tail.terms {
                let mut acc = t.floor.clone();
                for i in 0..k {
                    let a = &r[i] - &t.weight[i];
                    let b = -t.log[i].clone();
                    let lo = if i == k - 1 { self.full_trunc[k - 1] } else { 0 };
                    acc = acc.add(&coord_min(Some(&a), &b, lo, None, self.p));
                }
                o = o.min(acc);
            }
            o
        };
        let tail = inner_bound.min(outer);
        ValuationReport {
            exact: retained <= tail,
            retained_min: retained,
            tail_bound: tail,
        }
    }

    /// Inverse of [`TruncSeries::nest`].
    pub fn unnest(&self) -> Result<TruncSeries> {
        let mut coeffs = BTreeMap::new();
        for (nk, c) in self.coeffs.iter().enumerate() {
            for (n, x) in c.coeffs() {
                let mut idx = n.clone();
                idx.push(nk as u64);
                coeffs.insert(idx, x.clone());
            }
        }
        TruncSeries::new(
            self.p,
            self.full_trunc.clone(),
            coeffs,
            self.outer_tail.clone(),
            self.outer_err.clone(),
        )
    }
}

/// JSON form of a coefficient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffJson {
    /// Multi-index.
    pub index: Vec<u64>,
    /// Value as `"num/den"`.
    pub value: String,
}

/// JSON form of a bound clause.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundTermJson {
    /// Floor as a rational string, `"-inf"`.
    pub floor: String,
    /// Index weights.
    pub weight: Vec<String>,
    /// ℓ weights.
    pub log: Vec<String>,
}

/// JSON form of a truncated series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesJson {
    /// Prime of the valuation.
    pub p: u64,
    /// Number of variables.
    pub vars: usize,
    /// Truncation box.
    pub trunc: Vec<u64>,
    /// Scalar tail floor (`"inf"` for an exact tail); used when `tail_terms` is absent.
    pub tail_floor: String,
    /// General tail clauses.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_terms: Option<Vec<BoundTermJson>>,
    /// Error clauses for stored coefficients.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub err_terms: Vec<BoundTermJson>,
    /// Stored coefficients.
    pub coeffs: Vec<CoeffJson>,
}

fn val_to_str(v: &Val) -> String {
    match v {
        Val::PosInf => "inf".into(),
        Val::NegInf => "-inf".into(),
        Val::Fin(x) => fmt_q(x),
    }
}

fn str_to_val(s: &str) -> Result<Val> {
    match s.trim() {
        "inf" | "+inf" => Ok(Val::PosInf),
        "-inf" => Ok(Val::NegInf),
        other => Ok(Val::Fin(parse_q(other)?)),
    }
}

fn term_to_json(t: &BoundTerm) -> BoundTermJson {
    BoundTermJson {
        floor: val_to_str(&t.floor),
        weight: t.weight.iter().map(fmt_q).collect(),
        log: t.log.iter().map(fmt_q).collect(),
    }
}

fn term_from_json(t: &BoundTermJson) -> Result<BoundTerm> {
    Ok(BoundTerm {
        floor: str_to_val(&t.floor)?,
        weight: t.weight.iter().map(|s| parse_q(s)).collect::<Result<_>>()?,
        log: t.log.iter().map(|s| parse_q(s)).collect::<Result<_>>()?,
    })
}

impl From<&TruncSeries> for SeriesJson {
    fn from(s: &TruncSeries) -> SeriesJson {
        let k = s.vars();
        let flat = s
            .tail
            .terms
            .iter()
            .all(|t| t.weight.iter().chain(&t.log).all(|x| x.is_zero()));
        let (tail_floor, tail_terms) = if s.tail.is_zero() {
            ("inf".to_string(), None)
        } else if flat && s.tail.terms.len() == 1 {
            (val_to_str(&s.tail.terms[0].floor), None)
        } else {
            ("-inf".to_string(), Some(s.tail.terms.iter().map(term_to_json).collect()))
        };
        SeriesJson {
            p: s.p.get(),
            vars: k,
            trunc: s.trunc.clone(),
            tail_floor,
            tail_terms,
            err_terms: s.err.terms.iter().map(term_to_json).collect(),
            coeffs: s
                .coeffs
                .iter()
                .map(|(n, c)| CoeffJson {
                    index: n.clone(),
                    value: fmt_q(c),
                })
                .collect(),
        }
    }
}

impl TryFrom<&SeriesJson> for TruncSeries {
    type Error = Error;
    fn try_from(j: &SeriesJson) -> Result<TruncSeries> {
        let p = Prime::new(j.p)?;
        if j.trunc.len() != j.vars {
            return Err(Error::Invalid("trunc length must equal vars".into()));
        }
        let tail = match &j.tail_terms {
            Some(ts) => Bound {
                terms: ts.iter().map(term_from_json).collect::<Result<_>>()?,
            },
            None => Bound::single(BoundTerm::flat(j.vars, str_to_val(&j.tail_floor)?)),
        };
        let err = Bound {
            terms: j.err_terms.iter().map(term_from_json).collect::<Result<_>>()?,
        };
        let mut coeffs = BTreeMap::new();
        for c in &j.coeffs {
            *coeffs.entry(c.index.clone()).or_insert_with(Q::zero) += parse_q(&c.value)?;
        }
        TruncSeries::new(p, j.trunc.clone(), coeffs, tail, err)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::qf;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn ell_values() {
        assert_eq!(ell(0, p(3)), 0);
        assert_eq!(ell(2, p(3)), 1);
        assert_eq!(ell(3, p(3)), 2);
        assert_eq!(ell(8, p(3)), 2);
        assert_eq!(ell(9, p(3)), 3);
    }

    #[test]
    fn vr_examples() {
        let f = TruncSeries::poly1_int(p(3), &[1, 1]);
        let rep = f.vr(&[q(1)]);
        assert_eq!(rep.retained_min, Val::int(0));
        assert!(rep.exact);
        let g = TruncSeries::poly1_int(p(3), &[3, 0, 1]);
        let rep = g.vr(&[qf(1, 2)]);
        assert_eq!(rep.value(), Some(&Val::int(1)));
        assert_eq!(TruncSeries::zero(p(5), 1).vr(&[q(0)]).value(), Some(&Val::PosInf));
    }

    #[test]
    fn mul_examples() {
        let pr = p(5);
        let a = TruncSeries::poly1_int(pr, &[1, 1]);
        let b = TruncSeries::poly1_int(pr, &[1, -1]);
        assert_eq!(a.mul(&b, &[q(0)]).unwrap().dense1(), vec![q(1), q(0), q(-1)]);
        let f = TruncSeries::poly1_int(pr, &[5, 1]);
        let ff = f.mul(&f, &[q(1)]).unwrap();
        assert_eq!(ff.vr(&[q(1)]).value(), Some(&Val::int(2)));
        assert!(f.mul(&TruncSeries::zero(pr, 1), &[q(0)]).unwrap().is_zero());
    }

    #[test]
    fn log_tail_region_min() {
        // ord(1/n) + ℓ(n) ≥ 1 on n ≥ 10 evaluated at weight 1/2 (p = 3).
        let t = BoundTerm {
            floor: Val::int(1),
            weight: vec![q(0)],
            log: vec![q(1)],
        };
        let b = Bound::single(t);
        let v = b.min_over(&Region::Outside(vec![10]), &[Weight::Fin(qf(1, 2))], &[q(0)], p(3));
        // min over n ≥ 10 of 1 + n/2 − ℓ(n): at n = 10, 1 + 5 − 3 = 3.
        assert_eq!(v, Val::int(3));
        let v = b.min_over(&Region::Outside(vec![10]), &[Weight::Fin(qf(1, 100))], &[q(0)], p(3));
        // n = 27: 1 + 27/100 − 4; n = 81: 1 + 81/100 − 5; n = 243: 1 + 243/100 − 6
        assert_eq!(v, Val::Fin(q(1) + qf(81, 100) - q(5)));
    }

    #[test]
    fn shift_examples() {
        let pr = p(3);
        let f = TruncSeries::poly1_int(pr, &[0, 0, 1]);
        let g = f.shift(&[q(3)], &[q(0)]).unwrap();
        assert_eq!(g.dense1(), vec![q(9), q(6), q(1)]);
        let back = g.shift(&[q(-3)], &[q(0)]).unwrap();
        assert_eq!(back.dense1(), f.dense1());
        assert_eq!(f.shift(&[q(1)], &[q(0)]), Err(Error::ShiftOutOfDisk));
    }

    #[test]
    fn nest_round_trip() {
        let pr = p(3);
        let f = TruncSeries::polynomial(pr, 2, [(vec![1, 1], q(1)), (vec![0, 0], q(3))]);
        let n = f.nest().unwrap();
        assert_eq!(n.coeffs[1], TruncSeries::polynomial(pr, 1, [(vec![1], q(1))]).with_bounds(Bound::zero(), Bound::zero()).truncate(&[2], &[q(0)]));
        assert_eq!(n.unnest().unwrap(), f);
        let r = [qf(1, 3), qf(1, 2)];
        assert_eq!(n.vr(&r).value(), f.vr(&r).value());
    }

    #[test]
    fn zero_test() {
        let pr = p(3);
        let f = TruncSeries::poly1_int(pr, &[0, 27, -12, 1]); // X(X−3)(X−9)
        assert!(!f.zero_test_small_disk(&[vec![q(0), q(3), q(9), q(1)]]));
        assert!(TruncSeries::zero(pr, 1).zero_test_small_disk(&[vec![]]));
    }
}
