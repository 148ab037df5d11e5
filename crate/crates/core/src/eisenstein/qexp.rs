//! Truncated q-expansions whose coefficients are polynomials in a formal
//! variable X, optionally with coefficients in a finite group ring.

use super::characters::{gamma_log, DirichletCharacter, GammaCharacter};
use crate::error::{Error, Result};
use crate::padic::{q, qpow, CycloJson, CycloScalar, Prime, Q};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Debug;

/// Polynomial in X over cyclotomic scalars, constant term first, no trailing zeros.
#[derive(Debug, Clone, Default)]
pub struct XPoly(Vec<CycloScalar>);

impl PartialEq for XPoly {
    fn eq(&self, o: &XPoly) -> bool {
        self.0.len() == o.0.len() && self.0.iter().zip(&o.0).all(|(a, b)| a == b)
    }
}

impl XPoly {
    /// Polynomial from coefficients.
    pub fn new(mut c: Vec<CycloScalar>) -> XPoly {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        XPoly(c)
    }
    /// Zero polynomial.
    pub fn zero() -> XPoly {
        XPoly(Vec::new())
    }
    /// Constant polynomial.
    pub fn constant(c: CycloScalar) -> XPoly {
        XPoly::new(vec![c])
    }
    /// Rational constant.
    pub fn from_q(c: Q) -> XPoly {
        XPoly::constant(CycloScalar::from_q(c))
    }
    /// c·X^e.
    pub fn monomial(c: CycloScalar, e: usize) -> XPoly {
        let mut v = vec![CycloScalar::zero(); e + 1];
        v[e] = c;
        XPoly::new(v)
    }
    /// Coefficients, constant term first.
    pub fn coeffs(&self) -> &[CycloScalar] {
        &self.0
    }
    /// Coefficient of X^i.
    pub fn coeff(&self, i: usize) -> CycloScalar {
        self.0.get(i).cloned().unwrap_or_else(CycloScalar::zero)
    }
    /// Degree in X, None for zero.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }
    /// True when zero.
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    /// Sum.
    pub fn add(&self, o: &XPoly) -> XPoly {
        let n = self.0.len().max(o.0.len());
        XPoly::new((0..n).map(|i| self.coeff(i).add(&o.coeff(i))).collect())
    }
    /// Difference.
    pub fn sub(&self, o: &XPoly) -> XPoly {
        self.add(&o.scale_q(&q(-1)))
    }
    /// Product.
    pub fn mul(&self, o: &XPoly) -> XPoly {
        if self.is_zero() || o.is_zero() {
            return XPoly::zero();
        }
        let mut c = vec![CycloScalar::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] = c[i + j].add(&a.mul(b));
            }
        }
        XPoly::new(c)
    }
    /// Scalar multiple.
    pub fn scale(&self, c: &CycloScalar) -> XPoly {
        XPoly::new(self.0.iter().map(|x| x.mul(c)).collect())
    }
    /// Rational multiple.
    pub fn scale_q(&self, c: &Q) -> XPoly {
        XPoly::new(self.0.iter().map(|x| x.scale(c)).collect())
    }
    /// Value at X = 0.
    pub fn at_zero(&self) -> CycloScalar {
        self.coeff(0)
    }
    /// Formal derivative in X.
    pub fn derivative(&self) -> XPoly {
        XPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.scale(&q(i as i64)))
                .collect(),
        )
    }
    /// Substitution X ↦ cX.
    pub fn subst_scale(&self, c: &Q) -> XPoly {
        XPoly::new(
            self.0
                .iter()
                .enumerate()
                .map(|(i, x)| x.scale(&qpow(c, i as i64)))
                .collect(),
        )
    }
}

/// Coefficient ring of a q-series.
pub trait Coefficient: Clone + PartialEq + Debug {
    /// Additive identity.
    fn zero() -> Self;
    /// True when zero.
    fn is_zero(&self) -> bool;
    /// Sum.
    fn add(&self, o: &Self) -> Self;
    /// Product.
    fn mul(&self, o: &Self) -> Self;
    /// Scalar multiple.
    fn scale(&self, c: &CycloScalar) -> Self;
    /// Apply a map to every X-polynomial component.
    fn map_poly(&self, f: &dyn Fn(&XPoly) -> XPoly) -> Self;
    /// Largest X-degree among components.
    fn x_degree(&self) -> Option<usize>;
}

impl Coefficient for XPoly {
    fn zero() -> Self {
        XPoly::zero()
    }
    fn is_zero(&self) -> bool {
        XPoly::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        XPoly::add(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        XPoly::mul(self, o)
    }
    fn scale(&self, c: &CycloScalar) -> Self {
        XPoly::scale(self, c)
    }
    fn map_poly(&self, f: &dyn Fn(&XPoly) -> XPoly) -> Self {
        f(self)
    }
    fn x_degree(&self) -> Option<usize> {
        self.degree()
    }
}

/// Element of a group ring of the multiplicative group of Q: Σ c_z [z].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GroupRingElt(BTreeMap<Q, XPoly>);

impl GroupRingElt {
    /// c·[z].
    pub fn point(z: Q, c: XPoly) -> GroupRingElt {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(z, c);
        }
        GroupRingElt(m)
    }
    /// Terms (z, c_z).
    pub fn terms(&self) -> impl Iterator<Item = (&Q, &XPoly)> {
        self.0.iter()
    }
    /// Add c·[z] in place.
    pub fn add_term(&mut self, z: Q, c: XPoly) {
        if c.is_zero() {
            return;
        }
        let e = self.0.entry(z.clone()).or_insert_with(XPoly::zero);
        *e = e.add(&c);
        if e.is_zero() {
            self.0.remove(&z);
        }
    }
    /// Σ over points z with z ≡ u^l mod p^{level+1}, l ≡ coset mod p^level, of c_z·z^weight.
    pub fn integrate(&self, p: Prime, level: u32, coset: u64, weight: i64) -> Result<XPoly> {
        let mut acc = XPoly::zero();
        for (z, c) in &self.0 {
            if gamma_log(p, z, level)? == coset {
                acc = acc.add(&c.scale_q(&qpow(z, weight)));
            }
        }
        Ok(acc)
    }
    /// Σ c_z·z^weight·φ(z).
    pub fn specialize(&self, weight: i64, phi: &GammaCharacter) -> Result<XPoly> {
        let mut acc = XPoly::zero();
        for (z, c) in &self.0 {
            let v = phi.value(z)?.scale(&qpow(z, weight));
            acc = acc.add(&c.scale(&v));
        }
        Ok(acc)
    }
}

impl Coefficient for GroupRingElt {
    fn zero() -> Self {
        GroupRingElt::default()
    }
    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (z, c) in &o.0 {
            r.add_term(z.clone(), c.clone());
        }
        r
    }
    fn mul(&self, o: &Self) -> Self {
        let mut r = GroupRingElt::default();
        for (z, c) in &self.0 {
            for (w, d) in &o.0 {
                r.add_term(z * w, c.mul(d));
            }
        }
        r
    }
    fn scale(&self, c: &CycloScalar) -> Self {
        self.map_poly(&|x| x.scale(c))
    }
    fn map_poly(&self, f: &dyn Fn(&XPoly) -> XPoly) -> Self {
        let mut r = GroupRingElt::default();
        for (z, c) in &self.0 {
            r.add_term(z.clone(), f(c));
        }
        r
    }
    fn x_degree(&self) -> Option<usize> {
        self.0.values().filter_map(|c| c.degree()).max()
    }
}

/// Σ_{n=0}^{Q} a_n q^n with coefficients in `C`.
#[derive(Debug, Clone, PartialEq)]
pub struct QSeries<C: Coefficient> {
    trunc: usize,
    coeffs: Vec<C>,
}

/// q-expansion with X-polynomial coefficients.
pub type QExpansion = QSeries<XPoly>;
/// q-expansion with group-ring coefficients.
pub type GroupRingSeries = QSeries<GroupRingElt>;

impl<C: Coefficient> QSeries<C> {
    /// Series known through q^trunc; missing coefficients are zero.
    pub fn new(trunc: usize, mut coeffs: Vec<C>) -> Self {
        coeffs.resize(trunc + 1, C::zero());
        QSeries { trunc, coeffs }
    }
    /// Zero series.
    pub fn zero(trunc: usize) -> Self {
        Self::new(trunc, vec![])
    }
    /// Truncation Q.
    pub fn trunc(&self) -> usize {
        self.trunc
    }
    /// Coefficient of q^n.
    pub fn coeff(&self, n: usize) -> &C {
        &self.coeffs[n]
    }
    /// All coefficients a_0..=a_Q.
    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }
    /// True when every coefficient is zero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
    /// Largest X-degree.
    pub fn x_degree(&self) -> Option<usize> {
        self.coeffs.iter().filter_map(|c| c.x_degree()).max()
    }
    /// Lower the truncation.
    pub fn truncate(&self, t: usize) -> Self {
        let t = t.min(self.trunc);
        Self::new(t, self.coeffs[..=t].to_vec())
    }
    /// Sum (truncation is the minimum).
    pub fn add(&self, o: &Self) -> Self {
        let t = self.trunc.min(o.trunc);
        Self::new(t, (0..=t).map(|n| self.coeffs[n].add(&o.coeffs[n])).collect())
    }
    /// Scalar multiple.
    pub fn scale(&self, c: &CycloScalar) -> Self {
        Self::new(self.trunc, self.coeffs.iter().map(|a| a.scale(c)).collect())
    }
    /// Difference.
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&CycloScalar::from_int(-1)))
    }
    /// Product truncated at the smaller truncation.
    pub fn mul(&self, o: &Self) -> Self {
        self.mul_filtered(o, 1)
    }
    /// Product with only the coefficients at multiples of `step` computed.
    pub fn mul_filtered(&self, o: &Self, step: usize) -> Self {
        let t = self.trunc.min(o.trunc);
        let mut out = vec![C::zero(); t + 1];
        for i in 0..=t {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=t - i {
                if (i + j) % step != 0 || o.coeffs[j].is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&self.coeffs[i].mul(&o.coeffs[j]));
            }
        }
        Self::new(t, out)
    }
    /// Hecke operator Σ a_{pn}(pX) q^n.
    pub fn hecke_tp(&self, p: u64) -> Self {
        let p = p as usize;
        let t = self.trunc / p;
        let pq = q(p as i64);
        Self::new(
            t,
            (0..=t)
                .map(|n| self.coeffs[p * n].map_poly(&|a| a.subst_scale(&pq)))
                .collect(),
        )
    }
    /// δ_m: a_n ↦ (n + mX)a_n − X²·∂a_n/∂X.
    pub fn delta(&self, m: i64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| {
                c.map_poly(&|a| {
                    let lin = XPoly::new(vec![CycloScalar::from_int(n as i64), CycloScalar::from_int(m)]);
                    let x2 = XPoly::monomial(CycloScalar::one(), 2);
                    lin.mul(a).sub(&x2.mul(&a.derivative()))
                })
            })
            .collect();
        Self::new(self.trunc, coeffs)
    }
    /// δ_{m+2r−2} ∘ … ∘ δ_{m+2} ∘ δ_m (identity for r = 0).
    pub fn delta_iter(&self, m: i64, r: u32) -> Self {
        let mut s = self.clone();
        for j in 0..r as i64 {
            s = s.delta(m + 2 * j);
        }
        s
    }
    /// Twist a_n ↦ χ(n)a_n.
    pub fn twist(&self, chi: &DirichletCharacter) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| {
                let v = chi.value(n as i64);
                if v.is_zero() {
                    C::zero()
                } else {
                    c.scale(&v)
                }
            })
            .collect();
        Self::new(self.trunc, coeffs)
    }
    /// Keep only the terms with n ≡ a mod m.
    pub fn slice(&self, a: i64, m: u64) -> Self {
        let r = a.rem_euclid(m as i64) as usize;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| if n % m as usize == r { c.clone() } else { C::zero() })
            .collect();
        Self::new(self.trunc, coeffs)
    }
    /// Substitution q ↦ q^N.
    pub fn dilate(&self, n: u64) -> Self {
        let n = n as usize;
        let mut out = vec![C::zero(); self.trunc * n + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * n] = c.clone();
        }
        Self::new(self.trunc * n, out)
    }
}

impl QExpansion {
    /// ι: evaluation at X = 0.
    pub fn iota(&self) -> QExpansion {
        let c = self.coeffs.iter().map(|a| XPoly::constant(a.at_zero())).collect();
        QExpansion::new(self.trunc, c)
    }
    /// d = q·d/dq.
    pub fn d_op(&self) -> QExpansion {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, a)| a.scale_q(&q(n as i64)))
            .collect();
        QExpansion::new(self.trunc, c)
    }
    /// JSON form listing the nonzero coefficients.
    pub fn to_json(&self) -> QExpansionJson {
        QExpansionJson {
            trunc: self.trunc,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .filter(|(_, a)| !a.is_zero())
                .map(|(n, a)| CoeffJson {
                    n,
                    poly: a.coeffs().iter().map(CycloJson::from).collect(),
                })
                .collect(),
        }
    }
    /// Parse the JSON form.
    pub fn from_json(j: &QExpansionJson) -> Result<QExpansion> {
        let mut c = vec![XPoly::zero(); j.trunc + 1];
        for e in &j.coeffs {
            if e.n > j.trunc {
                return Err(Error::Invalid(format!("index {} beyond truncation", e.n)));
            }
            let poly = e
                .poly
                .iter()
                .map(CycloScalar::try_from)
                .collect::<Result<Vec<_>>>()?;
            c[e.n] = XPoly::new(poly);
        }
        Ok(QExpansion::new(j.trunc, c))
    }
}

impl GroupRingSeries {
    /// Apply `integrate` coefficientwise.
    pub fn integrate(&self, p: Prime, level: u32, coset: u64, weight: i64) -> Result<QExpansion> {
        let c = self
            .coeffs
            .iter()
            .map(|a| a.integrate(p, level, coset, weight))
            .collect::<Result<Vec<_>>>()?;
        Ok(QExpansion::new(self.trunc, c))
    }
    /// Apply `specialize` coefficientwise.
    pub fn specialize(&self, weight: i64, phi: &GammaCharacter) -> Result<QExpansion> {
        let c = self
            .coeffs
            .iter()
            .map(|a| a.specialize(weight, phi))
            .collect::<Result<Vec<_>>>()?;
        Ok(QExpansion::new(self.trunc, c))
    }
}

/// JSON form of a q-expansion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QExpansionJson {
    /// Truncation.
    #[serde(rename = "Q")]
    pub trunc: usize,
    /// Nonzero coefficients.
    pub coeffs: Vec<CoeffJson>,
}

/// One coefficient a_n(X) of a q-expansion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffJson {
    /// Index n.
    pub n: usize,
    /// Coefficients of X^0, X^1, ….
    pub poly: Vec<CycloJson>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constants(v: &[i64], t: usize) -> QExpansion {
        QExpansion::new(t, v.iter().map(|&x| XPoly::from_q(q(x))).collect())
    }

    #[test]
    fn hecke_and_delta_examples() {
        let mut v = vec![0i64; 10];
        v[1] = 1;
        v[3] = 5;
        v[9] = 1;
        let h = constants(&v, 9).hecke_tp(3);
        assert_eq!(h, constants(&[0, 5, 0, 1], 3));
        let d = constants(&[0, 1], 1).delta(2);
        assert_eq!(d.coeff(1), &XPoly::new(vec![CycloScalar::from_int(1), CycloScalar::from_int(2)]));
    }

    #[test]
    fn slices_sum_back_and_json() {
        let h = constants(&[3, 1, 4, 1, 5, 9, 2, 6], 7);
        let mut acc = QExpansion::zero(7);
        for a in 0..3 {
            acc = acc.add(&h.slice(a, 3));
        }
        assert_eq!(acc, h);
        let j = serde_json::to_string(&h.delta(1).to_json()).unwrap();
        let back = QExpansion::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
        assert_eq!(back, h.delta(1));
        assert_eq!(h.dilate(2).coeff(4), h.coeff(2));
    }
}
