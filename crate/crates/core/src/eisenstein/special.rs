//! Bernoulli polynomials, special values of partial zeta functions,
//! Dirichlet L-values at non-positive integers and Whittaker polynomials.

use super::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::padic::{binom, q, qf, CycloScalar, Q};
use num_traits::{One, Zero};
use serde::Serialize;

/// Bernoulli polynomial B_n(t) = Σ coeffs[i] t^i.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BernoulliPoly {
    /// Index n.
    pub n: usize,
    /// Rational coefficients, constant term first.
    pub coeffs: Vec<Q>,
}

/// Bernoulli numbers B_0..=B_n with B_1 = −1/2.
pub fn bernoulli_numbers(n: usize) -> Vec<Q> {
    let mut b = vec![Q::one()];
    for m in 1..=n {
        let mut s = Q::zero();
        for (j, bj) in b.iter().enumerate() {
            s += binom(m as i64 + 1, j as i64) * bj;
        }
        b.push(-s / q(m as i64 + 1));
    }
    b
}

/// B_n(t) via B_n(t) = Σ_j C(n,j) B_j t^{n−j}.
pub fn bernoulli_poly(n: usize) -> BernoulliPoly {
    let b = bernoulli_numbers(n);
    let coeffs = (0..=n)
        .map(|i| binom(n as i64, i as i64) * &b[n - i])
        .collect();
    BernoulliPoly { n, coeffs }
}

impl BernoulliPoly {
    /// Evaluate at a rational point.
    pub fn eval(&self, t: &Q) -> Q {
        self.coeffs
            .iter()
            .rev()
            .fold(Q::zero(), |acc, c| acc * t + c)
    }
}

/// Special value (2/(m+2k)) N^{−m−2k−1} B_{−(m+2k)}(a/N); m + 2k must be an integer ≤ −1.
pub fn m_special_value(a: u64, n: u64, m: i64, k: &Q) -> Result<Q> {
    let s2 = q(m) + q(2) * k;
    if !s2.is_integer() {
        return Err(Error::Invalid("m + 2k must be an integer".into()));
    }
    special_at(a, n, s2.to_integer().try_into().map_err(|_| Error::Invalid("m + 2k out of range".into()))?)
}

/// The special value as a function of s = m + 2k.
pub(crate) fn special_at(a: u64, n: u64, s: i64) -> Result<Q> {
    if s > -1 {
        return Err(Error::Invalid("requires m + 2k <= -1".into()));
    }
    if n == 0 || a >= n {
        return Err(Error::Invalid("requires 0 <= a < N".into()));
    }
    if a == 0 && s == -1 {
        return Err(Error::PoleCase);
    }
    let np = num_traits::pow(q(n as i64), (-s - 1) as usize);
    let b = bernoulli_poly((-s) as usize).eval(&qf(a as i64, n as i64));
    Ok(q(2) / q(s) * np * b)
}

/// L_N(1−k, ψ) with N the modulus of ψ, from the partial special values.
pub fn dirichlet_l_nonpositive(k: i64, psi: &DirichletCharacter) -> Result<CycloScalar> {
    if k < 1 {
        return Err(Error::Invalid("requires k >= 1".into()));
    }
    let parity = if k % 2 == 0 { 1 } else { -1 };
    if psi.parity() != parity {
        return Err(Error::ParityMismatch);
    }
    // At s = 1−k the partial values enter with m + 2k' = −k.
    let n = psi.modulus();
    let mut acc = CycloScalar::zero();
    for a in 0..n {
        let v = psi.value(a as i64);
        if v.is_zero() {
            continue;
        }
        acc = acc.add(&v.scale(&special_at(a, n, -k)?));
    }
    Ok(acc.scale(&qf(1, 2)))
}

/// W(z, α, −r) = Σ_μ C(r,μ) z^{r−μ} ∏_{ν=1}^{μ}(ν−α), coefficients in z.
pub fn whittaker_poly(alpha: &Q, r: usize) -> Vec<Q> {
    let mut c = vec![Q::zero(); r + 1];
    let mut prod = Q::one();
    for mu in 0..=r {
        if mu > 0 {
            prod *= q(mu as i64) - alpha;
        }
        c[r - mu] = binom(r as i64, mu as i64) * &prod;
    }
    c
}
