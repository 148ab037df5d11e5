//! Dense univariate polynomials over Q.

use std::fmt;

use num_traits::{One, Zero};

use crate::padic::{fmt_q, q, CycloScalar, Q};

/// Polynomial with rational coefficients, lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly(Vec<Q>);

impl Poly {
    /// From coefficients (trailing zeros trimmed).
    pub fn new(mut c: Vec<Q>) -> Poly {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly(c)
    }
    /// From integer coefficients.
    pub fn from_ints(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&x| q(x)).collect())
    }
    /// Zero polynomial.
    pub fn zero() -> Poly {
        Poly(vec![])
    }
    /// Constant polynomial.
    pub fn constant(c: Q) -> Poly {
        Poly::new(vec![c])
    }
    /// The variable X.
    pub fn x() -> Poly {
        Poly::from_ints(&[0, 1])
    }
    /// Monomial c X^n.
    pub fn monomial(c: Q, n: usize) -> Poly {
        let mut v = vec![Q::zero(); n + 1];
        v[n] = c;
        Poly::new(v)
    }
    /// Coefficients, lowest first.
    pub fn coeffs(&self) -> &[Q] {
        &self.0
    }
    /// Coefficient of X^n (zero beyond the degree).
    pub fn coeff(&self, n: usize) -> Q {
        self.0.get(n).cloned().unwrap_or_else(Q::zero)
    }
    /// True for the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    /// Degree; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }
    /// Leading coefficient (zero for the zero polynomial).
    pub fn lead(&self) -> Q {
        self.0.last().cloned().unwrap_or_else(Q::zero)
    }
    /// Sum.
    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
    /// Difference.
    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
    /// Scalar multiple.
    pub fn scale(&self, c: &Q) -> Poly {
        Poly::new(self.0.iter().map(|x| x * c).collect())
    }
    /// Product.
    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Q::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Poly::new(out)
    }
    /// Non-negative power.
    pub fn pow(&self, e: u64) -> Poly {
        let mut acc = Poly::constant(Q::one());
        let mut b = self.clone();
        let mut k = e;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&b);
            }
            k >>= 1;
            if k > 0 {
                b = b.mul(&b);
            }
        }
        acc
    }
    /// Euclidean division `self = q·d + r` with deg r < deg d.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.0.len() - 1;
        if self.0.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let inv = d.lead().recip();
        let mut rem = self.0.clone();
        let mut quo = vec![Q::zero(); rem.len() - dd];
        for i in (0..quo.len()).rev() {
            let c = &rem[i + dd] * &inv;
            if c.is_zero() {
                continue;
            }
            for (j, b) in d.0.iter().enumerate() {
                if !b.is_zero() {
                    rem[i + j] -= &c * b;
                }
            }
            quo[i] = c;
        }
        rem.truncate(dd);
        (Poly::new(quo), Poly::new(rem))
    }
    /// Remainder modulo `d`.
    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).1
    }
    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            let l = a.lead().recip();
            a.scale(&l)
        }
    }
    /// Formal derivative.
    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * q(i as i64))
                .collect(),
        )
    }
    /// Value at a rational point.
    pub fn eval(&self, x: &Q) -> Q {
        self.0.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
    }
    /// Value at a cyclotomic point.
    pub fn eval_cyclo(&self, x: &CycloScalar) -> CycloScalar {
        self.0.iter().rev().fold(CycloScalar::zero(), |acc, c| {
            acc.mul(x).add(&CycloScalar::from_q(c.clone()))
        })
    }
    /// Composition `self(g)`.
    pub fn compose(&self, g: &Poly) -> Poly {
        self.0
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, c| acc.mul(g).add(&Poly::constant(c.clone())))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => fmt_q(c),
                1 => format!("({})*X", fmt_q(c)),
                _ => format!("({})*X^{}", fmt_q(c), i),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_and_gcd() {
        let a = Poly::from_ints(&[-1, 0, 1]);
        let b = Poly::from_ints(&[-1, 1]);
        let (qt, r) = a.divrem(&b);
        assert_eq!(qt, Poly::from_ints(&[1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&a.derivative()), Poly::from_ints(&[1]));
        assert_eq!(Poly::from_ints(&[1, 1]).pow(3), Poly::from_ints(&[1, 3, 3, 1]));
    }
}
