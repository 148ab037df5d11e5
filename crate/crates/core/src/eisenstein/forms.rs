//! q-expansions of the level-N Eisenstein series Ẽ(a, b) and the character
//! series F(ψ1, ψ2) at the non-positive point s = −r.

use super::characters::{divisors, int_pow, DirichletCharacter};
use super::qexp::{QExpansion, XPoly};
use super::special::{dirichlet_l_nonpositive, special_at, whittaker_poly};
use crate::error::{Error, Result};
use crate::padic::{euler_phi, q, qf, CycloScalar, Q};
use num_traits::{One, Zero};

fn fact(n: i64) -> Q {
    Q::from_integer(crate::padic::factorial(n as u64))
}

fn sign_pow(e: i64) -> Q {
    if e.rem_euclid(2) == 0 {
        Q::one()
    } else {
        -Q::one()
    }
}

/// c·(−X)^e.
fn neg_x_pow(e: i64, c: CycloScalar) -> XPoly {
    XPoly::monomial(c.scale(&sign_pow(e)), e as usize)
}

/// (4πy)^{−r} W(4πny, k−r, −r) written in X = −1/(4πy).
pub fn whittaker_in_x(k: i64, r: i64, n: u64) -> XPoly {
    let w = whittaker_poly(&q(k - r), r as usize);
    let mut c = vec![CycloScalar::zero(); r as usize + 1];
    for (j, wj) in w.iter().enumerate() {
        let v = wj * sign_pow(r + j as i64) * num_traits::pow(q(n as i64), j);
        c[r as usize - j] = CycloScalar::from_q(v);
    }
    XPoly::new(c)
}

fn check_weights(k: i64, r: i64) -> Result<()> {
    if k < 1 || r < 0 || r > k - 1 {
        return Err(Error::Invalid("requires k >= 1 and 0 <= r <= k-1".into()));
    }
    Ok(())
}

/// Gamma-ratio multiplying the first constant term when k − 2r ≥ 1.
fn gamma_first(k: i64, r: i64) -> Q {
    sign_pow(r) * fact(k - 1 - r) / (q(2) * fact(k - 1 - 2 * r))
}

/// Gamma-ratio multiplying the second constant term when k − 2r ≤ 1.
fn gamma_second(k: i64, r: i64) -> Q {
    let j = 2 * r + 1 - k;
    sign_pow(r + j) * fact(r) / (q(2) * fact(j))
}

/// Coefficient of (−X)^r in the constant term of Ẽ(a, b) when b ≡ 0.
fn tilde_first(k: i64, r: i64, a: u64, n: u64) -> Result<Q> {
    let kk = k - 2 * r;
    Ok(if kk >= 1 {
        if kk == 1 && a == 0 {
            Q::zero()
        } else {
            gamma_first(k, r) * special_at(a, n, -kk)?
        }
    } else if kk == 0 {
        sign_pow(r - 1) * fact(r - 1) / q(n as i64)
    } else {
        Q::zero()
    })
}

/// Coefficient of (−X)^{k−1−r} in the constant term of Ẽ(a, b) when a ≡ 0.
fn tilde_second(k: i64, r: i64, b: u64, n: u64) -> Result<Q> {
    let kk = k - 2 * r;
    Ok(if kk >= 3 {
        Q::zero()
    } else if kk == 2 {
        sign_pow(r) * fact(r) / q(n as i64)
    } else if kk == 1 && b == 0 {
        Q::zero()
    } else {
        gamma_second(k, r) * special_at(b, n, kk - 2)?
    })
}

/// Ẽ_{k,N}(z, −r; a, b) through q^trunc.
pub fn eisen_tilde_qexp(k: i64, n: u64, r: i64, a: i64, b: i64, trunc: usize) -> Result<QExpansion> {
    check_weights(k, r)?;
    if n == 0 {
        return Err(Error::Invalid("level must be positive".into()));
    }
    let ni = n as i64;
    let (a0, b0) = (a.rem_euclid(ni), b.rem_euclid(ni));
    let mut coeffs = vec![XPoly::zero(); trunc + 1];
    let mut c0 = XPoly::zero();
    if b0 == 0 {
        let v = tilde_first(k, r, a0 as u64, n)?;
        c0 = c0.add(&neg_x_pow(r, CycloScalar::from_q(v)));
    }
    if a0 == 0 {
        let v = tilde_second(k, r, b0 as u64, n)?;
        c0 = c0.add(&neg_x_pow(k - 1 - r, CycloScalar::from_q(v)));
    }
    coeffs[0] = c0;
    let e = k - 2 * r - 1;
    for (m, slot) in coeffs.iter_mut().enumerate().skip(1) {
        let mut s = Q::zero();
        for d in divisors(m as u64) {
            for sign in [1i64, -1] {
                let d1 = sign * d as i64;
                let d2 = m as i64 / d1;
                if (d1 - a0).rem_euclid(ni) == 0 && (d2 - b0).rem_euclid(ni) == 0 {
                    s += q(sign) * int_pow(d1, e);
                }
            }
        }
        if !s.is_zero() {
            *slot = whittaker_in_x(k, r, m as u64).scale_q(&s);
        }
    }
    Ok(QExpansion::new(trunc, coeffs))
}

/// F_k(z, −r; ψ1, ψ2) through q^trunc.
pub fn eisen_f_qexp(
    k: i64,
    r: i64,
    psi1: &DirichletCharacter,
    psi2: &DirichletCharacter,
    trunc: usize,
) -> Result<QExpansion> {
    check_weights(k, r)?;
    let parity = if k % 2 == 0 { 1 } else { -1 };
    if psi1.mul(psi2).parity() != parity {
        return Err(Error::ParityMismatch);
    }
    let kk = k - 2 * r;
    let mut coeffs = vec![XPoly::zero(); trunc + 1];
    let mut c0 = XPoly::zero();
    if psi1.modulus() == 1 {
        let n2 = psi2.modulus();
        let v = if kk >= 1 {
            dirichlet_l_nonpositive(kk, psi2)?.scale(&gamma_first(k, r))
        } else if kk == 0 && psi2.is_trivial() {
            CycloScalar::from_q(sign_pow(r - 1) * fact(r - 1) * qf(euler_phi(n2) as i64, 2 * n2 as i64))
        } else {
            CycloScalar::zero()
        };
        c0 = c0.add(&neg_x_pow(r, v));
    }
    if psi2.modulus() == 1 {
        let n1 = psi1.modulus();
        let v = if kk >= 3 {
            CycloScalar::zero()
        } else if kk == 2 {
            if psi1.is_trivial() {
                CycloScalar::from_q(sign_pow(r) * fact(r) * qf(euler_phi(n1) as i64, 2 * n1 as i64))
            } else {
                CycloScalar::zero()
            }
        } else {
            dirichlet_l_nonpositive(2 - kk, psi1)?.scale(&gamma_second(k, r))
        };
        c0 = c0.add(&neg_x_pow(k - 1 - r, v));
    }
    coeffs[0] = c0;
    let e = kk - 1;
    for (m, slot) in coeffs.iter_mut().enumerate().skip(1) {
        let mut s = CycloScalar::zero();
        for d in divisors(m as u64) {
            let v = psi1.value((m as u64 / d) as i64).mul(&psi2.value(d as i64));
            if !v.is_zero() {
                s = s.add(&v.scale(&int_pow(d as i64, e)));
            }
        }
        if !s.is_zero() {
            *slot = whittaker_in_x(k, r, m as u64).scale(&s);
        }
    }
    Ok(QExpansion::new(trunc, coeffs))
}

/// Σ_{a,b mod N} ψ1(a)ψ2(b)·Ẽ_{k,N}(a, b) and 2F_k(ψ2, ψ1), for comparison.
pub fn tilde_f_sides(
    k: i64,
    n: u64,
    r: i64,
    psi1: &DirichletCharacter,
    psi2: &DirichletCharacter,
    trunc: usize,
) -> Result<(QExpansion, QExpansion)> {
    if n % psi1.modulus() != 0 || n % psi2.modulus() != 0 {
        return Err(Error::LevelMismatch("character moduli must divide N".into()));
    }
    let mut lhs = QExpansion::zero(trunc);
    for a in 0..n as i64 {
        let va = psi1.value(a);
        if va.is_zero() {
            continue;
        }
        for b in 0..n as i64 {
            let vb = psi2.value(b);
            if vb.is_zero() {
                continue;
            }
            let e = eisen_tilde_qexp(k, n, r, a, b, trunc)?;
            lhs = lhs.add(&e.scale(&va.mul(&vb)));
        }
    }
    let rhs = eisen_f_qexp(k, r, psi2, psi1, trunc)?.scale(&CycloScalar::from_int(2));
    Ok((lhs, rhs))
}
