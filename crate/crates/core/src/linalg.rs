//! Dense exact linear algebra over Q.

use num_traits::{One, Zero};

use crate::padic::Q;

/// Solve `a x = b` for square `a`; `None` when singular.
pub fn solve(mut a: Vec<Vec<Q>>, mut b: Vec<Q>) -> Option<Vec<Q>> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].recip();
        for j in col..n {
            a[col][j] = &a[col][j] * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in col..n {
                if !a[col][j].is_zero() {
                    let t = &f * &a[col][j];
                    a[r][j] -= t;
                }
            }
            let t = &f * &b[col];
            b[r] -= t;
        }
    }
    Some(b)
}

/// Determinant of a square matrix.
pub fn det(mut a: Vec<Vec<Q>>) -> Q {
    let n = a.len();
    let mut d = Q::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Q::zero();
        };
        if piv != col {
            a.swap(col, piv);
            d = -d;
        }
        d *= &a[col][col];
        let inv = a[col][col].recip();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] * &inv;
            for j in col..n {
                if !a[col][j].is_zero() {
                    let t = &f * &a[col][j];
                    a[r][j] -= t;
                }
            }
        }
    }
    d
}
