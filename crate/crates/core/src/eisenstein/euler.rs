//! The Euler factor at p as a product of three explicit pieces.

use crate::error::Result;
use crate::padic::{qpow, CycloScalar, Prime};

/// Branch of the first two pieces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EulerCase {
    /// Principal character or ramified at p.
    PrincipalOrRamified,
    /// Special unramified case; requires a unit conductor at p.
    SpecialUnramified,
}

/// Inputs: Frobenius roots, character values at p, conductor orders and s.
#[derive(Debug, Clone)]
pub struct EulerInputs {
    /// Prime.
    pub p: Prime,
    /// Evaluation point s.
    pub s: i64,
    /// Unit root of the first form.
    pub alpha_f: CycloScalar,
    /// Second root of the first form.
    pub alpha_f_prime: CycloScalar,
    /// Unit root of the second form.
    pub alpha_g: CycloScalar,
    /// Second root of the second form.
    pub alpha_g_prime: CycloScalar,
    /// Root of the second form paired with the twisting character.
    pub beta_g: CycloScalar,
    /// Value at p of the primitive character attached to the first twist.
    pub char_value: CycloScalar,
    /// Value at p of the primitive character attached to the second twist.
    pub twisted_char_value: CycloScalar,
    /// p-adic order of the conductor of the first twist.
    pub ord_conductor: u32,
    /// p-adic order of the conductor of the second twist.
    pub ord_twisted_conductor: u32,
    /// Branch.
    pub case: EulerCase,
}

/// The three pieces and their product.
#[derive(Debug, Clone, PartialEq)]
pub struct EulerFactor {
    /// First piece.
    pub e1: CycloScalar,
    /// Second piece.
    pub e2: CycloScalar,
    /// Third piece.
    pub e3: CycloScalar,
    /// e1·e2·e3.
    pub total: CycloScalar,
}

/// Evaluate the Euler factor exactly; conjugation is ζ ↦ ζ^{-1}.
pub fn euler_factor(inp: &EulerInputs) -> Result<EulerFactor> {
    if inp.case == EulerCase::SpecialUnramified && inp.ord_conductor != 0 {
        return Err(crate::error::Error::Invalid(
            "special unramified case requires a unit conductor".into(),
        ));
    }
    let p = inp.p.q();
    let ps1 = CycloScalar::from_q(qpow(&p, inp.s - 1));
    let pms = CycloScalar::from_q(qpow(&p, -inp.s));
    let one = CycloScalar::one();
    let r1 = ps1.div(&inp.alpha_g.conj().mul(&inp.alpha_f))?;
    let r2 = ps1.div(&inp.beta_g.conj().mul(&inp.alpha_f))?;
    let (e1, e2) = match inp.case {
        EulerCase::PrincipalOrRamified => (
            r1.pow(inp.ord_conductor as i64)?.mul(&r2.pow(inp.ord_twisted_conductor as i64)?),
            one.sub(&inp.char_value.mul(&r1))
                .mul(&one.sub(&inp.twisted_char_value.mul(&r2))),
        ),
        EulerCase::SpecialUnramified => (r1.neg(), one.sub(&r2)),
    };
    let e3 = one
        .sub(&inp.char_value.mul(&inp.alpha_f_prime).mul(&inp.alpha_g.conj()).mul(&pms))
        .mul(&one.sub(
            &inp.twisted_char_value
                .mul(&inp.alpha_f_prime)
                .mul(&inp.alpha_g_prime.conj())
                .mul(&pms),
        ));
    let total = e1.mul(&e2).mul(&e3);
    Ok(EulerFactor { e1, e2, e3, total })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::{q, qf};

    fn base(case: EulerCase) -> EulerInputs {
        EulerInputs {
            p: Prime::new(3).unwrap(),
            s: 2,
            alpha_f: CycloScalar::from_int(2),
            alpha_f_prime: CycloScalar::from_int(5),
            alpha_g: CycloScalar::root_of_unity(3, 1),
            alpha_g_prime: CycloScalar::from_int(7),
            beta_g: CycloScalar::from_int(-1),
            char_value: CycloScalar::zero(),
            twisted_char_value: CycloScalar::zero(),
            ord_conductor: 2,
            ord_twisted_conductor: 1,
            case,
        }
    }

    #[test]
    fn ramified_branch() {
        let e = euler_factor(&base(EulerCase::PrincipalOrRamified)).unwrap();
        assert_eq!(e.e2, CycloScalar::one());
        assert_eq!(e.e3, CycloScalar::one());
        // (3/(ζ^{-1}·2))²·(3/(−2)).
        let r1 = CycloScalar::root_of_unity(3, 1).scale(&qf(3, 2));
        assert_eq!(e.e1, r1.mul(&r1).scale(&qf(-3, 2)));
    }

    #[test]
    fn special_branch() {
        let mut i = base(EulerCase::SpecialUnramified);
        i.ord_conductor = 0;
        let e = euler_factor(&i).unwrap();
        assert_eq!(e.e1, CycloScalar::root_of_unity(3, 1).scale(&qf(-3, 2)));
        assert_eq!(e.e2, CycloScalar::from_q(q(1) + qf(3, 2)));
        i.ord_conductor = 1;
        assert!(euler_factor(&i).is_err());
        i.ord_conductor = 0;
        i.alpha_f = CycloScalar::zero();
        assert!(euler_factor(&i).is_err());
    }
}
