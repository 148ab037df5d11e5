//! Group-ring Eisenstein families, the distributions built from them, their
//! interpolation and refinement identities, and the admissibility congruence.

use super::characters::{divisors, int_pow, teichmuller_rational, DirichletCharacter, GammaCharacter};
use super::forms::eisen_f_qexp;
use super::qexp::{GroupRingElt, GroupRingSeries, QExpansion, XPoly};
use crate::error::{Error, Result};
use crate::padic::{gcd_u64, lcm_u64, ordp_rational, q, CycloScalar, Prime, Val, Q};
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Fixed data: prime, weight, tame level and the two auxiliary characters.
#[derive(Debug, Clone)]
pub struct RankinData {
    /// Prime (only 3 gives rational Teichmüller values).
    pub p: Prime,
    /// Weight k.
    pub k: i64,
    /// Tame level, prime to p.
    pub tame_level: u64,
    /// Character of modulus dividing tame_level·p^{psi_level+1}.
    pub psi: DirichletCharacter,
    /// p-power level of `psi`.
    pub psi_level: u32,
    /// Character of modulus dividing tame_level·p.
    pub xi: DirichletCharacter,
}

/// Operator data for one weight pair: F exponents, δ start and δ iterations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BranchData {
    /// True in the branch 2·first < k − second.
    pub holomorphic_first: bool,
    /// Exponents of n/d, d, n in the family coefficient.
    pub exps: [i64; 3],
    /// Index m of the first δ_m.
    pub delta_start: i64,
    /// Number of δ iterations.
    pub delta_count: u32,
    /// Weight of the matching F series.
    pub weight: i64,
}

/// Values φ((a1, a2)) on all cosets of a level pair.
#[derive(Debug, Clone)]
pub struct PhiFamily {
    /// Weight pair.
    pub weights: (i64, i64),
    /// Level in the first variable: a1 ranges over units mod p^{m1+1}.
    pub m1: u32,
    /// Level in the second variable: a2 ranges over 0..p^{m2}.
    pub m2: u32,
    /// φ((a1, a2)).
    pub values: BTreeMap<(u64, u64), QExpansion>,
}

/// Refinement direction between two levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Refine the unit variable.
    First,
    /// Refine the 1 + pZ_p variable.
    Second,
}

impl RankinData {
    /// Validate and build.
    pub fn new(
        p: Prime,
        k: i64,
        tame_level: u64,
        psi: DirichletCharacter,
        psi_level: u32,
        xi: DirichletCharacter,
    ) -> Result<RankinData> {
        teichmuller_rational(p, 1)?;
        if tame_level == 0 || tame_level % p.get() == 0 {
            return Err(Error::Invalid("tame level must be positive and prime to p".into()));
        }
        if (tame_level * p.pow(psi_level + 1)) % psi.modulus() != 0 {
            return Err(Error::LevelMismatch("psi modulus too large".into()));
        }
        if (tame_level * p.get()) % xi.modulus() != 0 {
            return Err(Error::LevelMismatch("xi modulus too large".into()));
        }
        Ok(RankinData { p, k, tame_level, psi, psi_level, xi })
    }

    /// Branch data for a weight pair.
    pub fn branch(&self, weights: (i64, i64)) -> Result<BranchData> {
        let (i1, i2) = weights;
        let k = self.k;
        if i1 < 0 || i2 < 2 || i1 + i2 >= k {
            return Err(Error::Invalid("requires first >= 0, second >= 2, sum < k".into()));
        }
        Ok(if 2 * i1 < k - i2 {
            BranchData {
                holomorphic_first: true,
                exps: [0, k - 2 * i1 - 1, 0],
                delta_start: k - 2 * i1 - i2,
                delta_count: i1 as u32,
                weight: k - 2 * i1 - i2,
            }
        } else {
            BranchData {
                holomorphic_first: false,
                exps: [-k + 2 * i1 + 1, 0, i2],
                delta_start: i2 - k + 2 * i1 + 2,
                delta_count: (k - i1 - i2 - 1) as u32,
                weight: i2 - k + 2 * i1 + 2,
            }
        })
    }

    /// Modulus tame_level·p^{max(m, psi_level)+1} of the families at level m.
    pub fn family_modulus(&self, m: u32) -> u64 {
        self.tame_level * self.p.pow(m.max(self.psi_level) + 1)
    }

    /// Group-ring point 1/(d·ω(d)).
    fn point(&self, d: u64) -> Result<Q> {
        let w = teichmuller_rational(self.p, d as i64)?;
        Ok(Q::one() / q(d as i64 * w))
    }

    /// Σ_n Σ_{d|n, d ≡ a mod modulus} (n/d)^{e0} d^{e1} n^{e2} [1/(dω(d))] q^n.
    pub fn f_family(&self, exps: [i64; 3], a: i64, modulus: u64, trunc: usize) -> Result<GroupRingSeries> {
        if modulus % self.p.get() != 0 || gcd_u64(a.rem_euclid(modulus as i64) as u64, self.p.get()) != 1 {
            return Err(Error::Invalid("residue must be a unit mod a multiple of p".into()));
        }
        self.weighted_family(exps, trunc, |d| {
            ((d as i64 - a).rem_euclid(modulus as i64) == 0).then(CycloScalar::one)
        })
    }

    fn weighted_family(
        &self,
        exps: [i64; 3],
        trunc: usize,
        weight: impl Fn(u64) -> Option<CycloScalar>,
    ) -> Result<GroupRingSeries> {
        let mut coeffs = vec![GroupRingElt::default(); trunc + 1];
        for (n, slot) in coeffs.iter_mut().enumerate().skip(1) {
            for d in divisors(n as u64) {
                let Some(w) = weight(d) else { continue };
                if w.is_zero() {
                    continue;
                }
                let v = int_pow((n as u64 / d) as i64, exps[0])
                    * int_pow(d as i64, exps[1])
                    * int_pow(n as i64, exps[2]);
                slot.add_term(self.point(d)?, XPoly::constant(w.scale(&v)));
            }
        }
        Ok(GroupRingSeries::new(trunc, coeffs))
    }

    /// H_c: the δ-iterate of the family at residue c mod the level-m modulus.
    pub fn h_c(&self, weights: (i64, i64), c: i64, m: u32, trunc: usize) -> Result<GroupRingSeries> {
        let b = self.branch(weights)?;
        let f = self.f_family(b.exps, c, self.family_modulus(m), trunc)?;
        Ok(f.delta_iter(b.delta_start, b.delta_count))
    }

    fn twist_character(&self, m: u32) -> Result<DirichletCharacter> {
        self.psi.mul(&self.xi.inv()).lift(self.family_modulus(m))
    }

    /// Σ_{c ≡ b mod p^{m+1}} (ψξ^{-1})(c)·H_c as one weighted family.
    pub fn h_sum(&self, weights: (i64, i64), b: u64, m: u32, trunc: usize) -> Result<GroupRingSeries> {
        let br = self.branch(weights)?;
        let chi = self.twist_character(m)?;
        let pm = self.p.pow(m + 1);
        let f = self.weighted_family(br.exps, trunc, |d| {
            (d % pm == b % pm).then(|| chi.value(d as i64))
        })?;
        Ok(f.delta_iter(br.delta_start, br.delta_count))
    }

    /// Units mod p^{m+1}.
    pub fn units(&self, m: u32) -> Vec<u64> {
        let pm = self.p.pow(m + 1);
        (1..pm).filter(|b| b % self.p.get() != 0).collect()
    }

    fn phi_big_inner(
        &self,
        a: u64,
        m: u32,
        g: &GroupRingSeries,
        trunc: usize,
        step: usize,
        sums: &BTreeMap<u64, GroupRingSeries>,
    ) -> GroupRingSeries {
        let pm = self.p.pow(m + 1);
        let g = g.truncate(trunc);
        let mut acc = GroupRingSeries::zero(trunc);
        for b in self.units(m) {
            let res = (a * b % pm) * b % pm;
            let sl = g.slice(res as i64, pm);
            acc = acc.add(&sl.mul_filtered(&sums[&b], step));
        }
        acc
    }

    fn h_sums(&self, weights: (i64, i64), m: u32, trunc: usize) -> Result<BTreeMap<u64, GroupRingSeries>> {
        self.units(m)
            .into_iter()
            .map(|b| Ok((b, self.h_sum(weights, b, m, trunc)?)))
            .collect()
    }

    /// Φ(a) = Σ_b G_{≡ab² mod p^{m+1}}·Σ_{c≡b}(ψξ^{-1})(c)H_c through q^trunc.
    pub fn phi_big(&self, weights: (i64, i64), a: u64, m: u32, g: &GroupRingSeries, trunc: usize) -> Result<GroupRingSeries> {
        if trunc > g.trunc() {
            return Err(Error::InsufficientTruncation("G is not known far enough".into()));
        }
        let sums = self.h_sums(weights, m, trunc)?;
        Ok(self.phi_big_inner(a, m, g, trunc, 1, &sums))
    }

    /// φ((a1, a2)) = (−1)^{first}·T_p(∫_{a2} χ^{second} dΦ(a1)) through q^trunc.
    pub fn phi_small(
        &self,
        weights: (i64, i64),
        cosets: (u64, u64),
        levels: (u32, u32),
        g: &GroupRingSeries,
        trunc: usize,
    ) -> Result<QExpansion> {
        let pp = self.p.get() as usize;
        let big = self.phi_big(weights, cosets.0, levels.0, g, pp * trunc)?;
        self.finish(weights, &big, cosets.1, levels.1)
    }

    fn finish(&self, weights: (i64, i64), big: &GroupRingSeries, a2: u64, m2: u32) -> Result<QExpansion> {
        let integ = big.integrate(self.p, m2, a2, weights.1)?;
        let sign = if weights.0 % 2 == 0 { 1 } else { -1 };
        Ok(integ.hecke_tp(self.p.get()).scale(&CycloScalar::from_int(sign)))
    }

    /// φ on every coset pair at levels (m1, m2), through q^trunc.
    pub fn phi_family(&self, weights: (i64, i64), m1: u32, m2: u32, g: &GroupRingSeries, trunc: usize) -> Result<PhiFamily> {
        let pp = self.p.get() as usize;
        let big_trunc = pp * trunc;
        if big_trunc > g.trunc() {
            return Err(Error::InsufficientTruncation("G is not known far enough".into()));
        }
        let sums = self.h_sums(weights, m1, big_trunc)?;
        let mut values = BTreeMap::new();
        for a1 in self.units(m1) {
            // Only the coefficients at multiples of p survive T_p.
            let big = self.phi_big_inner(a1, m1, g, big_trunc, pp, &sums);
            for a2 in 0..self.p.pow(m2) {
                values.insert((a1, a2), self.finish(weights, &big, a2, m2)?);
            }
        }
        Ok(PhiFamily { weights, m1, m2, values })
    }

    /// Σ_{a1,a2} φ1(a1)φ2(a2)·φ((a1, a2)) from a family at the characters' levels or finer.
    pub fn interpolation_lhs(&self, fam: &PhiFamily, phi1: &DirichletCharacter, phi2: &GammaCharacter) -> Result<QExpansion> {
        let pm = self.p.pow(fam.m1 + 1);
        if pm % phi1.modulus() != 0 || phi2.level > fam.m2 {
            return Err(Error::LevelMismatch("family coarser than the characters".into()));
        }
        let trunc = fam.values.values().next().map_or(0, |v| v.trunc());
        let mut acc = QExpansion::zero(trunc);
        for ((a1, a2), v) in &fam.values {
            let c = phi1.value(*a1 as i64).mul(&phi2.value_on_log(*a2));
            acc = acc.add(&v.scale(&c));
        }
        Ok(acc)
    }

    /// (−1)^{first}·T_p((κ(G)⊗φ1)·δ(F)) with F = F_w(1, χ) or F_w(χ, 1).
    pub fn interpolation_rhs(
        &self,
        weights: (i64, i64),
        phi1: &DirichletCharacter,
        phi2: &GammaCharacter,
        g: &GroupRingSeries,
        trunc: usize,
    ) -> Result<QExpansion> {
        let br = self.branch(weights)?;
        let pp = self.p.get();
        let m1 = (1..).find(|&e| pp.pow(e) % phi1.modulus() == 0).unwrap() - 1;
        let level = m1.max(phi2.level).max(self.psi_level);
        let omega = DirichletCharacter::teichmuller(self.p);
        let chi = self
            .psi
            .mul(&self.xi.inv())
            .mul(&phi1.pow(-2))
            .mul(&omega.pow(weights.1))
            .mul(&phi2.as_dirichlet()?.inv());
        let modulus = lcm_u64(self.tame_level * pp.pow(level + 1), chi.modulus());
        let chi = chi.lift(modulus)?;
        let big_trunc = pp as usize * trunc;
        if big_trunc > g.trunc() {
            return Err(Error::InsufficientTruncation("G is not known far enough".into()));
        }
        let one = DirichletCharacter::trivial(1);
        let f = if br.holomorphic_first {
            eisen_f_qexp(br.weight, 0, &one, &chi, big_trunc)?
        } else {
            eisen_f_qexp(br.weight, 0, &chi, &one, big_trunc)?
        };
        let f = f.delta_iter(br.delta_start, br.delta_count);
        let kg = g.truncate(big_trunc).specialize(weights.1, phi2)?.twist(phi1);
        let prod = kg.mul_filtered(&f, pp as usize);
        let sign = if weights.0 % 2 == 0 { 1 } else { -1 };
        Ok(prod.hecke_tp(pp).scale(&CycloScalar::from_int(sign)))
    }
}

/// Fiber sums of the finer family equal the coarser values.
pub fn distribution_property_check(p: Prime, coarse: &PhiFamily, fine: &PhiFamily) -> Result<bool> {
    if coarse.weights != fine.weights {
        return Err(Error::LevelMismatch("weight pairs differ".into()));
    }
    let direction = if fine.m1 == coarse.m1 + 1 && fine.m2 == coarse.m2 {
        Direction::First
    } else if fine.m2 == coarse.m2 + 1 && fine.m1 == coarse.m1 {
        Direction::Second
    } else {
        return Err(Error::LevelMismatch("families are not adjacent".into()));
    };
    let pc1 = p.pow(coarse.m1 + 1);
    let pc2 = p.pow(coarse.m2);
    for ((a1, a2), v) in &coarse.values {
        let mut acc = QExpansion::zero(v.trunc());
        for ((b1, b2), w) in &fine.values {
            let hit = match direction {
                Direction::First => b1 % pc1 == *a1 && b2 == a2,
                Direction::Second => b1 == a1 && b2 % pc2.max(1) == *a2,
            };
            if hit {
                acc = acc.add(w);
            }
        }
        if &acc.truncate(v.trunc()) != v {
            return Ok(false);
        }
    }
    Ok(true)
}

/// ord_p((n2/t² + value)^e) ≥ e·depth.
pub fn admissible_congruence_check(p: Prime, value: &Q, t: &Q, n2: &Q, e: u32, depth: i64) -> Result<bool> {
    if e == 0 {
        return Ok(true);
    }
    if t.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let base = n2 / (t * t) + value;
    Ok(match ordp_rational(&base, p) {
        Val::PosInf => true,
        Val::Fin(v) => v * q(e as i64) >= q(e as i64 * depth),
        Val::NegInf => false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn setup() -> RankinData {
        let p = Prime::new(3).unwrap();
        RankinData::new(p, 5, 1, DirichletCharacter::teichmuller(p), 0, DirichletCharacter::trivial(1)).unwrap()
    }

    fn random_g(seed: u64, trunc: usize) -> GroupRingSeries {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coeffs = (0..=trunc)
            .map(|n| {
                let mut e = GroupRingElt::default();
                if n > 0 {
                    for _ in 0..rng.gen_range(1..=2) {
                        let l = rng.gen_range(0..9u32);
                        let z = num_traits::pow(q(4), l as usize);
                        e.add_term(z, XPoly::from_q(q(rng.gen_range(-3..=3))));
                    }
                }
                e
            })
            .collect();
        GroupRingSeries::new(trunc, coeffs)
    }

    #[test]
    fn h_sum_matches_explicit_sum() {
        let d = setup();
        let modulus = d.family_modulus(0);
        let mut acc = GroupRingSeries::zero(12);
        for c in 1..modulus as i64 {
            if c % 3 != 1 {
                continue;
            }
            let chi = d.psi.mul(&d.xi.inv()).value(c);
            acc = acc.add(&d.h_c((1, 2), c, 0, 12).unwrap().scale(&chi));
        }
        assert_eq!(acc, d.h_sum((1, 2), 1, 0, 12).unwrap());
    }

    #[test]
    fn zero_g_gives_zero() {
        let d = setup();
        let fam = d.phi_family((0, 2), 0, 0, &GroupRingSeries::zero(9), 3).unwrap();
        assert!(fam.values.values().all(|v| v.is_zero()));
    }

    #[test]
    fn interpolation_small() {
        let d = setup();
        let g = random_g(7, 18);
        let mut nonzero = 0;
        for weights in [(0, 2), (1, 2), (2, 2)] {
            let fam = d.phi_family(weights, 1, 1, &g, 6).unwrap();
            for phi1 in DirichletCharacter::all(9).into_iter().take(3) {
                for phi2 in GammaCharacter::all(d.p, 1) {
                    let l = d.interpolation_lhs(&fam, &phi1, &phi2).unwrap();
                    let r = d.interpolation_rhs(weights, &phi1, &phi2, &g, 6).unwrap();
                    assert_eq!(l, r, "{weights:?}");
                    nonzero += usize::from(!l.is_zero());
                }
            }
        }
        assert!(nonzero > 10);
    }

    #[test]
    fn distribution_both_directions() {
        let d = setup();
        let g = random_g(11, 15);
        let coarse = d.phi_family((0, 3), 0, 0, &g, 5).unwrap();
        let fine1 = d.phi_family((0, 3), 1, 0, &g, 5).unwrap();
        let fine2 = d.phi_family((0, 3), 0, 1, &g, 5).unwrap();
        assert!(distribution_property_check(d.p, &coarse, &fine1).unwrap());
        assert!(distribution_property_check(d.p, &coarse, &fine2).unwrap());
        assert!(distribution_property_check(d.p, &coarse, &coarse).is_err());
        let direct = d.phi_small((0, 3), (1, 0), (0, 0), &g, 5).unwrap();
        assert_eq!(&direct, &coarse.values[&(1, 0)]);
    }

    #[test]
    fn congruence_examples() {
        let p = Prime::new(3).unwrap();
        assert!(admissible_congruence_check(p, &q(1), &q(1), &q(2), 2, 1).unwrap());
        assert!(admissible_congruence_check(p, &q(1), &q(1), &q(1), 0, 5).unwrap());
        assert!(!admissible_congruence_check(p, &q(1), &q(1), &q(1), 1, 1).unwrap());
    }
}
