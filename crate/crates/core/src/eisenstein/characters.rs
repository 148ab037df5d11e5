//! Dirichlet characters with cyclotomic values and characters of the
//! finite quotients of 1 + pZ_p.

use crate::error::{Error, Result};
use crate::padic::{gcd_u64, lcm_u64, q, CycloScalar, Prime, Q};
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

/// Dirichlet character mod `modulus` with values ζ_order^e stored per residue.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirichletCharacter {
    modulus: u64,
    order: u64,
    table: Vec<Option<u64>>,
    conductor: u64,
}

fn prime_powers(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * b as u128) % m as u128) as u64;
        }
        b = ((b as u128 * b as u128) % m as u128) as u64;
        e >>= 1;
    }
    r
}

fn mult_order(a: u64, m: u64) -> u64 {
    let mut x = a % m;
    let mut k = 1;
    while x != 1 % m {
        x = ((x as u128 * a as u128) % m as u128) as u64;
        k += 1;
    }
    k
}

/// Generators with orders of the unit group mod a prime power.
fn unit_generators(p: u64, e: u32) -> Vec<(u64, u64)> {
    let pe = p.pow(e);
    if p == 2 {
        return match e {
            1 => vec![],
            2 => vec![(3, 2)],
            _ => vec![(pe - 1, 2), (5, pe / 4)],
        };
    }
    let phi = pe - pe / p;
    let g = (2..pe).find(|&g| g % p != 0 && mult_order(g, pe) == phi).unwrap();
    vec![(g, phi)]
}

impl DirichletCharacter {
    fn build(modulus: u64, order: u64, table: Vec<Option<u64>>) -> DirichletCharacter {
        let mut c = DirichletCharacter {
            modulus,
            order,
            table,
            conductor: modulus,
        };
        c.normalize_order();
        c.conductor = c.compute_conductor();
        c
    }

    fn normalize_order(&mut self) {
        let mut g = self.order;
        for e in self.table.iter().flatten() {
            g = gcd_u64(g, *e);
        }
        if g > 1 {
            self.order /= g;
            for e in self.table.iter_mut().flatten() {
                *e /= g;
            }
        }
        if self.order == 0 {
            self.order = 1;
        }
    }

    /// Principal character mod n.
    pub fn trivial(n: u64) -> DirichletCharacter {
        assert!(n >= 1);
        let table = (0..n).map(|a| (gcd_u64(a, n) == 1).then_some(0)).collect();
        Self::build(n, 1, table)
    }

    /// Character from exponents of ζ_order on units; `exp` must be multiplicative.
    pub fn from_exponents(n: u64, order: u64, exp: impl Fn(u64) -> u64) -> Result<DirichletCharacter> {
        if n == 0 || order == 0 {
            return Err(Error::Invalid("modulus and order must be positive".into()));
        }
        let table: Vec<Option<u64>> = (0..n)
            .map(|a| (gcd_u64(a, n) == 1).then(|| exp(a) % order))
            .collect();
        for a in 0..n {
            for b in 0..n {
                if let (Some(x), Some(y)) = (table[a as usize], table[b as usize]) {
                    let ab = ((a * b) % n) as usize;
                    if table[ab] != Some((x + y) % order) {
                        return Err(Error::Invalid("exponent table is not multiplicative".into()));
                    }
                }
            }
        }
        Ok(Self::build(n, order, table))
    }

    /// All characters mod n, principal first.
    pub fn all(n: u64) -> Vec<DirichletCharacter> {
        assert!(n >= 1);
        let mut gens: Vec<(u64, u64, u64)> = Vec::new();
        for (p, e) in prime_powers(n) {
            for (g, o) in unit_generators(p, e) {
                gens.push((p.pow(e), g, o));
            }
        }
        let exponent = gens.iter().fold(1, |acc, g| lcm_u64(acc, g.2));
        // Discrete logs of each unit along every generator.
        let logs: Vec<Option<Vec<u64>>> = (0..n)
            .map(|a| {
                if gcd_u64(a, n) != 1 {
                    return None;
                }
                Some(component_logs(a, &gens))
            })
            .collect();
        let mut choices: Vec<Vec<u64>> = vec![vec![]];
        for g in &gens {
            let mut next = Vec::new();
            for c in &choices {
                for j in 0..g.2 {
                    let mut c2 = c.clone();
                    c2.push(j);
                    next.push(c2);
                }
            }
            choices = next;
        }
        choices
            .into_iter()
            .map(|c| {
                let table = logs
                    .iter()
                    .map(|l| {
                        l.as_ref().map(|l| {
                            let mut e = 0u64;
                            for (i, g) in gens.iter().enumerate() {
                                e += c[i] * l[i] * (exponent / g.2);
                            }
                            e % exponent
                        })
                    })
                    .collect();
                Self::build(n, exponent, table)
            })
            .collect()
    }

    /// Teichmüller character mod p sending a primitive root to ζ_{p−1}.
    pub fn teichmuller(p: Prime) -> DirichletCharacter {
        let pp = p.get();
        if pp == 2 {
            return Self::trivial(2);
        }
        let g = unit_generators(pp, 1)[0].0;
        let mut table = vec![None; pp as usize];
        let mut x = 1;
        for l in 0..pp - 1 {
            table[x as usize] = Some(l);
            x = x * g % pp;
        }
        Self::build(pp, pp - 1, table)
    }

    /// Modulus N.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Order of the value group.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Conductor.
    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// Exponent e with value ζ_order^e, or None off the units.
    pub fn exponent(&self, a: i64) -> Option<u64> {
        self.table[a.rem_euclid(self.modulus as i64) as usize]
    }

    /// Value at an integer.
    pub fn value(&self, a: i64) -> CycloScalar {
        match self.exponent(a) {
            Some(e) => CycloScalar::root_of_unity(self.order, e as i64),
            None => CycloScalar::zero(),
        }
    }

    /// Value at a rational with denominator prime to the modulus.
    pub fn value_q(&self, x: &Q) -> Result<CycloScalar> {
        let n = num_bigint::BigInt::from(self.modulus);
        let den = x.denom().mod_floor(&n);
        let den = den.to_u64().unwrap();
        if gcd_u64(den, self.modulus) != 1 {
            return Err(Error::Invalid("denominator not prime to the modulus".into()));
        }
        let inv = crate::padic::mod_inverse(&num_bigint::BigInt::from(den), &n);
        let r = (x.numer() * inv).mod_floor(&n);
        Ok(self.value(r.to_i64().unwrap()))
    }

    /// Rational value when the character is quadratic or trivial.
    pub fn rational_value(&self, a: i64) -> Option<Q> {
        self.value(a).as_rational()
    }

    /// True when every unit maps to 1.
    pub fn is_trivial(&self) -> bool {
        self.table.iter().flatten().all(|e| *e == 0)
    }

    /// Value at −1 as ±1.
    pub fn parity(&self) -> i64 {
        match self.exponent(-1) {
            Some(0) => 1,
            Some(e) if 2 * e == self.order => -1,
            _ => unreachable!("character value at -1 is ±1"),
        }
    }

    /// Same character induced to a multiple of the modulus.
    pub fn lift(&self, n: u64) -> Result<DirichletCharacter> {
        if n % self.modulus != 0 {
            return Err(Error::LevelMismatch(format!(
                "{} is not a multiple of {}",
                n, self.modulus
            )));
        }
        let table = (0..n)
            .map(|a| {
                if gcd_u64(a, n) != 1 {
                    None
                } else {
                    self.table[(a % self.modulus) as usize]
                }
            })
            .collect();
        Ok(Self::build(n, self.order, table))
    }

    /// Product character on the lcm of the moduli.
    pub fn mul(&self, o: &DirichletCharacter) -> DirichletCharacter {
        let n = lcm_u64(self.modulus, o.modulus);
        let ord = lcm_u64(self.order, o.order);
        let (s1, s2) = (ord / self.order, ord / o.order);
        let table = (0..n)
            .map(|a| {
                match (
                    self.table[(a % self.modulus) as usize],
                    o.table[(a % o.modulus) as usize],
                ) {
                    (Some(x), Some(y)) => Some((x * s1 + y * s2) % ord),
                    _ => None,
                }
            })
            .collect();
        Self::build(n, ord, table)
    }

    /// Integer power (negative exponents allowed).
    pub fn pow(&self, e: i64) -> DirichletCharacter {
        let ord = self.order as i64;
        let table = self
            .table
            .iter()
            .map(|x| x.map(|x| ((x as i64 * e).rem_euclid(ord)) as u64))
            .collect();
        Self::build(self.modulus, self.order, table)
    }

    /// Inverse character.
    pub fn inv(&self) -> DirichletCharacter {
        self.pow(-1)
    }

    fn compute_conductor(&self) -> u64 {
        let n = self.modulus;
        let mut divisors: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
        divisors.sort_unstable();
        for d in divisors {
            let ok = (0..n).all(|a| {
                a % d != 1 % d || gcd_u64(a, n) != 1 || self.table[a as usize] == Some(0)
            });
            if ok {
                return d;
            }
        }
        n
    }

    /// Primitive character inducing this one.
    pub fn primitive(&self) -> DirichletCharacter {
        let c = self.conductor;
        let table = (0..c)
            .map(|b| {
                if gcd_u64(b, c) != 1 {
                    return None;
                }
                let mut a = b;
                while gcd_u64(a, self.modulus) != 1 {
                    a += c;
                }
                self.table[(a % self.modulus) as usize]
            })
            .collect();
        Self::build(c, self.order, table)
    }
}

fn component_logs(a: u64, gens: &[(u64, u64, u64)]) -> Vec<u64> {
    // Group generators by their prime-power modulus and solve by search.
    let mut out = vec![0; gens.len()];
    let mut i = 0;
    while i < gens.len() {
        let m = gens[i].0;
        let mut j = i;
        while j < gens.len() && gens[j].0 == m {
            j += 1;
        }
        let target = a % m;
        let block = &gens[i..j];
        let mut found = false;
        if block.len() == 1 {
            let (_, g, o) = block[0];
            let mut x = 1 % m;
            for l in 0..o {
                if x == target {
                    out[i] = l;
                    found = true;
                    break;
                }
                x = x * g % m;
            }
        } else {
            let (_, g0, o0) = block[0];
            let (_, g1, o1) = block[1];
            'outer: for l0 in 0..o0 {
                let base = pow_mod(g0, l0, m);
                let mut x = base;
                for l1 in 0..o1 {
                    if x == target {
                        out[i] = l0;
                        out[i + 1] = l1;
                        found = true;
                        break 'outer;
                    }
                    x = x * g1 % m;
                }
            }
        }
        debug_assert!(found);
        i = j;
    }
    out
}

/// Rational Teichmüller value ω(d) ∈ {±1}; exact only for p = 3.
pub fn teichmuller_rational(p: Prime, d: i64) -> Result<i64> {
    if p.get() != 3 {
        return Err(Error::Invalid(
            "rational Teichmüller values require p = 3".into(),
        ));
    }
    match d.rem_euclid(3) {
        1 => Ok(1),
        2 => Ok(-1),
        _ => Err(Error::Invalid("argument divisible by p".into())),
    }
}

/// Character of 1 + pZ_p factoring through level `level`: u^l ↦ ζ_{p^level}^{j·l}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaCharacter {
    /// Prime.
    pub p: Prime,
    /// Level m (conductor p^{m+1}).
    pub level: u32,
    /// Exponent j mod p^m.
    pub j: u64,
}

/// Exponent l mod p^level with z ≡ u^l mod p^{level+1}, u = 1 + p.
pub fn gamma_log(p: Prime, z: &Q, level: u32) -> Result<u64> {
    let pp = p.get();
    let m = pp.pow(level + 1);
    let n = num_bigint::BigInt::from(m);
    let den = z.denom().mod_floor(&n).to_u64().unwrap();
    if den % pp == 0 {
        return Err(Error::Invalid("point is not a p-adic unit".into()));
    }
    let inv = crate::padic::mod_inverse(&num_bigint::BigInt::from(den), &n);
    let r = (z.numer() * inv).mod_floor(&n).to_u64().unwrap();
    let u = if pp == 2 { 5 } else { pp + 1 };
    let mut x = 1 % m;
    for l in 0..pp.pow(level) {
        if x == r {
            return Ok(l);
        }
        x = x * u % m;
    }
    Err(Error::Invalid("point is not in 1 + pZ_p".into()))
}

impl GammaCharacter {
    /// Trivial character.
    pub fn trivial(p: Prime) -> GammaCharacter {
        GammaCharacter { p, level: 0, j: 0 }
    }

    /// All characters of level exactly ≤ `level` (j over 0..p^level).
    pub fn all(p: Prime, level: u32) -> Vec<GammaCharacter> {
        (0..p.get().pow(level))
            .map(|j| GammaCharacter { p, level, j })
            .collect()
    }

    /// Value on the coset u^l.
    pub fn value_on_log(&self, l: u64) -> CycloScalar {
        let n = self.p.get().pow(self.level);
        CycloScalar::root_of_unity(n, ((self.j * l) % n) as i64)
    }

    /// Value at a point of 1 + pZ_(p).
    pub fn value(&self, z: &Q) -> Result<CycloScalar> {
        Ok(self.value_on_log(gamma_log(self.p, z, self.level)?))
    }

    /// Dirichlet character mod p^{level+1}: d ↦ φ(d·ω(d)^{-1}); p = 3 only.
    pub fn as_dirichlet(&self) -> Result<DirichletCharacter> {
        let pp = self.p.get();
        let m = pp.pow(self.level + 1);
        let ord = pp.pow(self.level);
        let mut table = vec![None; m as usize];
        for d in 1..m {
            if d % pp == 0 {
                continue;
            }
            let w = teichmuller_rational(self.p, d as i64)?;
            let z = q(d as i64 * w);
            let l = gamma_log(self.p, &z, self.level)?;
            table[d as usize] = Some((self.j * l) % ord);
        }
        Ok(DirichletCharacter::build(m, ord, table))
    }
}

/// Divisors of n in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// x^e for a nonzero integer and any integer exponent.
pub(crate) fn int_pow(x: i64, e: i64) -> Q {
    let b = Q::from_integer(x.into());
    if e >= 0 {
        num_traits::pow(b, e as usize)
    } else {
        num_traits::pow(Q::one() / b, (-e) as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_orthogonality() {
        for n in [1u64, 2, 3, 4, 8, 9, 12, 15, 16, 27] {
            let chars = DirichletCharacter::all(n);
            assert_eq!(chars.len() as u64, crate::padic::euler_phi(n));
            for c in &chars {
                let s = (0..n as i64).fold(CycloScalar::zero(), |acc, a| acc.add(&c.value(a)));
                if c.is_trivial() {
                    assert_eq!(s, CycloScalar::from_int(crate::padic::euler_phi(n) as i64));
                } else {
                    assert!(s.is_zero(), "n={n}");
                }
            }
            for i in 0..chars.len() {
                for j in 0..i {
                    assert_ne!(chars[i], chars[j]);
                }
            }
        }
    }

    #[test]
    fn multiplicative_and_conductor() {
        for c in DirichletCharacter::all(36) {
            for a in 0..36i64 {
                for b in 0..36i64 {
                    assert_eq!(c.value(a * b), c.value(a).mul(&c.value(b)));
                }
            }
            let prim = c.primitive();
            assert_eq!(prim.conductor(), prim.modulus());
            assert_eq!(prim.lift(36).unwrap(), c);
        }
        let w = DirichletCharacter::teichmuller(Prime::new(3).unwrap());
        assert_eq!(w.parity(), -1);
        assert_eq!(w.value(2), CycloScalar::from_int(-1));
        assert_eq!(w.lift(12).unwrap().conductor(), 3);
        assert!(w.mul(&w).is_trivial());
    }

    #[test]
    fn gamma_character_dirichlet() {
        let p = Prime::new(3).unwrap();
        let phi = GammaCharacter { p, level: 1, j: 1 };
        let d = phi.as_dirichlet().unwrap();
        assert_eq!(d.modulus(), 9);
        assert_eq!(d.parity(), 1);
        assert_eq!(d.value(4), CycloScalar::root_of_unity(3, 1));
        assert_eq!(d.value(5), CycloScalar::root_of_unity(3, 1));
        assert_eq!(gamma_log(p, &crate::padic::qf(1, 4), 1).unwrap(), 2);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
    }
}
