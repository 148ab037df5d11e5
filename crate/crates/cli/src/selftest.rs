//! Deterministic scaled-down run of the acceptance checks.

use logorder::distribution::{
    group_ring_poly, interpolate_system, measure_from_group_ring, specializations, FiniteCharacter, Specialization,
};
use logorder::eisenstein::characters::GammaCharacter;
use logorder::eisenstein::{eisen_f_qexp, euler_factor, tilde_f_sides, DirichletCharacter, EulerCase, EulerInputs};
use logorder::growth::{is_separable, omega_one, omega_valuation, t_level};
use logorder::padic::{q, qf, qpow, CycloScalar, Prime, Q};
use logorder::projsys::{
    components, in_omega_ideal, lift_components, minimal_slack, reconstruct, system_from_series, vanishing_levels,
};
use logorder::weierstrass::{divide, newton, padic_log};
use logorder::{GrowthClass, Poly, TruncSeries, Window};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::collections::BTreeMap;

use crate::commands::{prime, random_family, setup_data};
use crate::report::{Outcome, Report};
use crate::{RunConfig, Setup};

fn unit(rng: &mut ChaCha8Rng, p: u64) -> i64 {
    loop {
        let x = rng.gen_range(-(p as i64 * p as i64)..=(p * p) as i64);
        if x % p as i64 != 0 {
            return x;
        }
    }
}

fn coeff(rng: &mut ChaCha8Rng, p: u64, lo: i64, hi: i64) -> Q {
    qpow(&q(p as i64), rng.gen_range(lo..=hi)) * q(unit(rng, p))
}

fn poly(rng: &mut ChaCha8Rng, p: u64, deg: usize, lo: i64, hi: i64) -> Vec<Q> {
    (0..=deg).map(|_| coeff(rng, p, lo, hi)).collect()
}

pub fn run(c: &RunConfig) -> anyhow::Result<Report> {
    let p = prime(c)?;
    let pv = p.get();
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let mut rep = Report::new("selftest", json!({ "p": pv, "seed": c.seed }));

    rep.check("log break points", || {
        let trunc = 300.max(pv.pow(3) + 2);
        let lg = padic_log(trunc, p);
        let t2 = t_level(p, 2);
        let nd = newton(&lg, &(t2 / q(2)), &q(2))?;
        for n in 0..=2u64 {
            let t = &(&(q(1) / q(pv.pow(n as u32) as i64)) / q(pv as i64 - 1));
            let ok = nd.break_points.contains(t)
                && nd.degree_at(t) == pv.pow(n as u32)
                && nd.value_at(t) == qf(1, pv as i64 - 1) - q(n as i64);
            if !ok {
                return Outcome::fail("break point data", json!({ "n": n }));
            }
        }
        Outcome::pass(format!("t_0, t_1, t_2 from {trunc} coefficients"))
    });

    rep.check("omega closed form", || {
        let u = c.u.clone().unwrap_or_else(|| p.default_u());
        for (d, e) in [(0i64, 0i64), (0, 1), (-1, 1)] {
            for m in 0..=2u64 {
                let om = omega_one(p, &u, d, e, m);
                if !is_separable(&om) {
                    return Outcome::fail("not separable", json!({ "window": [d, e], "m": m }));
                }
                let nd = newton(&TruncSeries::poly1(p, om.coeffs()), &t_level(p, m + 1), &q(1))?;
                for n in 0..=m {
                    let (deg, val) = omega_valuation(p, d, e, m, n)?;
                    let t = t_level(p, n);
                    if nd.degree_at(&t) != deg || nd.value_at(&t) != val {
                        return Outcome::fail("closed form mismatch", json!({ "window": [d, e], "m": m, "n": n }));
                    }
                }
            }
        }
        Outcome::pass("3 windows, levels 0..2")
    });

    let div_seeds: Vec<(Vec<Q>, Vec<Q>)> = (0..20)
        .map(|_| {
            let (fd, gd) = (rng.gen_range(1..=4), rng.gen_range(0..=6));
            (poly(&mut rng, pv, fd, -2, 6), poly(&mut rng, pv, gd, -2, 6))
        })
        .collect();
    rep.check("division", || {
        for (i, (f, g)) in div_seeds.iter().enumerate() {
            let (f, g) = (TruncSeries::poly1(p, f), TruncSeries::poly1(p, g));
            let d = divide(&g, &f, &q(0))?;
            let qp = Poly::new(d.quotient.retained_poly().dense1());
            let tp = Poly::new(d.remainder.retained_poly().dense1());
            let resid = Poly::new(g.dense1()).sub(&Poly::new(f.dense1()).mul(&qp)).sub(&tp);
            let rv = TruncSeries::poly1(p, resid.coeffs()).vr(&[q(0)]).retained_min;
            let bound = d.quotient.vr(&[q(0)]).tail_bound.add(&f.vr(&[q(0)]).lower());
            let bound = bound.min(d.remainder.vr(&[q(0)]).tail_bound);
            let deg_ok = d.remainder.degree_in(0).map_or(true, |t| t < d.leading_index);
            if !d.certified || rv < bound || !deg_ok {
                return Outcome::fail("division identity", json!({ "case": i }));
            }
        }
        Outcome::pass("20 certified divisions")
    });

    let growths = [q(0), q(1)];
    let sys_inputs: Vec<Vec<Q>> = (0..5).map(|_| poly(&mut rng, pv, 20, -1, 4)).collect();
    rep.check("reconstruct round trip", || {
        for (i, f) in sys_inputs.iter().enumerate() {
            let f = TruncSeries::poly1(p, f);
            let h = &growths[i % 2];
            let w = Window::with_default_u(p, vec![0], vec![1])?;
            let hc = GrowthClass::new(vec![h.clone()])?;
            let s = system_from_series(&f, &hc, &w, 2)?;
            let g = reconstruct(&s)?;
            for m in 0..=2u64 {
                if !in_omega_ideal(&g.sub(&f)?, &w, &[m])? {
                    return Outcome::fail("reconstruction differs", json!({ "case": i, "m": m }));
                }
            }
        }
        Outcome::pass("5 systems, levels 0..2")
    });

    let van_inputs: Vec<Vec<Q>> = (0..10)
        .map(|_| {
            let mut g: Vec<Q> = (0..3).map(|_| q(rng.gen_range(-5..=5))).collect();
            g[0] = q(unit(&mut rng, pv));
            g
        })
        .collect();
    rep.check("vanishing", || {
        let w = Window::with_default_u(p, vec![0], vec![1])?;
        let hc = GrowthClass::new(vec![q(1)])?;
        for (i, g) in van_inputs.iter().enumerate() {
            let m = (i % 2) as u64;
            let om = TruncSeries::poly1(p, omega_one(p, &w.u[0], 0, 1, m).coeffs());
            let f = om.mul(&TruncSeries::poly1(p, g), &[q(0)])?;
            let lv = vanishing_levels(&f, &hc, &[0], m + 1)?;
            if lv != (0..=m + 1).map(|l| l <= m).collect::<Vec<_>>() {
                return Outcome::fail("vanishing levels", json!({ "case": i, "levels": lv }));
            }
        }
        Outcome::pass("10 products")
    });

    let lift_inputs: Vec<Vec<Q>> = (0..10).map(|_| poly(&mut rng, pv, 15, -1, 4)).collect();
    rep.check("lift", || {
        let w = Window::with_default_u(p, vec![0], vec![2])?;
        let hc = GrowthClass::new(vec![q(1)])?;
        for (i, f) in lift_inputs.iter().enumerate() {
            let s = system_from_series(&TruncSeries::poly1(p, f), &hc, &w, 2)?;
            let fam = components(&s)?;
            let n = minimal_slack(&fam, &hc)?;
            let l = lift_components(&fam, &hc, n)?;
            for (m, r) in &s.levels {
                if !in_omega_ideal(&l.at(m)?.sub(r)?, &w, m)? {
                    return Outcome::fail("lift differs", json!({ "case": i, "m": m }));
                }
            }
        }
        Outcome::pass("10 lifts")
    });

    let dist_inputs: Vec<Vec<Q>> = (0..3).map(|_| poly(&mut rng, pv, 15, -1, 3)).collect();
    rep.check("distribution interpolation", || {
        let mut count = 0;
        for (i, f) in dist_inputs.iter().enumerate() {
            let e = i as i64;
            let w = Window::with_default_u(p, vec![0], vec![e])?;
            let hc = GrowthClass::new(vec![q(e.min(1))])?;
            let s = system_from_series(&TruncSeries::poly1(p, f), &hc, &w, 2)?;
            let mu = logorder::distribution::system_to_distribution(&s)?;
            for kappa in specializations(&w, 2, p) {
                if mu.integrate_specialization(&kappa)? != interpolate_system(&s, &kappa)? {
                    return Outcome::fail("specialization mismatch", json!({ "case": i }));
                }
                count += 1;
            }
        }
        Outcome::pass(format!("{count} specializations"))
    });

    let ring_inputs: Vec<BTreeMap<Vec<u64>, Q>> = (0..5)
        .map(|_| {
            (0..3)
                .map(|_| (vec![rng.gen_range(0..pv * pv)], q(rng.gen_range(1..=9))))
                .collect()
        })
        .collect();
    rep.check("group ring", || {
        let u = p.default_u();
        for (i, elt) in ring_inputs.iter().enumerate() {
            let mu = measure_from_group_ring(p, vec![u.clone()], 2, elt)?;
            if &mu.to_group_ring(&[2])? != elt {
                return Outcome::fail("group ring round trip", json!({ "case": i }));
            }
            let gp = group_ring_poly(p, elt, 1);
            for m in 0..=2u64 {
                for fc in FiniteCharacter::all(&[m], p) {
                    let kappa = Specialization { weight: vec![0], finite: fc };
                    let v = gp.eval_cyclo(&kappa.point(&mu.window, p), &[q(0)])?.0;
                    if v != mu.integrate_specialization(&kappa)? {
                        return Outcome::fail("specialization mismatch", json!({ "case": i }));
                    }
                }
            }
        }
        Outcome::pass("5 measures")
    });

    rep.check("eisenstein coefficients", || {
        let one = DirichletCharacter::trivial(1);
        for psi in DirichletCharacter::all(pv) {
            for k in 1..=4i64 {
                if psi.parity() != if k % 2 == 0 { 1 } else { -1 } {
                    continue;
                }
                let f = eisen_f_qexp(k, 0, &one, &psi, 20)?;
                for n in 1..=20i64 {
                    let mut s = CycloScalar::zero();
                    for d in (1..=n).filter(|d| n % d == 0) {
                        s = s.add(&psi.value(d).scale(&qpow(&q(d), k - 1)));
                    }
                    if f.coeff(n as usize).at_zero() != s || f.coeff(n as usize).degree().unwrap_or(0) > 0 {
                        return Outcome::fail("divisor sum", json!({ "k": k, "n": n }));
                    }
                }
            }
        }
        Outcome::pass("F coefficients through q^20")
    });

    rep.check("character decomposition", || {
        if pv > 5 {
            return Outcome::skip("level p too large for a quick run");
        }
        let mut chars = vec![DirichletCharacter::trivial(1)];
        chars.extend(DirichletCharacter::all(pv));
        let mut count = 0;
        for k in 1..=3i64 {
            for r in 0..k {
                for c1 in &chars {
                    for c2 in &chars {
                        if c1.mul(c2).parity() != if k % 2 == 0 { 1 } else { -1 } {
                            continue;
                        }
                        let (lhs, rhs) = tilde_f_sides(k, pv, r, c1, c2, 8)?;
                        if lhs != rhs {
                            return Outcome::fail("identity", json!({ "k": k, "r": r }));
                        }
                        count += 1;
                    }
                }
            }
        }
        Outcome::pass(format!("{count} identities"))
    });

    let g = if pv == 3 { Some(random_family(&mut rng, p, 18)) } else { None };
    rep.check("rankin interpolation", || {
        let Some(g) = &g else {
            return Outcome::skip("group-ring construction is implemented for p = 3");
        };
        let data = setup_data(p, 5, Setup::A)?;
        let mut count = 0;
        for weights in [(0, 2), (2, 2)] {
            let fam = data.phi_family(weights, 1, 1, g, 6)?;
            for phi1 in DirichletCharacter::all(9).iter().step_by(2) {
                for phi2 in GammaCharacter::all(p, 1) {
                    if data.interpolation_lhs(&fam, phi1, &phi2)? != data.interpolation_rhs(weights, phi1, &phi2, g, 6)? {
                        return Outcome::fail("interpolation", json!({ "weights": [weights.0, weights.1] }));
                    }
                    count += 1;
                }
            }
        }
        Outcome::pass(format!("{count} character pairs"))
    });

    rep.check("euler factor", || {
        // (1 − 1/6)(1 − 1/10)·(1 − 7)(1 − 77/3) = 111.
        let s = |x: i64| CycloScalar::from_int(x);
        let inp = EulerInputs {
            p: Prime::new(3)?,
            s: 1,
            alpha_f: s(2),
            alpha_f_prime: s(7),
            alpha_g: s(3),
            alpha_g_prime: s(11),
            beta_g: s(5),
            char_value: s(1),
            twisted_char_value: s(1),
            ord_conductor: 0,
            ord_twisted_conductor: 0,
            case: EulerCase::PrincipalOrRamified,
        };
        let v = euler_factor(&inp)?.total;
        Outcome::from_bool(v == s(111), format!("total {v}"), Value::Null)
    });

    Ok(rep)
}
