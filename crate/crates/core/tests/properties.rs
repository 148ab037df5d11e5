//! Property tests for the algebraic invariants of each module.

use logorder::eisenstein::special::bernoulli_poly;
use logorder::eisenstein::{DirichletCharacter, QExpansion, XPoly};
use logorder::growth::{is_separable, omega_one};
use logorder::padic::{ordp_rational, q, qf, qpow, CycloScalar, Prime, Val, Q};
use logorder::projsys::system_from_series;
use logorder::series::{ell, SeriesJson};
use logorder::weierstrass::{divide, leading_index};
use logorder::{GrowthClass, TruncSeries, Window};
use proptest::prelude::*;

fn prime_strategy() -> impl Strategy<Value = Prime> {
    prop::sample::select(vec![2u64, 3, 5, 7]).prop_map(|p| Prime::new(p).unwrap())
}

fn rational() -> impl Strategy<Value = Q> {
    (-2000i64..2000, 1i64..500).prop_map(|(a, b)| qf(a, b))
}

fn nonzero_rational() -> impl Strategy<Value = Q> {
    rational().prop_filter("nonzero", |x| *x != q(0))
}

fn poly_coeffs(max_len: usize) -> impl Strategy<Value = Vec<Q>> {
    prop::collection::vec(rational(), 1..=max_len)
}

fn xpoly() -> impl Strategy<Value = XPoly> {
    prop::collection::vec((-20i64..20, 1i64..6, any::<bool>()), 0..4).prop_map(|c| {
        XPoly::new(
            c.into_iter()
                .map(|(a, b, z)| {
                    let x = qf(a, b);
                    if z {
                        CycloScalar::root_of_unity(4, 1).scale(&x)
                    } else {
                        CycloScalar::from_q(x)
                    }
                })
                .collect(),
        )
    })
}

fn qexpansion() -> impl Strategy<Value = QExpansion> {
    (2usize..25).prop_flat_map(|t| prop::collection::vec(xpoly(), t + 1).prop_map(move |c| QExpansion::new(t, c)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn valuation_is_additive(p in prime_strategy(), x in nonzero_rational(), y in nonzero_rational()) {
        prop_assert_eq!(ordp_rational(&(&x * &y), p), ordp_rational(&x, p).add(&ordp_rational(&y, p)));
    }

    #[test]
    fn valuation_is_ultrametric(p in prime_strategy(), x in rational(), y in rational()) {
        let s = ordp_rational(&(&x + &y), p);
        prop_assert!(s >= ordp_rational(&x, p).min(ordp_rational(&y, p)));
    }

    #[test]
    fn cyclotomic_inverse(a in -9i64..9, b in -9i64..9, c in -9i64..9, d in -9i64..9) {
        let x = CycloScalar::from_coeffs(5, vec![q(a), q(b), q(c), q(d)]);
        prop_assume!(!x.is_zero());
        prop_assert!(x.mul(&x.inv().unwrap()).sub(&CycloScalar::one()).is_zero());
    }

    #[test]
    fn ell_brackets_index(p in prime_strategy(), i in 1u64..100_000) {
        let l = ell(i, p) as u32;
        prop_assert!(p.get().pow(l - 1) <= i && i < p.get().pow(l));
    }

    #[test]
    fn gauss_norm_is_multiplicative(
        p in prime_strategy(),
        f in poly_coeffs(6),
        g in poly_coeffs(6),
        r in prop::sample::select(vec![qf(0, 1), qf(1, 3), qf(1, 2), q(2)]),
    ) {
        let f = TruncSeries::poly1(p, &f);
        let g = TruncSeries::poly1(p, &g);
        let fg = f.mul(&g, std::slice::from_ref(&r)).unwrap();
        let rs = std::slice::from_ref(&r);
        prop_assert_eq!(fg.vr(rs).lower(), f.vr(rs).lower().add(&g.vr(rs).lower()));
    }

    #[test]
    fn shift_inside_disk_is_isometric(p in prime_strategy(), f in poly_coeffs(6), a in -50i64..50) {
        let f = TruncSeries::poly1(p, &f);
        let shift = &p.q() * q(a);
        let g = f.shift(&[shift], &[q(0)]).unwrap();
        prop_assert_eq!(g.vr(&[q(0)]).lower(), f.vr(&[q(0)]).lower());
    }

    #[test]
    fn leading_index_is_additive(
        p in prime_strategy(),
        f in poly_coeffs(5),
        g in poly_coeffs(5),
        r in prop::sample::select(vec![qf(0, 1), qf(1, 4), q(1)]),
    ) {
        let f = TruncSeries::poly1(p, &f);
        let g = TruncSeries::poly1(p, &g);
        prop_assume!(!f.is_zero() && !g.is_zero());
        let fg = f.mul(&g, std::slice::from_ref(&r)).unwrap();
        prop_assert_eq!(
            leading_index(&fg, &r).unwrap(),
            leading_index(&f, &r).unwrap() + leading_index(&g, &r).unwrap()
        );
    }

    #[test]
    fn division_of_a_multiple_has_no_remainder(f in poly_coeffs(4), g in poly_coeffs(4)) {
        let p = Prime::new(3).unwrap();
        let f = TruncSeries::poly1(p, &f);
        let g = TruncSeries::poly1(p, &g);
        prop_assume!(!f.is_zero());
        let fg = f.mul(&g, &[q(0)]).unwrap();
        let d = divide(&fg, &f, &q(0)).unwrap();
        prop_assert!(d.remainder.retained_poly().is_zero());
        prop_assert_eq!(d.quotient.retained_poly(), g);
    }

    #[test]
    fn omega_polys_are_separable(
        p in prop::sample::select(vec![2u64, 3, 5]),
        unit in 1i64..40,
        d in -2i64..2,
        w in 0i64..3,
        m in 0u64..3,
    ) {
        let p = Prime::new(p).unwrap();
        let step = if p.get() == 2 { 4 } else { p.get() as i64 };
        prop_assume!(unit % p.get() as i64 != 0);
        let u = q(1 + step * unit);
        prop_assert!(is_separable(&omega_one(p, &u, d, d + w, m)));
    }

    #[test]
    fn systems_are_compatible(f in prop::collection::vec(-30i64..30, 1..20), h in 0i64..3) {
        let p = Prime::new(3).unwrap();
        let f = TruncSeries::poly1_int(p, &f);
        let w = Window::with_default_u(p, vec![0], vec![h]).unwrap();
        let growth = GrowthClass::new(vec![q(h)]).unwrap();
        let s = system_from_series(&f, &growth, &w, 2).unwrap();
        prop_assert!(s.check_compatibility().unwrap());
    }

    #[test]
    fn series_json_round_trip(p in prime_strategy(), f in poly_coeffs(8)) {
        let f = TruncSeries::poly1(p, &f);
        let j = serde_json::to_string(&SeriesJson::from(&f)).unwrap();
        let back: SeriesJson = serde_json::from_str(&j).unwrap();
        prop_assert_eq!(TruncSeries::try_from(&back).unwrap(), f);
    }

    #[test]
    fn qexpansion_json_round_trip(h in qexpansion()) {
        let j = serde_json::to_string(&h.to_json()).unwrap();
        let back = QExpansion::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
        prop_assert_eq!(back, h);
    }

    #[test]
    fn slices_sum_back(h in qexpansion(), m in 1u64..6) {
        let mut acc = QExpansion::zero(h.trunc());
        for a in 0..m as i64 {
            acc = acc.add(&h.slice(a, m));
        }
        prop_assert_eq!(acc, h);
    }

    #[test]
    fn iota_intertwines_delta_and_hecke(h in qexpansion(), m in -5i64..6, p in prop::sample::select(vec![2u64, 3, 5])) {
        prop_assert_eq!(h.delta(m).iota(), h.iota().d_op());
        prop_assert_eq!(h.hecke_tp(p).iota(), h.iota().hecke_tp(p));
    }

    #[test]
    fn bernoulli_reflection(n in 0usize..14, x in rational()) {
        let b = bernoulli_poly(n);
        let sign = if n % 2 == 0 { q(1) } else { q(-1) };
        prop_assert_eq!(b.eval(&(q(1) - &x)), sign * b.eval(&x));
    }

    #[test]
    fn characters_are_multiplicative(
        n in prop::sample::select(vec![3u64, 4, 5, 8, 9, 12, 15]),
        idx in 0usize..64,
        a in -200i64..200,
        b in -200i64..200,
    ) {
        let all = DirichletCharacter::all(n);
        let chi = &all[idx % all.len()];
        prop_assert_eq!(chi.value(a * b), chi.value(a).mul(&chi.value(b)));
        prop_assert_eq!(chi.value(a + n as i64), chi.value(a));
    }
}

#[test]
fn valuation_of_zero_is_infinite() {
    let p = Prime::new(3).unwrap();
    assert_eq!(ordp_rational(&q(0), p), Val::PosInf);
    assert_eq!(ordp_rational(&qpow(&q(3), -4), p), Val::int(-4));
}
