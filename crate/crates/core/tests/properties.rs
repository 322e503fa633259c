use std::sync::Arc;

use ellkit::formal::{ell_power_isogeny, inversion_twist, QuasiLinearSet};
use ellkit::mellin::{fiber_dims_at, fiber_dims_via_group_ring, level_points, MonodromyData};
use ellkit::padic::{binom_valuation, binom_valuation_closed_form, PadicScalar, RingParams};
use ellkit::tate::{phi_operator, phi_operator_by_substitution, Exponent, SigmaAction, TruncatedSeries};
use proptest::prelude::*;

fn ring(ell: u64, n: u32) -> Arc<RingParams> {
    RingParams::trivial(ell, n).unwrap()
}

fn series(p: &Arc<RingParams>, b: usize, d: u32, coeffs: &[i64]) -> TruncatedSeries {
    let monos = Exponent::all_up_to(b, d);
    let terms = monos.into_iter().zip(coeffs).map(|(e, &c)| (e, PadicScalar::from_int(p, c as i128)));
    TruncatedSeries::from_terms(p, b, d, terms).unwrap()
}

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn integers_round_trip(ell in prime(), x in -100_000i64..100_000) {
        let p = ring(ell, 20);
        let s = PadicScalar::from_int(&p, x as i128);
        prop_assert_eq!(s.balanced_integer(), Some(x as i128));
        prop_assert!(s.sub(&s).is_zero());
    }

    #[test]
    fn ring_axioms(ell in prime(), a in -500i64..500, b in -500i64..500, c in -500i64..500) {
        let p = ring(ell, 16);
        let [a, b, c] = [a, b, c].map(|x| PadicScalar::from_int(&p, x as i128));
        prop_assert!(a.mul(&b).eq_within_precision(&b.mul(&a)));
        prop_assert!(a.mul(&b.add(&c)).eq_within_precision(&a.mul(&b).add(&a.mul(&c))));
        prop_assert!(a.add(&b).sub(&b).eq_within_precision(&a));
    }

    #[test]
    fn division_inverts_multiplication(ell in prime(), a in 1i64..10_000, b in 1i64..10_000) {
        let p = ring(ell, 18);
        let (a, b) = (PadicScalar::from_int(&p, a as i128), PadicScalar::from_int(&p, b as i128));
        let q = a.mul(&b).checked_div(&b).unwrap();
        prop_assert!(q.eq_within_precision(&a));
        prop_assert!(q.abs_precision() <= p.precision() as i64);
    }

    #[test]
    fn series_text_round_trip(ell in prime(), b in 1usize..=2, coeffs in prop::collection::vec(-30i64..30, 15)) {
        let p = ring(ell, 10);
        let g = series(&p, b, 3, &coeffs);
        let back = TruncatedSeries::parse(&g.to_string()).unwrap();
        prop_assert!(back.eq_within_precision(&g));
        prop_assert_eq!(back.to_string(), g.to_string());
    }

    #[test]
    fn phi_kills_target_and_keeps_constant(
        ell in prop::sample::select(vec![3u64, 5, 7]),
        alpha in 2i64..40,
        k in 1u32..=3,
        coeffs in prop::collection::vec(-20i64..20, 4),
    ) {
        let p = ring(ell, 16);
        let g = series(&p, 1, 3, &coeffs);
        let sigma = SigmaAction::diagonal_ints(&p, &[alpha]).unwrap();
        let m = Exponent(vec![k]);
        let h = phi_operator(&g, &m, &sigma).unwrap();
        prop_assert!(h.coeff(&m).is_zero());
        prop_assert!(h.constant_term().eq_within_precision(&g.constant_term()));
        let h2 = phi_operator_by_substitution(&g, &m, &sigma).unwrap();
        prop_assert!(h.eq_within_precision(&h2));
    }

    #[test]
    fn binomial_valuations(ell in prop::sample::select(vec![2u64, 3, 5]), n in 1u32..=4, r in 1u64..=625) {
        let top = ell.pow(n);
        prop_assume!(r <= top);
        prop_assert_eq!(binom_valuation(ell, n, r).unwrap(), binom_valuation_closed_form(ell, n, r));
    }

    #[test]
    fn inversion_is_an_involution(ell in prime(), b in 1usize..=2, coeffs in prop::collection::vec(-9i64..9, 15)) {
        let p = ring(ell, 12);
        let g = series(&p, b, 3, &coeffs);
        prop_assert!(inversion_twist(&inversion_twist(&g).unwrap()).unwrap().eq_within_precision(&g));
    }

    #[test]
    fn isogenies_compose(ell in prop::sample::select(vec![2u64, 3]), a in 1u32..=2, c in 1u32..=2, coeffs in prop::collection::vec(-9i64..9, 5)) {
        let p = ring(ell, 12);
        let g = series(&p, 1, 4, &coeffs);
        let two = ell_power_isogeny(&ell_power_isogeny(&g, a).unwrap(), c).unwrap();
        prop_assert!(two.eq_within_precision(&ell_power_isogeny(&g, a + c).unwrap()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fiber_routes_agree_on_diagonal_data(
        ell in prop::sample::select(vec![2u64, 3]),
        e1 in -3i64..=3,
        e2 in -3i64..=3,
        twist in 0u32..3,
    ) {
        prop_assume!(e1.rem_euclid(ell as i64) != 0 && e2.rem_euclid(ell as i64) != 0);
        let text = format!("rank=2; M1=[[{e1},0],[0,z{}^{twist}]]; quotient=none", ell * ell);
        let data = MonodromyData::parse(ell, &text).unwrap();
        for id in level_points(ell, 1, data.nvars()).unwrap() {
            let a = fiber_dims_at(&data, &id).unwrap();
            let euler: i64 = a.iter().enumerate().map(|(k, &d)| if k % 2 == 0 { d as i64 } else { -(d as i64) }).sum();
            prop_assert_eq!(euler, 0);
            prop_assert_eq!(a, fiber_dims_via_group_ring(&data, &id).unwrap());
        }
    }

    #[test]
    fn quasilinear_text_round_trip(k in 0u64..9, l1 in 0i64..3, l2 in 1i64..3) {
        let text = format!("component 1: s=[{},{}]/9 lattice=[{l1},{l2}]", k, (k * 2) % 9);
        let set = QuasiLinearSet::parse(3, 2, &text).unwrap();
        let again = QuasiLinearSet::parse(3, 2, &set.to_string()).unwrap();
        prop_assert!(set.same_components(&again).unwrap());
    }
}
