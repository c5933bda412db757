//! Cross-module properties over random parameters.

use jacobi_envelope::extrema::{find_local_maxima, inclusion_chain_holds, localization_windows};
use jacobi_envelope::lemmas::{check_bracket_endpoints, check_sign_pattern, check_two_way, eval_proof_polys, RationalPoint};
use jacobi_envelope::osc::{osc_window, pointwise_bound};
use jacobi_envelope::quadrature::integrate;
use jacobi_envelope::verifier::{theorem1_bound, theorem2_bound};
use jacobi_envelope::{
    delta_interval, derive_params, eval_jacobi, eval_m, eval_weighted_sq, eval_z, sonin_s,
    JacobiParams,
};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = JacobiParams> {
    (1u32..=40, 0.0f64..30.0, 0.0f64..30.0).prop_map(|(k, a, b)| {
        let (alpha, beta) = if a >= b { (a, b) } else { (b, a) };
        JacobiParams::new(k, alpha, beta).unwrap()
    })
}

fn theorem2_params() -> impl Strategy<Value = JacobiParams> {
    (6u32..=40, 0.61f64..60.0, 0.61f64..60.0).prop_map(|(k, a, b)| {
        let (alpha, beta) = if a >= b { (a, b) } else { (b, a) };
        JacobiParams::new(k, alpha, beta).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reflection_symmetry(p in params(), x in -0.99f64..0.99) {
        let a = eval_jacobi(&p, x).unwrap().value.to_f64();
        let b = eval_jacobi(&p.swapped(), -x).unwrap().value.to_f64();
        let sign = if p.k % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((a - sign * b).abs() <= 1e-11 * a.abs().max(1e-300), "{a} vs {b}");
    }

    #[test]
    fn orthonormal_has_unit_weighted_norm(k in 0u32..12, a in 0.0f64..6.0, b in 0.0f64..6.0) {
        let p = JacobiParams::new(k, a, b).unwrap();
        let r = integrate(|x| eval_weighted_sq(&p, x, a, b).unwrap_or(0.0), -1.0, 1.0, 1e-11, 1e-14).unwrap();
        prop_assert!((r.value - 1.0).abs() < 1e-8, "norm {}", r.value);
    }

    #[test]
    fn envelope_below_theorem1_bound(p in params(), t in 0.0f64..1.0) {
        let iv = delta_interval(&derive_params(&p)).unwrap();
        let x = iv.lo + t * iv.width();
        prop_assert!(eval_z(&p, x).unwrap().abs() < theorem1_bound());
    }

    #[test]
    fn sonin_function_dominates_square(p in params(), t in 0.02f64..0.98) {
        let iv = delta_interval(&derive_params(&p)).unwrap();
        let x = iv.lo + t * iv.width();
        let z = eval_z(&p, x).unwrap();
        prop_assert!(sonin_s(&p, x).unwrap() >= z * z * (1.0 - 1e-12));
    }

    #[test]
    fn m_below_theorem2_bound(p in theorem2_params(), x in -0.999f64..0.999) {
        let m = eval_m(&p, x).unwrap();
        prop_assert!(m < theorem2_bound(&p), "M = {m}");
    }

    #[test]
    fn windows_nest_for_theorem2(p in theorem2_params()) {
        let dp = derive_params(&p);
        let w = localization_windows(&dp).unwrap();
        prop_assert!(inclusion_chain_holds(&dp, &w).unwrap());
        let gamma = osc_window(&dp).unwrap();
        let delta = delta_interval(&dp).unwrap();
        prop_assert!(gamma.gamma_minus > delta.lo && gamma.gamma_plus < delta.hi);
    }

    #[test]
    fn maxima_of_m_inside_inner_window(p in theorem2_params()) {
        let dp = derive_params(&p);
        let w = localization_windows(&dp).unwrap();
        let maxima = find_local_maxima(|x| eval_m(&p, x), &delta_interval(&dp).unwrap(), 100 * (p.k as usize + 1)).unwrap();
        for m in maxima.maxima() {
            prop_assert!(w.n_prime.contains(m.x), "max at {} outside {:?}", m.x, w.n_prime);
        }
    }

    #[test]
    fn oscillatory_pointwise_bound(p in params(), t in 0.01f64..0.99) {
        let dp = derive_params(&p);
        let g = osc_window(&dp).unwrap().interval();
        let x = g.lo + t * g.width();
        let lhs = eval_weighted_sq(&p, x, p.alpha, p.beta).unwrap();
        prop_assert!(lhs <= pointwise_bound(&dp, x).unwrap() * (1.0 + 1e-12));
    }

    #[test]
    fn proof_polynomials_have_certified_signs(qn in 2i64..10_000, sn in 1i64..10_000) {
        prop_assume!(sn < qn);
        let pt = RationalPoint::from_ratios(qn, 10_001, sn, 10_001).unwrap();
        prop_assert!(check_sign_pattern(&pt));
        prop_assert!(check_bracket_endpoints(&pt));
        prop_assert!(check_two_way(&eval_proof_polys(&pt)));
    }
}
