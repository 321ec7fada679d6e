use proptest::prelude::*;

use degentrace::geometry::{angular_factor, HomogeneousPotential};
use degentrace::mellin::identities::{e_closed, e_numeric, s_identity};
use degentrace::num::mpoly::MPoly;
use degentrace::oscillatory::{fit_tail, lambda_grid};
use degentrace::spectral::{gamma_trace, make_test_function, scaling_fit_points, subprincipal_shift, FdOperator, FitModel};

fn quartic_2d(a: f64, b: f64) -> HomogeneousPotential {
    let full = MPoly::from_terms(2, &[(vec![4, 0], -a), (vec![0, 4], -b), (vec![2, 2], -0.5), (vec![6, 0], 1.0), (vec![0, 6], 1.0)]);
    HomogeneousPotential::from_full(2, 2, full, 0.0, vec![0.0, 0.0], vec![(-2.0, 2.0), (-2.0, 2.0)]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn tail_fit_recovers_power_laws(a in 0.1f64..3.0, c in prop_oneof![-5.0f64..-0.1, 0.1f64..5.0], log in any::<bool>()) {
        let s: Vec<(f64, f64)> = lambda_grid(1e2, 1e4, 8).into_iter().map(|l| (l, c * l.powf(-a) * if log { l.ln() } else { 1.0 })).collect();
        let f = fit_tail(&s, log).unwrap();
        prop_assert!((f.exponent - a).abs() < 1e-9);
        prop_assert!((f.coefficient / c - 1.0).abs() < 1e-9);
    }

    #[test]
    fn scaling_fit_recovers_power_laws(e in -2.0f64..0.5, c in prop_oneof![-5.0f64..-0.1, 0.1f64..5.0], log in any::<bool>()) {
        let hs = (0..10).map(|i| 0.0025 * (6.7f64).powf(i as f64 / 9.0));
        let s: Vec<(f64, f64)> = hs.map(|h| (h, c * h.powf(e) * if log { h.ln() } else { 1.0 })).collect();
        let model = if log { FitModel::PowerLog } else { FitModel::Power };
        let f = scaling_fit_points(&s, model).unwrap();
        prop_assert!((f.exponent - e).abs() < 1e-9);
        prop_assert!((f.coefficient / c - 1.0).abs() < 1e-9);
    }

    #[test]
    fn trace_is_translation_invariant(eigs in prop::collection::vec(-0.05f64..0.05, 0..30), shift in -3.0f64..3.0, h in 0.002f64..0.02) {
        let phi = make_test_function(0.25);
        let a = gamma_trace(0.0, h, &phi, &eigs);
        let moved: Vec<f64> = eigs.iter().map(|e| e + shift).collect();
        let b = gamma_trace(shift, h, &phi, &moved);
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
    }

    #[test]
    fn shifts_compose(c1 in -5.0f64..5.0, c2 in -5.0f64..5.0, x in -40.0f64..40.0) {
        let phi = make_test_function(0.3);
        let twice = subprincipal_shift(&subprincipal_shift(&phi, c1), c2);
        let once = subprincipal_shift(&phi, c1 + c2);
        prop_assert!((twice.phi(x) - once.phi(x)).abs() < 1e-13);
        prop_assert!((twice.phi_hat(0.1) - once.phi_hat(0.1)).norm() < 1e-13);
    }

    #[test]
    fn sturm_counts_bracket_bisection(h in 0.02f64..0.2, idx in 0usize..20) {
        let p = HomogeneousPotential::reference_1d();
        let op = FdOperator::new(&p, h, (-1.6, 1.6), 400);
        let e = op.eigenvalue(idx);
        let gap = 1e-9 * e.abs().max(1.0);
        prop_assert_eq!(op.count_below(e - gap), idx);
        prop_assert_eq!(op.count_below(e + gap), idx + 1);
    }

    #[test]
    fn angular_factor_covariance(a in 0.5f64..2.0, b in 0.5f64..2.0, c in 0.2f64..5.0) {
        let p = quartic_2d(a, b);
        let base = angular_factor(&p).unwrap().value;
        let scaled = angular_factor(&p.scaled_form(c)).unwrap().value;
        prop_assert!((scaled / base - c.powf(-0.5)).abs() < 1e-8);
    }

    #[test]
    fn even_dimension_weights_vanish(n in prop::sample::select(vec![2u32, 4, 6]), t in 0.01f64..0.99) {
        let alpha = n as f64 / 2.0 + t * (n as f64 / 2.0 + 1.0);
        prop_assert_eq!(e_closed(n, alpha).unwrap(), 0.0);
    }

    #[test]
    fn s_identity_vanishes_when_a_factor_does(j in 1u32..4, extra in 1u32..3) {
        // n = 2j makes the j-th factor (n − 2j) zero once p − 1 ≥ j
        prop_assert_eq!(s_identity(j + extra, 2 * j).unwrap(), 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn odd_dimension_weights_match_quadrature(n in prop::sample::select(vec![1u32, 3, 5]), t in 0.05f64..0.95) {
        let alpha = n as f64 / 2.0 + t * (n as f64 / 2.0 + 1.0);
        let (closed, numeric) = (e_closed(n, alpha).unwrap(), e_numeric(n, alpha).unwrap());
        prop_assert!((closed - numeric).abs() <= 1e-8 * closed.abs(), "n={} alpha={} closed={} numeric={}", n, alpha, closed, numeric);
    }
}
