use std::f64::consts::PI;

use degentrace::geometry::HomogeneousPotential;
use degentrace::mellin::leading_distribution;
use degentrace::num::quad::Quad;
use degentrace::spectral::{eigenvalues_in_window, make_test_function, predicted_leading, spectral_sample, subprincipal_shift, GridOptions, SchwartzPair};

/// Phase-space area of {|ξ² + V(x)| < ε}.
fn window_area(p: &HomogeneousPotential, eps: f64) -> f64 {
    let quad = Quad::new(1e-12, 1e-10).with_limit(2000);
    let f = |x: f64| {
        let v = p.v(&[x]);
        2.0 * ((eps - v).max(0.0).sqrt() - (-eps - v).max(0.0).sqrt())
    };
    quad.integrate_pieces(f, &[-1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5]).unwrap().value
}

#[test]
fn window_count_follows_weyl() {
    let p = HomogeneousPotential::reference_1d();
    let area = window_area(&p, 0.05);
    for h in [1.0 / 100.0, 1.0 / 200.0, 1.0 / 400.0] {
        let s = eigenvalues_in_window(&p, h, (-0.05, 0.05), &GridOptions::default()).unwrap();
        let weyl = area / (2.0 * PI * h);
        assert!((s.eigenvalues.len() as f64 - weyl).abs() <= 3.0, "h = {h}: {} states, Weyl {weyl:.2}", s.eigenvalues.len());
    }
}

/// ⟨T_{1,2}, â⟩ from the push-forward of dr dq near u = 0: W(u) = c±|u|^{−1/4}.
fn leading_by_quadrature(pair: &SchwartzPair) -> f64 {
    let quad = Quad::new(0.0, 1e-11).with_limit(4000);
    let plus = 0.5 * quad.integrate_tail(|s| (1.0 + s.powi(4)).powf(-0.5), 0.0, 1.0, 1.0).unwrap().value;
    let near = quad.integrate_left_power(|s| ((s - 1.0) * (s + 1.0) * (s * s + 1.0)).powf(-0.5), 1.0, 2.0, -0.5).unwrap().value;
    let minus = 0.5 * (near + quad.integrate_tail(|s| (s.powi(4) - 1.0).powf(-0.5), 2.0, 1.0, 2.0).unwrap().value);
    let (reach, _) = pair.profile.decay_cutoff();
    let side = |sign: f64| quad.integrate_left_power(|v: f64| pair.profile.ahat(sign * v) * v.powf(-0.25), 0.0, reach, -0.25).unwrap().value;
    plus * side(1.0) + minus * side(-1.0)
}

#[test]
fn leading_distribution_matches_quadrature_and_sees_shifts() {
    let pair = make_test_function(0.3);
    let shifted = subprincipal_shift(&pair, 2.0);
    let a = leading_distribution(1, 2, &pair.time_profile()).unwrap();
    let b = leading_distribution(1, 2, &shifted.time_profile()).unwrap();
    for (got, p) in [(a, &pair), (b, &shifted)] {
        let want = leading_by_quadrature(p);
        assert!((got - want).abs() < 1e-6 * want.abs(), "{got} vs {want}");
    }
    assert!((a - b).abs() > 1e-2 * a.abs());
}

#[test]
fn trace_meets_the_prediction_at_the_smallest_h() {
    let p = HomogeneousPotential::reference_1d();
    let pair = make_test_function(0.266);
    let h = 1.0 / 400.0;
    let s = spectral_sample(&p, 0.0, 0.05, h, &pair, &GridOptions::default()).unwrap();
    let pred = predicted_leading(&p, &pair, h).unwrap();
    assert!((s.gamma / pred.value - 1.0).abs() < 0.03, "γ = {}, predicted {}", s.gamma, pred.value);
}
