//! The test function φ and its compactly supported transform φ̂.

use core::f64::consts::PI;
use num_complex::Complex64;

use crate::num::quad::QuadError;
use crate::profile::{BumpProfile, TimeProfile};

/// φ̂(t) = exp(−1/(1 − (t/T)²)) on (−T, T), possibly modulated by e^{ict}, and
/// φ(x) = (1/2π)∫φ̂(t)e^{itx}dt.
#[derive(Debug, Clone, PartialEq)]
pub struct SchwartzPair {
    pub profile: BumpProfile,
}

pub fn make_test_function(t: f64) -> SchwartzPair {
    assert!(t > 0.0, "support radius must be positive");
    SchwartzPair { profile: BumpProfile::new(t) }
}

/// The pair of t ↦ φ(t + c).
pub fn subprincipal_shift(phi: &SchwartzPair, c: f64) -> SchwartzPair {
    SchwartzPair { profile: phi.profile.shifted(c) }
}

impl SchwartzPair {
    pub fn support(&self) -> f64 {
        self.profile.t_max
    }

    pub fn shift(&self) -> f64 {
        self.profile.shift
    }

    pub fn phi(&self, x: f64) -> f64 {
        self.profile.ahat(x) / (2.0 * PI)
    }

    pub fn phi_hat(&self, t: f64) -> Complex64 {
        self.profile.a(t)
    }

    /// φ by direct Fourier inversion, bypassing the cached samples.
    pub fn phi_direct(&self, x: f64) -> Result<f64, QuadError> {
        Ok(self.profile.ahat_direct(x)? / (2.0 * PI))
    }

    /// (x_c, B): |φ(x)| ≤ B for |x + c| ≥ x_c.
    pub fn decay_bound(&self) -> (f64, f64) {
        let (v, b) = self.profile.decay_cutoff();
        (v - self.shift().abs(), b / (2.0 * PI))
    }

    /// Largest |φ − φ_direct| over the sample points.
    pub fn inversion_error(&self, xs: &[f64]) -> Result<f64, QuadError> {
        let mut worst = 0.0f64;
        for &x in xs {
            worst = worst.max((self.phi(x) - self.phi_direct(x)?).abs());
        }
        Ok(worst)
    }

    /// The time profile whose transform is 2π·φ, as consumed by the residue engine.
    pub fn time_profile(&self) -> TimeProfile {
        TimeProfile::Bump(self.profile.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::quad::Quad;

    #[test]
    fn transform_at_zero_and_symmetry() {
        let p = make_test_function(0.3);
        assert!((p.phi_hat(0.0).re - (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(p.phi_hat(0.3), Complex64::new(0.0, 0.0));
        for x in [0.5, 3.0, 17.0] {
            assert!((p.phi(x) - p.phi(-x)).abs() < 1e-15);
        }
        let integral = Quad::new(0.0, 1e-13).integrate(|t| p.phi_hat(t).re, -0.3, 0.3).unwrap().value;
        assert!(p.phi(0.0) > 0.0);
        assert!((p.phi(0.0) - integral / (2.0 * PI)).abs() < 1e-12);
    }

    #[test]
    fn cached_values_match_inversion() {
        let p = make_test_function(0.25);
        let xs: Vec<f64> = (0..40).map(|i| -60.0 + 3.1 * i as f64).collect();
        assert!(p.inversion_error(&xs).unwrap() < 1e-8);
    }

    #[test]
    fn shifts_compose() {
        let p = make_test_function(0.5);
        assert_eq!(subprincipal_shift(&p, 0.0), p);
        let a = subprincipal_shift(&subprincipal_shift(&p, 0.7), 1.1);
        let b = subprincipal_shift(&p, 1.8);
        for x in [-2.0, 0.0, 0.4, 5.0] {
            assert!((a.phi(x) - b.phi(x)).abs() < 1e-14);
            assert!((b.phi(x) - p.phi(x + 1.8)).abs() < 1e-14);
        }
        let t = 0.2;
        assert!((b.phi_hat(t) - p.phi_hat(t) * Complex64::from_polar(1.0, 1.8 * t)).norm() < 1e-15);
    }
}
