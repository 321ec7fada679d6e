//! Gamma-family functions for real and complex arguments.

use core::f64::consts::PI;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

/// Γ(x) for real x; non-positive integers give NaN.
pub fn gamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return f64::NAN;
    }
    libm::tgamma(x)
}

/// 1/Γ(x), entire: zero at the non-positive integers.
pub fn rgamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return 0.0;
    }
    1.0 / libm::tgamma(x)
}

/// ln|Γ(x)|.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(z) for complex z (Lanczos, g = 7), about 15 significant digits.
pub fn gamma_complex(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Reflection: Γ(z)Γ(1−z) = π / sin(πz)
        let s = (z * PI).sin();
        return Complex64::new(PI, 0.0) / (s * gamma_complex(Complex64::new(1.0, 0.0) - z));
    }
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    let sqrt_2pi = (2.0 * PI).sqrt();
    x * sqrt_2pi * t.powc(z + 0.5) * (-t).exp()
}

/// n! as f64.
pub fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

/// Falling factorial x(x−1)…(x−m+1).
pub fn falling(x: f64, m: u32) -> f64 {
    (0..m).fold(1.0, |acc, i| acc * (x - i as f64))
}

/// Binomial coefficient C(p, i) for real p.
pub fn binomial(p: f64, i: u32) -> f64 {
    falling(p, i) / factorial(i)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_gamma_values() {
        assert!((gamma(5.0) - 24.0).abs() < 1e-12);
        assert!((gamma(0.5) - PI.sqrt()).abs() < 1e-14);
        assert_eq!(rgamma(-2.0), 0.0);
        assert!(gamma(-1.0).is_nan());
    }

    #[test]
    fn complex_gamma_matches_real_axis_and_recurrence() {
        for &x in &[0.3, 1.7, 4.25, -0.6] {
            let g = gamma_complex(Complex64::new(x, 0.0));
            assert!((g.re - gamma(x)).abs() < 1e-13 * gamma(x).abs().max(1.0), "x={x}");
        }
        let z = Complex64::new(1.3, 2.7);
        let lhs = gamma_complex(z + 1.0);
        let rhs = z * gamma_complex(z);
        assert!((lhs - rhs).norm() < 1e-13 * lhs.norm());
        // |Γ(iy)|² = π / (y sinh πy)
        let y = 1.5;
        let g = gamma_complex(Complex64::new(0.0, y));
        assert!((g.norm_sqr() - PI / (y * (PI * y).sinh())).abs() < 1e-13);
    }

    #[test]
    fn combinatorics() {
        assert_eq!(factorial(6), 720.0);
        assert_eq!(falling(5.0, 2), 20.0);
        assert!((binomial(-0.5, 2) - 0.375).abs() < 1e-15);
    }
}
