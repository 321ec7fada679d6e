//! Closed-form constants of the expansion and their quadrature counterparts.

use alloc::vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::catalog::{weight_exponent, z_min};
use super::MellinError;
use crate::num::jet::Jet;
use crate::num::quad::Quad;
use crate::num::rpoly::to_f64;
use crate::num::special::{factorial, gamma, rgamma};
use crate::profile::{Side, SpatialProfile};

/// ∂_s^d[(1+s)^{−α} s^{n−1}] at s.
pub fn weight_derivative(s: f64, alpha: f64, n: u32, d: usize) -> f64 {
    let one_plus = Jet::variable(1.0 + s, d).powf(-alpha);
    let sp = Jet::variable(s, d).powi(n - 1);
    one_plus.mul(&sp).derivative(d)
}

fn check_strip(n: u32, alpha: f64) -> Result<(), MellinError> {
    let lo = 0.5 * n as f64;
    if !(alpha > lo && alpha < n as f64 + 1.0) {
        return Err(MellinError::Precondition("alpha must lie in (n/2, n+1)"));
    }
    Ok(())
}

/// E(n, α) = ∫₁^∞ (s−1)^{n−α} ∂ⁿ_s((1+s)^{−α}s^{n−1}) ds in closed form:
/// (−1)ⁿ·½·Γ(n+1−α)Γ(α−n/2)/Γ(1−n/2), which vanishes for even n.
pub fn e_closed(n: u32, alpha: f64) -> Result<f64, MellinError> {
    check_strip(n, alpha)?;
    let nf = n as f64;
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * 0.5 * gamma(nf + 1.0 - alpha) * gamma(alpha - 0.5 * nf) * rgamma(1.0 - 0.5 * nf))
}

/// The odd-n Gamma expression in its typeset form,
/// ∏_{j=1}^{(n−1)/2}(−2j−1)·2^{(n+1)/2−2α}Γ(n+1−α)Γ(2α−n)/Γ((1−n)/2+α).
///
/// It disagrees with the defining integral (sign at n = 1, a factor −1/3 at n = 3);
/// [`e_closed`] is the corrected value.
pub fn e_closed_as_printed(n: u32, alpha: f64) -> Result<f64, MellinError> {
    check_strip(n, alpha)?;
    if n % 2 == 0 {
        return Ok(0.0);
    }
    let nf = n as f64;
    let prod = (1..=(n - 1) / 2).fold(1.0, |a, j| a * (-2.0 * j as f64 - 1.0));
    Ok(prod * 2f64.powf(0.5 * (nf + 1.0) - 2.0 * alpha) * gamma(nf + 1.0 - alpha) * gamma(2.0 * alpha - nf) / gamma(0.5 * (1.0 - nf) + alpha))
}

/// E(n, α) by adaptive quadrature of its definition.
pub fn e_numeric(n: u32, alpha: f64) -> Result<f64, MellinError> {
    check_strip(n, alpha)?;
    let nf = n as f64;
    let quad = Quad::new(1e-15, 1e-12).with_limit(10000);
    // in d = s − 1, so that small d is not lost to cancellation near the singular end
    let f = |d: f64| d.powf(nf - alpha) * weight_derivative(1.0 + d, alpha, n, n as usize);
    let head = quad.integrate_left_power(f, 0.0, 1.0, nf - alpha)?;
    let tail = quad.integrate_tail(f, 1.0, 2.0 * alpha - nf, 1.0)?;
    Ok(head.value + tail.value)
}

/// ∫₁^∞ ∂_s^p((s+1)^{−p}s^{n−1}) ds = −2^{−p}∏_{j=1}^{p−1}(n−2j).
pub fn s_identity(p: u32, n: u32) -> Result<f64, MellinError> {
    if !(p > 1 && n < 2 * p) {
        return Err(MellinError::Precondition("s_identity needs 1 < p and n < 2p"));
    }
    let prod = (1..p).fold(1.0, |a, j| a * (n as f64 - 2.0 * j as f64));
    Ok(-prod / 2f64.powi(p as i32))
}

/// The same identity with the product over j = 0..p−1 as typeset; off by the factor n.
pub fn s_identity_as_printed(p: u32, n: u32) -> Result<f64, MellinError> {
    Ok(s_identity(p, n)? * n as f64)
}

/// The left side of [`s_identity`] by quadrature.
pub fn s_identity_quadrature(p: u32, n: u32) -> Result<f64, MellinError> {
    if !(p > 1 && n < 2 * p) {
        return Err(MellinError::Precondition("s_identity needs 1 < p and n < 2p"));
    }
    let quad = Quad::new(1e-16, 1e-13).with_limit(10000);
    let f = |s: f64| weight_derivative(s, p as f64, n, p as usize);
    let head = quad.integrate(f, 1.0, 3.0)?;
    let tail = quad.integrate_tail(f, 3.0, (2 * p - n) as f64, 2.0)?;
    Ok(head.value + tail.value)
}

/// a_{n,k} = ∫₀¹ (1−s)^{n−α} ∂ⁿ_s((1+s)^{−α}s^{n−1}) ds, α = z_min.
pub fn a_nk(n: u32, k: u32) -> Result<f64, MellinError> {
    a_nk_with(n, k, 1e-12)
}

pub fn a_nk_with(n: u32, k: u32, rel_tol: f64) -> Result<f64, MellinError> {
    let alpha = to_f64(&z_min(n, k));
    let beta = n as f64 - alpha;
    let quad = Quad::new(1e-16, rel_tol).with_limit(10000);
    let f = |s: f64| (1.0 - s).powf(beta) * weight_derivative(s, alpha, n, n as usize);
    Ok(quad.integrate_right_power(f, 0.0, 1.0, beta)?.value)
}

/// ã± = −∫ log|s²−1|·∂_s^p((s+1)^{−p}s^{n−1}) ds over s > 1 (+) or 0 < s < 1 (−).
///
/// The log weight is ∂_z|s²−1|^{−z} at the pole, on both sides.
pub fn a_tilde(side: Side, p: u32, n: u32) -> Result<f64, MellinError> {
    if 2 * p <= n {
        return Err(MellinError::Precondition("a_tilde needs 2p > n"));
    }
    let quad = Quad::new(1e-16, 1e-12).with_limit(10000);
    let f = |s: f64| {
        let d = (s * s - 1.0).abs();
        if d == 0.0 {
            return 0.0;
        }
        d.ln() * weight_derivative(s, p as f64, n, p as usize)
    };
    // u⁴ substitution at s = 1 flattens the logarithm
    let v = match side {
        Side::Plus => quad.integrate_left_power(f, 1.0, 2.0, -0.75)?.value + quad.integrate_tail(f, 2.0, 0.8 * (2 * p - n) as f64, 1.0)?.value,
        Side::Minus => quad.integrate_right_power(f, 0.0, 1.0, -0.75)?.value,
    };
    Ok(-v)
}

/// Both sides of ∫₀^∞ q^{2kl−1} ∂_q^{2kl} b(sq^k, q) dq = (2kl−1)!·b(0,0), at a fixed s > 0.
pub fn q_identity_check(b: &SpatialProfile, k: u32, l: u32, s: f64) -> Result<(f64, f64), MellinError> {
    if k == 0 || l == 0 || s <= 0.0 {
        return Err(MellinError::Precondition("q identity needs k, l ≥ 1 and s > 0"));
    }
    let m = (2 * k * l) as usize;
    let (rho, big_r) = (b.cutoff.inner, b.cutoff.outer);
    let inv_k = 1.0 / k as f64;
    let q_max = big_r.min((big_r / s).powf(inv_k));
    let mut pts = vec![0.0, q_max];
    for x in [rho, (rho / s).powf(inv_k), big_r, (big_r / s).powf(inv_k)] {
        if x > 0.0 && x < q_max {
            pts.push(x);
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let f = |q: f64| {
        let qj = Jet::variable(q, m);
        let r = qj.powi(k).scale(s);
        q.powi(m as i32 - 1) * b.eval_jet(&r, &qj).derivative(m)
    };
    let lhs = Quad::new(1e-14, 1e-12).with_limit(20000).integrate_pieces(f, &pts)?.value;
    Ok((lhs, factorial(m as u32 - 1) * b.value(0.0, 0.0)))
}

/// The exponent w₀ = n(k+1) − 1 − 2k·z of the q-weight after the blow-up, as f64.
pub fn q_weight(n: u32, k: u32, z: f64) -> f64 {
    weight_exponent(n, k) as f64 - 2.0 * k as f64 * z
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::Cutoff;
    use core::f64::consts::PI;

    #[test]
    fn e_closed_matches_quadrature() {
        for &(n, a) in &[(1, 0.75), (1, 0.9), (3, 2.0), (3, 2.5)] {
            let c = e_closed(n, a).unwrap();
            let q = e_numeric(n, a).unwrap();
            assert!((c - q).abs() < 1e-6 * q.abs(), "({n},{a}): {c} vs {q}");
        }
        assert!((e_closed(3, 2.0).unwrap() - 0.25).abs() < 1e-15);
        for &(n, a) in &[(2, 1.4), (2, 2.5), (4, 2.5), (4, 4.2)] {
            assert_eq!(e_closed(n, a).unwrap(), 0.0);
            assert!(e_numeric(n, a).unwrap().abs() < 1e-9, "({n},{a})");
        }
        assert!(e_closed(3, 1.0).is_err());
    }

    #[test]
    fn typeset_e_formula_is_off() {
        // n = 1: same magnitude, opposite sign
        let (p, c) = (e_closed_as_printed(1, 0.75).unwrap(), e_closed(1, 0.75).unwrap());
        assert!((p + c).abs() < 1e-12);
        let expected = 2f64.powf(-0.5) * gamma(1.25) * PI.sqrt() / gamma(0.75);
        assert!((p - expected).abs() < 1e-12);
        assert!((e_closed_as_printed(3, 2.0).unwrap() + 0.75).abs() < 1e-12);
    }

    #[test]
    fn s_identity_values() {
        assert_eq!(s_identity(2, 2).unwrap(), 0.0);
        for &(n, p, v) in &[(1, 2, 0.25), (1, 3, -0.375), (3, 4, -0.1875)] {
            assert_eq!(s_identity(p, n).unwrap(), v);
            let q = s_identity_quadrature(p, n).unwrap();
            assert!((q - v).abs() < 1e-8, "({n},{p}): {q}");
        }
        assert_eq!(s_identity_as_printed(4, 3).unwrap(), -9.0 / 16.0);
        assert!(s_identity(1, 1).is_err());
    }

    #[test]
    fn a_nk_resolution_and_sign() {
        let a = a_nk(1, 2).unwrap();
        let b = a_nk_with(1, 2, 1e-9).unwrap();
        assert!((a - b).abs() < 1e-9);
        assert!(a.is_finite() && a != 0.0);
        // integrand |s−1|^{1/4}·(−3/4)(1+s)^{−7/4} is negative
        assert!(a < 0.0);
    }

    #[test]
    fn a_tilde_values_are_finite() {
        let p = a_tilde(Side::Plus, 2, 2).unwrap();
        let m = a_tilde(Side::Minus, 2, 2).unwrap();
        assert!(p.is_finite() && m.is_finite() && p != 0.0 && m != 0.0);
        // ∂_s((s+1)^{−1}s^0) = −(s+1)^{−2}, so ã⁻(1,1) = ∫₀¹ log(1−s²)/(1+s)² ds
        let direct = Quad::new(1e-15, 1e-12)
            .integrate_right_power(|s: f64| if s < 1.0 { (1.0 - s * s).ln() / (1.0 + s).powi(2) } else { 0.0 }, 0.0, 1.0, -0.75)
            .unwrap()
            .value;
        assert!((a_tilde(Side::Minus, 1, 1).unwrap() - direct).abs() < 1e-10);
    }

    #[test]
    fn q_identity_holds() {
        let cut = Cutoff::new(0.5, 1.0);
        for &(k, l) in &[(2, 1), (3, 1)] {
            let b = SpatialProfile::new(vec![(0, 0, 1.0), (1, 1, 0.4), (0, 2, -0.3)], cut);
            let (lhs, rhs) = q_identity_check(&b, k, l, 0.8).unwrap();
            assert!((lhs - rhs).abs() < 1e-6 * rhs.abs(), "k={k}: {lhs} vs {rhs}");
        }
        let zero = SpatialProfile::new(vec![(0, 1, 1.0)], cut);
        let (lhs, rhs) = q_identity_check(&zero, 2, 1, 1.3).unwrap();
        assert!(lhs.abs() < 1e-8 && rhs == 0.0);
        let b = SpatialProfile::flat(1.0, cut);
        let (l1, _) = q_identity_check(&b, 2, 1, 2.0).unwrap();
        let (l3, r3) = q_identity_check(&b.scaled(3.0), 2, 1, 2.0).unwrap();
        assert!((l3 - 3.0 * l1).abs() < 1e-8 && r3 == 18.0);
    }
}
