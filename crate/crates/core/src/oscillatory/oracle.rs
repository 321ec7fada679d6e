//! Brute-force evaluation of J(λ).
//!
//! With u = r² − q^{2k} along r, J(λ) = ∫ â(λu) W(u) du where
//! W(u) = ∫ B(√(u + q^{2k}), q) / (2√(u + q^{2k})) dq, so
//! J(λ) = λ^{−1} ∫ â(v) W(v/λ) dv and all the λ-oscillation sits in â.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::amplitude::ModelAmplitude;
use super::OscError;
use crate::mellin::z_min;
use crate::num::jet::Jet;
use crate::num::quad::{Estimate, Quad};
use crate::num::rpoly::to_f64;
use crate::profile::TimeProfile;

const V_QUAD: Quad = Quad { epsabs: 1e-40, epsrel: 1e-6, max_intervals: 4000 };

/// Requested relative accuracy of the oracle.
pub const ORACLE_TOL: f64 = 1e-3;

fn geometric_points(lo: f64, hi: f64, extra: &[f64]) -> Vec<f64> {
    let mut pts = vec![lo, hi];
    let mut x = 2.0 * lo;
    while x < hi {
        pts.push(x);
        x *= 2.0;
    }
    pts.extend(extra.iter().copied().filter(|&e| e > lo && e < hi));
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// W(u): the push-forward of B dr dq under (r, q) ↦ r² − q^{2k}.
pub fn w_profile(amp: &ModelAmplitude, u: f64) -> Result<f64, OscError> {
    let (k2, n) = ((2 * amp.k) as f64, amp.n);
    let rho = amp.b.cutoff.inner;
    let big_r = amp.b.cutoff.outer;
    // W(u) is of size |u|^{z_min − 1} near 0; parts far below that are noise
    let scale = u.abs().powf(to_f64(&z_min(n, amp.k)) - 1.0) * amp.b.terms.iter().map(|t| t.2.abs()).sum::<f64>();
    let w_quad = Quad { epsabs: 1e-16 * scale, epsrel: 1e-12, max_intervals: 10000 };
    let kk = 2 * amp.k as i32;
    let q0 = if u < 0.0 { (-u).powf(1.0 / k2) } else { 0.0 };
    // d = q − q₀ is passed separately so that r² = q^{2k} − q₀^{2k} keeps its relative accuracy
    let h = |q: f64, d: f64| -> f64 {
        let r2 = if u < 0.0 { d * (0..kk).map(|i| q.powi(i) * q0.powi(kk - 1 - i)).sum::<f64>() } else { u + q.powf(k2) };
        if r2 <= 0.0 {
            return 0.0;
        }
        let r = r2.sqrt();
        0.5 * amp.b.value(r, q) * r.powi(n as i32 - 2) * q.powi(n as i32 - 1)
    };
    let g = |q: f64| h(q, q - q0);
    if u >= 0.0 {
        if u >= big_r * big_r {
            return Ok(0.0);
        }
        if u == 0.0 {
            return Ok(w_taylor(amp)?.first().copied().unwrap_or(f64::INFINITY));
        }
        let hi = big_r.min((big_r * big_r - u).powf(1.0 / k2));
        let start = u.powf(1.0 / k2).min(hi);
        let mut extra = vec![rho];
        if rho * rho > u {
            extra.push((rho * rho - u).powf(1.0 / k2));
        }
        let head = w_quad.integrate(g, 0.0, start)?.value;
        let body = w_quad.integrate_pieces(g, &geometric_points(start, hi, &extra))?.value;
        Ok(head + body)
    } else {
        let a = -u;
        if q0 >= big_r {
            return Ok(0.0);
        }
        let hi = big_r.min((big_r * big_r + a).powf(1.0 / k2));
        // keep the singular first panel clear of the cutoff breakpoints
        let extra: Vec<f64> = [rho, (rho * rho + a).powf(1.0 / k2)].into_iter().filter(|&e| e > 1.05 * q0).collect();
        let pts = geometric_points(q0, hi, &extra);
        // r ~ (q − q₀)^{1/2} at the lower end
        let beta = 0.5 * (n as f64 - 2.0);
        let (p, w) = (1.0 / (1.0 + beta), pts[1] - q0);
        let head = w_quad
            .integrate(
                |t: f64| {
                    if t <= 0.0 {
                        return 0.0;
                    }
                    let d = w * t.powf(p);
                    h(q0 + d, d) * w * p * t.powf(p - 1.0)
                },
                0.0,
                1.0,
            )?
            .value;
        let body = w_quad.integrate_pieces(g, &pts[1..])?.value;
        Ok(head + body)
    }
}

/// Taylor coefficients of W at u = 0, through the largest order below z_min − 1.
///
/// [u^j]W = ∫ [u^j] B(√(u + q^{2k}), q)/(2√(u + q^{2k})) dq, integrable at q = 0 exactly when
/// j < z_min − 1.
pub fn w_taylor(amp: &ModelAmplitude) -> Result<Vec<f64>, OscError> {
    let (n, k) = (amp.n, amp.k);
    let zm = to_f64(&z_min(n, k));
    let count = (zm - 1.0).ceil().max(0.0) as usize;
    if count == 0 {
        return Ok(Vec::new());
    }
    let order = count - 1;
    let rho = amp.b.cutoff.inner;
    let big_r = amp.b.cutoff.outer;
    let coeff = |q: f64, j: usize| -> f64 {
        let r2 = Jet::variable(0.0, order).add_const(q.powi(2 * k as i32));
        let r = r2.powf(0.5);
        if r.value() >= big_r {
            return 0.0;
        }
        let qj = Jet::constant(q, order);
        let g = amp.b.eval_jet(&r, &qj).mul(&r.powf(n as f64 - 2.0)).scale(0.5 * q.powi(n as i32 - 1));
        g.c[j]
    };
    let quad = Quad::new(0.0, 1e-13).with_limit(4000);
    let top = big_r.powf(1.0 / k as f64).min(big_r);
    let pts = geometric_points(0.5 * rho.min(top), top, &[rho, rho.powf(1.0 / k as f64)]);
    (0..count)
        .map(|j| {
            let beta = (k as f64) * (n as f64 - 2.0 - 2.0 * j as f64) + n as f64 - 1.0;
            let head = quad.integrate_left_power(|q| coeff(q, j), 0.0, pts[0], beta)?.value;
            let body = quad.integrate_pieces(|q| coeff(q, j), &pts)?.value;
            Ok(head + body)
        })
        .collect()
}

/// |v| beyond which â is negligible.
fn ahat_reach(time: &TimeProfile) -> f64 {
    match time {
        TimeProfile::Bump(b) => b.decay_cutoff().0.min(400.0 / b.t_max + b.shift.abs()),
        TimeProfile::Gauss(_) => time.effective_support(),
    }
}

/// J(λ) by adaptive quadrature of λ^{−1}∫ â(v) W(v/λ) dv, split at v = 0.
pub fn oracle_eval(amp: &ModelAmplitude, lambda: f64) -> Result<Estimate<f64>, OscError> {
    if !(lambda > 0.0) {
        return Err(OscError::Precondition("λ must be positive"));
    }
    let big_r = amp.b.cutoff.outer;
    let reach = ahat_reach(&amp.time);
    // W(u) ~ |u|^{z_min − 1} at u = 0
    let beta = to_f64(&z_min(amp.n, amp.k)) - 1.0;
    // Subtracting the Taylor polynomial T of W keeps the vanishing moments of â from turning
    // into cancellation; its contribution Σ W_j λ^{−j} ∫v^j â is added back exactly.
    let taylor = w_taylor(amp)?;
    let poly = |u: f64| taylor.iter().rev().fold(0.0, |acc, c| acc * u + c);
    let restored: f64 = taylor.iter().enumerate().map(|(j, c)| c * lambda.powi(-(j as i32)) * amp.time.moment(j as u32)).sum();
    let mut failure = None;
    let mut side = |sign: f64, extent: f64| -> Result<Estimate<f64>, OscError> {
        let top = if taylor.is_empty() { extent.min(reach) } else { reach };
        let mut f = |x: f64| -> f64 {
            let v = sign * x;
            match w_profile(amp, v / lambda) {
                Ok(w) => amp.time.ahat(v) * (w - poly(v / lambda)),
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            }
        };
        let first = top.min(1.0);
        let head = V_QUAD.integrate_left_power(&mut f, 0.0, first, beta.max(-0.9))?;
        let body = V_QUAD.integrate_pieces(&mut f, &geometric_points(first, top, &[]))?;
        Ok(Estimate { value: head.value + body.value, error: head.error + body.error, intervals: head.intervals + body.intervals })
    };
    let plus = side(1.0, lambda * big_r * big_r)?;
    let minus = side(-1.0, lambda * big_r.powi(2 * amp.k as i32))?;
    if let Some(e) = failure {
        return Err(e);
    }
    let value = (plus.value + minus.value + restored) / lambda;
    let error = (plus.error + minus.error) / lambda;
    if error > ORACLE_TOL * value.abs() {
        return Err(OscError::NotConverged { estimate: value, error });
    }
    Ok(Estimate { value, error, intervals: plus.intervals + minus.intervals })
}

/// J(λ) = ∫ a(t) F(λt) G(λt) dt directly in t, for b(r, q) = b00·χ(r)χ(q) and a bump a(t):
/// F(τ) = ∫ e^{iτr²}χ(r)r^{n−1}dr, G(τ) = ∫ e^{−iτq^{2k}}χ(q)q^{n−1}dq.
///
/// Independent of â and of the u-substitution; meant for moderate λ.
pub fn oracle_eval_separable(amp: &ModelAmplitude, lambda: f64) -> Result<Estimate<f64>, OscError> {
    let TimeProfile::Bump(bump) = &amp.time else {
        return Err(OscError::Precondition("the direct path needs a compactly supported a(t)"));
    };
    if amp.b.terms.iter().any(|&(a, c, v)| (a, c) != (0, 0) && v != 0.0) {
        return Err(OscError::Precondition("the direct path needs b = b00·χ(r)χ(q)"));
    }
    let b00 = amp.b.b00();
    let cut = amp.b.cutoff;
    let e = amp.n as i32 - 1;
    let k2 = 2 * amp.k as i32;
    let quad = Quad::new(0.0, 1e-11).with_limit(4000);
    let radial = |tau: f64, power: i32, sign: f64| -> Result<Complex64, OscError> {
        // at least a few panels per oscillation
        let panels = ((tau.abs() * cut.outer.powi(power) / 3.0).ceil() as usize).clamp(1, 400);
        let pts: Vec<f64> = (0..=panels).map(|i| cut.outer * i as f64 / panels as f64).collect();
        Ok(quad.integrate_pieces(|x: f64| Complex64::from_polar(cut.value(x) * x.powi(e), sign * tau * x.powi(power)), &pts)?.value)
    };
    let mut failure = None;
    let integrand = |t: f64| -> f64 {
        let tau = lambda * t;
        match (radial(tau, 2, 1.0), radial(tau, k2, -1.0)) {
            (Ok(f), Ok(g)) => (bump.a(t) * f * g).re,
            (Err(err), _) | (_, Err(err)) => {
                failure.get_or_insert(err);
                0.0
            }
        }
    };
    let t = bump.t_max;
    let panels = ((lambda * t / 2.0).ceil() as usize).clamp(4, 400);
    let pts: Vec<f64> = (0..=2 * panels).map(|i| -t + t * i as f64 / panels as f64).collect();
    let est = Quad::new(0.0, 1e-9).with_limit(20000).integrate_pieces(integrand, &pts)?;
    if let Some(err) = failure {
        return Err(err);
    }
    Ok(Estimate { value: b00 * est.value, error: b00.abs() * est.error, intervals: est.intervals })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oscillatory::amplitude::{amplitude_factory, ProfileSpec};
    use crate::profile::SpatialProfile;

    fn gauss_amp(n: u32, k: u32) -> ModelAmplitude {
        amplitude_factory(n, k, &ProfileSpec::GaussianWindowed { hermite: vec![(0, 1.0)] }, vec![(0, 0, 1.0)], 0.5, 1.0).unwrap()
    }

    #[test]
    fn w_integrates_to_the_total_mass() {
        // ∫ W(u) du = ∫∫ B dr dq
        let amp = gauss_amp(1, 2);
        let quad = Quad::new(0.0, 1e-8).with_limit(4000);
        let w = |u: f64| w_profile(&amp, u).unwrap();
        let total = quad.integrate_left_power(w, 0.0, 1.0, -0.5).unwrap().value + quad.integrate_left_power(|x| w(-x), 0.0, 1.0, -0.5).unwrap().value;
        let c = amp.b.cutoff;
        let one = quad.integrate(|x| c.value(x), 0.0, 1.0).unwrap().value;
        assert!((total - one * one).abs() < 1e-7, "{total} vs {}", one * one);
    }

    #[test]
    fn zero_amplitude_gives_zero() {
        let amp = gauss_amp(1, 2).with_b(SpatialProfile::flat(0.0, crate::profile::Cutoff::new(0.5, 1.0)));
        assert_eq!(oracle_eval(&amp, 100.0).unwrap().value, 0.0);
    }

    #[test]
    fn w_taylor_matches_difference_quotients() {
        let amp = amplitude_factory(4, 2, &ProfileSpec::GaussianWindowed { hermite: vec![(2, 1.0)] }, vec![(0, 0, 1.0), (2, 1, 0.5)], 0.5, 1.0).unwrap();
        let t = w_taylor(&amp).unwrap();
        assert_eq!(t.len(), 2);
        let w = |u: f64| w_profile(&amp, u).unwrap();
        let h = 1e-4;
        assert!((w(0.0) - t[0]).abs() < 1e-10 * t[0].abs(), "{} vs {}", w(0.0), t[0]);
        // W = W₀ + W₁u + O(u²) on both sides
        let d = (w(h) - w(-h)) / (2.0 * h);
        assert!((d - t[1]).abs() < 1e-3 * t[1].abs(), "{d} vs {}", t[1]);
    }

    #[test]
    fn gaussian_slope_is_minus_z_min() {
        // radius 2 keeps the λ^{−1} correction small enough for a one-decade slope
        let amp = amplitude_factory(1, 2, &ProfileSpec::GaussianWindowed { hermite: vec![(0, 1.0)] }, vec![(0, 0, 1.0)], 1.0, 2.0).unwrap();
        let (l1, l2) = (100.0, 1000.0);
        let (j1, j2) = (oracle_eval(&amp, l1).unwrap().value, oracle_eval(&amp, l2).unwrap().value);
        let slope = (j2.abs().ln() - j1.abs().ln()) / (l2.ln() - l1.ln());
        assert!((slope + 0.75).abs() < 0.05, "slope {slope}");
    }

    #[test]
    fn direct_time_integral_agrees() {
        let amp = amplitude_factory(1, 2, &ProfileSpec::Bump { t_max: 0.5, shift: 0.0 }, vec![(0, 0, 1.0)], 0.5, 1.0).unwrap();
        let a = oracle_eval(&amp, 50.0).unwrap();
        let b = oracle_eval_separable(&amp, 50.0).unwrap();
        assert!((a.value - b.value).abs() < 1e-6 * a.value.abs() + a.error + b.error, "{a:?} vs {b:?}");
    }
}
