//! γ(E_c, h, φ) = Σ φ((λ_j − E_c)/h) over the window, its predicted leading term and fits.

use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use super::eigen::{eigenvalues_in_window, FdOperator, GridOptions};
use super::pair::SchwartzPair;
use super::SpectralError;
use crate::geometry::{angular_factor, sphere_surface, HomogeneousPotential};
use crate::mellin::{classify_case, leading_distribution, z_min, CaseTag};
use crate::num::rpoly::to_f64;
use crate::oscillatory::fit::line_fit;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSample {
    pub h: f64,
    pub e_c: f64,
    pub eps: f64,
    /// Sorted eigenvalues in [E_c − ε, E_c + ε].
    pub eigenvalues: Vec<f64>,
    /// Richardson estimates, one per eigenvalue.
    pub estimates: Vec<f64>,
    pub gamma: f64,
    /// Bound on the neglected out-of-window part of the full sum.
    pub tail_bound: f64,
    pub domain: (f64, f64),
    /// Interior points of the coarse and fine grids.
    pub points: (usize, usize),
}

pub fn gamma_trace(e_c: f64, h: f64, phi: &SchwartzPair, eigs: &[f64]) -> f64 {
    eigs.iter().map(|&l| phi.phi((l - e_c) / h)).sum()
}

/// Bound on Σ |φ((λ_j − E_c)/h)| over the eigenvalues of `op` outside [E_c − ε, E_c + ε].
///
/// Shells in x = (λ − E_c)/h are counted with Sturm sequences and weighted by a sampled
/// sup of |φ| plus a Lipschitz allowance; beyond φ's decay cutoff every remaining
/// eigenvalue of the finite matrix is weighted by the decay bound.
pub fn tail_bound(op: &FdOperator, e_c: f64, eps: f64, h: f64, phi: &SchwartzPair) -> f64 {
    let t = phi.support();
    let lip = t * 2.0 * t * (-1.0f64).exp() / (2.0 * PI);
    let (xc, far) = phi.decay_bound();
    let reach = xc + phi.shift().abs();
    let start = eps / h;
    let count = |x: f64| op.count_below(e_c + x * h);
    let mut total = 0.0;
    for dir in [1.0, -1.0] {
        let mut x = start;
        while x < reach {
            let w = (0.05 * x).max(1.0).min(reach - x);
            let n_in = if dir > 0.0 { count(x + w) - count(x) } else { count(-x) - count(-x - w) };
            if n_in > 0 {
                let steps = (w / 0.25).ceil().max(1.0) as usize;
                let s = w / steps as f64;
                let sup = (0..=steps).map(|i| phi.phi(dir * (x + s * i as f64)).abs()).fold(0.0, f64::max);
                total += n_in as f64 * (sup + 0.5 * lip * s);
            }
            x += w;
        }
    }
    let inside_reach = count(reach) - count(-reach);
    total + (op.diag.len() - inside_reach) as f64 * far
}

/// Eigensolve, γ and its tail bound at one h for the window [E_c − ε, E_c + ε].
pub fn spectral_sample(p: &HomogeneousPotential, e_c: f64, eps: f64, h: f64, phi: &SchwartzPair, opts: &GridOptions) -> Result<SpectralSample, SpectralError> {
    let solve = eigenvalues_in_window(p, h, (e_c - eps, e_c + eps), opts)?;
    let eigenvalues: Vec<f64> = solve.eigenvalues.iter().map(|e| e.value).collect();
    let estimates = solve.eigenvalues.iter().map(|e| e.estimate).collect();
    let gamma = gamma_trace(e_c, h, phi, &eigenvalues);
    let op = FdOperator::new(p, h, solve.domain, solve.points.1);
    let tail = tail_bound(&op, e_c, eps, h, phi);
    Ok(SpectralSample { h, e_c, eps, eigenvalues, estimates, gamma, tail_bound: tail, domain: solve.domain, points: solve.points })
}

/// Leading term coefficient·h^exponent·(log h)^log_power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub case: CaseTag,
    pub exponent: f64,
    pub log_power: u8,
    pub coefficient: f64,
    pub value: f64,
}

pub fn predicted_leading(p: &HomogeneousPotential, phi: &SchwartzPair, h: f64) -> Result<Prediction, SpectralError> {
    if !(h > 0.0) {
        return Err(SpectralError::Precondition("h must be positive"));
    }
    let (n, k) = (p.n as u32, p.k);
    let case = classify_case(n, k);
    let exponent = to_f64(&z_min(n, k)) - n as f64;
    let angular = angular_factor(p)?.value;
    // the IntegerEven branch carries 1/(2π)^n without the surface factor
    let surface = if case == CaseTag::IntegerEven { 1.0 } else { sphere_surface(p.n) };
    // φ = â/2π for the profile handed to the residue engine
    let t = leading_distribution(n, k, &phi.time_profile())? / (2.0 * PI);
    let c = surface / (2.0 * PI).powi(n as i32) * angular * t;
    let log_power = case.has_log() as u8;
    // λ^{−z} log λ = −h^z log h
    let coefficient = if log_power == 1 { -c } else { c };
    let value = coefficient * h.powf(exponent) * if log_power == 1 { h.ln() } else { 1.0 };
    Ok(Prediction { case, exponent, log_power, coefficient, value })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitModel {
    Power,
    PowerLog,
}

/// γ ≈ coefficient·h^exponent, times log h for the power-log model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingFit {
    pub exponent: f64,
    pub coefficient: f64,
    pub residual: f64,
    pub model: FitModel,
}

pub fn scaling_fit(samples: &[SpectralSample], model: FitModel) -> Result<ScalingFit, SpectralError> {
    let pts: Vec<(f64, f64)> = samples.iter().map(|s| (s.h, s.gamma)).collect();
    scaling_fit_points(&pts, model)
}

pub fn scaling_fit_points(samples: &[(f64, f64)], model: FitModel) -> Result<ScalingFit, SpectralError> {
    if samples.len() < 8 {
        return Err(SpectralError::Precondition("scaling fits need at least 8 samples"));
    }
    let (lo, hi) = samples.iter().fold((f64::INFINITY, 0.0f64), |(a, b), s| (a.min(s.0), b.max(s.0)));
    if !(lo > 0.0) || hi < 6.0 * lo * (1.0 - 1e-12) {
        return Err(SpectralError::Precondition("scaling fits need h spanning a factor 6"));
    }
    if model == FitModel::PowerLog && hi >= 1.0 {
        return Err(SpectralError::Precondition("power-log fits need h < 1"));
    }
    let sign = samples[0].1.signum();
    if samples.iter().any(|s| s.1 == 0.0 || s.1.signum() != sign) {
        return Err(SpectralError::SignChange);
    }
    let log = model == FitModel::PowerLog;
    let pts: Vec<(f64, f64)> = samples.iter().map(|&(h, g)| (h.ln(), g.abs().ln() - if log { h.ln().abs().ln() } else { 0.0 })).collect();
    let (slope, icpt, residual) = line_fit(&pts)?;
    let coefficient = if log { -sign } else { sign } * icpt.exp();
    Ok(ScalingFit { exponent: slope, coefficient, residual, model })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::mpoly::MPoly;
    use crate::spectral::pair::make_test_function;

    fn geometric(lo: f64, hi: f64, m: usize) -> Vec<f64> {
        (0..m).map(|i| lo * (hi / lo).powf(i as f64 / (m - 1) as f64)).collect()
    }

    #[test]
    fn trivial_sums() {
        let phi = make_test_function(0.3);
        assert_eq!(gamma_trace(0.0, 0.01, &phi, &[]), 0.0);
        assert_eq!(gamma_trace(0.2, 0.01, &phi, &[0.2]), phi.phi(0.0));
        let eigs = [-0.03, -0.001, 0.004, 0.02];
        let moved: Vec<f64> = eigs.iter().map(|e| e + 1.7).collect();
        assert!((gamma_trace(0.0, 0.01, &phi, &eigs) - gamma_trace(1.7, 0.01, &phi, &moved)).abs() < 1e-14);
    }

    #[test]
    fn exponents_and_branches() {
        let phi = make_test_function(0.25);
        let p = HomogeneousPotential::reference_1d();
        let pr = predicted_leading(&p, &phi, 0.01).unwrap();
        assert_eq!(pr.exponent, -0.25);
        assert_eq!(pr.log_power, 0);
        assert!((pr.value - pr.coefficient * 0.01f64.powf(-0.25)).abs() < 1e-12 * pr.value.abs());
        let full = MPoly::from_terms(3, &[(vec![6, 0, 0], -1.0), (vec![0, 6, 0], -1.0), (vec![0, 0, 6], -1.0)]);
        let p3 = HomogeneousPotential::from_full(3, 3, full, 0.0, vec![0.0; 3], vec![(-2.0, 2.0); 3]).unwrap();
        let pr3 = predicted_leading(&p3, &phi, 0.01).unwrap();
        assert_eq!(pr3.exponent, -1.0);
        assert_eq!(pr3.log_power, 1);
        assert_eq!(pr3.case, CaseTag::IntegerOddLog);
    }

    #[test]
    fn prediction_scales_with_the_form() {
        let phi = make_test_function(0.25);
        let p = HomogeneousPotential::reference_1d();
        let base = predicted_leading(&p, &phi, 0.01).unwrap().value;
        for c in [0.5, 3.0] {
            let scaled = predicted_leading(&p.scaled_form(c), &phi, 0.01).unwrap().value;
            assert!((scaled / base - c.powf(-0.25)).abs() < 1e-9);
        }
    }

    #[test]
    fn synthetic_power_law() {
        let s: Vec<(f64, f64)> = geometric(1.0 / 400.0, 1.0 / 60.0, 12).into_iter().map(|h| (h, 3.0 * h.powf(-0.25))).collect();
        let f = scaling_fit_points(&s, FitModel::Power).unwrap();
        assert!((f.exponent + 0.25).abs() < 1e-12 && (f.coefficient - 3.0).abs() < 1e-12);
        let l: Vec<(f64, f64)> = s.iter().map(|&(h, _)| (h, -2.0 * h.powf(-1.0) * h.ln())).collect();
        let f = scaling_fit_points(&l, FitModel::PowerLog).unwrap();
        assert!((f.exponent + 1.0).abs() < 1e-12 && (f.coefficient + 2.0).abs() < 1e-12);
    }

    #[test]
    fn background_biases_towards_zero() {
        let bias = |lo: f64| {
            let s: Vec<(f64, f64)> = geometric(lo, 6.5 * lo, 10).into_iter().map(|h| (h, 3.0 * h.powf(-0.25) + 1.0)).collect();
            scaling_fit_points(&s, FitModel::Power).unwrap().exponent + 0.25
        };
        let (coarse, fine) = (bias(1e-2), bias(1e-4));
        assert!(coarse > fine && fine > 0.0);
    }

    #[test]
    fn fit_preconditions() {
        let s: Vec<(f64, f64)> = geometric(0.01, 0.1, 10).into_iter().map(|h| (h, h.sin() - 0.05)).collect();
        assert_eq!(scaling_fit_points(&s, FitModel::Power), Err(SpectralError::SignChange));
        assert!(scaling_fit_points(&s[..7], FitModel::Power).is_err());
        let narrow: Vec<(f64, f64)> = geometric(0.01, 0.05, 10).into_iter().map(|h| (h, h)).collect();
        assert!(scaling_fit_points(&narrow, FitModel::Power).is_err());
    }

    #[test]
    fn sample_is_self_consistent() {
        let p = HomogeneousPotential::reference_1d();
        let phi = make_test_function(0.25);
        let s = spectral_sample(&p, 0.0, 0.05, 1.0 / 60.0, &phi, &GridOptions::default()).unwrap();
        assert!(s.eigenvalues.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(s.gamma, gamma_trace(0.0, s.h, &phi, &s.eigenvalues));
        assert!(s.tail_bound.is_finite() && s.tail_bound > 0.0);
    }
}
