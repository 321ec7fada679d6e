//! Adaptive Dormand–Prince 5(4) integrator for autonomous systems.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
#[allow(unused_imports)]
use num_traits::Float;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;

const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;

// b5 − b4
const E1: f64 = 35.0 / 384.0 - 5179.0 / 57600.0;
const E3: f64 = 500.0 / 1113.0 - 7571.0 / 16695.0;
const E4: f64 = 125.0 / 192.0 - 393.0 / 640.0;
const E5: f64 = -2187.0 / 6784.0 + 92097.0 / 339200.0;
const E6: f64 = 11.0 / 84.0 - 187.0 / 2100.0;
const E7: f64 = -1.0 / 40.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    /// Initial step; chosen automatically when None.
    pub h0: Option<f64>,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions { rtol: 1e-10, atol: 1e-12, max_steps: 2_000_000, h0: None }
    }
}

impl OdeOptions {
    pub fn with_tol(tol: f64) -> Self {
        OdeOptions { rtol: tol, atol: tol, ..Default::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum OdeError {
    /// The step size fell below the floating-point resolution of t.
    StepUnderflow {
        t: f64,
        h: f64,
    },
    TooManySteps {
        t: f64,
        steps: usize,
    },
    NonFinite {
        t: f64,
    },
}

impl fmt::Display for OdeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OdeError::StepUnderflow { t, h } => write!(f, "step size underflow at t = {t:e} (h = {h:e})"),
            OdeError::TooManySteps { t, steps } => write!(f, "step budget of {steps} exhausted at t = {t:e}"),
            OdeError::NonFinite { t } => write!(f, "non-finite state at t = {t:e}"),
        }
    }
}

impl core::error::Error for OdeError {}

/// What the observer wants after an accepted step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Control {
    Continue,
    Stop,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OdeSolution {
    pub t: f64,
    pub y: Vec<f64>,
    pub steps: usize,
    pub rejected: usize,
}

/// Integrates y' = f(y, dy) from t0 to t1 (either direction).
pub fn integrate<F>(f: F, y0: &[f64], t0: f64, t1: f64, opts: &OdeOptions) -> Result<OdeSolution, OdeError>
where
    F: FnMut(&[f64], &mut [f64]),
{
    integrate_observed(f, y0, t0, t1, opts, |_, _, _, _| Control::Continue)
}

/// Like [`integrate`], calling `observe(t_prev, y_prev, t, y)` after every accepted step.
pub fn integrate_observed<F, O>(mut f: F, y0: &[f64], t0: f64, t1: f64, opts: &OdeOptions, mut observe: O) -> Result<OdeSolution, OdeError>
where
    F: FnMut(&[f64], &mut [f64]),
    O: FnMut(f64, &[f64], f64, &[f64]) -> Control,
{
    let dim = y0.len();
    let mut y = y0.to_vec();
    let mut t = t0;
    if t1 == t0 {
        return Ok(OdeSolution { t, y, steps: 0, rejected: 0 });
    }
    let dir = if t1 > t0 { 1.0 } else { -1.0 };
    let span = (t1 - t0).abs();

    let mut k = vec![vec![0.0; dim]; 7];
    let mut tmp = vec![0.0; dim];
    let mut ynew = vec![0.0; dim];
    f(&y, &mut k[0]);

    let mut h = match opts.h0 {
        Some(h0) => h0.abs().min(span),
        None => initial_step(&mut f, &y, &k[0], span, opts),
    };
    let mut steps = 0;
    let mut rejected = 0;
    let mut fac_prev_err = 1e-4f64;

    loop {
        let remaining = (t1 - t).abs();
        if remaining <= 1e-15 * t1.abs().max(t0.abs()).max(span) {
            break;
        }
        let last = h >= remaining;
        if last {
            h = remaining;
        }
        if h < 1e-14 * t.abs().max(span) {
            return Err(OdeError::StepUnderflow { t, h });
        }
        if steps + rejected >= opts.max_steps {
            return Err(OdeError::TooManySteps { t, steps });
        }
        let hs = dir * h;

        stage(&mut tmp, &y, hs, &[(A21, &k[0])]);
        f(&tmp, &mut k[1]);
        stage(&mut tmp, &y, hs, &[(A31, &k[0]), (A32, &k[1])]);
        f(&tmp, &mut k[2]);
        stage(&mut tmp, &y, hs, &[(A41, &k[0]), (A42, &k[1]), (A43, &k[2])]);
        f(&tmp, &mut k[3]);
        stage(&mut tmp, &y, hs, &[(A51, &k[0]), (A52, &k[1]), (A53, &k[2]), (A54, &k[3])]);
        f(&tmp, &mut k[4]);
        stage(&mut tmp, &y, hs, &[(A61, &k[0]), (A62, &k[1]), (A63, &k[2]), (A64, &k[3]), (A65, &k[4])]);
        f(&tmp, &mut k[5]);
        stage(&mut ynew, &y, hs, &[(B1, &k[0]), (B3, &k[2]), (B4, &k[3]), (B5, &k[4]), (B6, &k[5])]);
        f(&ynew, &mut k[6]);

        let mut err = 0.0f64;
        for i in 0..dim {
            let e = hs * (E1 * k[0][i] + E3 * k[2][i] + E4 * k[3][i] + E5 * k[4][i] + E6 * k[5][i] + E7 * k[6][i]);
            let sc = opts.atol + opts.rtol * y[i].abs().max(ynew[i].abs());
            err = err.max((e / sc).abs());
        }
        if !err.is_finite() || ynew.iter().any(|v| !v.is_finite()) {
            // treat as a failed step and shrink hard
            rejected += 1;
            h *= 0.1;
            continue;
        }
        if err <= 1.0 {
            let t_prev = t;
            t = if last { t1 } else { t + hs };
            core::mem::swap(&mut y, &mut ynew);
            k.swap(0, 6);
            steps += 1;
            // ynew now holds the previous state
            if observe(t_prev, &ynew, t, &y) == Control::Stop {
                return Ok(OdeSolution { t, y, steps, rejected });
            }
            // PI step control
            let e = err.max(1e-10);
            let fac = 0.9 * e.powf(-0.7 / 5.0) * fac_prev_err.powf(0.4 / 5.0);
            fac_prev_err = e;
            h *= fac.clamp(0.2, 5.0);
            if last {
                break;
            }
        } else {
            rejected += 1;
            h *= (0.9 * err.powf(-0.2)).max(0.2);
        }
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(OdeError::NonFinite { t });
    }
    Ok(OdeSolution { t, y, steps, rejected })
}

fn stage(out: &mut [f64], y: &[f64], h: f64, terms: &[(f64, &Vec<f64>)]) {
    for i in 0..y.len() {
        let mut s = 0.0;
        for (a, k) in terms {
            s += a * k[i];
        }
        out[i] = y[i] + h * s;
    }
}

fn initial_step<F: FnMut(&[f64], &mut [f64])>(f: &mut F, y: &[f64], f0: &[f64], span: f64, opts: &OdeOptions) -> f64 {
    let sc: Vec<f64> = y.iter().map(|v| opts.atol + opts.rtol * v.abs()).collect();
    let d0 = y.iter().zip(&sc).fold(0.0f64, |m, (v, s)| m.max((v / s).abs()));
    let d1 = f0.iter().zip(&sc).fold(0.0f64, |m, (v, s)| m.max((v / s).abs()));
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let h0 = h0.min(span);
    let y1: Vec<f64> = y.iter().zip(f0).map(|(a, b)| a + h0 * b).collect();
    let mut f1 = vec![0.0; y.len()];
    f(&y1, &mut f1);
    let d2 = f1.iter().zip(f0).zip(&sc).fold(0.0f64, |m, ((a, b), s)| m.max(((a - b) / s).abs())) / h0;
    let h1 = if d1.max(d2) <= 1e-15 { (h0 * 1e-3).max(1e-6) } else { (0.01 / d1.max(d2)).powf(0.2) };
    (100.0 * h0).min(h1).min(span)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_one_period() {
        let rhs = |y: &[f64], d: &mut [f64]| {
            d[0] = y[1];
            d[1] = -y[0];
        };
        let opts = OdeOptions { rtol: 1e-12, atol: 1e-14, ..Default::default() };
        let s = integrate(rhs, &[1.0, 0.0], 0.0, 2.0 * core::f64::consts::PI, &opts).unwrap();
        assert!((s.y[0] - 1.0).abs() < 1e-10 && s.y[1].abs() < 1e-10);
        let back = integrate(rhs, &s.y, 2.0 * core::f64::consts::PI, 0.0, &opts).unwrap();
        assert!((back.y[0] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn blow_up_is_reported() {
        // y' = y², y(0) = 1 blows up at t = 1
        let r = integrate(|y, d| d[0] = y[0] * y[0], &[1.0], 0.0, 2.0, &OdeOptions::default());
        assert!(r.is_err());
    }
}
