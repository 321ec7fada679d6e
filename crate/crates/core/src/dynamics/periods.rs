//! Lower bound on periods near the critical level, and periodic orbits of 1D systems.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::ode::{self, Control, OdeOptions};
use super::{DynamicsError, PhaseSpacePoint, PotentialField};
use crate::geometry::HomogeneousPotential;
use crate::num::linalg::symmetric_norm;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodBoundOptions {
    /// Multiplies the sampled Hessian bound; must be ≥ 1.
    pub safety: f64,
    /// Grid points per axis; None picks a density from the dimension.
    pub points_per_axis: Option<usize>,
}

impl Default for PeriodBoundOptions {
    fn default() -> Self {
        PeriodBoundOptions { safety: 1.05, points_per_axis: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodBound {
    /// 2π/M
    pub bound: f64,
    /// M = max(2, safety·L)
    pub lipschitz: f64,
    /// L, the largest sampled Hessian norm on {V ≤ E_c}
    pub hessian_max: f64,
    pub argmax: Vec<f64>,
}

/// 2π/M with M the sampled Lipschitz constant of the Hamiltonian field on the critical level.
pub fn period_lower_bound(p: &HomogeneousPotential, opts: &PeriodBoundOptions) -> Result<PeriodBound, DynamicsError> {
    let n = p.n;
    let field = PotentialField::new(p);
    let per_axis = opts.points_per_axis.unwrap_or(match n {
        1 => 4001,
        2 => 301,
        3 => 61,
        _ => 17,
    });
    let inside = |x: &[f64]| x.iter().zip(&p.search_box).all(|(v, (lo, hi))| *v >= *lo && *v <= *hi) && field.v.eval(x) <= p.e_c;
    let norm_at = |x: &[f64]| symmetric_norm(&field.hessian(x));

    let mut best = f64::NEG_INFINITY;
    let mut arg = Vec::new();
    let mut idx = vec![0usize; n];
    let mut x = vec![0.0; n];
    'grid: loop {
        for i in 0..n {
            let (lo, hi) = p.search_box[i];
            x[i] = lo + (hi - lo) * idx[i] as f64 / (per_axis - 1) as f64;
        }
        if inside(&x) {
            let v = norm_at(&x);
            if v > best {
                best = v;
                arg = x.clone();
            }
        }
        let mut a = 0;
        loop {
            idx[a] += 1;
            if idx[a] < per_axis {
                break;
            }
            idx[a] = 0;
            a += 1;
            if a == n {
                break 'grid;
            }
        }
    }
    if arg.is_empty() {
        return Err(DynamicsError::EmptySample);
    }
    // constrained pattern search from the best sample
    let mut step = p.search_box.iter().map(|(lo, hi)| hi - lo).fold(0.0, f64::max) / (per_axis - 1) as f64;
    while step > 1e-13 {
        let mut improved = false;
        for i in 0..n {
            for sgn in [1.0, -1.0] {
                let mut y = arg.clone();
                y[i] += sgn * step;
                if inside(&y) {
                    let v = norm_at(&y);
                    if v > best {
                        best = v;
                        arg = y;
                        improved = true;
                    }
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    let m = (opts.safety.max(1.0) * best).max(2.0);
    Ok(PeriodBound { bound: 2.0 * PI / m, lipschitz: m, hessian_max: best, argmax: arg })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicOrbit {
    pub energy: f64,
    /// Turning point the orbit was started from.
    pub start: f64,
    /// The other turning point.
    pub opposite: f64,
    pub period: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitSearchOptions {
    pub grid_points: usize,
    pub t_max: f64,
    pub tol: f64,
}

impl Default for OrbitSearchOptions {
    fn default() -> Self {
        OrbitSearchOptions { grid_points: 4001, t_max: 200.0, tol: 1e-12 }
    }
}

/// Periodic orbits on {p = energy} for n = 1, found by Poincaré return to the section ξ = 0.
///
/// Each orbit is seeded at its left turning point; the period is the first return time to the
/// section with the same crossing direction.
pub fn periodic_orbits_1d(p: &HomogeneousPotential, energy: f64, opts: &OrbitSearchOptions) -> Result<Vec<PeriodicOrbit>, DynamicsError> {
    if p.n != 1 {
        return Err(DynamicsError::Dimension);
    }
    let field = PotentialField::new(p);
    let f = |x: f64| field.v.eval(&[x]) - energy;
    let (lo, hi) = p.search_box[0];
    let mut turning = Vec::new();
    let m = opts.grid_points;
    let mut xa = lo;
    let mut fa = f(xa);
    for i in 1..m {
        let xb = lo + (hi - lo) * i as f64 / (m - 1) as f64;
        let fb = f(xb);
        if fa == 0.0 {
            turning.push(xa);
        } else if fa * fb < 0.0 {
            let (mut a, mut b, mut fa2) = (xa, xb, fa);
            for _ in 0..200 {
                let c = 0.5 * (a + b);
                let fc = f(c);
                if fc * fa2 <= 0.0 {
                    b = c;
                } else {
                    a = c;
                    fa2 = fc;
                }
                if b - a < 1e-15 {
                    break;
                }
            }
            turning.push(0.5 * (a + b));
        }
        xa = xb;
        fa = fb;
    }

    let ode_opts = OdeOptions { rtol: opts.tol, atol: opts.tol * 1e-2, ..Default::default() };
    let mut orbits: Vec<PeriodicOrbit> = Vec::new();
    // in one dimension each component of {V < E} between consecutive turning points is one orbit
    for w in turning.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        if f(0.5 * (x0 + x1)) >= 0.0 {
            continue;
        }
        let force = -field.grad[0].eval(&[x0]);
        if force == 0.0 {
            continue;
        }
        let dir = force.signum();
        // return to ξ = 0 with the starting crossing direction
        let mut bracket = None;
        let mut first = true;
        let obs = |ta: f64, ya: &[f64], tb: f64, yb: &[f64]| {
            if first {
                first = false;
                return Control::Continue;
            }
            let (a, b) = (ya[1], yb[1]);
            if a * b <= 0.0 && a != b {
                let crossing_dir = (b - a).signum();
                if crossing_dir == dir {
                    bracket = Some((ta, ya.to_vec(), tb));
                    return Control::Stop;
                }
            }
            Control::Continue
        };
        let r = ode::integrate_observed(|s, d| field.rhs(s, d), &[x0, 0.0], 0.0, opts.t_max, &ode_opts, obs);
        if r.is_err() {
            continue;
        }
        let Some((ta, ya, tb)) = bracket else { continue };
        // bisection on ξ(t) between the bracketing steps
        let (mut a, mut b) = (ta, tb);
        let xi_at = |t: f64| -> Result<f64, DynamicsError> {
            let s = ode::integrate(|s, d| field.rhs(s, d), &ya, ta, t, &ode_opts)?;
            Ok(s.y[1])
        };
        let sa = ya[1].signum();
        for _ in 0..80 {
            let c = 0.5 * (a + b);
            let v = xi_at(c)?;
            if v.signum() == sa && v != 0.0 {
                a = c;
            } else {
                b = c;
            }
            if b - a < 1e-14 * b {
                break;
            }
        }
        orbits.push(PeriodicOrbit { energy, start: x0, opposite: x1, period: 0.5 * (a + b) });
    }
    Ok(orbits)
}

/// Checks a phase-space point lies on the requested energy level.
pub fn on_level(p: &HomogeneousPotential, z: &PhaseSpacePoint, energy: f64, tol: f64) -> bool {
    (super::energy(p, z) - energy).abs() <= tol
}
