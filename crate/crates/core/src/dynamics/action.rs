//! Generating function of the flow by shooting, and the Taylor structure of its phase.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::ode::{self, OdeOptions};
use super::{DynamicsError, PhaseSpacePoint, PotentialField};
use crate::geometry::HomogeneousPotential;
use crate::num::linalg::solve_dense;

/// Flows (z, A = 0, M = I) where A' = |ξ|² − V(x) and M' = DF·M.
pub(crate) fn flow_with_variations(
    field: &PotentialField,
    z: &PhaseSpacePoint,
    t: f64,
    opts: &OdeOptions,
) -> Result<(PhaseSpacePoint, Vec<Vec<f64>>, f64), DynamicsError> {
    let n = field.n;
    let d = 2 * n;
    let mut y0 = z.to_state();
    y0.push(0.0);
    for i in 0..d {
        for j in 0..d {
            y0.push(if i == j { 1.0 } else { 0.0 });
        }
    }
    let rhs = |s: &[f64], out: &mut [f64]| {
        field.rhs(s, out);
        let x = &s[..n];
        let xi = &s[n..d];
        out[d] = xi.iter().map(|v| v * v).sum::<f64>() - field.v.eval(x);
        let h = field.hessian(x);
        let m = &s[d + 1..];
        let dm = &mut out[d + 1..];
        for j in 0..d {
            for i in 0..n {
                // top block: 2·(lower rows of M)
                dm[i * d + j] = 2.0 * m[(n + i) * d + j];
                let mut acc = 0.0;
                for l in 0..n {
                    acc += h[i][l] * m[l * d + j];
                }
                dm[(n + i) * d + j] = -acc;
            }
        }
    };
    let sol = ode::integrate(rhs, &y0, 0.0, t, opts)?;
    let z1 = PhaseSpacePoint::from_state(&sol.y, n);
    let a = sol.y[d];
    let m = (0..d).map(|i| sol.y[d + 1 + i * d..d + 1 + (i + 1) * d].to_vec()).collect();
    Ok((z1, m, a))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_iterations: usize,
    /// Caustic-free horizon; |t| beyond it is refused.
    pub horizon: Option<f64>,
}

impl Default for ShootingOptions {
    fn default() -> Self {
        ShootingOptions { rtol: 1e-13, atol: 1e-20, max_iterations: 40, horizon: None }
    }
}

/// Default horizon: half the period lower bound.
pub fn caustic_horizon(period_bound: f64, factor: f64) -> f64 {
    factor * period_bound
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratingValue {
    /// S(t, x, ξ)
    pub s: f64,
    /// S − ⟨x, ξ⟩, computed without cancellation.
    pub s_minus_pairing: f64,
    /// Initial position of the shooting trajectory.
    pub y: Vec<f64>,
    /// Momentum at time t, which equals ∂ₓS.
    pub final_momentum: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
}

/// S(t, x, ξ): the trajectory from (y, ξ) reaches x at time t and
/// S = ⟨y, ξ⟩ + ∫₀ᵗ (⟨ξ, ẋ⟩ − p) ds.
pub fn generating_function(p: &HomogeneousPotential, t: f64, x: &[f64], xi: &[f64], opts: &ShootingOptions) -> Result<GeneratingValue, DynamicsError> {
    let field = PotentialField::new(p);
    generating_with(&field, t, x, xi, opts)
}

pub(crate) fn generating_with(field: &PotentialField, t: f64, x: &[f64], xi: &[f64], opts: &ShootingOptions) -> Result<GeneratingValue, DynamicsError> {
    let n = field.n;
    if x.len() != n || xi.len() != n {
        return Err(DynamicsError::Dimension);
    }
    if let Some(hz) = opts.horizon {
        if t.abs() > hz {
            return Err(DynamicsError::BeyondHorizon { t, horizon: hz });
        }
    }
    let pairing: f64 = x.iter().zip(xi).map(|(a, b)| a * b).sum();
    if t == 0.0 {
        return Ok(GeneratingValue { s: pairing, s_minus_pairing: 0.0, y: x.to_vec(), final_momentum: xi.to_vec(), iterations: 0, residual: 0.0 });
    }
    let ode_opts = OdeOptions { rtol: opts.rtol, atol: opts.atol, ..Default::default() };
    let mut y: Vec<f64> = x.iter().zip(xi).map(|(a, b)| a - 2.0 * t * b).collect();
    let xscale = x.iter().chain(&y).fold(0.0f64, |m, v| m.max(v.abs()));
    let target = 1e3 * opts.rtol * xscale + 1e3 * opts.atol;
    let mut best = f64::INFINITY;
    for it in 0..opts.max_iterations {
        let (z1, m, a) = flow_with_variations(field, &PhaseSpacePoint::new(y.clone(), xi.to_vec()), t, &ode_opts)?;
        let r: Vec<f64> = z1.x.iter().zip(x).map(|(a, b)| a - b).collect();
        let res = r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        best = best.min(res);
        let jac: Vec<Vec<f64>> = (0..n).map(|i| m[i][..n].to_vec()).collect();
        let dy = solve_dense(&jac, &r).ok_or(DynamicsError::ShootingFailed { residual: res, iterations: it })?;
        let step = dy.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if res <= target || step <= 4.0 * f64::EPSILON * xscale.max(1e-300) {
            let smp = y.iter().zip(x).zip(xi).map(|((yi, xi0), e)| (yi - xi0) * e).sum::<f64>() + a;
            return Ok(GeneratingValue { s: pairing + smp, s_minus_pairing: smp, y, final_momentum: z1.xi, iterations: it, residual: res });
        }
        for (yi, d) in y.iter_mut().zip(&dy) {
            *yi -= d;
        }
    }
    Err(DynamicsError::ShootingFailed { residual: best, iterations: opts.max_iterations })
}

/// (∂ₜS, ∂²ₜS) at t = 0 by central differences with step tau.
pub fn time_derivatives_at_zero(p: &HomogeneousPotential, x: &[f64], xi: &[f64], tau: f64, opts: &ShootingOptions) -> Result<(f64, f64), DynamicsError> {
    let field = PotentialField::new(p);
    let plus = generating_with(&field, tau, x, xi, opts)?.s_minus_pairing;
    let minus = generating_with(&field, -tau, x, xi, opts)?.s_minus_pairing;
    Ok(((plus - minus) / (2.0 * tau), (plus + minus) / (tau * tau)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct S2kOptions {
    pub shooting: ShootingOptions,
    /// Momentum size relative to the radius in the ξ-linear difference quotient.
    pub sigma_ratio: f64,
    /// Largest tolerated relative disagreement between extrapolations from different radius sets.
    pub max_radius_deviation: f64,
}

impl Default for S2kOptions {
    fn default() -> Self {
        S2kOptions { shooting: ShootingOptions::default(), sigma_ratio: 1e-3, max_radius_deviation: 1e-3 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct S2kRow {
    pub t: f64,
    /// Relative deviation of the ξ-free degree-2k part from −t·V₂ₖ.
    pub xi_free_deviation: f64,
    /// Relative deviation of the ξ-linear degree-2k part from t²⟨ξ, ∇V₂ₖ⟩.
    pub xi_linear_deviation: f64,
    /// Relative disagreement between radius choices.
    pub radius_deviation: f64,
    pub xi_free_estimate: f64,
    pub xi_linear_estimate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct S2kReport {
    pub rows: Vec<S2kRow>,
    pub max_xi_free_deviation: f64,
    pub max_xi_linear_deviation: f64,
}

/// Extracts the degree-2k Taylor part of Ψ = S − ⟨x,ξ⟩ + t|ξ|² + tE_c at (x₀, 0) along
/// test directions and compares it with −tV₂ₖ(x) + t²⟨ξ, ∇V₂ₖ(x)⟩.
///
/// The estimates at each radius are extrapolated to zero radius by polynomial interpolation
/// in the radius; `radius_grid` needs at least two entries.
pub fn verify_s2k_structure(p: &HomogeneousPotential, t_grid: &[f64], radius_grid: &[f64], opts: &S2kOptions) -> Result<S2kReport, DynamicsError> {
    if radius_grid.len() < 2 {
        return Err(DynamicsError::IllConditioned { deviation: f64::INFINITY });
    }
    let n = p.n;
    let k2 = 2 * p.k as i32;
    let field = PotentialField::new(p);
    let grad2k = p.v2k.gradient();
    let mut dirs: Vec<Vec<f64>> = Vec::new();
    for i in 0..n {
        for sgn in [1.0, -1.0] {
            let mut d = vec![0.0; n];
            d[i] = sgn;
            dirs.push(d);
        }
    }
    if n > 1 {
        dirs.push(vec![1.0 / (n as f64).sqrt(); n]);
    }

    let psi = |t: f64, y: &[f64], xi: &[f64]| -> Result<f64, DynamicsError> {
        let x: Vec<f64> = p.x0.iter().zip(y).map(|(a, b)| a + b).collect();
        let g = generating_with(&field, t, &x, xi, &opts.shooting)?;
        Ok(g.s_minus_pairing + t * xi.iter().map(|v| v * v).sum::<f64>() + t * p.e_c)
    };

    let mut rows = Vec::new();
    for &t in t_grid {
        let mut row = S2kRow { t, xi_free_deviation: 0.0, xi_linear_deviation: 0.0, radius_deviation: 0.0, xi_free_estimate: 0.0, xi_linear_estimate: 0.0 };
        for d in &dirs {
            let exact_free = -t * p.v2k.eval(d);
            let g: Vec<f64> = grad2k.iter().map(|q| q.eval(d)).collect();
            let gn = g.iter().map(|v| v * v).sum::<f64>().sqrt();
            let xh: Vec<f64> = g.iter().map(|v| v / gn).collect();
            let exact_lin = t * t * gn;

            let mut free = Vec::new();
            let mut lin = Vec::new();
            for &rho in radius_grid {
                let y: Vec<f64> = d.iter().map(|v| rho * v).collect();
                free.push(psi(t, &y, &vec![0.0; n])? / rho.powi(k2));
                let sigma = opts.sigma_ratio * rho;
                let xp: Vec<f64> = xh.iter().map(|v| sigma * v).collect();
                let xm: Vec<f64> = xh.iter().map(|v| -sigma * v).collect();
                lin.push((psi(t, &y, &xp)? - psi(t, &y, &xm)?) / (2.0 * sigma * rho.powi(k2 - 1)));
            }
            let (ef, df) = extrapolate_pair(radius_grid, &free);
            let (el, dl) = extrapolate_pair(radius_grid, &lin);
            let rf = (ef - exact_free).abs() / exact_free.abs();
            let rl = (el - exact_lin).abs() / exact_lin.abs();
            if rf >= row.xi_free_deviation {
                row.xi_free_deviation = rf;
                row.xi_free_estimate = ef;
            }
            if rl >= row.xi_linear_deviation {
                row.xi_linear_deviation = rl;
                row.xi_linear_estimate = el;
            }
            row.radius_deviation = row.radius_deviation.max(df / exact_free.abs()).max(dl / exact_lin.abs());
        }
        if row.radius_deviation > opts.max_radius_deviation {
            return Err(DynamicsError::IllConditioned { deviation: row.radius_deviation });
        }
        rows.push(row);
    }
    let max_free = rows.iter().map(|r| r.xi_free_deviation).fold(0.0, f64::max);
    let max_lin = rows.iter().map(|r| r.xi_linear_deviation).fold(0.0, f64::max);
    Ok(S2kReport { rows, max_xi_free_deviation: max_free, max_xi_linear_deviation: max_lin })
}

// Zero-radius extrapolation from all radii, and its disagreement with the one that drops the largest radius.
fn extrapolate_pair(r: &[f64], f: &[f64]) -> (f64, f64) {
    let all = neville_at_zero(r, f);
    let (imax, _) = r.iter().enumerate().fold((0, f64::NEG_INFINITY), |(bi, bv), (i, &v)| if v > bv { (i, v) } else { (bi, bv) });
    let rs: Vec<f64> = r.iter().enumerate().filter(|&(i, _)| i != imax).map(|(_, &v)| v).collect();
    let fs: Vec<f64> = f.iter().enumerate().filter(|&(i, _)| i != imax).map(|(_, &v)| v).collect();
    let sub = neville_at_zero(&rs, &fs);
    (all, (all - sub).abs())
}

fn neville_at_zero(x: &[f64], y: &[f64]) -> f64 {
    let mut p = y.to_vec();
    let m = x.len();
    for lvl in 1..m {
        for i in 0..m - lvl {
            let (xi, xj) = (x[i], x[i + lvl]);
            p[i] = (xj * p[i] - xi * p[i + 1]) / (xj - xi);
        }
    }
    p[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::mpoly::MPoly;

    fn flat() -> HomogeneousPotential {
        HomogeneousPotential::new(1, 2, MPoly::zero(1), MPoly::constant(1, 0.3), 0.3, vec![0.0], vec![(-1.0, 1.0)]).unwrap()
    }

    #[test]
    fn time_zero_is_pairing() {
        let p = HomogeneousPotential::reference_1d();
        let g = generating_function(&p, 0.0, &[0.3], &[0.7], &ShootingOptions::default()).unwrap();
        assert!((g.s - 0.21).abs() < 1e-15);
    }

    #[test]
    fn flat_potential_phase() {
        let p = flat();
        let (t, x, xi) = (0.4, 0.2, -0.5);
        let g = generating_function(&p, t, &[x], &[xi], &ShootingOptions::default()).unwrap();
        let psi = g.s - x * xi + t * p.e_c;
        assert!((psi + t * xi * xi).abs() < 1e-12);
    }

    #[test]
    fn momentum_and_time_derivatives() {
        let p = HomogeneousPotential::reference_1d();
        let opts = ShootingOptions::default();
        let (t, x, xi) = (0.1, 0.3, 0.2);
        let g = generating_function(&p, t, &[x], &[xi], &opts).unwrap();
        let h = 1e-5;
        let sp = generating_function(&p, t, &[x + h], &[xi], &opts).unwrap().s;
        let sm = generating_function(&p, t, &[x - h], &[xi], &opts).unwrap().s;
        assert!(((sp - sm) / (2.0 * h) - g.final_momentum[0]).abs() < 1e-6);

        let (d1, d2) = time_derivatives_at_zero(&p, &[x], &[xi], 1e-3, &opts).unwrap();
        let energy = xi * xi + p.v(&[x]);
        assert!((d1 + energy).abs() < 1e-6, "{d1} vs {}", -energy);
        let expect = 2.0 * xi * p.grad_v(&[x])[0];
        assert!((d2 - expect).abs() < 1e-5, "{d2} vs {expect}");
    }

    #[test]
    fn horizon_is_enforced() {
        let p = HomogeneousPotential::reference_1d();
        let opts = ShootingOptions { horizon: Some(0.1), ..Default::default() };
        assert!(matches!(generating_function(&p, 0.2, &[0.1], &[0.0], &opts), Err(DynamicsError::BeyondHorizon { .. })));
    }

    #[test]
    fn quartic_structure_coefficients() {
        let p = HomogeneousPotential::reference_1d();
        let rep = verify_s2k_structure(&p, &[0.05, 0.1], &[0.1, 0.07, 0.05, 0.035], &S2kOptions::default()).unwrap();
        for r in &rep.rows {
            // ξ-free coefficient +t, ξ-linear coefficient −4t² along ξ̂ = −1 gives +4t²
            assert!((r.xi_free_estimate - r.t).abs() < 1e-4 * r.t);
            assert!((r.xi_linear_estimate - 4.0 * r.t * r.t).abs() < 1e-4 * r.t * r.t);
        }
        assert!(rep.max_xi_free_deviation < 1e-4 && rep.max_xi_linear_deviation < 1e-4);
    }
}
