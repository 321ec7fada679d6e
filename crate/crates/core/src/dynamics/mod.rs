//! Hamiltonian flow of p(x, ξ) = |ξ|² + V(x) near the degenerate equilibrium.

pub mod action;
pub mod jets;
pub mod ode;
pub mod periods;

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::geometry::HomogeneousPotential;
use crate::num::mpoly::MPoly;
use ode::{OdeError, OdeOptions};

pub use action::{generating_function, verify_s2k_structure, GeneratingValue, S2kReport, ShootingOptions};
pub use jets::{flow_jet_closed, flow_jet_oracle, FlowJet};
pub use periods::{period_lower_bound, periodic_orbits_1d, PeriodBound, PeriodBoundOptions, PeriodicOrbit};

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpacePoint {
    pub x: Vec<f64>,
    pub xi: Vec<f64>,
}

impl PhaseSpacePoint {
    pub fn new(x: Vec<f64>, xi: Vec<f64>) -> Self {
        debug_assert_eq!(x.len(), xi.len());
        PhaseSpacePoint { x, xi }
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn is_finite(&self) -> bool {
        self.x.iter().chain(&self.xi).all(|v| v.is_finite())
    }

    fn to_state(&self) -> Vec<f64> {
        let mut s = self.x.clone();
        s.extend_from_slice(&self.xi);
        s
    }

    fn from_state(s: &[f64], n: usize) -> Self {
        PhaseSpacePoint { x: s[..n].to_vec(), xi: s[n..2 * n].to_vec() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DynamicsError {
    Ode(OdeError),
    BadTolerance(f64),
    ShootingFailed { residual: f64, iterations: usize },
    BeyondHorizon { t: f64, horizon: f64 },
    EmptySample,
    IllConditioned { deviation: f64 },
    BadOrder { order: u32, max: u32 },
    Dimension,
}

impl fmt::Display for DynamicsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynamicsError::Ode(e) => write!(f, "integration failed: {e}"),
            DynamicsError::BadTolerance(t) => write!(f, "tolerance must be positive, got {t:e}"),
            DynamicsError::ShootingFailed { residual, iterations } => {
                write!(f, "shooting did not converge after {iterations} iterations (residual {residual:e})")
            }
            DynamicsError::BeyondHorizon { t, horizon } => write!(f, "|t| = {} exceeds the caustic-free horizon {horizon}", t.abs()),
            DynamicsError::EmptySample => write!(f, "no sample point of the energy surface found"),
            DynamicsError::IllConditioned { deviation } => {
                write!(f, "finite differencing ill-conditioned: radius choices disagree by {deviation:e}")
            }
            DynamicsError::BadOrder { order, max } => write!(f, "jet order {order} outside 1..={max}"),
            DynamicsError::Dimension => write!(f, "dimension mismatch"),
        }
    }
}

impl core::error::Error for DynamicsError {}

impl From<OdeError> for DynamicsError {
    fn from(e: OdeError) -> Self {
        DynamicsError::Ode(e)
    }
}

/// Gradient and Hessian of V, differentiated once and cached for repeated evaluation.
#[derive(Debug, Clone)]
pub struct PotentialField {
    pub n: usize,
    pub v: MPoly,
    pub grad: Vec<MPoly>,
    pub hess: Vec<Vec<MPoly>>,
}

impl PotentialField {
    pub fn new(p: &HomogeneousPotential) -> Self {
        let grad = p.full.gradient();
        let hess = grad.iter().map(|g| g.gradient()).collect();
        PotentialField { n: p.n, v: p.full.clone(), grad, hess }
    }

    pub fn energy(&self, x: &[f64], xi: &[f64]) -> f64 {
        xi.iter().map(|v| v * v).sum::<f64>() + self.v.eval(x)
    }

    /// Writes (2ξ, −∇V(x)) for the state (x, ξ, ...) into `d`.
    pub fn rhs(&self, s: &[f64], d: &mut [f64]) {
        let n = self.n;
        let x = &s[..n];
        for i in 0..n {
            d[i] = 2.0 * s[n + i];
            d[n + i] = -self.grad[i].eval(x);
        }
    }

    pub fn hessian(&self, x: &[f64]) -> Vec<Vec<f64>> {
        self.hess.iter().map(|row| row.iter().map(|h| h.eval(x)).collect()).collect()
    }
}

/// The Hamiltonian vector field (2ξ, −∇V(x)) at z.
pub fn hamiltonian_field(p: &HomogeneousPotential, z: &PhaseSpacePoint) -> Vec<f64> {
    let mut out: Vec<f64> = z.xi.iter().map(|v| 2.0 * v).collect();
    out.extend(p.grad_v(&z.x).into_iter().map(|g| -g));
    out
}

/// p(x, ξ) = |ξ|² + V(x).
pub fn energy(p: &HomogeneousPotential, z: &PhaseSpacePoint) -> f64 {
    z.xi.iter().map(|v| v * v).sum::<f64>() + p.v(&z.x)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowResult {
    pub z: PhaseSpacePoint,
    /// |p(Φ_t(z0)) − p(z0)|
    pub energy_drift: f64,
    pub steps: usize,
}

/// Φ_t(z0) with local error control at `tol`.
pub fn integrate_flow(p: &HomogeneousPotential, z0: &PhaseSpacePoint, t: f64, tol: f64) -> Result<FlowResult, DynamicsError> {
    if !(tol > 0.0) {
        return Err(DynamicsError::BadTolerance(tol));
    }
    if z0.dim() != p.n {
        return Err(DynamicsError::Dimension);
    }
    let field = PotentialField::new(p);
    integrate_with(&field, z0, t, &OdeOptions { rtol: tol, atol: tol * 1e-2, ..Default::default() })
}

pub(crate) fn integrate_with(field: &PotentialField, z0: &PhaseSpacePoint, t: f64, opts: &OdeOptions) -> Result<FlowResult, DynamicsError> {
    let e0 = field.energy(&z0.x, &z0.xi);
    let sol = ode::integrate(|s, d| field.rhs(s, d), &z0.to_state(), 0.0, t, opts)?;
    let z = PhaseSpacePoint::from_state(&sol.y, field.n);
    let drift = (field.energy(&z.x, &z.xi) - e0).abs();
    Ok(FlowResult { z, energy_drift: drift, steps: sol.steps })
}

/// The differential of the free flow, [[I, 2tI], [0, I]].
pub fn linearized_flow(t: f64, n: usize) -> Vec<Vec<f64>> {
    let mut m = vec![vec![0.0; 2 * n]; 2 * n];
    for i in 0..2 * n {
        m[i][i] = 1.0;
    }
    for i in 0..n {
        m[i][n + i] = 2.0 * t;
    }
    m
}

/// Φ_t(z) together with its Jacobian, from the variational equations.
pub fn flow_jacobian(p: &HomogeneousPotential, z: &PhaseSpacePoint, t: f64, tol: f64) -> Result<(PhaseSpacePoint, Vec<Vec<f64>>), DynamicsError> {
    let field = PotentialField::new(p);
    let (z1, m, _) = action::flow_with_variations(&field, z, t, &OdeOptions { rtol: tol, atol: tol * 1e-2, ..Default::default() })?;
    Ok((z1, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::linalg::{determinant, mat_vec};

    fn flat_1d() -> HomogeneousPotential {
        HomogeneousPotential::new(1, 2, MPoly::zero(1), MPoly::zero(1), 0.0, vec![0.0], vec![(-1.0, 1.0)]).unwrap()
    }

    #[test]
    fn field_examples() {
        let p = HomogeneousPotential::reference_1d();
        assert_eq!(hamiltonian_field(&p, &PhaseSpacePoint::new(vec![0.0], vec![0.0])), vec![0.0, 0.0]);
        assert_eq!(hamiltonian_field(&p, &PhaseSpacePoint::new(vec![1.0], vec![0.0])), vec![0.0, -2.0]);
        assert_eq!(hamiltonian_field(&p, &PhaseSpacePoint::new(vec![0.3], vec![3.0]))[0], 6.0);
    }

    #[test]
    fn flow_examples() {
        let p = HomogeneousPotential::reference_1d();
        let z0 = PhaseSpacePoint::new(vec![0.4], vec![0.1]);
        assert_eq!(integrate_flow(&p, &z0, 0.0, 1e-10).unwrap().z, z0);
        let eq = PhaseSpacePoint::new(vec![0.0], vec![0.0]);
        let r = integrate_flow(&p, &eq, 3.0, 1e-10).unwrap();
        assert!(r.z.x[0].abs() < 1e-10 && r.z.xi[0].abs() < 1e-10);
        let free = integrate_flow(&flat_1d(), &PhaseSpacePoint::new(vec![0.0], vec![1.0]), 2.0, 1e-10).unwrap();
        assert!((free.z.x[0] - 4.0).abs() < 1e-9 && (free.z.xi[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn energy_drift_within_tolerance() {
        let p = HomogeneousPotential::reference_1d();
        for &tol in &[1e-6, 1e-9, 1e-12] {
            let r = integrate_flow(&p, &PhaseSpacePoint::new(vec![0.9], vec![0.2]), 5.0, tol).unwrap();
            assert!(r.energy_drift <= 10.0 * tol, "tol {tol:e}: drift {:e}", r.energy_drift);
        }
    }

    #[test]
    fn blow_up_reports_underflow() {
        // V = −x⁴ sends trajectories to infinity in finite time
        let full = MPoly::from_terms(1, &[(vec![4], -1.0)]);
        let p = HomogeneousPotential::from_full(1, 2, full, 0.0, vec![0.0], vec![(-1.0, 1.0)]).unwrap();
        let r = integrate_flow(&p, &PhaseSpacePoint::new(vec![2.0], vec![1.0]), 10.0, 1e-8);
        assert!(matches!(r, Err(DynamicsError::Ode(_))));
    }

    #[test]
    fn linearized_examples() {
        assert_eq!(
            linearized_flow(0.0, 2),
            linearized_flow(0.0, 2).iter().enumerate().map(|(i, _)| (0..4).map(|j| if i == j { 1.0 } else { 0.0 }).collect::<Vec<_>>()).collect::<Vec<_>>()
        );
        assert_eq!(mat_vec(&linearized_flow(1.0, 1), &[0.0, 1.0]), vec![2.0, 1.0]);
        assert_eq!(mat_vec(&linearized_flow(0.5, 1), &[1.0, 1.0]), vec![2.0, 1.0]);
    }

    #[test]
    fn jacobian_is_symplectic() {
        let p = HomogeneousPotential::reference_1d();
        for &(x, xi, t) in &[(0.5, 0.1, 0.7), (-0.9, 0.3, 2.0), (0.0, 0.0, 1.0)] {
            let (_, m) = flow_jacobian(&p, &PhaseSpacePoint::new(vec![x], vec![xi]), t, 1e-12).unwrap();
            assert!((determinant(&m) - 1.0).abs() < 1e-8);
        }
    }
}
