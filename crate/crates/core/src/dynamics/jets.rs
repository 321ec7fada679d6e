//! The order-(2k−1) jet of the flow at the equilibrium, in closed form and by jet transport.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::ode::{self, OdeOptions};
use super::{DynamicsError, PhaseSpacePoint, PotentialField};
use crate::geometry::HomogeneousPotential;
use crate::num::mpoly::{MPoly, Monomial};
use crate::num::special::factorial;

/// Values of the symmetric multilinear map d^mΦ_t(z₀) on the diagonal, w ↦ d^mΦ_t(z₀)(w^m).
///
/// Each of the 2n components is a homogeneous polynomial of degree `order` in w = (x, ξ);
/// it is `order!` times the corresponding Taylor term of the flow.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowJet {
    pub n: usize,
    pub order: u32,
    pub t: f64,
    pub components: Vec<MPoly>,
}

impl FlowJet {
    pub fn eval(&self, w: &[f64]) -> Vec<f64> {
        self.components.iter().map(|c| c.eval(w)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }

    /// Largest coefficient difference relative to the larger of the two coefficient scales.
    pub fn relative_distance(&self, o: &FlowJet) -> f64 {
        let scale = self.components.iter().chain(&o.components).fold(0.0f64, |m, c| m.max(c.max_abs_coeff())).max(1e-300);
        self.components.iter().zip(&o.components).map(|(a, b)| a.sub(b).max_abs_coeff()).fold(0.0, f64::max) / scale
    }
}

/// The jet as polynomials in (x, ξ, t): 2n+1 variables, time last.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowJetPolynomial {
    pub n: usize,
    pub order: u32,
    pub components: Vec<MPoly>,
}

impl FlowJetPolynomial {
    pub fn at(&self, t: f64) -> FlowJet {
        let n = self.n;
        let comps = self
            .components
            .iter()
            .map(|c| {
                let mut r = MPoly::zero(2 * n);
                for (e, v) in &c.terms {
                    r.add_term(e[..2 * n].to_vec(), v * t.powi(e[2 * n] as i32));
                }
                r
            })
            .collect();
        FlowJet { n, order: self.order, t, components: comps }
    }

    /// Highest power of t appearing in any component (2k+1, reached by the position part).
    pub fn t_degree(&self) -> u32 {
        let n = self.n;
        self.components.iter().flat_map(|c| c.terms.keys().map(move |e| e[2 * n])).max().unwrap_or(0)
    }
}

/// Exact evaluation of dΦ_t ∫₀ᵗ (2s G(s), −G(s)) ds with G(s) = d^{2k−1}∇V(x₀)((x+2sξ)^{2k−1}).
pub fn flow_jet_polynomial(p: &HomogeneousPotential) -> FlowJetPolynomial {
    let n = p.n;
    let nv = 2 * n + 2;
    let (s_var, t_var) = (2 * n, 2 * n + 1);
    let s = MPoly::var(nv, s_var);
    let subs: Vec<MPoly> = (0..n).map(|i| MPoly::var(nv, i).add(&MPoly::var(nv, n + i).mul(&s).scale(2.0))).collect();
    let m = 2 * p.k - 1;
    let norm = factorial(m);
    let grads: Vec<MPoly> = p.v2k.gradient().iter().map(|g| g.compose(&subs, u32::MAX).scale(norm)).collect();

    // ∫₀ᵗ s^a ds = t^{a+1}/(a+1)
    let integrate_s = |q: &MPoly| {
        let mut r = MPoly::zero(nv);
        for (e, c) in &q.terms {
            let mut e2 = e.clone();
            let a = e2[s_var];
            e2[s_var] = 0;
            e2[t_var] += a + 1;
            r.add_term(e2, c / (a + 1) as f64);
        }
        r
    };
    let ix: Vec<MPoly> = grads.iter().map(|g| integrate_s(&g.mul(&s).scale(2.0))).collect();
    let ixi: Vec<MPoly> = grads.iter().map(|g| integrate_s(&g.scale(-1.0))).collect();

    let t = MPoly::var(nv, t_var);
    let drop_s = |q: &MPoly| {
        let mut r = MPoly::zero(2 * n + 1);
        for (e, c) in &q.terms {
            let mut e2: Monomial = e[..2 * n].to_vec();
            e2.push(e[t_var]);
            r.add_term(e2, *c);
        }
        r
    };
    let mut comps = Vec::with_capacity(2 * n);
    for i in 0..n {
        comps.push(drop_s(&ix[i].add(&t.mul(&ixi[i]).scale(2.0))));
    }
    for i in 0..n {
        comps.push(drop_s(&ixi[i]));
    }
    FlowJetPolynomial { n, order: m, components: comps }
}

/// The closed-form jet of order 2k−1 at time t.
pub fn flow_jet_closed(p: &HomogeneousPotential, t: f64) -> FlowJet {
    flow_jet_polynomial(p).at(t)
}

/// Truncated Taylor map w ↦ Φ_t(z₀ + w) up to total degree `order`, by jet transport.
pub fn flow_jet_transport(p: &HomogeneousPotential, z0: &PhaseSpacePoint, t: f64, order: u32, opts: &OdeOptions) -> Result<Vec<MPoly>, DynamicsError> {
    let n = p.n;
    let nv = 2 * n;
    let field = PotentialField::new(p);
    let monos = monomials(nv, order);
    let index: BTreeMap<Monomial, usize> = monos.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    let nm = monos.len();

    let mut y0 = vec![0.0; nv * nm];
    let zero = vec![0u32; nv];
    for c in 0..nv {
        let base = if c < n { z0.x[c] } else { z0.xi[c - n] };
        y0[c * nm + index[&zero]] = base;
        if order >= 1 {
            let mut e = zero.clone();
            e[c] = 1;
            y0[c * nm + index[&e]] = 1.0;
        }
    }
    let unflatten = |y: &[f64], c: usize| {
        let mut q = MPoly::zero(nv);
        for (j, e) in monos.iter().enumerate() {
            q.add_term(e.clone(), y[c * nm + j]);
        }
        q
    };
    let rhs = |y: &[f64], d: &mut [f64]| {
        let xs: Vec<MPoly> = (0..n).map(|c| unflatten(y, c)).collect();
        for i in 0..n {
            for j in 0..nm {
                d[i * nm + j] = 2.0 * y[(n + i) * nm + j];
            }
            for v in d[(n + i) * nm..(n + i + 1) * nm].iter_mut() {
                *v = 0.0;
            }
            let g = field.grad[i].compose(&xs, order);
            for (e, c) in &g.terms {
                d[(n + i) * nm + index[e]] = -c;
            }
        }
    };
    let sol = ode::integrate(rhs, &y0, 0.0, t, opts)?;
    Ok((0..nv).map(|c| unflatten(&sol.y, c)).collect())
}

/// The order-`order` homogeneous part of the flow at the equilibrium, by jet transport.
pub fn flow_jet_oracle(p: &HomogeneousPotential, t: f64, order: u32) -> Result<FlowJet, DynamicsError> {
    let max = 2 * p.k - 1;
    if order == 0 || order > max {
        return Err(DynamicsError::BadOrder { order, max });
    }
    let z0 = PhaseSpacePoint::new(p.x0.clone(), vec![0.0; p.n]);
    let opts = OdeOptions { rtol: 1e-13, atol: 1e-15, ..Default::default() };
    let map = flow_jet_transport(p, &z0, t, order, &opts)?;
    let norm = factorial(order);
    let comps = map.iter().map(|c| c.homogeneous_part(order).scale(norm)).collect();
    Ok(FlowJet { n: p.n, order, t, components: comps })
}

/// All exponent vectors in `nv` variables with total degree ≤ d, sorted by degree.
fn monomials(nv: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for deg in 0..=d {
        let mut cur = vec![0u32; nv];
        fill(&mut out, &mut cur, 0, deg);
    }
    out
}

fn fill(out: &mut Vec<Monomial>, cur: &mut Vec<u32>, pos: usize, left: u32) {
    if pos + 1 == cur.len() {
        cur[pos] = left;
        out.push(cur.clone());
        return;
    }
    for a in (0..=left).rev() {
        cur[pos] = a;
        fill(out, cur, pos + 1, left - a);
    }
    cur[pos] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::linearized_flow;

    fn quartic() -> HomogeneousPotential {
        let full = MPoly::from_terms(1, &[(vec![4], -1.0)]);
        HomogeneousPotential::from_full(1, 2, full, 0.0, vec![0.0], vec![(-2.0, 2.0)]).unwrap()
    }

    #[test]
    fn closed_jet_vanishes_at_zero_and_has_bounded_t_degree() {
        let p = HomogeneousPotential::reference_1d();
        assert!(flow_jet_closed(&p, 0.0).is_zero());
        let poly = flow_jet_polynomial(&p);
        // ξ̇ picks up ∫₀ᵗ (2sξ)^{2k−1} ds, and x one more power of t
        let n = p.n;
        for (i, c) in poly.components.iter().enumerate() {
            let deg = c.terms.keys().map(|e| e[2 * n]).max().unwrap();
            assert_eq!(deg, if i < n { 2 * p.k + 1 } else { 2 * p.k });
        }
    }

    #[test]
    fn closed_matches_oracle_quartic() {
        let p = quartic();
        let c = flow_jet_closed(&p, 1.0);
        let o = flow_jet_oracle(&p, 1.0, 3).unwrap();
        let (a, b) = (c.eval(&[1.0, 0.0]), o.eval(&[1.0, 0.0]));
        for i in 0..2 {
            assert!((a[i] - b[i]).abs() < 1e-8, "{a:?} vs {b:?}");
        }
        // V₄ = −x⁴, direction (1, 0): both components equal 4·3! = 24
        assert!((a[0] - 24.0).abs() < 1e-12 && (a[1] - 24.0).abs() < 1e-12);
    }

    #[test]
    fn order_one_is_linearized_flow_and_middle_orders_vanish() {
        let full = MPoly::from_terms(1, &[(vec![6], -1.0), (vec![8], 1.0)]);
        let p = HomogeneousPotential::from_full(1, 3, full, 0.0, vec![0.0], vec![(-2.0, 2.0)]).unwrap();
        let t = 0.8;
        let lin = flow_jet_oracle(&p, t, 1).unwrap();
        let m = linearized_flow(t, 1);
        for (i, row) in m.iter().enumerate() {
            assert!((lin.components[i].coeff(&[1, 0]) - row[0]).abs() < 1e-12);
            assert!((lin.components[i].coeff(&[0, 1]) - row[1]).abs() < 1e-12);
        }
        for order in 2..=4 {
            let j = flow_jet_oracle(&p, t, order).unwrap();
            assert!(j.components.iter().all(|c| c.max_abs_coeff() < 1e-10), "order {order}");
        }
        let c = flow_jet_closed(&p, t);
        let o = flow_jet_oracle(&p, t, 5).unwrap();
        assert!(c.relative_distance(&o) < 1e-8);
    }

    #[test]
    fn two_dimensional_cross_check() {
        let full = MPoly::from_terms(2, &[(vec![4, 0], -1.0), (vec![2, 2], -0.5), (vec![0, 4], -2.0), (vec![1, 3], 0.3)]);
        let p = HomogeneousPotential::from_full(2, 2, full, 0.0, vec![0.0, 0.0], vec![(-1.0, 1.0); 2]).unwrap();
        for &t in &[0.3, 1.1] {
            let c = flow_jet_closed(&p, t);
            let o = flow_jet_oracle(&p, t, 3).unwrap();
            assert!(c.relative_distance(&o) < 1e-8, "t = {t}");
        }
    }
}
