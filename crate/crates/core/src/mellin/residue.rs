//! Residues of M±(z)λ^{−z}G±(z), where G± is the continued (s, q)-integral of the
//! blown-up model amplitude.
//!
//! After r = s·q^k the model integral reads
//! G±(z) = ∫ |1−s|^{−z} ∫₀^∞ q^{w(z)} (1+s)^{−z} s^{n−1} b(sq^k, q) dq ds with
//! w(z) = n(k+1) − 1 − 2kz. Integrating by parts l times in s and splitting the q-integral
//! at the polynomial core exposes every pole as an explicit Laurent series: 1/∏(z−i) from
//! the s-integration, a simple pole from q^{w+N} at N = 2kz₀ − w(0) − 1, and on the minus
//! side the boundary terms at s = 0.

use alloc::vec;
use alloc::vec::Vec;
use core::cell::Cell;
#[allow(unused_imports)]
use num_traits::Float;

use super::catalog::{is_integer, minimal_l, weight_exponent, z_min, Pole};
use super::{classify_case, CaseTag, MellinError};
use crate::num::jet::Jet;
use crate::num::laurent::Laurent;
use crate::num::quad::{Quad, Vals};
use crate::num::rpoly::{qi, to_f64, RPoly, Q};
use crate::num::special::factorial;
use crate::profile::{Cutoff, Side, SpatialProfile, TimeProfile};

const INNER: Quad = Quad { epsabs: 0.0, epsrel: 1e-12, max_intervals: 4000 };
const OUTER: Quad = Quad { epsabs: 1e-14, epsrel: 1e-11, max_intervals: 4000 };

/// Contribution of one side: G's principal part and the λ-coefficients it produces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SideResidue {
    /// Coefficients of (z−z₀)^{−2} and (z−z₀)^{−1} in G±.
    pub g: [f64; 2],
    pub mellin: f64,
    pub mellin_derivative: f64,
    /// Coefficient of λ^{−z₀}.
    pub power: f64,
    /// Coefficient of λ^{−z₀} log λ.
    pub log: f64,
}

/// J(λ) ⊃ power·λ^{−z₀} + log·λ^{−z₀}·log λ.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidueCoefficient {
    pub location: Q,
    pub l: u32,
    pub plus: SideResidue,
    pub minus: SideResidue,
    pub power: f64,
    pub log: f64,
}

struct Engine<'a> {
    n: u32,
    k: u32,
    l: u32,
    z0: f64,
    z0q: Q,
    b: &'a SpatialProfile,
    core: Vec<Vec<(u32, f64)>>,
    /// Index of the core term whose q-integral has a pole at z₀.
    pole_index: Option<usize>,
    w0: f64,
}

impl<'a> Engine<'a> {
    fn new(n: u32, k: u32, z0q: &Q, l: u32, b: &'a SpatialProfile) -> Result<Self, MellinError> {
        let z0 = to_f64(z0q);
        if z0 <= 0.0 {
            return Err(MellinError::Precondition("poles lie at positive z"));
        }
        if n == 0 || k < 1 {
            return Err(MellinError::Precondition("residues need n ≥ 1 and k ≥ 1"));
        }
        if (l as f64) <= z0 {
            return Err(MellinError::LTooSmall { l, pole: z0 });
        }
        let m = weight_exponent(n, k);
        let shift = z0q * qi(2 * k as i64) - qi(m + 1);
        let pole_index = if is_integer(&shift) && shift >= qi(0) { Some(to_f64(&shift) as usize) } else { None };
        Ok(Engine { n, k, l, z0, z0q: z0q.clone(), b, core: b.blown_up_core(k), pole_index, w0: m as f64 - 2.0 * k as f64 * z0 })
    }

    fn cutoff(&self) -> Cutoff {
        self.b.cutoff
    }

    /// (1+s)^{−z₀}s^{n−1} and −log(1+s) as jets of order l.
    fn weights(&self, s: f64) -> (Jet, Jet) {
        let l = self.l as usize;
        let one = Jet::variable(1.0 + s, l);
        let w = one.powf(-self.z0).mul(&Jet::variable(s, l).powi(self.n - 1));
        (w, one.ln().scale(-1.0))
    }

    fn core_jet(&self, c: usize, s: f64) -> Option<Jet> {
        let terms = self.core.get(c)?;
        if terms.is_empty() {
            return None;
        }
        let sj = Jet::variable(s, self.l as usize);
        let mut p = Jet::constant(0.0, self.l as usize);
        for &(a, v) in terms {
            p = p.add(&sj.powi(a).scale(v));
        }
        Some(p)
    }

    /// Radii q_c ≤ q_m: below q_c the amplitude equals its core polynomial, above q_m it vanishes.
    fn radii(&self, s: f64) -> (f64, f64) {
        let c = self.cutoff();
        let ik = 1.0 / self.k as f64;
        let qc = if s > 0.0 { c.inner.min((c.inner / s).powf(ik)) } else { c.inner };
        let qm = if s > 0.0 { c.outer.min((c.outer / s).powf(ik)) } else { c.outer };
        (qc, qm)
    }

    /// Z(s, z) = ∂_s^l ∫ q^{w(z)}(1+s)^{−z}s^{n−1}b(sq^k,q) dq = A/δ + B + O(δ).
    fn z_parts(&self, s: f64) -> Result<(f64, f64), MellinError> {
        let l = self.l as usize;
        let (w, lg) = self.weights(s);
        let (qc, qm) = self.radii(s);
        let kf = 2.0 * self.k as f64;
        let mut a = 0.0;
        let mut b = 0.0;
        for c in 0..self.core.len() {
            let Some(p) = self.core_jet(c, s) else { continue };
            let h = w.mul(&p);
            if Some(c) == self.pole_index {
                let hn = h.derivative(l);
                let hn_z = h.mul(&lg).derivative(l);
                a = -hn / kf;
                b += -hn_z / kf + hn * qc.ln();
            } else {
                let e = self.w0 + c as f64 + 1.0;
                b += h.derivative(l) * qc.powf(e) / e;
            }
        }
        if qm > qc {
            let c = self.cutoff();
            let ik = 1.0 / self.k as f64;
            let mut pts = vec![qc, qm];
            for x in [c.inner, (c.inner / s).powf(ik), c.outer, (c.outer / s).powf(ik)] {
                if x > qc && x < qm {
                    pts.push(x);
                }
            }
            pts.sort_by(f64::total_cmp);
            pts.dedup();
            let kk = self.k;
            let sj = Jet::variable(s, l);
            let body = INNER.integrate_pieces(
                |q: f64| {
                    let qj = Jet::constant(q, l);
                    let r = sj.scale(q.powi(kk as i32));
                    q.powf(self.w0) * w.mul(&self.b.eval_jet(&r, &qj)).derivative(l)
                },
                &pts,
            )?;
            b += body.value;
        }
        Ok((a, b))
    }

    /// Kinks of s ↦ Z(s) where the radii switch branches.
    fn s_breaks(&self) -> Vec<f64> {
        let c = self.cutoff();
        let e = 1.0 - self.k as f64;
        vec![c.inner.powf(e), c.outer.powf(e)]
    }

    /// (v₋₁, v₀) of V(z) = ∫ |1−s|^{l−z} Z(s, z) ds over the side's s-range.
    fn v_parts(&self, side: Side) -> Result<(f64, f64), MellinError> {
        let beta = self.l as f64 - self.z0;
        let failure = Cell::new(None);
        let f = |s: f64| -> Vals<2> {
            let d = (s - 1.0).abs();
            if d == 0.0 {
                return Vals([0.0; 2]);
            }
            match self.z_parts(s) {
                Ok((a, b)) => {
                    let wgt = d.powf(beta);
                    Vals([wgt * a, wgt * (b - d.ln() * a)])
                }
                Err(e) => {
                    failure.set(Some(e));
                    Vals([0.0; 2])
                }
            }
        };
        let est = match side {
            Side::Plus => {
                let mut pts: Vec<f64> = self.s_breaks().into_iter().filter(|&x| x > 1.0 + 1e-9).collect();
                pts.push(2.0);
                pts.sort_by(f64::total_cmp);
                pts.dedup();
                let head = OUTER.integrate_left_power(f, 1.0, pts[0], -0.5)?;
                let mid = OUTER.integrate_pieces(f, &pts)?;
                let last = *pts.last().unwrap();
                let alpha = 0.9 * self.n as f64 / self.k as f64;
                let tail = OUTER.integrate_tail(f, last, alpha, last)?;
                head.value + mid.value + tail.value
            }
            Side::Minus => {
                let mut pts = vec![0.0, 0.5];
                pts.extend(self.s_breaks().into_iter().filter(|&x| x > 0.0 && x < 0.5));
                pts.sort_by(f64::total_cmp);
                let body = OUTER.integrate_pieces(f, &pts)?;
                let head = OUTER.integrate_right_power(f, 0.5, 1.0, -0.5)?;
                body.value + head.value
            }
        };
        if let Some(e) = failure.get() {
            return Err(e);
        }
        Ok((est.0[0], est.0[1]))
    }

    fn v_laurent(&self, side: Side) -> Result<Laurent, MellinError> {
        let (v1, v0) = self.v_parts(side)?;
        Ok(if self.pole_index.is_some() { Laurent::simple(v1, v0) } else { Laurent::value_only(v0) })
    }

    /// ∫₀^∞ q^{a(z)}χ(q) dq with a(z₀) = a0 and da/dz = −2k.
    fn m_chi(&self, a0: f64, at_pole: bool) -> Result<Laurent, MellinError> {
        let c = self.cutoff();
        let (rho, big_r) = (c.inner, c.outer);
        let kf = 2.0 * self.k as f64;
        let body = INNER.integrate(|q: f64| Vals([q.powf(a0) * c.value(q), q.powf(a0) * q.ln() * c.value(q)]), rho, big_r)?;
        if at_pole {
            return Ok(Laurent::simple(-1.0 / kf, rho.ln() + body.value.0[0]));
        }
        let e = a0 + 1.0;
        let head = rho.powf(e) / e;
        let head_d = rho.powf(e) * (rho.ln() / e - 1.0 / (e * e));
        Ok(Laurent::analytic(head + body.value.0[0], -kf * (head_d + body.value.0[1])))
    }

    /// ζ_j(z) = ∫ q^{w(z)+kj} ∂_r^j b(0, q)/j! dq.
    fn zeta(&self, j: u32) -> Result<Laurent, MellinError> {
        let mut acc = Laurent::zero();
        let m = weight_exponent(self.n, self.k);
        for &(a, c, v) in &self.b.terms {
            if a != j || v == 0.0 {
                continue;
            }
            // a(z₀) = −1 exactly when 2kz₀ = m + kj + c + 1
            let pole = self.z0q.clone() * qi(2 * self.k as i64) == qi(m + (self.k * j + c) as i64 + 1);
            let a0 = self.w0 + (self.k * j + c) as f64;
            acc = acc.add(&self.m_chi(a0, pole)?.scale(v));
        }
        Ok(acc)
    }

    /// F^{(j)}(0, z) for F(s, z) = ∫ q^{w}(1+s)^{−z}s^{n−1}b(sq^k, q) dq.
    fn boundary_derivative(&self, j: u32) -> Result<Laurent, MellinError> {
        let mut acc = Laurent::zero();
        if j + 1 < self.n {
            return Ok(acc);
        }
        for jp in 0..=(j + 1 - self.n) {
            let i = j + 1 - self.n - jp;
            // binom(−z, i) = ∏_{t<i}(−z−t)/i!
            let mut p = RPoly::one();
            for t in 0..i {
                p = p.mul(&RPoly::linear(qi(-(t as i64)), qi(-1)));
            }
            let binom = Laurent::polynomial(&p, &self.z0q).scale(1.0 / factorial(i));
            acc = acc.add(&binom.mul(&self.zeta(jp)?));
        }
        Ok(acc.scale(factorial(j)))
    }

    fn g_laurent(&self, side: Side) -> Result<Laurent, MellinError> {
        let l = self.l;
        let v = self.v_laurent(side)?;
        match side {
            Side::Plus => {
                let r = (1..=l).fold(RPoly::one(), |acc, i| acc.mul(&RPoly::linear(qi(-(i as i64)), qi(1))));
                Ok(Laurent::reciprocal(&r, &self.z0q).mul(&v))
            }
            Side::Minus => {
                let lin = |i: u32| RPoly::linear(qi(i as i64), qi(-1));
                let r = (1..=l).fold(RPoly::one(), |acc, i| acc.mul(&lin(i)));
                let mut inner = v;
                for j in 0..l {
                    let pi = (j + 2..=l).fold(RPoly::one(), |acc, i| acc.mul(&lin(i)));
                    let fj = self.boundary_derivative(j)?;
                    inner = inner.add(&Laurent::polynomial(&pi, &self.z0q).mul(&fj));
                }
                Ok(Laurent::reciprocal(&r, &self.z0q).mul(&inner))
            }
        }
    }
}

/// Principal part (g₋₂, g₋₁) of G± at z₀, computed with l integrations by parts.
pub fn g_principal(n: u32, k: u32, z0: &Q, l: u32, b: &SpatialProfile, side: Side) -> Result<[f64; 2], MellinError> {
    let g = Engine::new(n, k, z0, l, b)?.g_laurent(side)?;
    Ok([g.coeff(-2), g.coeff(-1)])
}

/// Residue contribution at an arbitrary rational point z₀ > 0 (zero where G± is regular).
pub fn residue_at(n: u32, k: u32, z0: &Q, l: u32, profile: &TimeProfile, b: &SpatialProfile) -> Result<ResidueCoefficient, MellinError> {
    let engine = Engine::new(n, k, z0, l, b)?;
    let side_part = |side: Side| -> Result<SideResidue, MellinError> {
        let g = engine.g_laurent(side)?;
        let g = [g.coeff(-2), g.coeff(-1)];
        let (m0, m1) = if g[0] != 0.0 {
            let p = profile.mellin_point(side, engine.z0)?;
            (p.value, p.derivative)
        } else {
            (profile.mellin(side, engine.z0)?, 0.0)
        };
        Ok(SideResidue { g, mellin: m0, mellin_derivative: m1, power: -(m0 * g[1] + m1 * g[0]), log: m0 * g[0] })
    };
    let plus = side_part(Side::Plus)?;
    let minus = side_part(Side::Minus)?;
    Ok(ResidueCoefficient { location: z0.clone(), l, power: plus.power + minus.power, log: plus.log + minus.log, plus, minus })
}

/// Residue at a catalog pole; `l` defaults to the smallest admissible value.
pub fn residue_coefficient(n: u32, k: u32, pole: &Pole, profile: &TimeProfile, b: &SpatialProfile, l: Option<u32>) -> Result<ResidueCoefficient, MellinError> {
    let l = l.unwrap_or_else(|| minimal_l(&pole.location));
    residue_at(n, k, &pole.location, l, profile, b)
}

/// The unit amplitude used for the universal leading coefficient.
pub fn unit_amplitude() -> SpatialProfile {
    SpatialProfile::flat(1.0, Cutoff::new(0.5, 1.0))
}

/// ⟨T_{n,k}, φ⟩: the λ^{−z_min} coefficient (λ^{−z_min}log λ in the log case) for b(0,0) = 1,
/// where `phi` is the time profile whose Mellin transforms enter the residue.
pub fn leading_distribution(n: u32, k: u32, phi: &TimeProfile) -> Result<f64, MellinError> {
    let z = z_min(n, k);
    let pole = Pole { order: if is_integer(&z) { 2 } else { 1 }, location: z };
    let r = residue_coefficient(n, k, &pole, phi, &unit_amplitude(), None)?;
    Ok(if classify_case(n, k) == CaseTag::IntegerOddLog { r.log } else { r.power })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mellin::catalog::unweighted_candidates_below;
    use crate::mellin::identities::e_closed;
    use crate::num::rpoly::q;
    use crate::profile::{BumpProfile, GaussProfile};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-12)
    }

    fn textured() -> SpatialProfile {
        SpatialProfile::new(vec![(0, 0, 1.0), (0, 1, 0.5), (0, 2, 0.25), (1, 0, -0.3)], Cutoff::new(0.5, 1.0))
    }

    #[test]
    fn independent_of_l() {
        // an odd part keeps the log coefficient at integer poles away from zero
        let g = TimeProfile::Gauss(GaussProfile::combination(&[(0, 1.0), (1, 0.5)]));
        let b = textured();
        for (n, k, z) in [(1, 2, q(3, 4)), (1, 2, qi(1)), (3, 3, qi(2)), (1, 2, q(5, 4))] {
            let l0 = minimal_l(&z);
            let a = residue_at(n, k, &z, l0, &g, &b).unwrap();
            let c = residue_at(n, k, &z, l0 + 1, &g, &b).unwrap();
            assert!(close(a.power, c.power, 1e-8), "{n} {k} {z}: {} vs {}", a.power, c.power);
            assert!(close(a.log, c.log, 1e-8), "{n} {k} {z}: {} vs {}", a.log, c.log);
        }
    }

    #[test]
    fn simple_pole_plus_side_is_e_integral() {
        // at z_min only the core constant reaches the pole: G₊ residue = −b00·E(n, z_min)/(2k)
        for (n, k) in [(1u32, 2u32), (3, 2)] {
            let z = z_min(n, k);
            let l = n.max(minimal_l(&z));
            let b = SpatialProfile::flat(1.0, Cutoff::new(0.5, 1.0));
            let g = g_principal(n, k, &z, l, &b, Side::Plus).unwrap();
            let zf = to_f64(&z);
            // l > n integrations move (s−1)^{n−z} ∂ⁿ to (s−1)^{l−z} ∂^l with factor ∏_{i=n+1}^{l}(i−z)^{−1}·(−1)^{l−n}
            let expect = -e_closed(n, zf).unwrap() / (2.0 * k as f64) * (-1f64).powi(n as i32) / (1..=n).map(|i| i as f64 - zf).product::<f64>();
            assert!(close(g[1], expect, 1e-9), "({n},{k}): {} vs {}", g[1], expect);
        }
    }

    #[test]
    fn even_n_simple_leading_term_has_no_plus_part() {
        let g = TimeProfile::Bump(BumpProfile::new(1.0));
        let z = z_min(2, 3);
        let r = residue_coefficient(2, 3, &Pole { location: z, order: 1 }, &g, &unit_amplitude(), None).unwrap();
        assert!(r.plus.power.abs() < 1e-10 * r.minus.power.abs());
        assert!(r.minus.power.abs() > 1e-6);
    }

    #[test]
    fn integer_even_has_no_log() {
        let g = TimeProfile::Bump(BumpProfile::new(1.0));
        let r = residue_coefficient(4, 2, &Pole { location: qi(3), order: 2 }, &g, &textured(), None).unwrap();
        assert!(r.log.abs() < 1e-9 * r.power.abs(), "{r:?}");
        assert!(r.plus.g[0].abs() < 1e-10 && r.minus.g[0].abs() < 1e-10);
    }

    #[test]
    fn odd_log_case_has_log() {
        let g = TimeProfile::Gauss(GaussProfile::combination(&[(0, 1.0), (1, 0.5)]));
        let r = residue_coefficient(3, 3, &Pole { location: qi(2), order: 2 }, &g, &unit_amplitude(), None).unwrap();
        assert!(r.log.abs() > 1e-3, "{r:?}");
    }

    #[test]
    fn vanishes_below_z_min() {
        // Hermite profiles have vanishing low moments, which kills the regular terms
        let g = TimeProfile::Gauss(GaussProfile::hermite(6));
        for (n, k) in [(1u32, 2u32), (3, 3), (4, 2)] {
            for z in unweighted_candidates_below(n, k) {
                let r = residue_at(n, k, &z, minimal_l(&z), &g, &textured()).unwrap();
                assert!(r.power.abs() < 1e-10 && r.log.abs() < 1e-10, "({n},{k}) at {z}: {r:?}");
            }
        }
    }

    #[test]
    fn l_too_small_is_rejected() {
        let g = TimeProfile::Gauss(GaussProfile::hermite(0));
        let r = residue_at(1, 2, &qi(1), 1, &g, &textured());
        assert!(matches!(r, Err(MellinError::LTooSmall { .. })));
    }

    #[test]
    fn linear_in_amplitude() {
        let g = TimeProfile::Gauss(GaussProfile::hermite(0));
        let b = textured();
        let z = q(5, 4);
        let a = residue_at(1, 2, &z, 2, &g, &b).unwrap();
        let c = residue_at(1, 2, &z, 2, &g, &b.scaled(-2.5)).unwrap();
        assert!(close(c.power, -2.5 * a.power, 1e-12));
    }
}
