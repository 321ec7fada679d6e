//! Mellin transforms of rapidly decaying functions on a half-line.

use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::MellinError;
use crate::num::quad::{Estimate, Quad};
use crate::profile::{MellinPoint, Side, TimeProfile};

/// Truncation data: ∫_cutoff^∞ |f(±t)| t^{Re z − 1} dt ≤ tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayBound {
    pub cutoff: f64,
    pub tail: f64,
}

const MELLIN_REL_TOL: f64 = 1e-10;

/// M±(z) = ∫₀^∞ t^{z−1} f(±t) dt for Re z > 0.
///
/// On [0, 1] the substitution t = u^{1/Re z} absorbs the power singularity; [1, cutoff] is
/// split into unit panels; the remainder is bounded by `decay`.
pub fn mellin_transform<F: Fn(f64) -> f64>(f: F, side: Side, z: Complex64, decay: DecayBound) -> Result<Estimate<Complex64>, MellinError> {
    mellin_transform_with(f, side, z, decay, MELLIN_REL_TOL)
}

/// [`mellin_transform`] with a caller-chosen relative error target.
pub fn mellin_transform_with<F: Fn(f64) -> f64>(f: F, side: Side, z: Complex64, decay: DecayBound, rel_tol: f64) -> Result<Estimate<Complex64>, MellinError> {
    let c = z.re;
    if c <= 0.0 {
        return Err(MellinError::Precondition("Mellin transform needs Re z > 0"));
    }
    let sg = side.sign();
    let quad = Quad::new(0.0, 1e-12).with_limit(20000);
    let inv = 1.0 / c;
    let y = z.im;
    let head = quad.integrate(
        |u: f64| {
            if u <= 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            // t^{z−1} dt = (1/c) u^{iy/c} du
            Complex64::from_polar(inv * f(sg * u.powf(inv)), y * inv * u.ln())
        },
        0.0,
        1.0,
    )?;
    let mut pts: Vec<f64> = Vec::new();
    let top = decay.cutoff.max(1.0);
    let panels = (top - 1.0).ceil().clamp(1.0, 4096.0) as usize;
    for i in 0..=panels {
        pts.push(1.0 + (top - 1.0) * i as f64 / panels as f64);
    }
    let body = quad.integrate_pieces(|t: f64| Complex64::from_polar(f(sg * t) * t.powf(c - 1.0), y * t.ln()), &pts)?;
    let value = head.value + body.value;
    let error = head.error + body.error + decay.tail;
    if error > rel_tol * value.norm() && error > 1e-300 {
        return Err(MellinError::Truncation { error, magnitude: value.norm() });
    }
    Ok(Estimate { value, error, intervals: head.intervals + body.intervals })
}

/// One half-line of a time profile, as consumed by the residue engine.
#[derive(Debug, Clone, Copy)]
pub struct MellinSide<'a> {
    pub profile: &'a TimeProfile,
    pub side: Side,
}

impl<'a> MellinSide<'a> {
    pub fn new(profile: &'a TimeProfile, side: Side) -> Self {
        MellinSide { profile, side }
    }

    pub fn at(&self, z: f64) -> Result<f64, MellinError> {
        Ok(self.profile.mellin(self.side, z)?)
    }

    pub fn point(&self, z: f64) -> Result<MellinPoint, MellinError> {
        Ok(self.profile.mellin_point(self.side, z)?)
    }

    /// M±(c + iy): closed form for Gaussian profiles, quadrature otherwise.
    ///
    /// The bump transform is tabulated to about 1e−13 absolute, so far out on the line only
    /// 1e−8 relative is requested.
    pub fn on_line(&self, c: f64, y: f64) -> Result<Complex64, MellinError> {
        let z = Complex64::new(c, y);
        match self.profile {
            TimeProfile::Gauss(g) => Ok(g.mellin_complex(self.side, z)),
            TimeProfile::Bump(b) => {
                let (cut, bound) = b.decay_cutoff();
                let tail = bound * cut.powf(c) * 1e-3;
                Ok(mellin_transform_with(|t| b.ahat(t), self.side, z, DecayBound { cutoff: cut, tail }, 1e-8)?.value)
            }
        }
    }
}

/// Decay diagnostic on a vertical line: max over |y| ≥ y_tail of |M|(1+|y|)^N divided by
/// the max over |y| ≤ y_core. Values below 1 are consistent with |M| ≤ C(1+|y|)^{−N}.
pub fn decay_ratio(samples: &[(f64, f64)], power: i32, y_core: f64, y_tail: f64) -> f64 {
    let weighted = |&(y, m): &(f64, f64)| m * (1.0 + y.abs()).powi(power);
    let core = samples.iter().filter(|s| s.0.abs() <= y_core).map(weighted).fold(0.0, f64::max);
    let tail = samples.iter().filter(|s| s.0.abs() >= y_tail).map(weighted).fold(0.0, f64::max);
    tail / core
}
