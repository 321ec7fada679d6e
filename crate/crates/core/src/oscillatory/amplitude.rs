//! Separable amplitudes A(t, r, q) = a(t)·b(r, q)·r^{n−1}q^{n−1}.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::OscError;
use crate::profile::{BumpProfile, Cutoff, GaussProfile, SpatialProfile, TimeProfile};

/// The weight r^{n−1}q^{n−1} is kept symbolic through `n`; `b` never includes it.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelAmplitude {
    pub n: u32,
    pub k: u32,
    pub time: TimeProfile,
    pub b: SpatialProfile,
}

impl ModelAmplitude {
    pub fn new(n: u32, k: u32, time: TimeProfile, b: SpatialProfile) -> Result<Self, OscError> {
        if n == 0 || k < 2 {
            return Err(OscError::Precondition("model amplitudes need n ≥ 1 and k ≥ 2"));
        }
        Ok(ModelAmplitude { n, k, time, b })
    }

    /// B(r, q) = b(r, q)·r^{n−1}q^{n−1}.
    pub fn spatial(&self, r: f64, q: f64) -> f64 {
        let e = self.n as i32 - 1;
        self.b.value(r, q) * r.powi(e) * q.powi(e)
    }

    pub fn with_b(&self, b: SpatialProfile) -> Self {
        ModelAmplitude { b, ..self.clone() }
    }

    /// Time support of a(t), if compact.
    pub fn time_support(&self) -> Option<f64> {
        match &self.time {
            TimeProfile::Bump(p) => Some(p.t_max),
            TimeProfile::Gauss(_) => None,
        }
    }
}

/// Time profile choices for [`amplitude_factory`].
#[derive(Debug, Clone, PartialEq)]
pub enum ProfileSpec {
    /// a(t) = exp(−1/(1−(t/T)²))·e^{itc} on (−T, T).
    Bump { t_max: f64, shift: f64 },
    /// â(v) = Σ w_m He_m(v) e^{−v²/2}.
    GaussianWindowed { hermite: Vec<(usize, f64)> },
}

/// Builds a model amplitude with b(r, q) = Σ c_{ac} r^a q^c on the core, cut off between
/// `inner` and `outer`.
pub fn amplitude_factory(n: u32, k: u32, profile: &ProfileSpec, core: Vec<(u32, u32, f64)>, inner: f64, outer: f64) -> Result<ModelAmplitude, OscError> {
    if !(0.0 < inner && inner < outer) {
        return Err(OscError::Precondition("support radii must satisfy 0 < inner < outer"));
    }
    let time = match profile {
        ProfileSpec::Bump { t_max, shift } => {
            if *t_max <= 0.0 {
                return Err(OscError::Precondition("bump support must be positive"));
            }
            TimeProfile::Bump(BumpProfile::new(*t_max).shifted(*shift))
        }
        ProfileSpec::GaussianWindowed { hermite } => {
            if hermite.is_empty() {
                return Err(OscError::Precondition("empty Hermite combination"));
            }
            TimeProfile::Gauss(GaussProfile::combination(hermite))
        }
    };
    ModelAmplitude::new(n, k, time, SpatialProfile::new(core, Cutoff::new(inner, outer)))
}
