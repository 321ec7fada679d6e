//! Model oscillatory integrals J(λ) = ∫∫ â(λ(r² − q^{2k})) b(r,q) r^{n−1}q^{n−1} dr dq:
//! quadrature oracle, residue expansion, and tail fits.

use core::fmt;

use crate::mellin::MellinError;
use crate::num::quad::QuadError;

pub mod amplitude;
pub mod fit;
pub mod oracle;
pub mod series;

pub use amplitude::{amplitude_factory, ModelAmplitude, ProfileSpec};
pub use fit::{fit_tail, lambda_grid, TailFit};
pub use oracle::{oracle_eval, oracle_eval_separable};
pub use series::{build_expansion, AsymptoticSeries, SeriesTerm};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OscError {
    Quad(QuadError),
    Mellin(MellinError),
    Precondition(&'static str),
    /// The quadrature estimate missed its tolerance.
    NotConverged {
        estimate: f64,
        error: f64,
    },
    /// The least-squares design matrix is singular.
    Degenerate,
}

impl fmt::Display for OscError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OscError::Quad(e) => write!(f, "quadrature failed: {e}"),
            OscError::Mellin(e) => write!(f, "residue evaluation failed: {e}"),
            OscError::Precondition(m) => write!(f, "{m}"),
            OscError::NotConverged { estimate, error } => {
                write!(f, "oracle did not reach tolerance: estimate {estimate:e}, error {error:e}")
            }
            OscError::Degenerate => write!(f, "degenerate least-squares design"),
        }
    }
}

impl core::error::Error for OscError {}

impl From<QuadError> for OscError {
    fn from(e: QuadError) -> Self {
        OscError::Quad(e)
    }
}

impl From<MellinError> for OscError {
    fn from(e: MellinError) -> Self {
        OscError::Mellin(e)
    }
}
