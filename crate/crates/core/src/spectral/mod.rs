//! The spectral side: windowed eigenvalues of −h²Δ + V, the trace γ(E_c, h, φ), the
//! predicted leading term and the scaling fit between them.

use core::fmt;

use crate::geometry::GeometryError;
use crate::mellin::MellinError;
use crate::oscillatory::OscError;

pub mod eigen;
pub mod pair;
pub mod trace;

pub use eigen::{eigenvalues_in_window, EigenSolve, Eigenvalue, FdOperator, GridOptions};
pub use pair::{make_test_function, subprincipal_shift, SchwartzPair};
pub use trace::{
    gamma_trace, predicted_leading, scaling_fit, scaling_fit_points, spectral_sample, tail_bound, FitModel, Prediction, ScalingFit, SpectralSample,
};

#[derive(Debug, Clone, PartialEq)]
pub enum SpectralError {
    /// Eigensolves are implemented for n = 1 only.
    Dimension(usize),
    Precondition(&'static str),
    /// No wall position satisfies the margin and barrier requirements.
    NotConfining,
    GridTooLarge(usize),
    /// Richardson estimate above 1e−3·h.
    Unresolved {
        index: usize,
        estimate: f64,
    },
    /// Eigenvector mass near the walls above tolerance.
    DomainTooTight {
        index: usize,
        mass: f64,
    },
    SignChange,
    Fit(OscError),
    Geometry(GeometryError),
    Mellin(MellinError),
}

impl fmt::Display for SpectralError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectralError::Dimension(n) => write!(f, "eigensolves need n = 1, got n = {n}"),
            SpectralError::Precondition(m) => write!(f, "{m}"),
            SpectralError::NotConfining => write!(f, "potential does not confine the window"),
            SpectralError::GridTooLarge(n) => write!(f, "grid of {n} points exceeds the limit"),
            SpectralError::Unresolved { index, estimate } => {
                write!(f, "eigenvalue {index} unresolved: Richardson estimate {estimate:e}")
            }
            SpectralError::DomainTooTight { index, mass } => {
                write!(f, "domain too tight: state {index} has boundary mass {mass:e}")
            }
            SpectralError::SignChange => write!(f, "γ changes sign across the h grid"),
            SpectralError::Fit(e) => write!(f, "fit failed: {e}"),
            SpectralError::Geometry(e) => write!(f, "{e}"),
            SpectralError::Mellin(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for SpectralError {}

impl From<OscError> for SpectralError {
    fn from(e: OscError) -> Self {
        SpectralError::Fit(e)
    }
}

impl From<GeometryError> for SpectralError {
    fn from(e: GeometryError) -> Self {
        SpectralError::Geometry(e)
    }
}

impl From<MellinError> for SpectralError {
    fn from(e: MellinError) -> Self {
        SpectralError::Mellin(e)
    }
}
