//! Mellin transforms, pole catalogs and residue extraction for the model integrals.

use core::fmt;

use crate::num::quad::QuadError;

pub mod catalog;
pub mod identities;
pub mod residue;
pub mod transform;

pub use crate::profile::Side;
pub use catalog::{pole_catalog, z_min, Pole, PoleCatalog};
pub use residue::{leading_distribution, residue_coefficient, ResidueCoefficient};
pub use transform::{mellin_transform, DecayBound, MellinSide};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MellinError {
    Quad(QuadError),
    Precondition(&'static str),
    /// The continuation through l integrations by parts does not reach the pole yet.
    LTooSmall {
        l: u32,
        pole: f64,
    },
    Truncation {
        error: f64,
        magnitude: f64,
    },
}

impl fmt::Display for MellinError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MellinError::Quad(e) => write!(f, "quadrature failed: {e}"),
            MellinError::Precondition(m) => write!(f, "{m}"),
            MellinError::LTooSmall { l, pole } => write!(f, "l = {l} does not continue the integral past the pole at {pole}"),
            MellinError::Truncation { error, magnitude } => {
                write!(f, "truncation error {error:e} too large for |value| {magnitude:e}")
            }
        }
    }
}

impl core::error::Error for MellinError {}

impl From<QuadError> for MellinError {
    fn from(e: QuadError) -> Self {
        MellinError::Quad(e)
    }
}

/// Arithmetic shape of the leading term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseTag {
    /// z_min ∉ ℕ, n odd.
    SimpleOdd,
    /// z_min ∉ ℕ, n even.
    SimpleEven,
    /// z_min ∈ ℕ, n odd: leading term carries log λ.
    IntegerOddLog,
    /// z_min ∈ ℕ, n even.
    IntegerEven,
}

impl CaseTag {
    pub fn has_log(self) -> bool {
        self == CaseTag::IntegerOddLog
    }

    pub fn name(self) -> &'static str {
        match self {
            CaseTag::SimpleOdd => "SimpleOdd",
            CaseTag::SimpleEven => "SimpleEven",
            CaseTag::IntegerOddLog => "IntegerOddLog",
            CaseTag::IntegerEven => "IntegerEven",
        }
    }
}

pub fn classify_case(n: u32, k: u32) -> CaseTag {
    let integer = (n * (k + 1)) % (2 * k) == 0;
    match (integer, n % 2 == 1) {
        (false, true) => CaseTag::SimpleOdd,
        (false, false) => CaseTag::SimpleEven,
        (true, true) => CaseTag::IntegerOddLog,
        (true, false) => CaseTag::IntegerEven,
    }
}
