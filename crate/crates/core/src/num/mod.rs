//! Numerical building blocks shared by all modules.

pub mod gauss;
pub mod jet;
pub mod laurent;
pub mod linalg;
pub mod mpoly;
pub mod quad;
pub mod rpoly;
pub mod special;
