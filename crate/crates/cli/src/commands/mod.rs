pub mod dynamics;
pub mod expand;
pub mod identities;
pub mod spectral;
