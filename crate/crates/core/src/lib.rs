//! Asymptotics of trace statistics at a degenerate maximum of a potential.
//!
//! The crate is `no_std` (with `alloc`). It covers homogeneous potentials, the
//! Hamiltonian flow near the critical point, the Mellin-residue expansion of the
//! model oscillatory integrals, and the spectral side of the trace formula.
#![cfg_attr(not(test), no_std)]
#![warn(missing_debug_implementations, rust_2018_idioms)]
#![deny(unused_must_use)]

extern crate alloc;

pub mod dynamics;
pub mod geometry;
pub mod mellin;
pub mod num;
pub mod oscillatory;
pub mod profile;
pub mod spectral;
