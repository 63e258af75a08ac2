//! Exact recurrences for the two-periodic Aztec diamond: the octahedron
//! recurrence and its densities, the discrete wave equation, a brute-force
//! dimer oracle, and the perfect t-embedding and origami recurrences.

#[cfg(feature = "cli")]
pub mod cli;
pub mod dimer;
pub mod embedding;
pub mod error;
pub mod lattice;
pub mod octahedron;
pub mod render;
pub mod rings;
pub mod verify;
pub mod wavefield;

pub use error::{Error, Result};
