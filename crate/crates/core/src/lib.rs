//! Stabilizer-free weak Galerkin finite elements for the fourth-order problem
//! `(−∇·(κ∇) + μ)² u = f` on polygonal meshes of the unit square.

pub mod error;
pub mod mesh;
pub mod model;
pub mod poly;
pub mod quadrature;
pub mod study;
pub mod system;
pub mod weakops;

pub use error::{Error, Result};

#[cfg(test)]
pub(crate) mod testutil;
