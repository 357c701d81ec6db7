//! Discrete Morse theory on simplicial complexes stored in the IA* data
//! structure: top simplices plus adjacency, no explicit intermediate faces.
//!
//! The crate builds flag and Vietoris-Rips complexes, computes a Forman
//! gradient by lower-star coreductions with a compact per-top bit encoding,
//! extracts the Morse complex with Z/2 boundary multiplicities, and offers a
//! Hasse-diagram oracle for checking all of it on small inputs.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod builders;
pub mod combinatorics;
pub mod complex;
pub mod error;
pub mod gradient;
pub mod hasse;
pub mod layout;
pub mod morse;
pub mod simplex;
pub mod z2;

pub use builders::{flag_complex, vietoris_rips, Graph, PointCloud};
pub use complex::{BuildStats, IaStarComplex, TopId};
pub use error::{Error, Result};
pub use gradient::{forman_gradient, validate_gradient, FormanGradient, GradientStats};
pub use morse::{betti_z2, morse_complex, BettiVector, MorseComplex, MorseOptions};
pub use simplex::{Simplex, Vertex};
