//! Discretization of the harmonic oscillator on a uniform grid whose
//! spectrum is exactly the odd integers.
//!
//! The crate builds the orthonormal Kravchuk basis on `N + 1` grid points,
//! the symmetric tridiagonal Hamiltonian it diagonalizes, lowering/raising
//! operators, the unitary transform between samples and coefficients
//! (directly and through a tridiagonal matrix exponential), and a spectral
//! time propagator for the discrete Schroedinger equation. The
//! [`experiments`] module packages convergence sweeps against the Hermite
//! functions and the acceptance checks behind the `kravchuk` CLI.

pub mod basis;
pub mod error;
pub mod evolution;
pub mod experiments;
pub mod grid;
pub mod hermite;
pub mod linalg;
pub mod operators;
pub mod transform;

pub use basis::{BinomialWeight, KravchukBasis};
pub use error::{Error, Result};
pub use evolution::SpectralState;
pub use grid::{Grid, GridFunction};
pub use operators::{DiscreteHamiltonian, LadderPair};
pub use transform::TridiagonalHermitian;
