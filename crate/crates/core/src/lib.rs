//! Exact solver for the B_N Calogero-Sutherland-Moser model.
//!
//! The model couples N particles on a line through harmonic confinement,
//! inverse-square pair interactions in both (x_i - x_j) and (x_i + x_j), and
//! a one-body inverse-square term. A similarity transformation by the ground
//! state turns the Hamiltonian into Euler-plus-lowering form D + E0 + F, and
//! the terminating exponential exp(F/2) then maps homogeneous symmetric
//! polynomials in the squared coordinates onto exact eigenpolynomials. A
//! second transformation connects the same spectrum to the A_N
//! Calogero-Sutherland model and, through Gaussian smoothing, to decoupled
//! harmonic oscillators.
//!
//! Modules:
//! - [`symfun`]: exact symmetric-polynomial algebra over integer partitions.
//! - [`operators`]: the graded lowering operators, terminating exponentials,
//!   and transformed Hamiltonians.
//! - [`spectrum`]: eigenbasis construction, degeneracies, rank checks, and
//!   conserved-quantity spectra.
//! - [`fock`]: SU(1,1) commutator and occupation-orthogonality checks on a
//!   truncated Fock space.
//! - [`verify`]: floating-point oracles (finite-difference Hamiltonian,
//!   Gauss-Laguerre Gram matrices) against the untransformed physics.
//! - [`oracles`]: recurrence-built Laguerre/Hermite references, independent
//!   of the operator machinery.
//!
//! All algebra is exact over arbitrary-precision rationals; floating point
//! enters only in `verify` and `quad`.

pub mod error;
pub mod fock;
pub mod operators;
pub mod oracles;
pub mod quad;
pub mod rational;
pub mod spectrum;
pub mod symfun;
pub mod verify;

#[cfg(test)]
pub(crate) mod test_util;

pub use error::{Error, Result};
pub use rational::Rational;
