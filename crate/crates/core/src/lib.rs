//! Index of pairs of spectral projections for one-dimensional (and radial
//! three-dimensional) Schrödinger operators.
//!
//! The index `Ξ(λ; H, H0)` is computed by four routes that share no code
//! beyond the linear algebra: direct lattice counting, the classical
//! Birman-Schwinger principle below the spectrum, the limiting
//! Birman-Schwinger operator `J⁻¹ + A0(λ)` on the continuous spectrum, and
//! the spectral flow of the scattering matrix through `-1`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod linalg;
pub mod potential;
pub mod projpair;
pub mod quadrature;
pub mod special;
pub mod lattice;
pub mod bsop;
pub mod xindex;
pub mod ode;
pub mod scatter1d;
pub mod krein;
pub mod oracle;
pub mod acceptance;

pub use error::{Error, Result};
