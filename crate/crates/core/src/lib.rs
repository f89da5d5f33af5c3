//! Casimir pressure between parallel metal plates from Lifshitz theory.
//!
//! The crate is organised bottom-up:
//!
//! * [`permittivity`]: dielectric functions on the real and imaginary
//!   frequency axes, tabulated optical data and Kramers-Kronig transforms
//!   (standard and window-function generalised).
//! * [`lifshitz`]: reflection coefficients and the pressure at zero
//!   temperature or as a Matsubara sum at finite temperature.
//! * [`roughness`]: geometric averaging over discrete roughness profiles.
//! * [`comparison`]: confidence-interval comparison of theory curves with
//!   measured pressures.
//!
//! All public frequencies are photon energies in eV, separations are in nm
//! and pressures in mPa unless a name says otherwise.

// NaN-rejecting checks are written as negated comparisons on purpose
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod comparison;
pub mod error;
pub mod lifshitz;
pub mod permittivity;
pub mod quadrature;
pub mod roughness;
pub mod units;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
