//! Cylindrically polarized modes of light.
//!
//! The first-order Hermite-Gauss vector-mode space is four dimensional, spanned
//! by `psi10 x`, `psi10 y`, `psi01 x`, `psi01 y` (in that order, see
//! [`modes::Coeff4`]). Inside it live the radial and azimuthal modes and their
//! counter-rotating partners. This crate provides:
//!
//! * [`modes`]: exact coefficient algebra, grid evaluation and the rotation laws,
//! * [`schmidt`]: polarization/spatial Schmidt decomposition and rank,
//! * [`momentum`]: linear and angular momentum densities and their integrals,
//! * [`hps`]: hybrid Stokes parameters and hybrid Poincare-sphere navigation,
//! * [`elements`]: Jones and spatial 2x2 operators and their symmetry classification,
//! * [`quantum`]: a truncated Fock-space layer (coherent, single-photon and squeezed states),
//! * [`cli`], [`config`], [`render`], [`pipeline`], [`verify`]: the `cypol` front end.

pub mod algebra;
pub mod cli;
pub mod config;
pub mod elements;
pub mod error;
pub mod hps;
pub mod modes;
pub mod momentum;
pub mod pipeline;
pub mod quantum;
pub mod render;
pub mod report;
pub mod schmidt;
pub mod verify;

pub use num_complex::Complex64 as C64;

pub use error::{Error, Result};
pub use modes::{BeamParams, Coeff4, CpmLabel, FieldGrid, GridSpec, Sign};
