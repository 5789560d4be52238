//! Scattering from the general one-dimensional point interaction, its
//! contact-interaction effective theory, and harmonically trapped spectra.

// reference constants keep every digit of their high-precision source
#![allow(clippy::excessive_precision)]

pub mod cli;
pub mod eft;
pub mod extension;
pub mod mat2;
pub mod numerics;
pub mod scattering;
pub mod trap;

pub use num_complex::Complex64;
