//! Linear response, dispersion and soliton propagation of a weak probe in a
//! five-level combined tripod-Λ atomic medium.
//!
//! Layers, bottom up: [`params`] (field configuration and the interference
//! couplings α, β), [`spectral`] (coupling Hamiltonians and eigensystems),
//! [`response`] (first-order coherences), [`dispersion`] (κ(ω) and linear
//! pulse propagation) and [`nls`] (Kerr coefficient, solitons and split-step
//! propagation). [`numerics`] holds the small dense kernels they share.

pub mod dispersion;
pub mod error;
pub mod nls;
pub mod numerics;
pub mod params;
pub mod presets;
pub mod response;
pub mod spectral;

pub use error::{Error, Result};
pub use params::{derive_couplings, DerivedCoupling, FieldConfig, RabiField, Situation};
