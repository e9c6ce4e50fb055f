//! Parameter sets used throughout the test suite and shipped as CLI presets.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::params::{FieldConfig, RabiField, SPEED_OF_LIGHT_CM_PER_S};

/// Cs D2 excited-state linewidth, 2π × 5.2 MHz, in s⁻¹.
pub const GAMMA_CS: f64 = 2.0 * PI * 5.2e6;

/// Medium constant for the Cs soliton example, cm⁻¹·s⁻¹.
pub const ETA_CS: f64 = 1.0e10;

fn fig4(amps: [f64; 4], phases: [f64; 4]) -> FieldConfig {
    FieldConfig::in_gamma_units(GAMMA_CS, amps, phases, 0.01, [0.0; 3], [1.0, 1.0], ETA_CS)
        .expect("preset values are valid")
}

/// Ω₁=0.9γ, Ω₂=0.7γ, Ω₃=0.4γ, Ω₄=0.8γ, φ=0.
pub fn fig4a() -> FieldConfig {
    fig4([0.9, 0.7, 0.4, 0.8], [0.0; 4])
}

/// Ω₁=Ω₂=0.5γ, Ω₃=Ω₄=0.7γ, φ=0 (β = 0).
pub fn fig4b() -> FieldConfig {
    fig4([0.5, 0.5, 0.7, 0.7], [0.0; 4])
}

/// Ω₁=Ω₂=0.2γ, Ω₃=Ω₄=0.1γ with φ=π carried by Ω₁ (α = 0).
pub fn fig4c() -> FieldConfig {
    fig4([0.2, 0.2, 0.1, 0.1], [PI, 0.0, 0.0, 0.0])
}

/// Detuned Cs parameter set of the soliton example (all phases zero).
pub fn cs_soliton() -> FieldConfig {
    FieldConfig {
        controls: [
            RabiField::real(1.97e9),
            RabiField::real(1.97e9),
            RabiField::real(2.3e9),
            RabiField::real(16.4e7),
        ],
        probe: RabiField::real(1.0e6),
        delta_p: 5.9e9,
        delta_2: 6.4e9,
        delta_3: 82e7,
        gamma_b: GAMMA_CS,
        gamma_e: GAMMA_CS,
        eta: ETA_CS,
        c_light: SPEED_OF_LIGHT_CM_PER_S,
    }
}

/// Coefficient values reported alongside the Cs example, used to rerun the
/// published dark-soliton propagation as plotted.
pub mod reported {
    use super::Complex64;

    pub const KAPPA0: Complex64 = Complex64::new(3.9, 0.008);
    pub const KAPPA1: Complex64 = Complex64::new(4.7e-9, -2.1e-11);
    pub const KAPPA2: Complex64 = Complex64::new(-8.06e-17, -3.6e-19);
    pub const THETA: Complex64 = Complex64::new(3.6e-19, -1.12e-21);
    /// v_g / c.
    pub const GROUP_VELOCITY_FRACTION: f64 = 7e-3;
    /// |Ω_p0·τ|.
    pub const AMPLITUDE_WIDTH_PRODUCT: f64 = 4.7;
    /// Soliton width and cell length of the propagation run.
    pub const TAU: f64 = 1e-7;
    pub const CELL_LENGTH_CM: f64 = 1.0;
}
