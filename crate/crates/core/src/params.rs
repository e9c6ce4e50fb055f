//! Physical inputs of the five-level medium and the interference
//! coefficients derived from the four control fields.
//!
//! Units: angular frequencies in s⁻¹, lengths in cm, the medium coupling
//! constant `eta` in cm⁻¹·s⁻¹.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Vacuum speed of light in cm/s.
pub const SPEED_OF_LIGHT_CM_PER_S: f64 = 2.997_924_58e10;

/// Relative tolerance used to decide whether α or β vanishes.
pub const CLASSIFICATION_REL_TOL: f64 = 1e-9;

/// Wraps an angle into (−π, π].
pub fn normalize_phase(phase: f64) -> f64 {
    let mut p = phase.rem_euclid(2.0 * PI);
    if p > PI {
        p -= 2.0 * PI;
    }
    // rem_euclid can return exactly 2π for tiny negative inputs
    if p <= -PI {
        p += 2.0 * PI;
    }
    p
}

/// Complex Rabi frequency `amplitude·e^{i·phase}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RabiField {
    amplitude: f64,
    phase: f64,
}

impl RabiField {
    pub fn new(amplitude: f64, phase: f64) -> Result<Self> {
        if !(amplitude >= 0.0) || !amplitude.is_finite() {
            return Err(Error::InvalidInput(format!(
                "Rabi amplitude must be finite and >= 0, got {amplitude}"
            )));
        }
        if !phase.is_finite() {
            return Err(Error::InvalidInput(format!("Rabi phase must be finite, got {phase}")));
        }
        Ok(Self {
            amplitude,
            phase: normalize_phase(phase),
        })
    }

    /// Real, non-negative field (zero phase).
    pub fn real(amplitude: f64) -> Self {
        Self::new(amplitude, 0.0).expect("finite non-negative amplitude")
    }

    pub fn zero() -> Self {
        Self {
            amplitude: 0.0,
            phase: 0.0,
        }
    }

    pub fn from_complex(z: Complex64) -> Self {
        let (r, theta) = z.to_polar();
        Self {
            amplitude: r,
            phase: if r == 0.0 { 0.0 } else { normalize_phase(theta) },
        }
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn value(&self) -> Complex64 {
        Complex64::from_polar(self.amplitude, self.phase)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self::new(self.amplitude * factor, self.phase).expect("non-negative scale")
    }

    pub fn with_amplitude(&self, amplitude: f64) -> Result<Self> {
        Self::new(amplitude, self.phase)
    }

    pub fn with_phase(&self, phase: f64) -> Self {
        Self {
            amplitude: self.amplitude,
            phase: normalize_phase(phase),
        }
    }
}

/// The complete physical input: four controls, the probe, detunings, decay
/// rates and the medium constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldConfig {
    /// Ω₁…Ω₄ driving b↔c, b↔d, e↔c, e↔d.
    pub controls: [RabiField; 4],
    pub probe: RabiField,
    pub delta_p: f64,
    pub delta_2: f64,
    pub delta_3: f64,
    pub gamma_b: f64,
    pub gamma_e: f64,
    pub eta: f64,
    pub c_light: f64,
}

impl FieldConfig {
    /// Builds a config where every frequency-valued input is given as a
    /// multiple of `gamma` (amplitudes, detunings and decay rates).
    #[allow(clippy::too_many_arguments)]
    pub fn in_gamma_units(
        gamma: f64,
        control_amplitudes: [f64; 4],
        control_phases: [f64; 4],
        probe_amplitude: f64,
        detunings: [f64; 3],
        decays: [f64; 2],
        eta: f64,
    ) -> Result<Self> {
        let mut controls = [RabiField::zero(); 4];
        for (slot, (a, p)) in controls
            .iter_mut()
            .zip(control_amplitudes.iter().zip(control_phases.iter()))
        {
            *slot = RabiField::new(a * gamma, *p)?;
        }
        Ok(Self {
            controls,
            probe: RabiField::new(probe_amplitude * gamma, 0.0)?,
            delta_p: detunings[0] * gamma,
            delta_2: detunings[1] * gamma,
            delta_3: detunings[2] * gamma,
            gamma_b: decays[0] * gamma,
            gamma_e: decays[1] * gamma,
            eta,
            c_light: SPEED_OF_LIGHT_CM_PER_S,
        })
    }

    pub fn control(&self, index: usize) -> Complex64 {
        self.controls[index].value()
    }

    pub fn control_values(&self) -> [Complex64; 4] {
        std::array::from_fn(|i| self.controls[i].value())
    }

    /// Ω = √(|Ω₃|² + |Ω₄|²).
    pub fn omega_total(&self) -> f64 {
        self.controls[2].amplitude().hypot(self.controls[3].amplitude())
    }

    /// √(|Ω₁|² + |Ω₂|²), the coupling of |b⟩ to the ground pair.
    pub fn omega_probe_side(&self) -> f64 {
        self.controls[0].amplitude().hypot(self.controls[1].amplitude())
    }

    /// φ = (φ₁ − φ₂) − (φ₃ − φ₄), wrapped into (−π, π].
    pub fn relative_phase(&self) -> f64 {
        let p: [f64; 4] = std::array::from_fn(|i| self.controls[i].phase());
        normalize_phase((p[0] - p[1]) - (p[2] - p[3]))
    }

    pub fn max_control_amplitude(&self) -> f64 {
        self.controls.iter().map(|c| c.amplitude()).fold(0.0, f64::max)
    }

    /// Largest rate in the problem; sets natural time steps and tolerances.
    pub fn max_rate(&self) -> f64 {
        [
            self.gamma_b.abs(),
            self.gamma_e.abs(),
            self.delta_p.abs(),
            self.delta_2.abs(),
            self.delta_3.abs(),
            self.max_control_amplitude(),
            self.probe.amplitude(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// Reference linewidth: the larger decay rate, falling back to the largest
    /// rate when both decays vanish.
    pub fn reference_linewidth(&self) -> f64 {
        let g = self.gamma_b.max(self.gamma_e);
        if g > 0.0 {
            g
        } else {
            self.max_rate().max(1.0)
        }
    }

    pub fn with_delta_p(&self, delta_p: f64) -> Self {
        Self { delta_p, ..*self }
    }

    pub fn with_probe(&self, probe: RabiField) -> Self {
        Self { probe, ..*self }
    }

    pub fn with_control(&self, index: usize, field: RabiField) -> Self {
        let mut out = *self;
        out.controls[index] = field;
        out
    }

    pub fn with_eta(&self, eta: f64) -> Self {
        Self { eta, ..*self }
    }

    /// Returns a copy whose relative phase φ equals `phi`, realised by
    /// adjusting the phase of Ω₁ only.
    pub fn with_relative_phase(&self, phi: f64) -> Self {
        let shift = phi - self.relative_phase();
        let c1 = self.controls[0];
        self.with_control(0, c1.with_phase(c1.phase() + shift))
    }

    /// True when Δ₂ = Δ₃ = 0, the resonance condition of the closed-form
    /// steady states.
    pub fn is_two_photon_resonant(&self) -> bool {
        self.delta_2 == 0.0 && self.delta_3 == 0.0
    }
}

/// Which interference regime the controls realise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Situation {
    /// α ≠ 0 and β ≠ 0: closed-loop tripod-Λ, four absorption peaks.
    A,
    /// β = 0, α ≠ 0: reduces to an N-type scheme.
    B,
    /// α = 0, β ≠ 0: reduces to a Λ scheme.
    C,
    Degenerate,
}

impl Situation {
    pub fn label(&self) -> &'static str {
        match self {
            Situation::A => "A",
            Situation::B => "B",
            Situation::C => "C",
            Situation::Degenerate => "Degenerate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedCoupling {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub omega_total: f64,
    pub phi: f64,
    pub situation: Situation,
}

/// Classification threshold ε = 1e-9·max|Ω_j| (relative to the control scale).
pub fn classification_tolerance(cfg: &FieldConfig) -> f64 {
    CLASSIFICATION_REL_TOL * cfg.max_control_amplitude()
}

pub fn classify(alpha: Complex64, beta: Complex64, eps: f64) -> Situation {
    let a = alpha.norm() > eps;
    let b = beta.norm() > eps;
    match (a, b) {
        (true, true) => Situation::A,
        (true, false) => Situation::B,
        (false, true) => Situation::C,
        (false, false) => Situation::Degenerate,
    }
}

/// β·Ω = Ω₁*Ω₄* − Ω₂*Ω₃*, without dividing by Ω.
pub(crate) fn beta_times_omega(cfg: &FieldConfig) -> Complex64 {
    let [o1, o2, o3, o4] = cfg.control_values();
    o1.conj() * o4.conj() - o2.conj() * o3.conj()
}

/// α·Ω = Ω₁*Ω₃ + Ω₂*Ω₄.
pub(crate) fn alpha_times_omega(cfg: &FieldConfig) -> Complex64 {
    let [o1, o2, o3, o4] = cfg.control_values();
    o1.conj() * o3 + o2.conj() * o4
}

/// α, β, Ω, φ and the situation class of a configuration.
pub fn derive_couplings(cfg: &FieldConfig) -> Result<DerivedCoupling> {
    let omega_total = cfg.omega_total();
    if omega_total == 0.0 {
        return Err(Error::ZeroBrightCoupling);
    }
    let alpha = alpha_times_omega(cfg) / omega_total;
    let beta = beta_times_omega(cfg) / omega_total;
    Ok(DerivedCoupling {
        alpha,
        beta,
        omega_total,
        phi: cfg.relative_phase(),
        situation: classify(alpha, beta, classification_tolerance(cfg)),
    })
}

/// Situation class, treating Ω = 0 as [`Situation::Degenerate`].
pub fn situation_of(cfg: &FieldConfig) -> Situation {
    derive_couplings(cfg)
        .map(|d| d.situation)
        .unwrap_or(Situation::Degenerate)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum Diagnostic {
    ProbeNotPerturbative { probe: f64, min_control: f64 },
    ZeroBrightCoupling,
    NegativeDecayRate { which: &'static str, value: f64 },
    NonPositiveEta { value: f64 },
    NonFiniteValue { which: &'static str },
}

/// Non-fatal checks on a configuration. Never mutates or rejects it.
pub fn validate(cfg: &FieldConfig) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let scalars = [
        ("delta_p", cfg.delta_p),
        ("delta_2", cfg.delta_2),
        ("delta_3", cfg.delta_3),
        ("gamma_b", cfg.gamma_b),
        ("gamma_e", cfg.gamma_e),
        ("eta", cfg.eta),
        ("c_light", cfg.c_light),
    ];
    for (which, v) in scalars {
        if !v.is_finite() {
            out.push(Diagnostic::NonFiniteValue { which });
        }
    }
    let min_control = cfg
        .controls
        .iter()
        .map(|c| c.amplitude())
        .filter(|&a| a > 0.0)
        .fold(f64::INFINITY, f64::min);
    if min_control.is_finite() && cfg.probe.amplitude() >= min_control {
        out.push(Diagnostic::ProbeNotPerturbative {
            probe: cfg.probe.amplitude(),
            min_control,
        });
    }
    if cfg.omega_total() == 0.0 {
        out.push(Diagnostic::ZeroBrightCoupling);
    }
    if cfg.gamma_b < 0.0 {
        out.push(Diagnostic::NegativeDecayRate {
            which: "gamma_b",
            value: cfg.gamma_b,
        });
    }
    if cfg.gamma_e < 0.0 {
        out.push(Diagnostic::NegativeDecayRate {
            which: "gamma_e",
            value: cfg.gamma_e,
        });
    }
    if !(cfg.eta > 0.0) {
        out.push(Diagnostic::NonPositiveEta { value: cfg.eta });
    }
    out
}

// --- on-disk configuration -------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub amplitude: f64,
    #[serde(default)]
    pub phase: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetuningSpec {
    #[serde(default)]
    pub p: f64,
    #[serde(default)]
    pub two: f64,
    #[serde(default)]
    pub three: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecaySpec {
    pub b: f64,
    pub e: f64,
}

/// JSON form of a [`FieldConfig`].
///
/// Frequencies are in s⁻¹ unless `gamma_unit` is present, in which case every
/// amplitude, detuning and decay rate is read as a multiple of it. Keys not
/// listed here are ignored so that front ends can extend the file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigFile {
    pub controls: [FieldSpec; 4],
    pub probe: FieldSpec,
    pub detunings: DetuningSpec,
    pub decays: DecaySpec,
    pub eta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_unit: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_light: Option<f64>,
}

impl ConfigFile {
    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Multiplier applied to every frequency-valued entry.
    pub fn unit(&self) -> f64 {
        self.gamma_unit.unwrap_or(1.0)
    }

    pub fn to_field_config(&self) -> Result<FieldConfig> {
        let u = self.unit();
        if !(u > 0.0) || !u.is_finite() {
            return Err(Error::InvalidInput(format!("gamma_unit must be > 0, got {u}")));
        }
        let mut controls = [RabiField::zero(); 4];
        for (slot, spec) in controls.iter_mut().zip(self.controls.iter()) {
            *slot = RabiField::new(spec.amplitude * u, spec.phase)?;
        }
        Ok(FieldConfig {
            controls,
            probe: RabiField::new(self.probe.amplitude * u, self.probe.phase)?,
            delta_p: self.detunings.p * u,
            delta_2: self.detunings.two * u,
            delta_3: self.detunings.three * u,
            gamma_b: self.decays.b * u,
            gamma_e: self.decays.e * u,
            eta: self.eta,
            c_light: self.c_light.unwrap_or(SPEED_OF_LIGHT_CM_PER_S),
        })
    }

    /// Inverse of [`ConfigFile::to_field_config`] for the given unit.
    pub fn from_field_config(cfg: &FieldConfig, gamma_unit: Option<f64>) -> Self {
        let u = gamma_unit.unwrap_or(1.0);
        let spec = |f: &RabiField| FieldSpec {
            amplitude: f.amplitude() / u,
            phase: f.phase(),
        };
        Self {
            controls: std::array::from_fn(|i| spec(&cfg.controls[i])),
            probe: spec(&cfg.probe),
            detunings: DetuningSpec {
                p: cfg.delta_p / u,
                two: cfg.delta_2 / u,
                three: cfg.delta_3 / u,
            },
            decays: DecaySpec {
                b: cfg.gamma_b / u,
                e: cfg.gamma_e / u,
            },
            eta: cfg.eta,
            gamma_unit,
            c_light: Some(cfg.c_light),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use proptest::prelude::*;

    fn cfg_gamma(amps: [f64; 4], phases: [f64; 4]) -> FieldConfig {
        FieldConfig::in_gamma_units(1.0, amps, phases, 0.01, [0.0; 3], [1.0, 1.0], 1e10).unwrap()
    }

    #[test]
    fn phase_normalization() {
        assert_eq!(normalize_phase(PI), PI);
        assert!((normalize_phase(-PI) - PI).abs() < 1e-15);
        assert!((normalize_phase(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert!((normalize_phase(7.0 * PI) - PI).abs() < 1e-12);
        let f = RabiField::new(1.0, -3.0 * PI).unwrap();
        assert!((f.phase() - PI).abs() < 1e-12);
        assert!(RabiField::new(-1.0, 0.0).is_err());
    }

    #[test]
    fn fig4a_couplings() {
        let d = derive_couplings(&cfg_gamma([0.9, 0.7, 0.4, 0.8], [0.0; 4])).unwrap();
        let omega = 0.8f64.sqrt();
        assert!((d.omega_total - omega).abs() < 1e-15);
        assert!((d.beta - Complex64::new(0.44 / omega, 0.0)).norm() < 1e-14);
        assert!((d.alpha - Complex64::new(0.92 / omega, 0.0)).norm() < 1e-14);
        assert!((d.beta.re - 0.4919).abs() < 1e-4);
        assert!((d.alpha.re - 1.0286).abs() < 1e-4);
        assert_eq!(d.situation, Situation::A);
    }

    #[test]
    fn fig4b_beta_vanishes() {
        let d = derive_couplings(&cfg_gamma([0.5, 0.5, 0.7, 0.7], [0.0; 4])).unwrap();
        assert_eq!(d.beta, Complex64::new(0.0, 0.0));
        assert_eq!(d.situation, Situation::B);
    }

    #[test]
    fn fig4c_alpha_vanishes() {
        let cfg = cfg_gamma([0.2, 0.2, 0.1, 0.1], [PI, 0.0, 0.0, 0.0]);
        let d = derive_couplings(&cfg).unwrap();
        assert!((d.phi - PI).abs() < 1e-15);
        assert!(d.alpha.norm() < 1e-16);
        assert!((d.beta.norm() - 2f64.sqrt() * 0.2).abs() < 1e-15);
        assert_eq!(d.situation, Situation::C);
    }

    #[test]
    fn zero_bright_coupling() {
        let cfg = cfg_gamma([0.5, 0.5, 0.0, 0.0], [0.0; 4]);
        assert_eq!(derive_couplings(&cfg), Err(Error::ZeroBrightCoupling));
        assert_eq!(situation_of(&cfg), Situation::Degenerate);
        assert!(validate(&cfg).contains(&Diagnostic::ZeroBrightCoupling));
    }

    #[test]
    fn validation_diagnostics() {
        assert!(validate(&presets::cs_soliton()).is_empty());
        assert!(validate(&presets::fig4a()).is_empty());

        let base = presets::cs_soliton();
        let loud = base.with_probe(RabiField::real(10.0 * base.max_control_amplitude()));
        assert!(validate(&loud)
            .iter()
            .any(|d| matches!(d, Diagnostic::ProbeNotPerturbative { .. })));

        let neg = FieldConfig {
            gamma_b: -1.0,
            ..base
        };
        let diags = validate(&neg);
        assert!(diags.iter().any(|d| matches!(
            d,
            Diagnostic::NegativeDecayRate {
                which: "gamma_b",
                ..
            }
        )));
        // validate does not touch its input
        assert_eq!(neg.gamma_b, -1.0);
    }

    #[test]
    fn relative_phase_setter() {
        let cfg = cfg_gamma([0.5, 0.5, 0.7, 0.7], [0.3, -0.2, 1.0, 0.1]);
        let set = cfg.with_relative_phase(2.0);
        assert!((set.relative_phase() - 2.0).abs() < 1e-14);
        for i in 0..4 {
            assert_eq!(set.controls[i].amplitude(), cfg.controls[i].amplitude());
        }
    }

    #[test]
    fn config_file_roundtrip_units() {
        let text = r#"{
            "controls": [{"amplitude": 0.9}, {"amplitude": 0.7}, {"amplitude": 0.4, "phase": 0.5}, {"amplitude": 0.8}],
            "probe": {"amplitude": 0.01},
            "detunings": {"p": 0.5, "two": 0.0, "three": 0.0},
            "decays": {"b": 1.0, "e": 1.0},
            "eta": 1e10,
            "gamma_unit": 2.0
        }"#;
        let file = ConfigFile::from_json(text).unwrap();
        let cfg = file.to_field_config().unwrap();
        assert_eq!(cfg.controls[0].amplitude(), 1.8);
        assert_eq!(cfg.controls[2].phase(), 0.5);
        assert_eq!(cfg.delta_p, 1.0);
        assert_eq!(cfg.gamma_e, 2.0);
        assert_eq!(cfg.c_light, SPEED_OF_LIGHT_CM_PER_S);
        let back = ConfigFile::from_field_config(&cfg, Some(2.0));
        assert_eq!(back.to_field_config().unwrap(), cfg);
    }

    #[test]
    fn config_file_rejects_garbage() {
        assert!(ConfigFile::from_json("{ not json").is_err());
        assert!(ConfigFile::from_json(r#"{"controls": []}"#).is_err());
    }

    fn arb_field() -> impl Strategy<Value = RabiField> {
        (0.01f64..3.0, -PI..PI).prop_map(|(a, p)| RabiField::new(a, p).unwrap())
    }

    fn arb_controls() -> impl Strategy<Value = FieldConfig> {
        prop::array::uniform4(arb_field()).prop_map(|controls| FieldConfig {
            controls,
            ..presets::fig4a()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn lagrange_identity(cfg in arb_controls()) {
            let d = derive_couplings(&cfg).unwrap();
            let lhs = d.alpha.norm_sqr() + d.beta.norm_sqr();
            let rhs = cfg.omega_probe_side().powi(2) * cfg.omega_total().powi(2)
                / d.omega_total.powi(2);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs);
        }

        #[test]
        fn beta_invariant_under_common_shift_of_phi1_phi2(cfg in arb_controls(), theta in -PI..PI) {
            let d0 = derive_couplings(&cfg).unwrap();
            let c1 = cfg.controls[0];
            let c2 = cfg.controls[1];
            let shifted = cfg
                .with_control(0, c1.with_phase(c1.phase() + theta))
                .with_control(1, c2.with_phase(c2.phase() + theta));
            let d1 = derive_couplings(&shifted).unwrap();
            prop_assert!((d1.beta * Complex64::from_polar(1.0, theta) - d0.beta).norm()
                <= 1e-12 * d0.beta.norm().max(1.0));
            prop_assert!((d1.beta.norm() - d0.beta.norm()).abs() <= 1e-12 * d0.beta.norm().max(1.0));
            prop_assert_eq!(d1.situation, d0.situation);
        }

        #[test]
        fn magnitudes_invariant_under_global_phase(cfg in arb_controls(), theta in -PI..PI) {
            let d0 = derive_couplings(&cfg).unwrap();
            let mut rotated = cfg;
            for i in 0..4 {
                let c = cfg.controls[i];
                rotated = rotated.with_control(i, c.with_phase(c.phase() + theta));
            }
            let d1 = derive_couplings(&rotated).unwrap();
            prop_assert!((d1.beta.norm() - d0.beta.norm()).abs() <= 1e-12 * d0.beta.norm().max(1.0));
            prop_assert!((d1.alpha.norm() - d0.alpha.norm()).abs() <= 1e-12 * d0.alpha.norm().max(1.0));
            prop_assert_eq!(d1.situation, d0.situation);
        }

        #[test]
        fn scaling_controls(cfg in arb_controls(), s in 1e-3f64..1e3, special in 0usize..3) {
            // mix in exact B and C configurations so the boundaries are exercised
            let cfg = match special {
                0 => cfg,
                1 => {
                    let a = cfg.controls[0].amplitude();
                    let b = cfg.controls[2].amplitude();
                    FieldConfig { controls: [RabiField::real(a), RabiField::real(a), RabiField::real(b), RabiField::real(b)], ..cfg }
                }
                _ => {
                    let a = cfg.controls[0].amplitude();
                    let b = cfg.controls[2].amplitude();
                    FieldConfig { controls: [RabiField::new(a, PI).unwrap(), RabiField::real(a), RabiField::real(b), RabiField::real(b)], ..cfg }
                }
            };
            let d0 = derive_couplings(&cfg).unwrap();
            let mut scaled = cfg;
            for i in 0..4 {
                scaled = scaled.with_control(i, cfg.controls[i].scaled(s));
            }
            let d1 = derive_couplings(&scaled).unwrap();
            prop_assert!((d1.alpha.norm() - s * d0.alpha.norm()).abs() <= 1e-12 * s * d0.alpha.norm().max(1e-3));
            prop_assert!((d1.beta.norm() - s * d0.beta.norm()).abs() <= 1e-12 * s * d0.beta.norm().max(1e-3));
            prop_assert_eq!(d1.situation, d0.situation);
        }
    }
}
