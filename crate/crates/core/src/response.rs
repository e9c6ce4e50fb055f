//! First-order probe coherences: the Fourier-domain closed form, the direct
//! 4×4 solve it is checked against, the on-resonance steady states, a
//! time-stepping Bloch integrator, and absorption spectra.
//!
//! Sign convention: ρ_ba = +Ω_p·S₁/Q, so that Im ρ_ba ≥ 0 is absorption and
//! the direct solve of the linear system agrees with the closed form.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{self, rk4_linear, solve4};
use crate::params::{classification_tolerance, derive_couplings, FieldConfig, Situation};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Relative factor in the singular-denominator threshold 1e-12·scale⁴.
pub const SINGULAR_REL_TOL: f64 = 1e-12;

/// Probe-frequency-dependent polynomials of the Fourier-domain solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FourierContext {
    pub omega: f64,
    pub t1: Complex64,
    pub t2: Complex64,
    pub t3: Complex64,
    pub s1: Complex64,
    pub s2: Complex64,
    pub s3: Complex64,
    pub s4: Complex64,
    pub q: Complex64,
    /// |Ω₁|² + |Ω₂|².
    pub a: f64,
    /// |Ω₃|² + |Ω₄|².
    pub b: f64,
    /// Ω₁*Ω₄* − Ω₂*Ω₃* (that is, βΩ).
    pub beta_omega: Complex64,
    /// Ω₁*Ω₃ + Ω₂*Ω₄ (that is, αΩ).
    pub alpha_omega: Complex64,
    controls: [Complex64; 4],
    beta_negligible: bool,
    scale: f64,
}

/// t₁ = ω + iΓ_b/2 + Δ_p, t₂ = ω + Δ_p − Δ₂, t₃ = ω + iΓ_e/2 + Δ_p − Δ₂ + Δ₃.
pub fn detuning_terms(cfg: &FieldConfig, omega: f64) -> [Complex64; 3] {
    let t1 = Complex64::new(omega + cfg.delta_p, cfg.gamma_b / 2.0);
    let t2 = Complex64::new(omega + cfg.delta_p - cfg.delta_2, 0.0);
    let t3 = Complex64::new(omega + cfg.delta_p - cfg.delta_2 + cfg.delta_3, cfg.gamma_e / 2.0);
    [t1, t2, t3]
}

pub fn fourier_context(cfg: &FieldConfig, omega: f64) -> FourierContext {
    let [t1, t2, t3] = detuning_terms(cfg, omega);
    let controls = cfg.control_values();
    let [o1, o2, o3, o4] = controls;
    let m: [f64; 4] = std::array::from_fn(|i| cfg.controls[i].amplitude());
    let a = m[0] * m[0] + m[1] * m[1];
    let b = m[2] * m[2] + m[3] * m[3];
    let phi = cfg.relative_phase();
    let beta_omega = o1.conj() * o4.conj() - o2.conj() * o3.conj();
    let alpha_omega = o1.conj() * o3 + o2.conj() * o4;
    let t23 = t2 * t3;

    let s1 = t2 * t23 - t2 * b;
    let s2 = beta_omega * o4 - o1.conj() * t23;
    let s3 = -o3 * beta_omega - o2.conj() * t23;
    let s4 = t2 * alpha_omega;
    let q = t23 * a + t1 * t2 * b - t1 * t2 * t23
        - (m[1] * m[1] * m[2] * m[2] + m[0] * m[0] * m[3] * m[3])
        + 2.0 * m[0] * m[1] * m[2] * m[3] * phi.cos();

    let scale = [t1.norm(), t2.norm(), t3.norm(), m[0], m[1], m[2], m[3]]
        .into_iter()
        .fold(0.0, f64::max);
    let eps = classification_tolerance(cfg);
    FourierContext {
        omega,
        t1,
        t2,
        t3,
        s1,
        s2,
        s3,
        s4,
        q,
        a,
        b,
        beta_omega,
        alpha_omega,
        controls,
        beta_negligible: beta_omega.norm() <= eps * cfg.max_control_amplitude(),
        scale,
    }
}

impl FourierContext {
    /// |Q| below this is treated as singular.
    pub fn singular_threshold(&self) -> f64 {
        SINGULAR_REL_TOL * self.scale.powi(4)
    }

    fn is_singular(&self) -> bool {
        !(self.q.norm() > self.singular_threshold())
    }

    /// True when βΩ vanishes and Q = t₂·Q̃ can be divided through by t₂.
    pub fn uses_reduction(&self) -> bool {
        self.is_singular() && self.beta_negligible
    }

    /// Q̃ = t₃A + t₁(B − t₂t₃), the cubic left after dividing Q by t₂ when β = 0.
    pub fn q_reduced(&self) -> Complex64 {
        self.t3 * self.a + self.t1 * (self.b - self.t2 * self.t3)
    }

    /// S_k/Q for k = 1…4.
    ///
    /// With β = 0, every S_k and Q carry a common factor t₂; at t₂ = 0 the
    /// ratio is taken from the reduced polynomials instead of reporting a
    /// singularity.
    pub fn ratios(&self) -> Result<[Complex64; 4]> {
        if !self.is_singular() {
            return Ok([self.s1 / self.q, self.s2 / self.q, self.s3 / self.q, self.s4 / self.q]);
        }
        if self.beta_negligible {
            let qr = self.q_reduced();
            let threshold = SINGULAR_REL_TOL * self.scale.powi(3);
            if qr.norm() > threshold {
                let [o1, o2, _, _] = self.controls;
                let s1 = self.t2 * self.t3 - self.b;
                let s2 = -o1.conj() * self.t3;
                let s3 = -o2.conj() * self.t3;
                return Ok([s1 / qr, s2 / qr, s3 / qr, self.alpha_omega / qr]);
            }
        }
        Err(Error::SingularDenominator {
            magnitude: self.q.norm(),
            threshold: self.singular_threshold(),
        })
    }
}

/// First-order coherences ρ_ba, ρ_ca, ρ_da, ρ_ea.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoherenceSolution {
    pub rho_ba: Complex64,
    pub rho_ca: Complex64,
    pub rho_da: Complex64,
    pub rho_ea: Complex64,
}

impl CoherenceSolution {
    pub fn from_array(v: [Complex64; 4]) -> Self {
        Self {
            rho_ba: v[0],
            rho_ca: v[1],
            rho_da: v[2],
            rho_ea: v[3],
        }
    }

    pub fn as_array(&self) -> [Complex64; 4] {
        [self.rho_ba, self.rho_ca, self.rho_da, self.rho_ea]
    }

    pub fn norm(&self) -> f64 {
        numerics::vec_norm(&self.as_array())
    }

    pub fn is_finite(&self) -> bool {
        self.as_array().iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// ‖self − reference‖/‖reference‖, or the absolute distance when the
    /// reference is zero.
    pub fn relative_error(&self, reference: &CoherenceSolution) -> f64 {
        let diff: Vec<Complex64> = self
            .as_array()
            .iter()
            .zip(reference.as_array().iter())
            .map(|(a, b)| a - b)
            .collect();
        let d = numerics::vec_norm(&diff);
        let r = reference.norm();
        if r > 0.0 {
            d / r
        } else {
            d
        }
    }

    /// Σ|ρ_k|².
    pub fn total_weight(&self) -> f64 {
        self.as_array().iter().map(|z| z.norm_sqr()).sum()
    }
}

pub fn coherences_fourier(cfg: &FieldConfig, omega: f64) -> Result<CoherenceSolution> {
    let ratios = fourier_context(cfg, omega).ratios()?;
    let op = cfg.probe.value();
    Ok(CoherenceSolution::from_array(ratios.map(|r| op * r)))
}

/// Coefficient matrix and right-hand side of the Fourier-domain equations
/// for (F_ba, F_ca, F_da, F_ea), with Λ_p replaced by Ω_p.
pub fn linear_system(cfg: &FieldConfig, omega: f64) -> ([[Complex64; 4]; 4], [Complex64; 4]) {
    let [t1, t2, t3] = detuning_terms(cfg, omega);
    let [o1, o2, o3, o4] = cfg.control_values();
    let m = [
        [t1, o1, o2, ZERO],
        [o1.conj(), t2, ZERO, o3.conj()],
        [o2.conj(), ZERO, t2, o4.conj()],
        [ZERO, o3, o4, t3],
    ];
    (m, [-cfg.probe.value(), ZERO, ZERO, ZERO])
}

pub fn solve_direct(cfg: &FieldConfig, omega: f64) -> Result<CoherenceSolution> {
    let (m, rhs) = linear_system(cfg, omega);
    Ok(CoherenceSolution::from_array(solve4(&m, &rhs)?))
}

fn require_resonance(cfg: &FieldConfig, what: &str) -> Result<()> {
    if !cfg.is_two_photon_resonant() {
        return Err(Error::PreconditionViolated(format!(
            "{what} requires Δ2 = Δ3 = 0 (got Δ2 = {}, Δ3 = {})",
            cfg.delta_2, cfg.delta_3
        )));
    }
    Ok(())
}

fn resonant_pieces(cfg: &FieldConfig) -> (Complex64, Complex64, f64, f64) {
    let dp = cfg.delta_p;
    let pe = I * dp * Complex64::new(-cfg.gamma_e / 2.0, dp);
    let pb = I * dp * Complex64::new(-cfg.gamma_b / 2.0, dp);
    let m: [f64; 4] = std::array::from_fn(|i| cfg.controls[i].amplitude());
    (pe, pb, m[0] * m[0] + m[1] * m[1], m[2] * m[2] + m[3] * m[3])
}

fn checked_div(num: Complex64, den: Complex64, scale: f64, power: i32) -> Result<Complex64> {
    let threshold = SINGULAR_REL_TOL * scale.powi(power);
    if !(den.norm() > threshold) {
        return Err(Error::SingularDenominator {
            magnitude: den.norm(),
            threshold,
        });
    }
    Ok(num / den)
}

/// On-resonance steady state with both interference terms present.
pub fn steady_state_eq17(cfg: &FieldConfig) -> Result<Complex64> {
    require_resonance(cfg, "the resonant steady state")?;
    let (pe, pb, a, b) = resonant_pieces(cfg);
    let beta_omega = crate::params::beta_times_omega(cfg);
    let num = cfg.probe.value() * cfg.delta_p * (b + pe);
    let den = beta_omega.norm_sqr() + pe * a + pb * (b + pe);
    checked_div(num, den, cfg.max_rate(), 4)
}

/// β = 0 steady state, where the common Δ_p factor has been cancelled.
pub fn steady_state_eq19(cfg: &FieldConfig) -> Result<Complex64> {
    require_resonance(cfg, "the β = 0 steady state")?;
    let situation = derive_couplings(cfg)?.situation;
    if !matches!(situation, Situation::B | Situation::Degenerate) {
        return Err(Error::PreconditionViolated(format!(
            "the β = 0 steady state requires β = 0 (situation {})",
            situation.label()
        )));
    }
    let (pe, _, a, b) = resonant_pieces(cfg);
    let dp = cfg.delta_p;
    let num = cfg.probe.value() * (b + pe);
    let den = I * Complex64::new(-cfg.gamma_e / 2.0, dp) * a
        + I * Complex64::new(-cfg.gamma_b / 2.0, dp) * (b + pe);
    checked_div(num, den, cfg.max_rate(), 3)
}

/// α = 0 steady state: a Λ system driven by |β| alone.
///
/// Exact for any configuration with α = 0 on resonance, of which the
/// symmetric |Ω₁|=|Ω₂|, |Ω₃|=|Ω₄|, φ=π case is one instance.
pub fn steady_state_eq21(cfg: &FieldConfig) -> Result<Complex64> {
    require_resonance(cfg, "the α = 0 steady state")?;
    let c = derive_couplings(cfg)?;
    if c.situation != Situation::C {
        return Err(Error::PreconditionViolated(format!(
            "the α = 0 steady state requires situation C (got {})",
            c.situation.label()
        )));
    }
    let dp = cfg.delta_p;
    let num = cfg.probe.value() * dp;
    let den = c.beta.norm_sqr() + I * dp * Complex64::new(-cfg.gamma_b / 2.0, dp);
    checked_div(num, den, cfg.max_rate(), 2)
}

/// Generator G and drive of ρ̇ = Gρ + drive for (ρ_ba, ρ_ca, ρ_da, ρ_ea).
pub fn bloch_generator(cfg: &FieldConfig) -> ([[Complex64; 4]; 4], [Complex64; 4]) {
    let d1 = Complex64::new(-cfg.gamma_b / 2.0, cfg.delta_p);
    let d2 = Complex64::new(0.0, cfg.delta_p - cfg.delta_2);
    let d3 = Complex64::new(-cfg.gamma_e / 2.0, cfg.delta_p + cfg.delta_3 - cfg.delta_2);
    let [o1, o2, o3, o4] = cfg.control_values();
    let g = [
        [d1, I * o1, I * o2, ZERO],
        [I * o1.conj(), d2, ZERO, I * o3.conj()],
        [I * o2.conj(), ZERO, d2, I * o4.conj()],
        [ZERO, I * o3, I * o4, d3],
    ];
    (g, [I * cfg.probe.value(), ZERO, ZERO, ZERO])
}

/// Default RK4 step, 0.05 over the largest rate in the problem.
pub fn default_bloch_step(cfg: &FieldConfig) -> f64 {
    0.05 / cfg.max_rate().max(f64::MIN_POSITIVE)
}

/// Integrates the first-order Bloch equations from zero coherences.
///
/// Convergence is judged over a final window of length 1/max(Γ_b, Γ_e): the
/// largest coherence change across it must be below 1e-10·|Ω_p|/max(Γ).
pub fn bloch_evolve(cfg: &FieldConfig, duration: f64, dt: Option<f64>) -> Result<CoherenceSolution> {
    if !(duration > 0.0 && duration.is_finite()) {
        return Err(Error::InvalidInput(format!("duration must be positive, got {duration}")));
    }
    let dt = dt.unwrap_or_else(|| default_bloch_step(cfg));
    if !(dt > 0.0) {
        return Err(Error::InvalidInput(format!("time step must be positive, got {dt}")));
    }
    let (g, drive) = bloch_generator(cfg);
    let gamma = cfg.gamma_b.max(cfg.gamma_e);
    let window_rate = if gamma > 0.0 { gamma } else { cfg.max_rate().max(f64::MIN_POSITIVE) };
    let window = (1.0 / window_rate).min(duration);

    let total_steps = (duration / dt).ceil().max(1.0) as usize;
    let dt = duration / total_steps as f64;
    let window_steps = ((window / dt).round() as usize).clamp(1, total_steps);

    let before = rk4_linear(&g, &drive, &[ZERO; 4], dt, total_steps - window_steps)?;
    let after = rk4_linear(&g, &drive, &before, dt, window_steps)?;

    let change = before
        .iter()
        .zip(after.iter())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    let tolerance = 1e-10 * cfg.probe.amplitude() / window_rate;
    if change > tolerance || !after.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::NonConvergence {
            duration,
            change,
            tolerance,
        });
    }
    Ok(CoherenceSolution::from_array(after))
}

/// Uniform probe-detuning grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumGrid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl SpectrumGrid {
    /// Δ_p ∈ [−5γ, 5γ] with 2001 points, γ the larger decay rate.
    pub fn default_for(cfg: &FieldConfig) -> Self {
        let g = cfg.reference_linewidth();
        Self {
            min: -5.0 * g,
            max: 5.0 * g,
            points: 2001,
        }
    }

    /// Same bounds, twice the point density.
    pub fn refined(&self) -> Self {
        Self {
            points: 2 * self.points - 1,
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.points < 3 {
            return Err(Error::InvalidInput(format!("spectrum needs at least 3 points, got {}", self.points)));
        }
        if !(self.max > self.min) || !self.min.is_finite() || !self.max.is_finite() {
            return Err(Error::InvalidInput(format!(
                "spectrum bounds must satisfy min < max (got {} and {})",
                self.min, self.max
            )));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let step = (self.max - self.min) / (self.points - 1) as f64;
        (0..self.points)
            .map(|k| if k + 1 == self.points { self.max } else { self.min + k as f64 * step })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    pub grid: SpectrumGrid,
    pub delta_p: Vec<f64>,
    pub coherences: Vec<CoherenceSolution>,
}

impl Spectrum {
    /// Im ρ_ba at each grid point.
    pub fn absorption(&self) -> Vec<f64> {
        self.coherences.iter().map(|c| c.rho_ba.im).collect()
    }
}

/// Steady-state coherences across the probe-detuning grid, evaluated
/// independently per point.
pub fn absorption_spectrum(cfg: &FieldConfig, grid: SpectrumGrid) -> Result<Spectrum> {
    grid.validate()?;
    let delta_p = grid.values();
    let coherences = delta_p
        .par_iter()
        .map(|&dp| coherences_fourier(&cfg.with_delta_p(dp), 0.0))
        .collect::<Result<Vec<_>>>()?;
    Ok(Spectrum {
        grid,
        delta_p,
        coherences,
    })
}

/// Peaks must rise at least this fraction of the global maximum above their
/// surroundings to count.
pub const PEAK_RELATIVE_PROMINENCE: f64 = 0.01;

pub fn count_peaks(spectrum: &Spectrum) -> usize {
    numerics::count_peaks(&spectrum.absorption(), PEAK_RELATIVE_PROMINENCE)
}
