//! Linear propagation: the dispersion relation κ(ω), its Taylor coefficients,
//! the closed-form Gaussian pulse, and FFT propagation with the full κ(ω).

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{self, angular_frequencies, fft_in_place, ifft_in_place, richardson_first, richardson_second, ComplexGrid};
use crate::params::FieldConfig;
use crate::response::{fourier_context, FourierContext};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Field magnitude allowed at either grid edge, relative to the peak.
pub const EDGE_REL_TOL: f64 = 1e-8;

/// FFT length used when no grid is supplied.
pub const DEFAULT_FFT_POINTS: usize = 1 << 14;

/// Default time window, in units of the pulse duration τ₀.
pub const DEFAULT_WINDOW_TAUS: f64 = 40.0;

/// κ(ω) = ω/c + η·S₁(ω)/Q(ω), in cm⁻¹.
pub fn kappa_of_omega(cfg: &FieldConfig, omega: f64) -> Result<Complex64> {
    let r = fourier_context(cfg, omega).ratios()?[0];
    Ok(omega / cfg.c_light + cfg.eta * r)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DispersionExpansion {
    /// κ(0), cm⁻¹.
    pub kappa0: Complex64,
    /// dκ/dω at 0, cm⁻¹·s.
    pub kappa1: Complex64,
    /// ½·d²κ/dω² at 0, cm⁻¹·s².
    pub kappa2: Complex64,
    /// 1/κ₁, cm/s.
    pub v_g: Complex64,
    /// 2·Im κ₀, cm⁻¹.
    pub chi: f64,
    /// Re κ₀, cm⁻¹.
    pub phase_shift: f64,
}

impl DispersionExpansion {
    pub fn from_kappas(kappa0: Complex64, kappa1: Complex64, kappa2: Complex64) -> Self {
        Self {
            kappa0,
            kappa1,
            kappa2,
            v_g: 1.0 / kappa1,
            chi: 2.0 * kappa0.im,
            phase_shift: kappa0.re,
        }
    }

    /// Group velocity 1/Re κ₁ as a fraction of `c_light`.
    pub fn group_velocity_fraction(&self, c_light: f64) -> f64 {
        1.0 / (self.kappa1.re * c_light)
    }

    /// κ₀ + κ₁ω + κ₂ω².
    pub fn taylor_kappa(&self, omega: f64) -> Complex64 {
        self.kappa0 + self.kappa1 * omega + self.kappa2 * omega * omega
    }

    /// Ω_p⁰/√L·exp(iκ₀z − (t − κ₁z)²/(L·τ₀²)) with L = 1 − 4iκ₂z/τ₀².
    ///
    /// This is the exact propagation of the input Gaussian under the
    /// quadratic (Taylor-truncated) dispersion relation.
    pub fn gaussian(&self, pulse: &GaussianPulseSpec, z: f64, t: f64) -> Complex64 {
        let tau2 = pulse.tau0 * pulse.tau0;
        let l = Complex64::new(1.0, 0.0) - 4.0 * I * self.kappa2 * z / tau2;
        let shifted = t - self.kappa1 * z;
        pulse.amplitude / l.sqrt() * (I * self.kappa0 * z - shifted * shifted / (l * tau2)).exp()
    }
}

/// κ and its first two ω-derivatives at ω = 0 from the polynomial derivatives
/// of S₁ and Q (or of the reduced pair when βΩ = 0 and t₂(0) = 0).
fn ratio_derivatives(ctx: &FourierContext) -> Result<[Complex64; 3]> {
    let (t1, t2, t3, a, b) = (ctx.t1, ctx.t2, ctx.t3, ctx.a, ctx.b);
    let (n, n1, n2, d, d1, d2) = if ctx.uses_reduction() {
        (
            t2 * t3 - b,
            t2 + t3,
            Complex64::new(2.0, 0.0),
            ctx.q_reduced(),
            a + b - (t2 * t3 + t1 * t3 + t1 * t2),
            -2.0 * (t1 + t2 + t3),
        )
    } else {
        (
            ctx.s1,
            2.0 * t2 * t3 + t2 * t2 - b,
            2.0 * t3 + 4.0 * t2,
            ctx.q,
            (t2 + t3) * a + (t1 + t2) * b - (t2 * t2 * t3 + 2.0 * t1 * t2 * t3 + t1 * t2 * t2),
            2.0 * a + 2.0 * b - (2.0 * t2 * t2 + 4.0 * t2 * t3 + 2.0 * t1 * t3 + 4.0 * t1 * t2),
        )
    };
    // reuse the singularity handling of the context
    let r = ctx.ratios()?[0];
    debug_assert!((r - n / d).norm() <= 1e-9 * r.norm().max((n / d).norm()));
    let r1 = n1 / d - n * d1 / (d * d);
    let r2 = n2 / d - 2.0 * n1 * d1 / (d * d) - n * d2 / (d * d) + 2.0 * n * d1 * d1 / (d * d * d);
    Ok([n / d, r1, r2])
}

pub fn taylor_coefficients(cfg: &FieldConfig) -> Result<DispersionExpansion> {
    let [r, r1, r2] = ratio_derivatives(&fourier_context(cfg, 0.0))?;
    Ok(DispersionExpansion::from_kappas(
        cfg.eta * r,
        1.0 / cfg.c_light + cfg.eta * r1,
        0.5 * cfg.eta * r2,
    ))
}

/// Default finite-difference step, 1e-4 of the largest rate in the problem.
///
/// For linewidth-scale configurations this is 1e-4·γ. With detunings far
/// above γ a γ-based step leaves κ'' dominated by roundoff.
pub fn default_fd_step(cfg: &FieldConfig) -> f64 {
    1e-4 * cfg.max_rate().max(cfg.reference_linewidth())
}

/// κ₁ and κ₂ from Richardson-extrapolated central differences of κ(ω).
pub fn finite_difference_coefficients(cfg: &FieldConfig, h: f64) -> Result<(Complex64, Complex64)> {
    for omega in [-h, -0.5 * h, 0.0, 0.5 * h, h] {
        kappa_of_omega(cfg, omega)?;
    }
    let kappa = |w: f64| kappa_of_omega(cfg, w).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
    let k1 = richardson_first(kappa, 0.0, h);
    let k2 = 0.5 * richardson_second(kappa, 0.0, h);
    Ok((k1, k2))
}

/// Gaussian input Ω_p(0,t) = Ω_p⁰·exp(−(t/τ₀)²).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianPulseSpec {
    pub amplitude: f64,
    pub tau0: f64,
}

impl GaussianPulseSpec {
    pub fn new(amplitude: f64, tau0: f64) -> Result<Self> {
        if !(tau0 > 0.0 && tau0.is_finite()) {
            return Err(Error::InvalidInput(format!("pulse duration must be positive, got {tau0}")));
        }
        if !amplitude.is_finite() {
            return Err(Error::InvalidInput("pulse amplitude must be finite".into()));
        }
        Ok(Self { amplitude, tau0 })
    }

    pub fn at_entrance(&self, t: f64) -> Complex64 {
        let x = t / self.tau0;
        Complex64::new(self.amplitude * (-x * x).exp(), 0.0)
    }

    /// Samples the input pulse on a centred grid of `points` spanning
    /// `window_taus`·τ₀.
    pub fn sample(&self, points: usize, window_taus: f64) -> Result<ComplexGrid> {
        let dt = window_taus * self.tau0 / points as f64;
        let grid = ComplexGrid::centered(points, dt, |t| self.at_entrance(t))?;
        ComplexGrid::for_fft(grid.into_values(), dt, -(points as f64 / 2.0) * dt)
    }

    /// [`sample`](Self::sample) with 2¹⁴ points over 40τ₀.
    pub fn sample_default(&self) -> Result<ComplexGrid> {
        self.sample(DEFAULT_FFT_POINTS, DEFAULT_WINDOW_TAUS)
    }
}

/// Closed-form field at (z, t) using the Taylor coefficients of `cfg`.
pub fn gaussian_closed_form(cfg: &FieldConfig, pulse: &GaussianPulseSpec, z: f64, t: f64) -> Result<Complex64> {
    Ok(taylor_coefficients(cfg)?.gaussian(pulse, z, t))
}

fn check_edges(values: &[Complex64]) -> Result<()> {
    let peak = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let edge = values[0].norm().max(values[values.len() - 1].norm());
    if edge > EDGE_REL_TOL * peak {
        return Err(Error::GridTooNarrow(format!(
            "edge magnitude {:.3e} of peak exceeds {EDGE_REL_TOL:e}",
            edge / peak
        )));
    }
    Ok(())
}

/// Multiplies each frequency component by exp(iκ(ω)z).
///
/// The field is taken as Σ Λ(ω)e^{−iωt}, so DFT bin k (which carries
/// e^{+iω_k t}) holds the physical frequency ω = −ω_k.
pub fn spectral_propagate_with<K>(field: &ComplexGrid, z: f64, kappa: K) -> Result<ComplexGrid>
where
    K: Fn(f64) -> Result<Complex64>,
{
    check_edges(field.values())?;
    let mut buf = field.values().to_vec();
    fft_in_place(&mut buf)?;
    let omegas = angular_frequencies(buf.len(), field.spacing());
    for (x, w) in buf.iter_mut().zip(omegas) {
        *x *= (I * kappa(-w)? * z).exp();
    }
    ifft_in_place(&mut buf)?;
    field.with_values(buf)
}

/// FFT propagation through distance `z` with the full dispersion relation.
pub fn spectral_propagate(cfg: &FieldConfig, field: &ComplexGrid, z: f64) -> Result<ComplexGrid> {
    spectral_propagate_with(field, z, |w| kappa_of_omega(cfg, w))
}

/// FFT propagation with the quadratic κ₀ + κ₁ω + κ₂ω².
pub fn spectral_propagate_taylor(expansion: &DispersionExpansion, field: &ComplexGrid, z: f64) -> Result<ComplexGrid> {
    spectral_propagate_with(field, z, |w| Ok(expansion.taylor_kappa(w)))
}

/// ‖a − b‖₂/‖b‖₂ over sample vectors of equal length.
pub fn relative_l2(a: &[Complex64], b: &[Complex64]) -> f64 {
    let diff: Vec<Complex64> = a.iter().zip(b.iter()).map(|(x, y)| x - y).collect();
    numerics::vec_norm(&diff) / numerics::vec_norm(b)
}
