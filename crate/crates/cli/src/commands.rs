use std::path::PathBuf;

use eitlab_core::dispersion::{self, GaussianPulseSpec, DEFAULT_FFT_POINTS, DEFAULT_WINDOW_TAUS};
use eitlab_core::nls::{
    self, Envelope, NlsCoefficients, PropagationMode, SolitonKind, SolitonSpec, DEFAULT_SOLITON_WINDOW_TAUS,
};
use eitlab_core::params::derive_couplings;
use eitlab_core::presets::reported;
use eitlab_core::response::{self, SpectrumGrid};
use eitlab_core::spectral;
use eitlab_core::{FieldConfig, RabiField};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{core_error_tag, CliError, CliResult};
use crate::output::{cplx, Cell, Csv, OutputSet};

/// Grid overrides from the command line, in the config's frequency unit for
/// spectra and as a point count for propagation.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct GridFlags {
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub points: Option<usize>,
}

impl GridFlags {
    fn spectrum_grid(&self, run: &RunConfig) -> SpectrumGrid {
        let u = run.unit();
        let d = SpectrumGrid::default_for(&run.field);
        SpectrumGrid {
            min: self.min.map_or(d.min, |x| x * u),
            max: self.max.map_or(d.max, |x| x * u),
            points: self.points.unwrap_or(d.points),
        }
    }

    fn reject_window(&self, subcommand: &str) -> CliResult<()> {
        if self.min.is_some() || self.max.is_some() {
            return Err(CliError::Usage(format!(
                "--grid-min/--grid-max do not apply to `{subcommand}`"
            )));
        }
        Ok(())
    }

    pub fn reject_window_or_points(&self, subcommand: &str) -> CliResult<()> {
        self.reject_window(subcommand)?;
        if self.points.is_some() {
            return Err(CliError::Usage(format!("--grid-points does not apply to `{subcommand}`")));
        }
        Ok(())
    }
}

fn complex_columns(names: &[&str]) -> Vec<String> {
    names
        .iter()
        .flat_map(|n| [format!("re_{n}"), format!("im_{n}")])
        .collect()
}

// --- spectrum --------------------------------------------------------------

#[derive(Serialize)]
pub struct SpectrumSummary {
    pub situation: &'static str,
    pub points: usize,
    pub peak_count: usize,
}

pub fn spectrum(run: &RunConfig, grid: GridFlags, out: &mut OutputSet) -> CliResult<SpectrumSummary> {
    let couplings = derive_couplings(&run.field)?;
    let spec = response::absorption_spectrum(&run.field, grid.spectrum_grid(run))?;
    let mut header = vec!["delta_p".to_owned()];
    header.extend(complex_columns(&["rho_ba", "rho_ca", "rho_da", "rho_ea"]));
    let mut csv = Csv::new(&header);
    let u = run.unit();
    for (dp, c) in spec.delta_p.iter().zip(&spec.coherences) {
        let mut row = vec![dp / u];
        for z in c.as_array() {
            row.extend(cplx(z));
        }
        csv.num_row(&row);
    }
    out.write_csv("spectrum.csv", &csv)?;
    Ok(SpectrumSummary {
        situation: couplings.situation.label(),
        points: spec.delta_p.len(),
        peak_count: response::count_peaks(&spec),
    })
}

// --- eigen -----------------------------------------------------------------

#[derive(Serialize)]
pub struct EigenReport {
    pub situation: &'static str,
    pub method: &'static str,
    pub frequency_unit: f64,
    pub alpha: [f64; 2],
    pub beta: [f64; 2],
    pub omega_total: f64,
    pub phi: f64,
    pub eigenvalues: Vec<f64>,
    /// One vector per eigenvalue over (b, c, d, e).
    pub eigenvectors: Vec<Vec<[f64; 2]>>,
    /// Over (a, b, c, d, e); absent when no dark state exists.
    pub dark_state: Option<Vec<[f64; 2]>>,
    pub max_residual: f64,
}

pub fn eigen(run: &RunConfig, out: &mut OutputSet) -> CliResult<EigenReport> {
    let u = run.unit();
    let c = derive_couplings(&run.field)?;
    let (sys, method) = spectral::eigensystem(&run.field)?;
    let h = spectral::build_h4(&run.field);
    let dark = match spectral::dark_state(&run.field) {
        Ok(v) => Some(v.iter().map(|&z| cplx(z / u)).collect()),
        Err(eitlab_core::Error::NoDarkState) => None,
        Err(e) => return Err(e.into()),
    };
    let report = EigenReport {
        situation: c.situation.label(),
        method,
        frequency_unit: u,
        alpha: cplx(c.alpha / u),
        beta: cplx(c.beta / u),
        omega_total: c.omega_total / u,
        phi: c.phi,
        eigenvalues: sys.eigenvalues.iter().map(|e| e / u).collect(),
        eigenvectors: sys.eigenvectors.iter().map(|v| v.iter().map(|&z| cplx(z)).collect()).collect(),
        dark_state: dark,
        max_residual: sys.max_residual(&h) / u,
    };
    out.write_json("eigen.json", &report)?;
    Ok(report)
}

// --- dispersion ------------------------------------------------------------

#[derive(Serialize)]
pub struct DispersionReport {
    pub kappa0: [f64; 2],
    pub kappa1: [f64; 2],
    pub kappa2: [f64; 2],
    pub v_g_over_c: f64,
    pub chi: f64,
}

pub fn dispersion(run: &RunConfig, out: &mut OutputSet) -> CliResult<DispersionReport> {
    derive_couplings(&run.field)?;
    let e = dispersion::taylor_coefficients(&run.field)?;
    let report = DispersionReport {
        kappa0: cplx(e.kappa0),
        kappa1: cplx(e.kappa1),
        kappa2: cplx(e.kappa2),
        v_g_over_c: e.group_velocity_fraction(run.field.c_light),
        chi: e.chi,
    };
    out.write_json("dispersion.json", &report)?;
    Ok(report)
}

// --- soliton ---------------------------------------------------------------

#[derive(Serialize)]
pub struct CoefficientReport {
    pub kerr: [f64; 2],
    pub theta: [f64; 2],
    pub kappa2: [f64; 2],
    pub chi: f64,
    pub theta_r: f64,
    pub kappa2_r: f64,
    pub imag_ratio_theta: f64,
    pub imag_ratio_kappa2: f64,
}

impl From<&NlsCoefficients> for CoefficientReport {
    fn from(c: &NlsCoefficients) -> Self {
        Self {
            kerr: cplx(c.kerr),
            theta: cplx(c.theta),
            kappa2: cplx(c.kappa2),
            chi: c.chi,
            theta_r: c.theta_r,
            kappa2_r: c.kappa2_r,
            imag_ratio_theta: c.imag_ratio_theta,
            imag_ratio_kappa2: c.imag_ratio_kappa2,
        }
    }
}

#[derive(Serialize)]
pub struct SolitonReport {
    /// "config" when computed from the field parameters, "override" when
    /// taken from `nls_override`.
    pub source: &'static str,
    pub coefficients: CoefficientReport,
    pub kind: Option<&'static str>,
    pub tau: f64,
    pub amplitude: Option<f64>,
    pub phase_rate: Option<f64>,
    pub amplitude_width_product: Option<f64>,
    pub convention_matched_product: Option<f64>,
    pub dispersion_length: Option<f64>,
    pub nonlinear_length: Option<f64>,
}

fn nls_coefficients(run: &RunConfig) -> CliResult<(NlsCoefficients, &'static str)> {
    match run.nls_override {
        Some(o) => Ok((
            NlsCoefficients::from_parts(o.kappa2(), o.theta(), o.chi, run.field.eta),
            "override",
        )),
        None => {
            derive_couplings(&run.field)?;
            Ok((NlsCoefficients::from_config(&run.field)?, "config"))
        }
    }
}

fn soliton_tau(run: &RunConfig, tau: Option<f64>) -> f64 {
    tau.or(run.soliton.and_then(|s| s.tau)).unwrap_or(reported::TAU)
}

pub fn soliton(run: &RunConfig, tau: Option<f64>, out: &mut OutputSet) -> CliResult<SolitonReport> {
    let (coeffs, source) = nls_coefficients(run)?;
    let tau = soliton_tau(run, tau);
    let spec = match coeffs.soliton_kind() {
        Some(kind) => Some(nls::analytic_soliton(&coeffs, kind, tau)?),
        None => None,
    };
    let report = SolitonReport {
        source,
        coefficients: (&coeffs).into(),
        kind: spec.map(|s| s.kind.label()),
        tau,
        amplitude: spec.map(|s| s.amplitude),
        phase_rate: spec.map(|s| s.phase_rate),
        amplitude_width_product: spec.map(|s| s.amplitude_width_product()),
        convention_matched_product: spec.map(|s| s.convention_matched_product()),
        dispersion_length: spec.map(|s| s.dispersion_length()),
        nonlinear_length: spec.map(|s| s.nonlinear_length()),
    };
    out.write_json("soliton.json", &report)?;
    Ok(report)
}

// --- propagate -------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Linear,
    Ideal,
    Full,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct PropagateOptions {
    pub mode: Mode,
    pub checkpoints: usize,
    pub length: Option<f64>,
    pub tau: Option<f64>,
    pub step: Option<f64>,
}

#[derive(Serialize)]
pub struct PropagateSummary {
    pub mode: Mode,
    pub length: f64,
    pub snapshots: Vec<f64>,
    pub points: usize,
    /// Nonlinear modes only.
    pub step: Option<f64>,
    pub soliton_kind: Option<&'static str>,
    /// |⟨analytic, final⟩|²/(‖analytic‖²‖final‖²) against the launched
    /// soliton, nonlinear modes only.
    pub final_fidelity: Option<f64>,
}

/// Checkpoint distances kL/N for k = 1..N; a single final snapshot for N = 0.
fn checkpoint_positions(length: f64, n: usize) -> Vec<f64> {
    let n = n.max(1);
    (1..=n)
        .map(|k| if k == n { length } else { length * k as f64 / n as f64 })
        .collect()
}

fn snapshot_name(k: usize) -> String {
    format!("snapshot_{k:03}.csv")
}

pub fn propagate(run: &RunConfig, grid: GridFlags, opts: PropagateOptions, out: &mut OutputSet) -> CliResult<PropagateSummary> {
    grid.reject_window("propagate")?;
    match opts.mode {
        Mode::Linear => propagate_linear(run, grid.points, opts, out),
        Mode::Ideal | Mode::Full => propagate_nonlinear(run, grid.points, opts, out),
    }
}

fn positive(name: &str, x: f64) -> CliResult<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::Usage(format!("{name} must be positive and finite, got {x}")))
    }
}

/// Gaussian input propagated with the full κ(ω). Snapshots are computed in
/// the frame moving at Re(1/κ₁) and reported against lab time
/// t = τ + Re κ₁·z, so the pulse never wraps around the periodic window.
fn propagate_linear(run: &RunConfig, points: Option<usize>, opts: PropagateOptions, out: &mut OutputSet) -> CliResult<PropagateSummary> {
    derive_couplings(&run.field)?;
    let section = run.pulse;
    let tau0 = section
        .and_then(|p| p.tau0)
        .unwrap_or_else(|| 100.0 / run.field.reference_linewidth());
    let amplitude = section
        .and_then(|p| p.amplitude)
        .map_or(run.field.probe.amplitude(), |a| a * run.unit());
    let length = positive("length", opts.length.or(section.and_then(|p| p.length)).unwrap_or(1.0))?;
    let pulse = GaussianPulseSpec::new(amplitude, tau0)?;
    let input = pulse.sample(points.unwrap_or(DEFAULT_FFT_POINTS), DEFAULT_WINDOW_TAUS)?;
    let k1 = dispersion::taylor_coefficients(&run.field)?.kappa1.re;
    let zs = checkpoint_positions(length, opts.checkpoints);
    let snapshots = zs
        .par_iter()
        .map(|&z| {
            dispersion::spectral_propagate_with(&input, z, |w| {
                Ok(dispersion::kappa_of_omega(&run.field, w)? - k1 * w)
            })
        })
        .collect::<eitlab_core::Result<Vec<_>>>()?;

    let mut waterfall = Csv::new(&["z", "t", "re", "im", "abs"]);
    for (k, (z, snap)) in zs.iter().zip(&snapshots).enumerate() {
        let mut csv = Csv::new(&["t", "re", "im", "abs"]);
        for (tau, v) in snap.coordinates().zip(snap.values()) {
            let t = tau + k1 * z;
            csv.num_row(&[t, v.re, v.im, v.norm()]);
            waterfall.num_row(&[*z, t, v.re, v.im, v.norm()]);
        }
        out.write_csv(&snapshot_name(k), &csv)?;
    }
    out.write_csv("waterfall.csv", &waterfall)?;
    Ok(PropagateSummary {
        mode: opts.mode,
        length,
        snapshots: zs,
        points: input.len(),
        step: None,
        soliton_kind: None,
        final_fidelity: None,
    })
}

fn launch_envelope(spec: &SolitonSpec, points: usize) -> eitlab_core::Result<Envelope> {
    match spec.kind {
        SolitonKind::Bright => spec.envelope(points, DEFAULT_SOLITON_WINDOW_TAUS, 0.0),
        SolitonKind::Dark => spec.dark_pair_envelope(points, DEFAULT_SOLITON_WINDOW_TAUS, 0.0),
    }
}

/// Launches the analytic soliton the coefficients admit (a kink-antikink
/// pair for dark solitons, so the grid stays periodic) and integrates it by
/// split-step Fourier.
fn propagate_nonlinear(run: &RunConfig, points: Option<usize>, opts: PropagateOptions, out: &mut OutputSet) -> CliResult<PropagateSummary> {
    let (coeffs, _) = nls_coefficients(run)?;
    let section = run.soliton;
    let tau = soliton_tau(run, opts.tau);
    let length = positive(
        "length",
        opts.length.or(section.and_then(|s| s.length)).unwrap_or(reported::CELL_LENGTH_CM),
    )?;
    let spec = nls::select_soliton(&coeffs, tau)?;
    let points = points.unwrap_or(DEFAULT_FFT_POINTS);
    let input = launch_envelope(&spec, points)?;
    let base_step = match opts.step.or(section.and_then(|s| s.step)) {
        Some(dz) => positive("step", dz)?,
        None => nls::default_step(&coeffs, &input)
            .ok_or_else(|| CliError::Core(eitlab_core::Error::InvalidInput("no dispersion or nonlinearity".into())))?,
    };
    let mode = match opts.mode {
        Mode::Ideal => PropagationMode::Ideal,
        _ => PropagationMode::Full,
    };
    let zs = checkpoint_positions(length, opts.checkpoints);

    let mut waterfall = Csv::new(&["zeta", "tau_ret", "abs", "re", "im"]);
    let mut current = input.clone();
    for (k, &z) in zs.iter().enumerate() {
        let segment = z - current.zeta;
        if segment > 0.0 {
            let n = (segment / base_step).ceil() as usize;
            current = nls::split_step(&coeffs, &current, segment / n as f64, n, mode)?;
        }
        current.zeta = z;
        let mut csv = Csv::new(&["tau_ret", "abs", "re", "im"]);
        for (j, v) in current.samples.iter().enumerate() {
            let t = current.coordinate(j);
            csv.num_row(&[t, v.norm(), v.re, v.im]);
            waterfall.num_row(&[z, t, v.norm(), v.re, v.im]);
        }
        out.write_csv(&snapshot_name(k), &csv)?;
    }
    out.write_csv("waterfall.csv", &waterfall)?;
    let reference = launch_envelope(&spec, points)?;
    let fidelity = nls::soliton_fidelity(&reference, &current)?;
    Ok(PropagateSummary {
        mode: opts.mode,
        length,
        snapshots: zs,
        points,
        step: Some(base_step),
        soliton_kind: Some(spec.kind.label()),
        final_fidelity: Some(fidelity),
    })
}

// --- scan ------------------------------------------------------------------

/// Parameter a sweep can vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepField {
    Phi,
    Omega(usize),
    Phase(usize),
    Probe,
    DeltaP,
    Delta2,
    Delta3,
    GammaB,
    GammaE,
    Eta,
}

pub const SWEEP_FIELDS: &[&str] = &[
    "phi", "omega1", "omega2", "omega3", "omega4", "phase1", "phase2", "phase3", "phase4", "probe", "delta_p",
    "delta_2", "delta_3", "gamma_b", "gamma_e", "eta",
];

impl SweepField {
    pub fn parse(name: &str) -> Option<Self> {
        let indexed = |prefix: &str| {
            name.strip_prefix(prefix)
                .and_then(|d| d.parse::<usize>().ok())
                .filter(|k| (1..=4).contains(k))
                .map(|k| k - 1)
        };
        Some(match name {
            "phi" => Self::Phi,
            "probe" => Self::Probe,
            "delta_p" => Self::DeltaP,
            "delta_2" => Self::Delta2,
            "delta_3" => Self::Delta3,
            "gamma_b" => Self::GammaB,
            "gamma_e" => Self::GammaE,
            "eta" => Self::Eta,
            _ => {
                if let Some(k) = indexed("omega") {
                    Self::Omega(k)
                } else {
                    Self::Phase(indexed("phase")?)
                }
            }
        })
    }

    /// Applies `value` (in the config's frequency unit where applicable;
    /// radians for phases; cm⁻¹·s⁻¹ for η).
    fn apply(&self, cfg: &FieldConfig, value: f64, unit: f64) -> eitlab_core::Result<FieldConfig> {
        let f = value * unit;
        Ok(match *self {
            Self::Phi => cfg.with_relative_phase(value),
            Self::Omega(k) => cfg.with_control(k, cfg.controls[k].with_amplitude(f)?),
            Self::Phase(k) => cfg.with_control(k, cfg.controls[k].with_phase(value)),
            Self::Probe => cfg.with_probe(RabiField::new(f, cfg.probe.phase())?),
            Self::DeltaP => cfg.with_delta_p(f),
            Self::Delta2 => FieldConfig { delta_2: f, ..*cfg },
            Self::Delta3 => FieldConfig { delta_3: f, ..*cfg },
            Self::GammaB => FieldConfig { gamma_b: f, ..*cfg },
            Self::GammaE => FieldConfig { gamma_e: f, ..*cfg },
            Self::Eta => cfg.with_eta(value),
        })
    }
}

/// `FIELD=START:END:STEPS`; STEPS points inclusive of both ends, 0 for none.
#[derive(Debug, Clone, Serialize)]
pub struct SweepSpec {
    pub name: String,
    #[serde(skip)]
    pub field: SweepField,
    pub start: f64,
    pub end: f64,
    pub steps: usize,
}

impl SweepSpec {
    pub fn parse(text: &str) -> CliResult<Self> {
        let bad = || CliError::Usage(format!("sweep must look like FIELD=START:END:STEPS, got `{text}`"));
        let (name, range) = text.split_once('=').ok_or_else(bad)?;
        let field = SweepField::parse(name.trim()).ok_or_else(|| {
            CliError::Usage(format!(
                "unknown sweep field `{}`; expected one of {}",
                name.trim(),
                SWEEP_FIELDS.join(", ")
            ))
        })?;
        let parts: Vec<&str> = range.split(':').collect();
        let [start, end, steps] = parts[..] else {
            return Err(bad());
        };
        let num = |s: &str| s.trim().parse::<f64>().ok().filter(|x| x.is_finite());
        Ok(Self {
            name: name.trim().to_owned(),
            field,
            start: num(start).ok_or_else(bad)?,
            end: num(end).ok_or_else(bad)?,
            steps: steps.trim().parse().map_err(|_| bad())?,
        })
    }

    pub fn values(&self) -> Vec<f64> {
        match self.steps {
            0 => Vec::new(),
            1 => vec![self.start],
            n => (0..n)
                .map(|k| {
                    if k + 1 == n {
                        self.end
                    } else {
                        self.start + (self.end - self.start) * k as f64 / (n - 1) as f64
                    }
                })
                .collect(),
        }
    }
}

struct ScanRow {
    value: f64,
    situation: &'static str,
    im_rho_ba_center: f64,
    peak_count: Option<usize>,
    chi: f64,
    kappa2: Complex64,
    theta: Complex64,
    soliton: &'static str,
    status: String,
}

const NAN: f64 = f64::NAN;

fn scan_row(run: &RunConfig, grid: GridFlags, sweep: &SweepSpec, value: f64) -> ScanRow {
    let mut errors: Vec<&'static str> = Vec::new();
    let mut row = ScanRow {
        value,
        situation: "invalid",
        im_rho_ba_center: NAN,
        peak_count: None,
        chi: NAN,
        kappa2: Complex64::new(NAN, NAN),
        theta: Complex64::new(NAN, NAN),
        soliton: "none",
        status: String::new(),
    };
    let cfg = match sweep.field.apply(&run.field, value, run.unit()) {
        Ok(c) => c,
        Err(e) => {
            row.status = core_error_tag(&e).to_owned();
            return row;
        }
    };
    row.situation = eitlab_core::params::situation_of(&cfg).label();
    let center = cfg.with_delta_p(0.0);
    match response::coherences_fourier(&center, 0.0).or_else(|_| response::solve_direct(&center, 0.0)) {
        Ok(c) => row.im_rho_ba_center = c.rho_ba.im,
        Err(e) => errors.push(core_error_tag(&e)),
    }
    let d = SpectrumGrid::default_for(&cfg);
    let u = run.unit();
    let g = SpectrumGrid {
        min: grid.min.map_or(d.min, |x| x * u),
        max: grid.max.map_or(d.max, |x| x * u),
        points: grid.points.unwrap_or(d.points),
    };
    match response::absorption_spectrum(&cfg, g) {
        Ok(s) => row.peak_count = Some(response::count_peaks(&s)),
        Err(e) => errors.push(core_error_tag(&e)),
    }
    match NlsCoefficients::from_config(&cfg) {
        Ok(c) => {
            row.chi = c.chi;
            row.kappa2 = c.kappa2;
            row.theta = c.theta;
            row.soliton = c.soliton_kind().map_or("none", |k| k.label());
        }
        Err(e) => errors.push(core_error_tag(&e)),
    }
    errors.dedup();
    row.status = if errors.is_empty() { "ok".to_owned() } else { errors.join("|") };
    row
}

#[derive(Serialize)]
pub struct ScanSummary {
    pub rows: usize,
    pub failed_rows: usize,
}

pub fn scan(run: &RunConfig, grid: GridFlags, sweep: &SweepSpec, out: &mut OutputSet) -> CliResult<ScanSummary> {
    let rows: Vec<ScanRow> = sweep
        .values()
        .par_iter()
        .map(|&v| scan_row(run, grid, sweep, v))
        .collect();
    let mut csv = Csv::new(&[
        sweep.name.as_str(),
        "situation",
        "im_rho_ba_center",
        "peak_count",
        "chi",
        "kappa2_re",
        "kappa2_im",
        "theta_re",
        "theta_im",
        "soliton",
        "status",
    ]);
    for r in &rows {
        csv.row(&[
            Cell::Num(r.value),
            Cell::Text(r.situation.to_owned()),
            Cell::Num(r.im_rho_ba_center),
            r.peak_count.map_or(Cell::Text(String::new()), Cell::Int),
            Cell::Num(r.chi),
            Cell::Num(r.kappa2.re),
            Cell::Num(r.kappa2.im),
            Cell::Num(r.theta.re),
            Cell::Num(r.theta.im),
            Cell::Text(r.soliton.to_owned()),
            Cell::Text(r.status.clone()),
        ]);
    }
    out.write_csv("scan.csv", &csv)?;
    Ok(ScanSummary {
        rows: rows.len(),
        failed_rows: rows.iter().filter(|r| r.status != "ok").count(),
    })
}

pub fn default_out_dir(subcommand: &str) -> PathBuf {
    PathBuf::from("eitlab-out").join(subcommand)
}
