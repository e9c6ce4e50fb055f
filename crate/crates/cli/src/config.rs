//! Run configuration: the core field parameters plus the optional sections
//! the front end understands (`pulse`, `soliton`, `nls_override`).

use std::path::{Path, PathBuf};

use eitlab_core::params::{validate, ConfigFile};
use eitlab_core::FieldConfig;
use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{CliError, CliResult};

/// Gaussian input for linear propagation. `tau0` in seconds, `amplitude` in
/// the config's frequency unit, `length` in cm.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseSection {
    pub tau0: Option<f64>,
    pub amplitude: Option<f64>,
    pub length: Option<f64>,
}

/// Soliton width `tau` in seconds and propagation length in cm.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolitonSection {
    pub tau: Option<f64>,
    pub length: Option<f64>,
    pub step: Option<f64>,
}

/// Externally supplied NLS coefficients that replace the computed ones.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NlsOverride {
    pub kappa2: [f64; 2],
    pub theta: [f64; 2],
    #[serde(default)]
    pub chi: f64,
}

impl NlsOverride {
    pub fn kappa2(&self) -> Complex64 {
        Complex64::new(self.kappa2[0], self.kappa2[1])
    }

    pub fn theta(&self) -> Complex64 {
        Complex64::new(self.theta[0], self.theta[1])
    }
}

#[derive(Debug, Default, Deserialize)]
struct Extras {
    #[serde(default)]
    pulse: Option<PulseSection>,
    #[serde(default)]
    soliton: Option<SolitonSection>,
    #[serde(default)]
    nls_override: Option<NlsOverride>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub path: PathBuf,
    pub file: ConfigFile,
    pub field: FieldConfig,
    pub pulse: Option<PulseSection>,
    pub soliton: Option<SolitonSection>,
    pub nls_override: Option<NlsOverride>,
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::ConfigRead {
            path: path.to_owned(),
            source,
        })?;
        Self::parse(path, &text)
    }

    pub fn parse(path: &Path, text: &str) -> CliResult<Self> {
        let parse_err = |source| CliError::ConfigParse {
            path: path.to_owned(),
            source,
        };
        let file = ConfigFile::from_json(text).map_err(parse_err)?;
        let extras: Extras = serde_json::from_str(text).map_err(parse_err)?;
        let field = file.to_field_config().map_err(CliError::ConfigInvalid)?;
        Ok(Self {
            path: path.to_owned(),
            file,
            field,
            pulse: extras.pulse,
            soliton: extras.soliton,
            nls_override: extras.nls_override,
        })
    }

    /// Frequency unit of the file in s⁻¹ (1 when the file is in s⁻¹).
    pub fn unit(&self) -> f64 {
        self.file.unit()
    }

    /// Prints non-fatal diagnostics to stderr.
    pub fn warn(&self) {
        for d in validate(&self.field) {
            let text = serde_json::to_string(&d).unwrap_or_else(|_| format!("{d:?}"));
            eprintln!("warning: {text}");
        }
    }
}
