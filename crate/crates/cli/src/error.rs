use std::path::PathBuf;

use eitlab_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("cannot read config {path}: {source}")]
    ConfigRead {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("malformed config {path}: {source}")]
    ConfigParse {
        path: PathBuf,
        source: serde_json::Error,
    },

    #[error("invalid config: {0}")]
    ConfigInvalid(CoreError),

    #[error("{0}")]
    Core(#[from] CoreError),

    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    /// 2 for config and usage problems, 3 for domain errors, 4 for numerical
    /// failures, 1 for I/O on the output side.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_)
            | CliError::ConfigRead { .. }
            | CliError::ConfigParse { .. }
            | CliError::ConfigInvalid(_) => 2,
            CliError::Core(e) => core_exit_code(e),
            CliError::Write { .. } => 1,
        }
    }
}

pub fn core_exit_code(e: &CoreError) -> i32 {
    match e {
        CoreError::SingularDenominator { .. }
        | CoreError::SingularMatrix
        | CoreError::NonConvergence { .. }
        | CoreError::GridTooNarrow(_)
        | CoreError::StepTooLarge(_)
        | CoreError::BadLength(_) => 4,
        CoreError::ZeroBrightCoupling
        | CoreError::ZeroProbeSideCoupling
        | CoreError::WrongSituation { .. }
        | CoreError::NoDarkState
        | CoreError::PreconditionViolated(_)
        | CoreError::WrongSign { .. }
        | CoreError::GridMismatch
        | CoreError::InvalidInput(_) => 3,
    }
}

/// Short machine-readable tag for a core error, used in scan rows.
pub fn core_error_tag(e: &CoreError) -> &'static str {
    match e {
        CoreError::ZeroBrightCoupling => "zero_bright_coupling",
        CoreError::ZeroProbeSideCoupling => "zero_probe_side_coupling",
        CoreError::WrongSituation { .. } => "wrong_situation",
        CoreError::NoDarkState => "no_dark_state",
        CoreError::SingularDenominator { .. } => "singular_denominator",
        CoreError::SingularMatrix => "singular_matrix",
        CoreError::PreconditionViolated(_) => "precondition_violated",
        CoreError::NonConvergence { .. } => "non_convergence",
        CoreError::GridTooNarrow(_) => "grid_too_narrow",
        CoreError::StepTooLarge(_) => "step_too_large",
        CoreError::BadLength(_) => "bad_length",
        CoreError::WrongSign { .. } => "wrong_sign",
        CoreError::GridMismatch => "grid_mismatch",
        CoreError::InvalidInput(_) => "invalid_input",
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
