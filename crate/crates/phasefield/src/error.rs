//! Crate-wide error type and exit-code mapping.

use std::path::PathBuf;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes of the library and CLI.
///
/// Interface-detection failures are recoverable (the run driver records an
/// absent diagnostic instead of aborting); everything else is surfaced to the
/// caller.
#[derive(Debug, Error)]
pub enum Error {
    /// A structural parameter is out of its documented range.
    #[error("invalid grid: {0}")]
    Grid(String),

    /// An operation was called outside its documented preconditions.
    #[error("usage error: {0}")]
    Usage(String),

    /// Config text could not be tokenized.
    #[error("config syntax error at line {line}: {message}")]
    ConfigSyntax { line: usize, message: String },

    /// A key is not part of the active model's vocabulary.
    #[error("unknown config key(s): {keys}")]
    ConfigUnknownKey { keys: String },

    /// A required key is absent.
    #[error("missing config key: {key}")]
    ConfigMissingKey { key: String },

    /// A key is present but its value is unusable.
    #[error("invalid value for config key {key}: {message}")]
    ConfigInvalid { key: String, message: String },

    /// Explicit time step exceeds the explicit-Euler stability bound.
    #[error("time step {dt} exceeds stability bound {dt_max} (refusing to run)")]
    Stability { dt: f64, dt_max: f64 },

    /// A field stopped being finite mid-run.
    #[error("numerical instability: non-finite value detected at step {step}")]
    NumericalInstability { step: u64 },

    /// Level-crossing detection failed (wrong crossing count or a ray
    /// without a crossing).
    #[error("interface detection failed: found {crossings} level crossing(s), expected exactly 1")]
    InterfaceDetection { crossings: usize },

    /// File I/O failed; carries the path and the OS error.
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A CSV file did not match the expected schema.
    #[error("CSV parse error in {path} at line {line}: {message}")]
    CsvParse {
        path: PathBuf,
        line: usize,
        message: String,
    },
}

impl Error {
    /// Process exit code for the CLI: 1 = validation/usage, 2 = runtime
    /// abort (stability refusal or detected instability). Non-convergence
    /// (exit 3) is not an `Error`; it is a normal result mapped by the CLI.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Stability { .. } | Error::NumericalInstability { .. } => 2,
            _ => 1,
        }
    }
}
