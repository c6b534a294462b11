//! File I/O for the CLI: JSON inputs, report output and CSV curves.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use mcx_core::report::{Curve, RunConfig, VerificationReport};
use serde::de::DeserializeOwned;

/// Failures that end the process with exit code 2.
#[derive(Debug)]
pub enum InputError {
    Io { path: PathBuf, message: String },
    Json { path: PathBuf, message: String },
    Invalid(String),
}

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InputError::Io { path, message } => write!(f, "{}: {message}", path.display()),
            InputError::Json { path, message } => write!(f, "malformed JSON in {}: {message}", path.display()),
            InputError::Invalid(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<mcx_core::Error> for InputError {
    fn from(e: mcx_core::Error) -> Self {
        InputError::Invalid(e.to_string())
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, InputError> {
    let text = fs::read_to_string(path).map_err(|e| InputError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    serde_json::from_str(&text).map_err(|e| InputError::Json {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

/// `--config` wins over `MCX_CONFIG`; neither gives the defaults.
pub fn load_config(flag: Option<&Path>) -> Result<RunConfig, InputError> {
    let from_env = std::env::var_os("MCX_CONFIG").map(PathBuf::from);
    let cfg = match flag.map(Path::to_path_buf).or(from_env) {
        Some(path) => read_json::<RunConfig>(&path)?,
        None => RunConfig::default(),
    };
    cfg.validate()?;
    Ok(cfg)
}

pub fn write_report(report: &VerificationReport, out: Option<&Path>) -> Result<(), InputError> {
    let text = report.to_json()?;
    match out {
        Some(path) => fs::write(path, text + "\n").map_err(|e| InputError::Io {
            path: path.to_path_buf(),
            message: e.to_string(),
        }),
        None => {
            let mut out = std::io::stdout().lock();
            match writeln!(out, "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(InputError::Io {
                    path: PathBuf::from("<stdout>"),
                    message: e.to_string(),
                }),
                _ => Ok(()),
            }
        }
    }
}

pub fn write_csv(curve: &Curve, path: &Path) -> Result<(), InputError> {
    let io_err = |e: csv::Error| InputError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    let mut w = csv::Writer::from_path(path).map_err(io_err)?;
    w.write_record(&curve.columns).map_err(io_err)?;
    for row in curve.formatted_rows() {
        w.write_record(&row).map_err(io_err)?;
    }
    w.flush().map_err(|e| InputError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}
