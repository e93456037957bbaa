use std::path::PathBuf;

use mmflow::net::netfile::{Diagnostic, NetfileError};
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("cannot read {}: {source}", path.display())]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("cannot write {}: {source}", path.display())]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{}: invalid netfile", path.display())]
    Netfile { path: PathBuf, source: NetfileError },

    #[error("{}: invalid weights", path.display())]
    Weights {
        path: PathBuf,
        diagnostics: Vec<Diagnostic>,
    },

    #[error("environment variable {name}: {message}")]
    Env { name: &'static str, message: String },

    #[error(transparent)]
    Solver(#[from] mmflow::Error),

    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// 1 for anything wrong with the input, 2 for solver failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Solver(e) => match e {
                mmflow::Error::InvalidNetwork(_) | mmflow::Error::InvalidSessions(_) => 1,
                _ => 2,
            },
            CliError::Csv(_) => 2,
            _ => 1,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Read { .. } => "read_failed",
            CliError::Write { .. } => "write_failed",
            CliError::Netfile { .. } => "invalid_netfile",
            CliError::Weights { .. } => "invalid_weights",
            CliError::Env { .. } => "invalid_environment",
            CliError::Solver(e) => e.code(),
            CliError::Csv(_) => "csv",
        }
    }

    pub fn diagnostics(&self) -> Vec<Diagnostic> {
        match self {
            CliError::Netfile { source, .. } => source.diagnostics.clone(),
            CliError::Weights { diagnostics, .. } => diagnostics.clone(),
            CliError::Solver(mmflow::Error::InvalidNetwork(v)) => v
                .iter()
                .map(|v| Diagnostic {
                    line: None,
                    column: None,
                    message: v.to_string(),
                })
                .collect(),
            CliError::Solver(mmflow::Error::InvalidSessions(v)) => v
                .iter()
                .map(|m| Diagnostic {
                    line: None,
                    column: None,
                    message: m.clone(),
                })
                .collect(),
            _ => Vec::new(),
        }
    }

    /// Path the diagnostics refer to, used as a `path:line:` prefix.
    fn path(&self) -> Option<&PathBuf> {
        match self {
            CliError::Netfile { path, .. } | CliError::Weights { path, .. } => Some(path),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "error": {
                "code": self.code(),
                "exit_code": self.exit_code(),
                "message": self.to_string(),
                "diagnostics": self.diagnostics(),
            }
        })
    }

    pub fn render(&self) -> String {
        let mut out = format!("error: {self}");
        let prefix = self.path().map(|p| p.display().to_string());
        for d in self.diagnostics() {
            out.push('\n');
            match (&prefix, d.line) {
                (Some(p), Some(line)) => match d.column {
                    Some(col) => out.push_str(&format!("  {p}:{line}:{col}: {}", d.message)),
                    None => out.push_str(&format!("  {p}:{line}: {}", d.message)),
                },
                _ => out.push_str(&format!("  {}", d.message)),
            }
        }
        out
    }
}

pub type CliResult<T> = Result<T, CliError>;
