use std::fmt;
use std::path::Path;

use serde_json::Value;
use vortex_core::rational::{parse_q, ExtRational, Q};

/// Failure classes, mapped to exit codes 1 and 2.
#[derive(Debug)]
pub enum CliError {
    /// Malformed input, schema mismatch or a failed validation.
    Invalid(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::Io(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(m) => write!(f, "error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

pub fn invalid(e: impl fmt::Display) -> CliError {
    CliError::Invalid(e.to_string())
}

/// Text to emit and whether the command's checks all held.
pub struct Output {
    pub body: String,
    pub ok: bool,
}

impl Output {
    pub fn json(v: &Value, ok: bool) -> Self {
        Self { body: serde_json::to_string_pretty(v).expect("json encodes") + "\n", ok }
    }

    pub fn text(body: String) -> Self {
        Self { body, ok: true }
    }
}

pub fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    vortex_core::complex::check_version(&v).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    Ok(v)
}

pub fn parse_fiber(s: &str) -> Result<Vec<Q>, CliError> {
    s.split(',').map(|t| parse_q(t).map_err(invalid)).collect()
}

pub fn parse_rational(s: &str) -> Result<Q, CliError> {
    parse_q(s).map_err(invalid)
}

pub fn parse_floor(s: &str) -> Result<ExtRational, CliError> {
    s.parse().map_err(invalid)
}
