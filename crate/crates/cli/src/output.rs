use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use tempfile::NamedTempFile;

pub const SCHEMA_VERSION: u32 = 1;

/// Exit statuses. They are part of the interface; do not renumber.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    InvalidParams = 2,
    Io = 3,
    OracleInsufficient = 4,
    CheckFailed = 5,
}

impl Status {
    fn kind(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::InvalidParams => "invalid_params",
            Status::Io => "io",
            Status::OracleInsufficient => "oracle_insufficient",
            Status::CheckFailed => "check_failed",
        }
    }
}

#[derive(Debug)]
pub struct Failure {
    pub status: Status,
    pub message: String,
}

impl Failure {
    pub fn new(status: Status, message: impl std::fmt::Display) -> Self {
        Failure {
            status,
            message: message.to_string(),
        }
    }

    pub fn invalid(message: impl std::fmt::Display) -> Self {
        Self::new(Status::InvalidParams, message)
    }

    pub fn io(path: &Path, err: impl std::fmt::Display) -> Self {
        Self::new(Status::Io, format!("{}: {err}", path.display()))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema_version": SCHEMA_VERSION,
            "error": {
                "kind": self.status.kind(),
                "exit_code": self.status as i32,
                "message": self.message,
            }
        })
    }
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(|e| Failure::io(dir, e))?;
    let mut tmp = NamedTempFile::new_in(dir).map_err(|e| Failure::io(dir, e))?;
    tmp.write_all(contents).map_err(|e| Failure::io(path, e))?;
    tmp.persist(path).map_err(|e| Failure::io(path, e.error))?;
    Ok(())
}

pub fn write_json(path: &Path, value: &Value) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).expect("json values serialize");
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

pub fn resolve(out_dir: &Path, name: &Path) -> PathBuf {
    if name.is_absolute() {
        name.to_path_buf()
    } else {
        out_dir.join(name)
    }
}

/// What a command hands back to `main`: a summary for stdout and the status.
pub struct Outcome {
    pub summary: Value,
    pub status: Status,
}
