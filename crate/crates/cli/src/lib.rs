//! Library side of the `randbridge` command: configuration and the command
//! implementations, kept out of `main` so tests can call them directly.

pub mod config;
pub mod density;
pub mod filter;
pub mod simulate;
pub mod verify;

pub use config::Config;

use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags, configuration or input files.
    #[error("{0}")]
    Config(String),
    /// Output could not be written.
    #[error("{0}")]
    Io(String),
    /// A computation failed on valid input.
    #[error("{0}")]
    Compute(#[from] gaussian_core::Error),
    /// At least one verification case failed.
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Verification(_) => 1,
            _ => 2,
        }
    }
}

pub(crate) fn write_file(path: &Path, body: &[u8]) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
    }
    std::fs::write(path, body).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

pub(crate) fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<(), CliError> {
    let mut body = serde_json::to_vec_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    body.push(b'\n');
    write_file(path, &body)
}
