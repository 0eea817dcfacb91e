//! Exit codes and report writing.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use serde_json::{Map, Value};
use shifted_prime::Error as CoreError;

use crate::config::{ConfigError, RunConfig};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_HYPOTHESIS: u8 = 2;
pub const EXIT_INCOMPLETE_DATA: u8 = 3;
pub const EXIT_BUDGET: u8 = 4;
pub const EXIT_USAGE: u8 = 64;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

/// Short machine-readable name of an error class.
pub fn error_kind(err: &CoreError) -> &'static str {
    match err {
        CoreError::HypothesisViolation(_)
        | CoreError::RangeViolation(_)
        | CoreError::LimitExceeded { .. }
        | CoreError::NotCoprime { .. } => "hypothesis-violation",
        CoreError::LemmaViolation(_) => "lemma-violation",
        CoreError::IncompleteData { .. }
        | CoreError::MissingCompletenessHeader
        | CoreError::Parse { .. }
        | CoreError::BetaOutOfRange { .. } => "incomplete-data",
        CoreError::Io(_) => "io",
        _ => "error",
    }
}

fn core_exit(err: &CoreError) -> u8 {
    match error_kind(err) {
        "hypothesis-violation" | "lemma-violation" => EXIT_HYPOTHESIS,
        "incomplete-data" => EXIT_INCOMPLETE_DATA,
        _ => EXIT_FAILURE,
    }
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(e) => core_exit(e),
            CliError::Write { .. } => EXIT_FAILURE,
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.code())
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) | CliError::Usage(_) => "usage",
            CliError::Core(e) => error_kind(e),
            CliError::Write { .. } => "io",
        }
    }
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}

/// `#`-prefixed lines carrying the command, the config hash and the config.
pub fn csv_preamble(command: &str, cfg: &RunConfig) -> String {
    let mut s = format!("# shiftedprime {command}\n# config_hash = {}\n", cfg.hash());
    for (k, v) in cfg.entries() {
        s.push_str(&format!("# {k} = {v}\n"));
    }
    s
}

/// JSON object with the command, config hash and config echo, ready for
/// command-specific fields.
pub fn json_header(command: &str, cfg: &RunConfig) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("command".into(), Value::String(command.into()));
    m.insert("config_hash".into(), Value::String(cfg.hash()));
    m.insert("config".into(), Value::Object(cfg.echo_map()));
    m
}
