//! Command implementations behind the `qpa` binary.
//!
//! Every command computes all of its outputs in memory first and only then
//! writes them, each file atomically, together with a `manifest.json` that
//! re-runs the command when passed back through `--config`.

pub mod args;
pub mod commands;
pub mod config;

use std::path::{Path, PathBuf};

use thiserror::Error;

use args::{Cli, Command};
use config::{CommandName, ConfigFile, Settings};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("cannot read config {}: {source}", path.display())]
    ConfigIo {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] qpa_core::Error),
}

impl CliError {
    /// 2 usage, 3 validation or infeasible input, 4 I/O.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::ConfigIo { .. } | CliError::Core(qpa_core::Error::Io { .. }) => 4,
            CliError::Core(_) => 3,
        }
    }
}

/// Files to write (relative paths) and text for stdout.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Output {
    pub files: Vec<(PathBuf, Vec<u8>)>,
    pub stdout: String,
}

impl Output {
    pub fn file(&mut self, path: impl Into<PathBuf>, contents: impl Into<Vec<u8>>) {
        self.files.push((path.into(), contents.into()));
    }
}

/// Resolves settings for a parsed command line.
pub fn settings_for(cli: &Cli) -> Result<(Settings, &Path), CliError> {
    let (name, common, flags) = match &cli.command {
        Command::EncodeKe(a) => (CommandName::EncodeKe, &a.common, a.flags()),
        Command::Evolve(c) => (CommandName::Evolve, c, c.flags()),
        Command::Fidelity(c) => (CommandName::Fidelity, c, c.flags()),
        Command::Metrics(c) => (CommandName::Metrics, c, c.flags()),
        Command::ErrorBudget(a) => (CommandName::ErrorBudget, &a.common, a.flags()),
    };
    let file = common.config.as_deref().map(ConfigFile::read).transpose()?;
    let settings = Settings::resolve(name, file.as_ref(), &flags)?;
    Ok((settings, common.out.as_path()))
}

/// Runs a command without touching the file system.
pub fn execute(settings: &Settings) -> Result<Output, CliError> {
    let mut output = match settings.command() {
        CommandName::EncodeKe => commands::encode_ke(settings)?,
        CommandName::Evolve => commands::evolve(settings)?,
        CommandName::Fidelity => commands::fidelity(settings)?,
        CommandName::Metrics => commands::metrics(settings)?,
        CommandName::ErrorBudget => commands::error_budget(settings)?,
    };
    output.file("manifest.json", settings.manifest());
    Ok(output)
}

/// Writes every output file under `out` and returns the written paths.
pub fn write_output(output: &Output, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    let mut written = Vec::with_capacity(output.files.len());
    for (relative, contents) in &output.files {
        let path = out.join(relative);
        qpa_core::report::write_atomic(&path, contents)?;
        written.push(path);
    }
    Ok(written)
}

/// Parse, compute, write. Returns the text to print.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    let (settings, out) = settings_for(cli)?;
    let output = execute(&settings)?;
    let written = write_output(&output, out)?;
    let mut text = output.stdout;
    for path in written {
        text.push_str(&format!("wrote {}\n", path.display()));
    }
    Ok(text)
}
