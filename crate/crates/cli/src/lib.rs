//! Command-line front end: configuration, experiment drivers and
//! bit-stable CSV/JSON output.

pub mod commands;
pub mod config;
pub mod output;
pub mod presets;

use std::path::{Path, PathBuf};

pub use config::{CommandKind, ExperimentConfig, Format, Grid, Preset};

/// Exit code of a run that finished but failed its tolerance.
pub const EXIT_TOLERANCE: u8 = 2;
/// Exit code of any error.
pub const EXIT_ERROR: u8 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}", first_line(.0))]
    Clap(clap::Error),
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Core(#[from] lyaprod::Error),
    #[error("{}: {source}", .path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", .path.display())]
    Csv { path: PathBuf, source: csv::Error },
}

fn first_line(e: &clap::Error) -> String {
    let s = e.to_string();
    let line = s.lines().find(|l| !l.trim().is_empty()).unwrap_or("invalid arguments").trim();
    line.strip_prefix("error: ").unwrap_or(line).to_string()
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub(crate) fn csv(path: &Path, source: csv::Error) -> Self {
        CliError::Csv {
            path: path.to_path_buf(),
            source,
        }
    }
}

/// What a finished run produced.
#[derive(Debug, Clone, Default)]
pub struct RunReport {
    pub files: Vec<PathBuf>,
    /// false when a compare run exceeded its tolerance
    pub pass: bool,
}

/// Runs a resolved config.
pub fn run(cfg: &ExperimentConfig) -> Result<RunReport, CliError> {
    let threads = cfg.threads;
    let cfg = cfg.clone();
    lyaprod::montecarlo::with_threads(threads, move || match cfg.preset {
        Some(p) => presets::run_preset(p, &cfg),
        None => commands::run_command(&cfg),
    })?
}

/// Parses `args` (without the program name), runs, and returns the exit code.
/// Messages go to stdout/stderr.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match ExperimentConfig::from_args(args) {
        Err(CliError::Clap(e)) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
        Ok(cfg) => match run(&cfg) {
            Ok(r) => {
                for f in &r.files {
                    println!("wrote {}", f.display());
                }
                if r.pass {
                    0
                } else {
                    eprintln!("tolerance exceeded");
                    EXIT_TOLERANCE
                }
            }
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_ERROR
            }
        },
    }
}
