//! Flags, config files and their resolution into one experiment config.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use lyaprod::laws::ModelKind;
use lyaprod::montecarlo::{Component, EvMethod};
use lyaprod::rng::{Beta, EnsembleSpec, Family, Observable, SvLaw};

use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "lyaprod",
    version = env!("LYAPROD_GIT_DESCRIBE"),
    about = "Finite-t Lyapunov exponents of products of random matrices"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<CommandArgs>,
    #[command(flatten)]
    pub opts: Opts,
    /// JSON config file; flags override its values
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// worker threads (default: all cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// output file (a directory for presets)
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true, value_enum)]
    pub preset: Option<Preset>,
    /// omit the timestamp metadata line
    #[arg(long, global = true)]
    pub no_timestamp: bool,
    /// also write a gnuplot script next to the output
    #[arg(long, global = true)]
    pub plot_script: bool,
}

#[derive(Debug, Subcommand)]
pub enum CommandArgs {
    /// Sample an ensemble and write the per-sample exponents
    Simulate,
    /// Tabulate an analytic density on a grid
    Density,
    /// Sample, then test against an analytic model (exit 2 on failure)
    Compare,
    /// Deterministic t = inf positions and finite-t widths
    Positions,
    /// Staircase vs triangular law and Fuss-Catalan moments
    Limits,
    /// Level spacings of the squared incremental radii
    Spacing,
}

impl CommandArgs {
    fn kind(&self) -> CommandKind {
        match self {
            CommandArgs::Simulate => CommandKind::Simulate,
            CommandArgs::Density => CommandKind::Density,
            CommandArgs::Compare => CommandKind::Compare,
            CommandArgs::Positions => CommandKind::Positions,
            CommandArgs::Limits => CommandKind::Limits,
            CommandArgs::Spacing => CommandKind::Spacing,
        }
    }
}

/// Experiment flags; each one mirrors a config-file key.
#[derive(Debug, Default, Clone, Args)]
pub struct Opts {
    /// ginibre or isotropic
    #[arg(long, global = true)]
    pub ensemble: Option<String>,
    #[arg(long, global = true)]
    pub beta: Option<u8>,
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true)]
    pub t: Option<usize>,
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// sv-lyapunov, ev-lyapunov, incremental-sv, incremental-radius, two-by-two-schur
    #[arg(long, global = true)]
    pub observable: Option<String>,
    /// eigenvalue method: matrix or gamma-product
    #[arg(long, global = true)]
    pub method: Option<String>,
    /// singular values of the isotropic ensemble: ginibre, unit, lognormal:SIGMA
    #[arg(long, global = true)]
    pub sv_law: Option<String>,
    /// exact, gaussian, saddle, lognormal, eigen-exact, beta4-radial
    #[arg(long, global = true)]
    pub model: Option<String>,
    /// LO:HI:POINTS
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub grid: Option<String>,
    #[arg(long, global = true)]
    pub bins: Option<usize>,
    /// histogram range LO:HI
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub range: Option<String>,
    /// pooled, or a 1-based order statistic
    #[arg(long, global = true)]
    pub component: Option<String>,
    /// KS tolerance for compare
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Simulate,
    Density,
    Compare,
    Positions,
    Limits,
    Spacing,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Simulate => "simulate",
            CommandKind::Density => "density",
            CommandKind::Compare => "compare",
            CommandKind::Positions => "positions",
            CommandKind::Limits => "limits",
            CommandKind::Spacing => "spacing",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn ext(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
}

/// Config-file document: the flag names as keys.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct FileConfig {
    pub command: Option<CommandKind>,
    pub ensemble: Option<String>,
    pub beta: Option<u8>,
    pub n: Option<usize>,
    pub t: Option<usize>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub observable: Option<String>,
    pub method: Option<String>,
    pub sv_law: Option<String>,
    pub model: Option<String>,
    pub grid: Option<String>,
    pub bins: Option<usize>,
    pub range: Option<String>,
    pub component: Option<String>,
    pub tolerance: Option<f64>,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub preset: Option<Preset>,
    pub no_timestamp: Option<bool>,
    pub plot_script: Option<bool>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("config file: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    /// Overwrites every field that is set in `opts` or the global flags.
    fn overlay(&mut self, o: Opts, cli: &Cli) {
        macro_rules! set {
            ($($f:ident),*) => {$(if o.$f.is_some() { self.$f = o.$f; })*};
        }
        set!(ensemble, beta, n, t, samples, observable, method, sv_law, model, grid, bins, range, component, tolerance);
        if cli.seed.is_some() {
            self.seed = cli.seed;
        }
        if cli.threads.is_some() {
            self.threads = cli.threads;
        }
        if cli.out.is_some() {
            self.out = cli.out.clone();
        }
        if cli.format.is_some() {
            self.format = cli.format;
        }
        if cli.preset.is_some() {
            self.preset = cli.preset;
        }
        if cli.no_timestamp {
            self.no_timestamp = Some(true);
        }
        if cli.plot_script {
            self.plot_script = Some(true);
        }
    }
}

/// Evaluation grid for curves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub n_points: usize,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        let h = (self.hi - self.lo) / (self.n_points - 1) as f64;
        (0..self.n_points).map(|i| self.lo + i as f64 * h).collect()
    }
}

impl FromStr for Grid {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = || CliError::Config(format!("grid must look like LO:HI:POINTS, got '{s}'"));
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let n_points: usize = parts[2].trim().parse().map_err(|_| bad())?;
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(CliError::Config(format!("grid needs LO < HI, got {lo} and {hi}")));
        }
        if n_points < 2 {
            return Err(CliError::Config(format!("grid needs at least 2 points, got {n_points}")));
        }
        Ok(Grid { lo, hi, n_points })
    }
}

fn parse_range(s: &str) -> Result<(f64, f64), CliError> {
    let bad = || CliError::Config(format!("range must look like LO:HI with LO < HI, got '{s}'"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let lo: f64 = a.trim().parse().map_err(|_| bad())?;
    let hi: f64 = b.trim().parse().map_err(|_| bad())?;
    if !(lo < hi) {
        return Err(bad());
    }
    Ok((lo, hi))
}

/// Parses a kebab-case enum name through its serde representation.
fn parse_enum<T: for<'de> Deserialize<'de>>(what: &str, s: &str, choices: &str) -> Result<T, CliError> {
    serde_json::from_value(serde_json::Value::String(s.trim().to_string()))
        .map_err(|_| CliError::Config(format!("unknown {what} '{s}' (expected one of: {choices})")))
}

pub fn parse_model(s: &str) -> Result<ModelKind, CliError> {
    let canonical = match s.trim() {
        "exact" => "exact-meijer",
        "gaussian" => "gaussian-mixture",
        "lognormal" => "lognormal-mixture",
        other => other,
    };
    parse_enum("model", canonical, "exact, gaussian, saddle, lognormal, eigen-exact, beta4-radial")
}

fn parse_sv_law(s: &str) -> Result<SvLaw, CliError> {
    match s.trim() {
        "ginibre" => Ok(SvLaw::Ginibre),
        "unit" => Ok(SvLaw::Unit),
        other => {
            let sigma = other
                .strip_prefix("lognormal:")
                .and_then(|v| v.parse::<f64>().ok())
                .ok_or_else(|| {
                    CliError::Config(format!("unknown sv-law '{s}' (expected ginibre, unit or lognormal:SIGMA)"))
                })?;
            if !(sigma >= 0.0) || !sigma.is_finite() {
                return Err(CliError::Config(format!("lognormal sigma must be >= 0, got {sigma}")));
            }
            Ok(SvLaw::LogNormal { sigma })
        }
    }
}

fn parse_component(s: &str) -> Result<Component, CliError> {
    match s.trim() {
        "pooled" => Ok(Component::Pooled),
        other => match other.parse::<usize>() {
            Ok(b) if b >= 1 => Ok(Component::Index(b)),
            _ => Err(CliError::Config(format!("component must be 'pooled' or an index >= 1, got '{s}'"))),
        },
    }
}

/// Fully resolved experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub command: CommandKind,
    pub ensemble: EnsembleSpec,
    pub method: EvMethod,
    pub model: ModelKind,
    pub grid: Option<Grid>,
    pub bins: usize,
    pub range: Option<(f64, f64)>,
    pub component: Component,
    pub tolerance: f64,
    pub out: PathBuf,
    pub format: Format,
    pub emit_plot_script: bool,
    pub threads: Option<usize>,
    pub timestamp: bool,
    pub preset: Option<Preset>,
    /// whether the sample count was given explicitly
    pub samples_given: bool,
}

pub const DEFAULT_N: usize = 3;
pub const DEFAULT_T: usize = 200;
pub const DEFAULT_SAMPLES: usize = 1000;
pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_BINS: usize = 60;
pub const DEFAULT_TOLERANCE: f64 = 0.02;

/// Default analytic model for an observable.
pub fn default_model(obs: Observable, beta: Option<Beta>) -> ModelKind {
    match (obs, beta) {
        (Observable::SvLyapunov, Some(Beta::Two)) => ModelKind::Saddle,
        (Observable::IncrementalSv, _) => ModelKind::LognormalMixture,
        (Observable::EvLyapunov | Observable::IncrementalRadius, Some(Beta::Four)) => ModelKind::Beta4Radial,
        (Observable::EvLyapunov | Observable::IncrementalRadius, _) => ModelKind::EigenExact,
        _ => ModelKind::GaussianMixture,
    }
}

impl ExperimentConfig {
    /// Command-line words (without the program name) to a config.
    pub fn from_args<I, T>(args: I) -> Result<Self, CliError>
    where
        I: IntoIterator<Item = T>,
        T: Into<std::ffi::OsString> + Clone,
    {
        let argv = std::iter::once(std::ffi::OsString::from("lyaprod")).chain(args.into_iter().map(Into::into));
        let cli = Cli::try_parse_from(argv).map_err(CliError::Clap)?;
        Self::from_cli(cli)
    }

    pub fn from_cli(mut cli: Cli) -> Result<Self, CliError> {
        let mut file = match &cli.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let cmd = cli.command.take().map(|c| c.kind());
        let opts = std::mem::take(&mut cli.opts);
        file.overlay(opts, &cli);
        let command = match (cmd, file.command, file.preset) {
            (Some(c), _, _) | (None, Some(c), _) => c,
            (None, None, Some(_)) => CommandKind::Simulate,
            (None, None, None) => {
                return Err(CliError::Config(
                    "no command given (use one of simulate, density, compare, positions, limits, spacing, or --preset)"
                        .into(),
                ))
            }
        };
        resolve(command, file)
    }
}

/// Fills defaults and validates.
pub fn resolve(command: CommandKind, f: FileConfig) -> Result<ExperimentConfig, CliError> {
    let n = f.n.unwrap_or(DEFAULT_N);
    let t = f.t.unwrap_or(DEFAULT_T);
    let samples = f.samples.unwrap_or(DEFAULT_SAMPLES);
    if n < 1 {
        return Err(CliError::Config("N must be ≥ 1".into()));
    }
    if t < 1 {
        return Err(CliError::Config("t must be ≥ 1".into()));
    }
    if samples < 1 {
        return Err(CliError::Config("samples must be ≥ 1".into()));
    }
    let family = match f.ensemble.as_deref().map(str::trim).unwrap_or("ginibre") {
        "ginibre" => {
            let b = Beta::try_from(f.beta.unwrap_or(2))
                .map_err(|_| CliError::Config(format!("beta must be 1, 2 or 4, got {}", f.beta.unwrap_or(0))))?;
            Family::from_beta(b)
        }
        "isotropic" => {
            if f.beta.is_some() {
                return Err(CliError::Config("beta applies to the ginibre ensemble only".into()));
            }
            Family::IsotropicCustom
        }
        other => return Err(CliError::Config(format!("unknown ensemble '{other}' (expected ginibre or isotropic)"))),
    };
    let observable: Observable = match &f.observable {
        Some(s) => parse_enum(
            "observable",
            s,
            "sv-lyapunov, ev-lyapunov, incremental-sv, incremental-radius, two-by-two-schur",
        )?,
        None => Observable::SvLyapunov,
    };
    let sv_law = match &f.sv_law {
        Some(s) if family == Family::IsotropicCustom => Some(parse_sv_law(s)?),
        Some(_) => return Err(CliError::Config("sv-law applies to the isotropic ensemble only".into())),
        None => None,
    };
    let mut ensemble = EnsembleSpec::new(family, n, t, samples, f.seed.unwrap_or(DEFAULT_SEED), observable)?;
    ensemble.sv_law = sv_law;
    ensemble.validate()?;
    let method = match &f.method {
        Some(s) => parse_enum("method", s, "matrix, gamma-product")?,
        None => EvMethod::default_for(family),
    };
    if method == EvMethod::GammaProduct && !matches!(family, Family::GinibreBeta2 | Family::GinibreBeta4) {
        return Err(CliError::Config("method gamma-product needs the ginibre ensemble with beta 2 or 4".into()));
    }
    let model = match &f.model {
        Some(s) => parse_model(s)?,
        None => default_model(observable, family.beta()),
    };
    let grid = f.grid.as_deref().map(Grid::from_str).transpose()?;
    let range = f.range.as_deref().map(parse_range).transpose()?;
    let bins = f.bins.unwrap_or(DEFAULT_BINS);
    if bins < 1 {
        return Err(CliError::Config("bins must be ≥ 1".into()));
    }
    let component = match &f.component {
        Some(s) => parse_component(s)?,
        None => Component::Pooled,
    };
    if let Component::Index(b) = component {
        if b > n {
            return Err(CliError::Config(format!("component {b} exceeds N = {n}")));
        }
    }
    let tolerance = f.tolerance.unwrap_or(DEFAULT_TOLERANCE);
    if !(tolerance > 0.0) {
        return Err(CliError::Config(format!("tolerance must be > 0, got {tolerance}")));
    }
    let format = f.format.unwrap_or(Format::Csv);
    let out = match f.out {
        Some(p) => p,
        None if f.preset.is_some() => PathBuf::from("."),
        None => PathBuf::from(format!("{}.{}", command.name(), format.ext())),
    };
    Ok(ExperimentConfig {
        command,
        ensemble,
        method,
        model,
        grid,
        bins,
        range,
        component,
        tolerance,
        out,
        format,
        emit_plot_script: f.plot_script.unwrap_or(false),
        threads: f.threads,
        timestamp: !f.no_timestamp.unwrap_or(false),
        preset: f.preset,
        samples_given: f.samples.is_some(),
    })
}
