//! The six subcommands.

use std::path::PathBuf;
use std::time::Instant;

use serde_json::json;

use lyaprod::asymptotic::{
    fuss_catalan_moment, level_spacing_finite_n, rescaled_incremental, spacing_monte_carlo, triangular_cdf,
    triangular_density, StaircaseCdf,
};
use lyaprod::laws::{DensityModel, ModelKind, PeakParams, peak_index};
use lyaprod::montecarlo::{
    histogram_of, ks_distance, run_2x2_bounds, run_ev_experiment, run_sv_experiment, spec_digest, Component,
    SampleSet,
};
use lyaprod::rng::{Beta, EnsembleSpec, Family, Observable};

use crate::config::{CommandKind, ExperimentConfig, Format, Grid};
use crate::output::{enum_name, sibling, write_json, write_plot_script, write_table, Meta, Series, Table};
use crate::{CliError, RunReport};

pub fn run_command(cfg: &ExperimentConfig) -> Result<RunReport, CliError> {
    match cfg.command {
        CommandKind::Simulate => simulate(cfg),
        CommandKind::Density => density(cfg),
        CommandKind::Compare => compare(cfg),
        CommandKind::Positions => positions(cfg),
        CommandKind::Limits => limits(cfg),
        CommandKind::Spacing => spacing(cfg),
    }
}

/// Column prefix of an observable.
pub fn value_label(obs: Observable) -> &'static str {
    match obs {
        Observable::SvLyapunov => "mu",
        Observable::EvLyapunov => "nu",
        Observable::IncrementalSv => "lambda",
        Observable::IncrementalRadius => "r",
        Observable::TwoByTwoSchur => "mu_max",
    }
}

fn is_incremental(obs: Observable) -> bool {
    matches!(obs, Observable::IncrementalSv | Observable::IncrementalRadius)
}

fn model_label(kind: ModelKind) -> &'static str {
    match kind {
        ModelKind::LognormalMixture => "lambda",
        ModelKind::EigenExact | ModelKind::Beta4Radial => "nu",
        _ => "mu",
    }
}

/// Runs the sampler that records `spec.observable`.
pub fn sample(cfg: &ExperimentConfig) -> Result<SampleSet, CliError> {
    let spec = &cfg.ensemble;
    Ok(match spec.observable {
        Observable::SvLyapunov | Observable::IncrementalSv => run_sv_experiment(spec)?,
        Observable::EvLyapunov | Observable::IncrementalRadius => run_ev_experiment(spec, cfg.method)?,
        Observable::TwoByTwoSchur => {
            return Err(CliError::Config("observable two-by-two-schur is only available in simulate".into()))
        }
    })
}

fn ginibre_beta(spec: &EnsembleSpec, what: &str) -> Result<Beta, CliError> {
    spec.family
        .beta()
        .ok_or_else(|| CliError::Config(format!("{what} needs the ginibre ensemble (no analytic law for isotropic)")))
}

fn ext(cfg: &ExperimentConfig) -> &'static str {
    cfg.format.ext()
}

fn done(files: Vec<PathBuf>) -> RunReport {
    RunReport { files, pass: true }
}

fn maybe_plot(
    cfg: &ExperimentConfig,
    files: &mut Vec<PathBuf>,
    title: &str,
    xlabel: &str,
    series: &[Series],
) -> Result<(), CliError> {
    if cfg.emit_plot_script && cfg.format == Format::Csv {
        files.push(write_plot_script(&cfg.out, title, xlabel, series)?);
    }
    Ok(())
}

/// Table of one sample set: `sample, <label>_1..N`, then angles and the real
/// fraction when recorded.
pub fn sample_table(set: &SampleSet) -> Table {
    let n = set.n_cols();
    let label = value_label(set.kind);
    let mut cols = vec!["sample".to_string()];
    cols.extend((1..=n).map(|b| format!("{label}_{b}")));
    if set.angles.is_some() {
        cols.extend((1..=n).map(|b| format!("arg_{b}")));
    }
    if set.real_fraction.is_some() {
        cols.push("real_fraction".into());
    }
    let mut t = Table::new(&cols, 1);
    for (i, row) in set.rows.iter().enumerate() {
        let mut r = Vec::with_capacity(cols.len());
        r.push(i as f64);
        r.extend_from_slice(row);
        if let Some(a) = &set.angles {
            r.extend_from_slice(&a[i]);
        }
        if let Some(f) = &set.real_fraction {
            r.push(f[i]);
        }
        t.push(r);
    }
    t
}

fn simulate(cfg: &ExperimentConfig) -> Result<RunReport, CliError> {
    let spec = &cfg.ensemble;
    let mut meta = Meta::for_spec(spec);
    let mut files = vec![cfg.out.clone()];
    if spec.observable == Observable::TwoByTwoSchur {
        let rep = run_2x2_bounds(spec)?;
        meta.push("violations", rep.violations);
        meta.push("max-sum-residual", rep.max_sum_residual);
        meta.push("mean-mu-max", rep.mean_mu_max);
        meta.push("target", rep.target);
        let mut t = Table::new(&["sample", "lower_ok", "mu_max", "lower", "sum_residual"], 2);
        for (i, s) in rep.samples.iter().enumerate() {
            t.push(vec![i as f64, s.lower_ok as u8 as f64, s.mu_max, s.lower, s.sum_residual]);
        }
        write_table(&cfg.out, cfg.format, &meta, &t, cfg.timestamp)?;
        let s = [
            Series::new(&cfg.out, "1:3", "mu_max", "points"),
            Series::new(&cfg.out, "1:4", "lower bound", "points"),
        ];
        maybe_plot(cfg, &mut files, "2x2 bound", "sample", &s)?;
        return Ok(done(files));
    }
    let set = sample(cfg)?;
    if matches!(spec.observable, Observable::EvLyapunov | Observable::IncrementalRadius) {
        meta.push("method", enum_name(&cfg.method));
    }
    meta.push("provenance", spec_digest(spec));
    let t = sample_table(&set);
    write_table(&cfg.out, cfg.format, &meta, &t, cfg.timestamp)?;
    let names: Vec<(String, String)> = (1..=set.n_cols())
        .map(|b| (format!("1:{}", b + 1), format!("{}_{b}", value_label(set.kind))))
        .collect();
    let s: Vec<Series> = names.iter().map(|(u, name)| Series::new(&cfg.out, u, name, "points")).collect();
    maybe_plot(cfg, &mut files, "samples", "sample", &s)?;
    Ok(done(files))
}

fn model_for(cfg: &ExperimentConfig, what: &str) -> Result<DensityModel, CliError> {
    let spec = &cfg.ensemble;
    let beta = ginibre_beta(spec, what)?;
    Ok(DensityModel::new(cfg.model, spec.n, spec.t, beta)?)
}

/// `x, pdf, cdf` of a model on a grid.
pub fn curve_table(model: &DensityModel, grid: &Grid) -> Result<Table, CliError> {
    let mut t = Table::new(&[model_label(model.kind()), "pdf", "cdf"], 0);
    for x in grid.points() {
        t.push(vec![x, model.pdf(x)?, model.cdf(x)]);
    }
    Ok(t)
}

fn default_grid(model: &DensityModel) -> Grid {
    let (mut lo, hi) = model.support();
    if model.kind() == ModelKind::LognormalMixture {
        lo = lo.max(0.0);
    }
    Grid { lo, hi, n_points: 400 }
}

fn density(cfg: &ExperimentConfig) -> Result<RunReport, CliError> {
    let model = model_for(cfg, "density")?;
    let grid = cfg.grid.unwrap_or_else(|| default_grid(&model));
    let t = curve_table(&model, &grid)?;
    let meta = Meta::for_spec(&cfg.ensemble).with("model", enum_name(&cfg.model));
    write_table(&cfg.out, cfg.format, &meta, &t, cfg.timestamp)?;
    let mut files = vec![cfg.out.clone()];
    let s = [Series::new(&cfg.out, "1:2", "density", "lines")];
    maybe_plot(cfg, &mut files, &enum_name(&cfg.model), model_label(model.kind()), &s)?;
    Ok(done(files))
}

/// Outcome of a sample-vs-model test.
#[derive(Debug, Clone)]
pub struct Comparison {
    pub ks: f64,
    pub histogram: Table,
    pub curve: Table,
}

fn data_range(data: &[f64]) -> (f64, f64) {
    let lo = data.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = data.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let pad = 1e-9 * (hi - lo).abs().max(1.0);
    (lo - pad, hi + pad)
}

/// KS distance, histogram and model curve for one component of a sample set.
pub fn compare_set(
    set: &SampleSet,
    model: &DensityModel,
    component: Component,
    range: Option<(f64, f64)>,
    bins: usize,
) -> Result<Comparison, CliError> {
    if is_incremental(set.kind) != (model.kind() == ModelKind::LognormalMixture) {
        return Err(CliError::Config(
            "the lognormal model pairs with incremental observables, the other models with exponents".into(),
        ));
    }
    let data = match component {
        Component::Pooled => set.pooled(),
        Component::Index(b) => set.column(b)?,
    };
    let (ks, pdf): (f64, Box<dyn Fn(f64) -> f64>) = match component {
        Component::Pooled => (ks_distance(&data, |x| model.cdf(x)), Box::new(|x| model.pdf(x).unwrap_or(f64::NAN))),
        Component::Index(b) => {
            if model.component_cdf(b, 0.5).is_none() {
                return Err(CliError::Config(format!(
                    "per-index comparison needs a mixture model (gaussian, lognormal, beta4-radial), not {}",
                    enum_name(&model.kind())
                )));
            }
            let p = model.peaks()[b - 1];
            let lognormal = model.kind() == ModelKind::LognormalMixture;
            (
                ks_distance(&data, |x| model.component_cdf(b, x).unwrap_or(f64::NAN)),
                Box::new(move |x| if lognormal { p.lognormal_pdf(x) } else { p.pdf(x) }),
            )
        }
    };
    let (lo, hi) = range.unwrap_or_else(|| data_range(&data));
    let h = histogram_of(&data, lo, hi, bins)?;
    let label = value_label(set.kind);
    let mut histogram = Table::new(&["count", label, "density", "model_pdf"], 1);
    for ((c, x), d) in h.counts.iter().zip(h.centers()).zip(&h.density) {
        histogram.push(vec![*c as f64, x, *d, pdf(x)]);
    }
    let grid = Grid { lo, hi, n_points: 400 };
    let mut curve = Table::new(&[label, "pdf", "cdf"], 0);
    for x in grid.points() {
        let cdf = match component {
            Component::Pooled => model.cdf(x),
            Component::Index(b) => model.component_cdf(b, x).unwrap_or(f64::NAN),
        };
        curve.push(vec![x, pdf(x), cdf]);
    }
    Ok(Comparison { ks, histogram, curve })
}

fn compare(cfg: &ExperimentConfig) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let model = model_for(cfg, "compare")?;
    let set = sample(cfg)?;
    let c = compare_set(&set, &model, cfg.component, cfg.range, cfg.bins)?;
    let runtime = start.elapsed().as_secs_f64();
    let component = match cfg.component {
        Component::Pooled => "pooled".to_string(),
        Component::Index(b) => b.to_string(),
    };
    let meta = Meta::for_spec(&cfg.ensemble)
        .with("model", enum_name(&cfg.model))
        .with("component", &component)
        .with("provenance", spec_digest(&cfg.ensemble));
    let model_path = sibling(&cfg.out, "model", ext(cfg));
    let summary_path = sibling(&cfg.out, "summary", "json");
    write_table(&cfg.out, cfg.format, &meta, &c.histogram, cfg.timestamp)?;
    write_table(&model_path, cfg.format, &meta, &c.curve, cfg.timestamp)?;
    let pass = c.ks <= cfg.tolerance;
    let mut experiment = serde_json::to_value(&cfg.ensemble).unwrap_or_default();
    experiment["component"] = json!(component);
    if matches!(cfg.ensemble.observable, Observable::EvLyapunov | Observable::IncrementalRadius) {
        experiment["method"] = json!(enum_name(&cfg.method));
    }
    let summary = json!({
        "experiment": experiment,
        "model": enum_name(&cfg.model),
        "ks": c.ks,
        "tolerance": cfg.tolerance,
        "pass": pass,
        "runtime_seconds": runtime,
        "seed": cfg.ensemble.master_seed,
    });
    write_json(&summary_path, &summary)?;
    let mut files = vec![cfg.out.clone(), model_path.clone(), summary_path];
    let model_name = enum_name(&cfg.model);
    let s = [
        Series::new(&cfg.out, "2:3", "Monte Carlo", "histeps"),
        Series::new(&model_path, "1:2", &model_name, "lines"),
    ];
    maybe_plot(cfg, &mut files, "sample vs model", value_label(set.kind), &s)?;
    Ok(RunReport { files, pass })
}

fn positions(cfg: &ExperimentConfig) -> Result<RunReport, CliError> {
    let spec = &cfg.ensemble;
    let beta = ginibre_beta(spec, "positions")?;
    let mut t = Table::new(&["b", "position", "width", "incremental"], 1);
    for b in 1..=spec.n {
        let p = PeakParams::with_index(b, peak_index(b, beta), spec.t)?;
        t.push(vec![b as f64, p.mean, p.std, p.mean.exp()]);
    }
    let meta = Meta::for_spec(spec);
    write_table(&cfg.out, cfg.format, &meta, &t, cfg.timestamp)?;
    let mut files = vec![cfg.out.clone()];
    let s = [Series::new(&cfg.out, "2:3:4", "position", "yerrorbars")];
    maybe_plot(cfg, &mut files, "peak positions", "b", &s)?;
    Ok(done(files))
}

/// Empirical CDF of sorted data at x.
fn ecdf(sorted: &[f64], x: f64) -> f64 {
    sorted.partition_point(|&v| v <= x) as f64 / sorted.len() as f64
}

fn limits(cfg: &ExperimentConfig) -> Result<RunReport, CliError> {
    let spec = &cfg.ensemble;
    let stair = StaircaseCdf::new(spec.n)?;
    let grid = cfg.grid.unwrap_or(Grid { lo: 0.0, hi: 1.2, n_points: 241 });
    let mut meta = Meta::for_spec(spec).with("sup-deviation", stair.sup_deviation());
    // the Monte Carlo route only runs when a sample count is asked for
    let mc = if cfg.samples_given {
        if spec.family != Family::GinibreBeta2 {
            return Err(CliError::Config("the Monte Carlo route of limits uses ginibre beta 2".into()));
        }
        let mut s = spec.clone();
        s.observable = Observable::IncrementalSv;
        let set = run_sv_experiment(&s)?;
        let mut v = rescaled_incremental(&set)?;
        v.sort_by(f64::total_cmp);
        meta.push("ks-monte-carlo", ks_distance(&v, triangular_cdf));
        Some(v)
    } else {
        None
    };
    let mut cols = vec!["lambda", "staircase", "triangular_cdf", "triangular_pdf"];
    if mc.is_some() {
        cols.push("monte_carlo_cdf");
    }
    let mut t = Table::new(&cols, 0);
    for x in grid.points() {
        let mut r = vec![x, stair.cdf(x), triangular_cdf(x), triangular_density(x)];
        if let Some(v) = &mc {
            r.push(ecdf(v, x));
        }
        t.push(r);
    }
    write_table(&cfg.out, cfg.format, &meta, &t, cfg.timestamp)?;
    let moments_path = sibling(&cfg.out, "moments", ext(cfg));
    let mut m = Table::new(&["n", "fuss_catalan", "triangular", "difference"], 1);
    for n in 1..=8u32 {
        let fc = fuss_catalan_moment(true, spec.t, n)?;
        let tr = fuss_catalan_moment(false, spec.t, n)?;
        m.push(vec![n as f64, fc, tr, fc - tr]);
    }
    write_table(&moments_path, cfg.format, &Meta::for_spec(spec), &m, cfg.timestamp)?;
    let mut files = vec![cfg.out.clone(), moments_path];
    let mut s = vec![
        Series::new(&cfg.out, "1:2", "staircase", "steps"),
        Series::new(&cfg.out, "1:3", "triangular", "lines"),
    ];
    if mc.is_some() {
        s.push(Series::new(&cfg.out, "1:5", "Monte Carlo", "lines"));
    }
    maybe_plot(cfg, &mut files, "cumulative distribution", "lambda*", &s)?;
    Ok(done(files))
}

fn spacing(cfg: &ExperimentConfig) -> Result<RunReport, CliError> {
    let spec = &cfg.ensemble;
    if spec.family != Family::GinibreBeta2 {
        return Err(CliError::Config("spacing uses the ginibre ensemble with beta 2".into()));
    }
    let d = spacing_monte_carlo(spec.n, spec.t, spec.samples, spec.master_seed)?;
    let atoms = level_spacing_finite_n(spec.n)?;
    let (lo, hi) = cfg.range.unwrap_or((0.0, 3.0));
    let h = histogram_of(&d, lo, hi, cfg.bins)?;
    let inside = d.iter().filter(|&&x| (0.9..=1.1).contains(&x)).count() as f64 / d.len() as f64;
    let mut spacing_spec = spec.clone();
    spacing_spec.observable = Observable::IncrementalRadius;
    let meta = Meta::for_spec(&spacing_spec)
        .with("mass-0.9-1.1", inside)
        .with("atom-mass-0.9-1.1", atoms.mass_in(0.9, 1.1));
    let mut t = Table::new(&["count", "spacing", "density"], 1);
    for ((c, x), dens) in h.counts.iter().zip(h.centers()).zip(&h.density) {
        t.push(vec![*c as f64, x, *dens]);
    }
    write_table(&cfg.out, cfg.format, &meta, &t, cfg.timestamp)?;
    let atoms_path = sibling(&cfg.out, "atoms", ext(cfg));
    let mut a = Table::new(&["j", "spacing", "weight"], 1);
    for (j, (x, w)) in atoms.locations.iter().zip(&atoms.weights).enumerate() {
        a.push(vec![(j + 1) as f64, *x, *w]);
    }
    write_table(&atoms_path, cfg.format, &Meta::for_spec(spec), &a, cfg.timestamp)?;
    let mut files = vec![cfg.out.clone(), atoms_path.clone()];
    let s = [
        Series::new(&cfg.out, "2:3", "Monte Carlo", "histeps"),
        Series::new(&atoms_path, "2:3", "t = inf atoms", "impulses"),
    ];
    maybe_plot(cfg, &mut files, "spacings of r^2", "spacing", &s)?;
    Ok(done(files))
}
