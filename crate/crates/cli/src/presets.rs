//! Named figure presets. Each writes several tables into the output
//! directory; `--samples`, `--seed`, `--bins` and `--range` still apply.

use std::path::PathBuf;

use lyaprod::laws::{deterministic_positions, DensityModel, ModelKind};
use lyaprod::montecarlo::{
    histogram_of, ks_distance, ks_two_sample, run_ev_experiment, run_sv_experiment, spec_digest, EvMethod, SampleSet,
};
use lyaprod::rng::{Beta, EnsembleSpec, Family, Observable};

use crate::config::{ExperimentConfig, Grid, Preset};
use crate::output::{write_plot_script, write_table, Meta, Series, Table};
use crate::{CliError, RunReport};

struct Ctx<'a> {
    cfg: &'a ExperimentConfig,
    files: Vec<PathBuf>,
}

impl Ctx<'_> {
    fn path(&self, name: &str) -> PathBuf {
        self.cfg.out.join(format!("{name}.{}", self.cfg.format.ext()))
    }

    fn samples(&self, default: usize) -> usize {
        if self.cfg.samples_given {
            self.cfg.ensemble.samples
        } else {
            default
        }
    }

    fn spec(&self, family: Family, n: usize, t: usize, samples: usize, obs: Observable) -> Result<EnsembleSpec, CliError> {
        Ok(EnsembleSpec::new(family, n, t, self.samples(samples), self.cfg.ensemble.master_seed, obs)?)
    }

    fn write(&mut self, name: &str, meta: &Meta, table: &Table) -> Result<PathBuf, CliError> {
        let p = self.path(name);
        write_table(&p, self.cfg.format, meta, table, self.cfg.timestamp)?;
        self.files.push(p.clone());
        Ok(p)
    }

    fn plot(&mut self, name: &str, title: &str, xlabel: &str, series: &[Series]) -> Result<(), CliError> {
        if self.cfg.emit_plot_script && self.cfg.format == crate::Format::Csv {
            let base = self.cfg.out.join(format!("{name}.csv"));
            self.files.push(write_plot_script(&base, title, xlabel, series)?);
        }
        Ok(())
    }
}

pub fn run_preset(p: Preset, cfg: &ExperimentConfig) -> Result<RunReport, CliError> {
    std::fs::create_dir_all(&cfg.out).map_err(|e| CliError::io(&cfg.out, e))?;
    let mut cx = Ctx { cfg, files: Vec::new() };
    match p {
        Preset::Fig1 => fig1(&mut cx)?,
        Preset::Fig2 => fig2(&mut cx)?,
        Preset::Fig3 => fig3(&mut cx)?,
        Preset::Fig4 => fig4(&mut cx)?,
        Preset::Fig5 => fig5(&mut cx)?,
    }
    Ok(RunReport { files: cx.files, pass: true })
}

fn hist_table(data: &[f64], lo: f64, hi: f64, bins: usize, label: &str) -> Result<Table, CliError> {
    let h = histogram_of(data, lo, hi, bins)?;
    let mut t = Table::new(&["count", label, "density"], 1);
    for ((c, x), d) in h.counts.iter().zip(h.centers()).zip(&h.density) {
        t.push(vec![*c as f64, x, *d]);
    }
    Ok(t)
}

fn meta_for(set: &SampleSet) -> Meta {
    Meta::for_spec(&set.spec).with("provenance", spec_digest(&set.spec))
}

/// Singular-value exponents of N = 3 at t = 30 and 200, with the Gaussian and
/// saddle one-point densities.
fn fig1(cx: &mut Ctx) -> Result<(), CliError> {
    let (lo, hi) = cx.cfg.range.unwrap_or((-1.0, 0.9));
    for t in [30, 200] {
        let spec = cx.spec(Family::GinibreBeta2, 3, t, 10_000, Observable::SvLyapunov)?;
        let set = run_sv_experiment(&spec)?;
        let gauss = DensityModel::new(ModelKind::GaussianMixture, 3, t, Beta::Two)?;
        let saddle = DensityModel::new(ModelKind::Saddle, 3, t, Beta::Two)?;
        let pooled = set.pooled();
        let mut meta = meta_for(&set);
        meta.push("ks-gaussian", ks_distance(&pooled, |x| gauss.cdf(x)));
        meta.push("ks-saddle", ks_distance(&pooled, |x| saddle.cdf(x)));
        for b in 1..=3 {
            meta.push(&format!("mean-{b}"), set.index_mean(b)?.0);
        }
        let hname = format!("fig1_t{t}_histogram");
        let cname = format!("fig1_t{t}_curves");
        let hp = cx.write(&hname, &meta, &hist_table(&pooled, lo, hi, cx.cfg.bins, "mu")?)?;
        let mut c = Table::new(&["mu", "gaussian", "saddle"], 0);
        for x in (Grid { lo, hi, n_points: 400 }).points() {
            c.push(vec![x, gauss.pdf(x)?, saddle.pdf(x)?]);
        }
        let cp = cx.write(&cname, &Meta::for_spec(&spec), &c)?;
        let s = [
            Series::new(&hp, "2:3", "Monte Carlo", "histeps"),
            Series::new(&cp, "1:2", "gaussian", "lines"),
            Series::new(&cp, "1:3", "saddle", "lines"),
        ];
        cx.plot(&hname, &format!("N = 3, t = {t}"), "mu", &s)?;
    }
    Ok(())
}

/// Incremental singular values of N = 10 at t = 200 against the log-normal mixture.
fn fig2(cx: &mut Ctx) -> Result<(), CliError> {
    let spec = cx.spec(Family::GinibreBeta2, 10, 200, 1000, Observable::IncrementalSv)?;
    let set = run_sv_experiment(&spec)?;
    let model = DensityModel::new(ModelKind::LognormalMixture, 10, 200, Beta::Two)?;
    let pooled = set.pooled();
    let (lo, hi) = cx.cfg.range.unwrap_or((0.4, 3.6));
    let meta = meta_for(&set).with("ks-lognormal", ks_distance(&pooled, |x| model.cdf(x)));
    let hp = cx.write("fig2_histogram", &meta, &hist_table(&pooled, lo, hi, cx.cfg.bins.max(100), "lambda")?)?;
    let mut c = Table::new(&["lambda", "lognormal"], 0);
    for x in (Grid { lo, hi, n_points: 600 }).points() {
        c.push(vec![x, model.pdf(x)?]);
    }
    let cp = cx.write("fig2_curve", &Meta::for_spec(&spec), &c)?;
    let mut pk = Table::new(&["b", "lambda_inf"], 1);
    for (b, x) in deterministic_positions(10, Beta::Two).iter().enumerate() {
        pk.push(vec![(b + 1) as f64, x.exp()]);
    }
    cx.write("fig2_peaks", &Meta::for_spec(&spec), &pk)?;
    let s = [Series::new(&hp, "2:3", "Monte Carlo", "histeps"), Series::new(&cp, "1:2", "log-normal mixture", "lines")];
    cx.plot("fig2_histogram", "N = 10, t = 200", "lambda", &s)
}

/// Rooted eigenvalues r e^{i phi}: `sample, b, re, im`. Quaternion sets
/// store one eigenvalue of each conjugate pair, so both are written.
pub fn scatter_table(set: &SampleSet) -> Table {
    let mut t = Table::new(&["sample", "b", "re", "im"], 2);
    let angles = set.angles.as_ref().expect("matrix-method set");
    let pairs = set.spec.family == Family::GinibreBeta4;
    for (i, (row, arg)) in set.rows.iter().zip(angles).enumerate() {
        for (b, (&r, &phi)) in row.iter().zip(arg).enumerate() {
            t.push(vec![i as f64, (b + 1) as f64, r * phi.cos(), r * phi.sin()]);
            if pairs {
                t.push(vec![i as f64, (b + 1) as f64, r * phi.cos(), -r * phi.sin()]);
            }
        }
    }
    t
}

/// Scatter of the rooted eigenvalues for (N, t) = (3, 300) and (5, 500) with
/// the t = inf ring radii.
fn fig3(cx: &mut Ctx) -> Result<(), CliError> {
    let mut series_files = Vec::new();
    for (n, t) in [(3, 300), (5, 500)] {
        let spec = cx.spec(Family::GinibreBeta2, n, t, 1000, Observable::IncrementalRadius)?;
        let set = run_ev_experiment(&spec, EvMethod::Matrix)?;
        let p = cx.write(&format!("fig3_N{n}_t{t}_scatter"), &meta_for(&set).with("method", "matrix"), &scatter_table(&set))?;
        series_files.push((p, format!("N = {n}, t = {t}")));
    }
    let mut rings = Table::new(&["b", "radius"], 1);
    for (b, x) in deterministic_positions(5, Beta::Two).iter().enumerate() {
        rings.push(vec![(b + 1) as f64, x.exp()]);
    }
    cx.write("fig3_rings", &Meta::default().with("git-describe", crate::output::GIT_DESCRIBE), &rings)?;
    let s: Vec<Series> = series_files.iter().map(|(p, title)| Series::new(p, "3:4", title, "dots")).collect();
    cx.plot("fig3", "rooted eigenvalues", "Re", &s)
}

/// Incremental singular values vs incremental radii at N = 5, t = 100.
fn fig4(cx: &mut Ctx) -> Result<(), CliError> {
    let (n, t) = (5, 100);
    let sv = run_sv_experiment(&cx.spec(Family::GinibreBeta2, n, t, 10_000, Observable::IncrementalSv)?)?;
    let ev_spec = cx.spec(Family::GinibreBeta2, n, t, 10_000, Observable::IncrementalRadius)?;
    let ev = run_ev_experiment(&ev_spec, EvMethod::GammaProduct)?;
    let mut meta = meta_for(&sv).with("method", "gamma-product");
    for b in 1..=n {
        meta.push(&format!("ks-index-{b}"), ks_two_sample(&sv.column(b)?, &ev.column(b)?));
    }
    let (lo, hi) = cx.cfg.range.unwrap_or((0.3, 2.6));
    let bins = cx.cfg.bins.max(100);
    let hs = histogram_of(&sv.pooled(), lo, hi, bins)?;
    let he = histogram_of(&ev.pooled(), lo, hi, bins)?;
    let mut h = Table::new(&["count_sv", "count_ev", "lambda", "sv_density", "ev_density"], 2);
    for (i, x) in hs.centers().into_iter().enumerate() {
        h.push(vec![hs.counts[i] as f64, he.counts[i] as f64, x, hs.density[i], he.density[i]]);
    }
    let hp = cx.write("fig4_histogram", &meta, &h)?;
    // densities in lambda from the exponent-space models
    let saddle = DensityModel::new(ModelKind::Saddle, n, t, Beta::Two)?;
    let eigen = DensityModel::new(ModelKind::EigenExact, n, t, Beta::Two)?;
    let mut c = Table::new(&["lambda", "saddle", "eigen_exact"], 0);
    for x in (Grid { lo, hi, n_points: 600 }).points() {
        c.push(vec![x, saddle.pdf(x.ln())? / x, eigen.pdf(x.ln())? / x]);
    }
    let cp = cx.write("fig4_curves", &Meta::for_spec(&sv.spec), &c)?;
    let s = [
        Series::new(&hp, "3:4", "singular values", "histeps"),
        Series::new(&hp, "3:5", "radii", "histeps"),
        Series::new(&cp, "1:2", "saddle", "lines"),
        Series::new(&cp, "1:3", "eigenvalue law", "lines"),
    ];
    cx.plot("fig4_histogram", "N = 5, t = 100", "lambda", &s)
}

/// N = 2 scatter for beta = 1, 2, 4 at t = 5 and 500.
fn fig5(cx: &mut Ctx) -> Result<(), CliError> {
    let mut pos = Table::new(&["beta", "n", "position"], 2);
    for beta in [Beta::One, Beta::Two, Beta::Four] {
        let mut series = Vec::new();
        for t in [5, 500] {
            let spec = cx.spec(Family::from_beta(beta), 2, t, 1000, Observable::IncrementalRadius)?;
            let set = run_ev_experiment(&spec, EvMethod::Matrix)?;
            let mut meta = meta_for(&set).with("method", "matrix");
            if let Some(f) = &set.real_fraction {
                meta.push("mean-real-fraction", f.iter().sum::<f64>() / f.len() as f64);
            }
            let name = format!("fig5_beta{}_t{t}_scatter", beta.value());
            let p = cx.write(&name, &meta, &scatter_table(&set))?;
            series.push((p, format!("t = {t}")));
        }
        for (k, x) in deterministic_positions(2, beta).iter().enumerate() {
            for sign in [-1.0, 1.0] {
                pos.push(vec![beta.value() as f64, (k + 1) as f64, sign * x.exp()]);
            }
        }
        let s: Vec<Series> = series.iter().map(|(p, title)| Series::new(p, "3:4", title, "dots")).collect();
        cx.plot(&format!("fig5_beta{}", beta.value()), &format!("beta = {}", beta.value()), "Re", &s)?;
    }
    cx.write("fig5_positions", &Meta::default().with("git-describe", crate::output::GIT_DESCRIBE), &pos)?;
    Ok(())
}
