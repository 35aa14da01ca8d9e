//! Reproducible ensemble experiments.
//!
//! Every sample `i` draws from its own stream `(master_seed, i)`, so results
//! do not depend on the number of worker threads.

mod bounds;
mod stats;

pub use bounds::{
    check_identities, newman_projector_average, newman_target, run_2x2_bounds, run_paired_experiment, IdentityCheck,
    PairedSet, TwoByTwoReport, TwoByTwoSample,
};
pub use stats::{
    chi_square_uniform, histogram, histogram_of, kolmogorov_pvalue, ks_distance, ks_two_sample, mean_stderr, spec_digest, Component,
    Histogram,
};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{log_eigenvalue_moduli, LogSpectrum, SvdAccumulator};
use crate::rng::{derive_stream, sample_gamma, EnsembleSpec, Family, Observable};

/// |sin(arg)| below which an eigenvalue of a real product counts as real.
pub const REAL_EIGENVALUE_TOL: f64 = 1e-6;

/// Samples of one experiment, one sorted row per sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    pub spec: EnsembleSpec,
    pub kind: Observable,
    /// samples x N, ascending in each row
    pub rows: Vec<Vec<f64>>,
    /// eigenvalue arguments in [0, 2 pi), aligned with `rows`
    pub angles: Option<Vec<Vec<f64>>>,
    /// fraction of real eigenvalues per sample (beta = 1, matrix method)
    pub real_fraction: Option<Vec<f64>>,
}

impl SampleSet {
    pub fn n_samples(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    /// Order statistic b (1-based, b = 1 smallest) over all samples.
    pub fn column(&self, b: usize) -> Result<Vec<f64>> {
        if b == 0 || b > self.n_cols() {
            return Err(Error::Invalid(format!("index {b} outside 1..={}", self.n_cols())));
        }
        Ok(self.rows.iter().map(|r| r[b - 1]).collect())
    }

    /// All entries of all rows.
    pub fn pooled(&self) -> Vec<f64> {
        self.rows.iter().flatten().copied().collect()
    }

    /// Sample mean and standard error of order statistic b.
    pub fn index_mean(&self, b: usize) -> Result<(f64, f64)> {
        Ok(mean_stderr(&self.column(b)?))
    }

    pub fn pooled_angles(&self) -> Option<Vec<f64>> {
        self.angles.as_ref().map(|a| a.iter().flatten().copied().collect())
    }
}

/// How eigenvalue moduli are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvMethod {
    /// periodic Schur decomposition of the drawn chain
    Matrix,
    /// independent gamma products (beta = 2, 4 only)
    GammaProduct,
}

impl EvMethod {
    /// Gamma products where they are exact, the matrix path otherwise.
    pub fn default_for(family: Family) -> EvMethod {
        match family {
            Family::GinibreBeta2 | Family::GinibreBeta4 => EvMethod::GammaProduct,
            _ => EvMethod::Matrix,
        }
    }
}

/// Runs `f` on a pool of `threads` workers (`None` or 0: the global pool).
pub fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R> {
    match threads {
        None | Some(0) => Ok(f()),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| Error::Invalid(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Maps every sample index through `f` in parallel, keeping the order.
/// The first failure (lowest index) aborts the run.
pub(crate) fn par_samples<T, F>(samples: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync,
{
    let out: Vec<Result<T>> = (0..samples as u64).into_par_iter().map(&f).collect();
    let mut rows = Vec::with_capacity(samples);
    for (i, r) in out.into_iter().enumerate() {
        match r {
            Ok(v) => rows.push(v),
            Err(e) => {
                return Err(Error::SampleFailure {
                    sample: i as u64,
                    source: Box::new(e),
                })
            }
        }
    }
    Ok(rows)
}

fn check_finite(row: &[f64]) -> Result<()> {
    match row.iter().find(|v| !v.is_finite()) {
        Some(&v) => Err(Error::Invalid(format!("non-finite exponent {v} (singular product?)"))),
        None => Ok(()),
    }
}

/// Merges the doubly degenerate values of a quaternion product (ascending input).
fn merge_pairs(values: &[f64]) -> Vec<f64> {
    values.chunks(2).map(|p| 0.5 * (p[0] + p[p.len() - 1])).collect()
}

/// Singular-value spectrum of sample `i`, accumulated factor by factor.
pub(crate) fn sample_log_singular(spec: &EnsembleSpec, i: u64) -> Result<LogSpectrum> {
    let mut rng = derive_stream(spec.master_seed, i);
    let mut acc = SvdAccumulator::new(spec.realized_dim());
    for _ in 0..spec.t {
        acc.push(&spec.draw_factor(&mut rng)?)?;
    }
    Ok(acc.spectrum())
}

/// mu = ln s / (2t) per sample, ascending, N entries per row.
pub(crate) fn mu_row(spec: &EnsembleSpec, s: &LogSpectrum) -> Vec<f64> {
    let scale = 1.0 / (2.0 * spec.t as f64);
    let v: Vec<f64> = s.values.iter().map(|l| l * scale).collect();
    if spec.family == Family::GinibreBeta4 {
        merge_pairs(&v)
    } else {
        v
    }
}

/// nu = ln R / t with arguments, ascending, N entries per row. For a
/// quaternion product one eigenvalue of each conjugate pair is kept.
pub(crate) fn nu_row(spec: &EnsembleSpec, s: &LogSpectrum) -> (Vec<f64>, Vec<f64>) {
    let scale = 1.0 / spec.t as f64;
    let ang = s.angles.clone().unwrap_or_else(|| vec![0.0; s.values.len()]);
    let nu: Vec<f64> = s.values.iter().map(|l| l * scale).collect();
    if spec.family != Family::GinibreBeta4 {
        return (nu, ang);
    }
    let upper: Vec<usize> = (0..nu.len()).filter(|&k| ang[k].sin() > 0.0).collect();
    if upper.len() == spec.n {
        (upper.iter().map(|&k| nu[k]).collect(), upper.iter().map(|&k| ang[k]).collect())
    } else {
        // real pairs: fall back to merging neighbours
        let a = nu.chunks(2).zip(ang.chunks(2)).map(|(_, a)| a[0]).collect();
        (merge_pairs(&nu), a)
    }
}

/// Singular-value exponents (or their exponentials) for every sample.
pub fn run_sv_experiment(spec: &EnsembleSpec) -> Result<SampleSet> {
    spec.validate()?;
    if !matches!(spec.observable, Observable::SvLyapunov | Observable::IncrementalSv) {
        return Err(Error::Invalid(format!(
            "run_sv_experiment needs sv-lyapunov or incremental-sv, got {:?}",
            spec.observable
        )));
    }
    let incremental = spec.observable == Observable::IncrementalSv;
    let rows = par_samples(spec.samples, |i| {
        let s = sample_log_singular(spec, i)?;
        let mut row = mu_row(spec, &s);
        check_finite(&row)?;
        if incremental {
            row.iter_mut().for_each(|m| *m = m.exp());
        }
        Ok(row)
    })?;
    Ok(SampleSet {
        spec: spec.clone(),
        kind: spec.observable,
        rows,
        angles: None,
        real_fraction: None,
    })
}

/// Eigenvalue exponents nu = ln R / t (or radii r = e^nu) for every sample.
pub fn run_ev_experiment(spec: &EnsembleSpec, method: EvMethod) -> Result<SampleSet> {
    spec.validate()?;
    if !matches!(spec.observable, Observable::EvLyapunov | Observable::IncrementalRadius) {
        return Err(Error::Invalid(format!(
            "run_ev_experiment needs ev-lyapunov or incremental-radius, got {:?}",
            spec.observable
        )));
    }
    let incremental = spec.observable == Observable::IncrementalRadius;
    let finish = |mut row: Vec<f64>| -> Result<Vec<f64>> {
        check_finite(&row)?;
        if incremental {
            row.iter_mut().for_each(|m| *m = m.exp());
        }
        Ok(row)
    };
    match method {
        EvMethod::GammaProduct => {
            let shape_step = match spec.family {
                Family::GinibreBeta2 => 1.0,
                Family::GinibreBeta4 => 2.0,
                f => return Err(Error::Invalid(format!("gamma-product method needs beta = 2 or 4, got {f:?}"))),
            };
            let scale = 1.0 / (2.0 * spec.t as f64);
            let rows = par_samples(spec.samples, |i| {
                let mut rng = derive_stream(spec.master_seed, i);
                let mut row = Vec::with_capacity(spec.n);
                for b in 1..=spec.n {
                    let shape = shape_step * b as f64;
                    let mut s = 0.0;
                    for _ in 0..spec.t {
                        s += sample_gamma(&mut rng, shape)?.ln();
                    }
                    row.push(s * scale);
                }
                row.sort_by(f64::total_cmp);
                finish(row)
            })?;
            Ok(SampleSet {
                spec: spec.clone(),
                kind: spec.observable,
                rows,
                angles: None,
                real_fraction: None,
            })
        }
        EvMethod::Matrix => {
            let real = spec.family == Family::GinibreBeta1;
            let out = par_samples(spec.samples, |i| {
                let s = log_eigenvalue_moduli(&spec.draw_chain(i)?)?;
                let (nu, ang) = nu_row(spec, &s);
                let frac = if real {
                    ang.iter().filter(|a| a.sin().abs() < REAL_EIGENVALUE_TOL).count() as f64 / ang.len() as f64
                } else {
                    0.0
                };
                Ok((finish(nu)?, ang, frac))
            })?;
            let mut rows = Vec::with_capacity(out.len());
            let mut angles = Vec::with_capacity(out.len());
            let mut fracs = Vec::with_capacity(out.len());
            for (r, a, f) in out {
                rows.push(r);
                angles.push(a);
                fracs.push(f);
            }
            Ok(SampleSet {
                spec: spec.clone(),
                kind: spec.observable,
                rows,
                angles: Some(angles),
                real_fraction: real.then_some(fracs),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::digamma;

    fn spec(family: Family, n: usize, t: usize, samples: usize, obs: Observable) -> EnsembleSpec {
        EnsembleSpec::new(family, n, t, samples, 7, obs).unwrap()
    }

    #[test]
    fn n1_mean_is_half_digamma_one() {
        let s = run_sv_experiment(&spec(Family::GinibreBeta2, 1, 5, 10_000, Observable::SvLyapunov)).unwrap();
        let (m, e) = s.index_mean(1).unwrap();
        assert!((m - digamma(1.0) / 2.0).abs() < 4.0 * e, "{m} {e}");
        assert_eq!(s.n_cols(), 1);
    }

    #[test]
    fn rows_sorted_and_reproducible_across_thread_counts() {
        let sp = spec(Family::GinibreBeta2, 3, 10, 40, Observable::SvLyapunov);
        let a = with_threads(Some(1), || run_sv_experiment(&sp)).unwrap().unwrap();
        let b = with_threads(Some(3), || run_sv_experiment(&sp)).unwrap().unwrap();
        assert_eq!(a, b);
        for r in &a.rows {
            assert!(r.windows(2).all(|w| w[0] <= w[1]));
        }
        let ev = spec(Family::GinibreBeta2, 3, 10, 40, Observable::EvLyapunov);
        for m in [EvMethod::Matrix, EvMethod::GammaProduct] {
            let a = with_threads(Some(1), || run_ev_experiment(&ev, m)).unwrap().unwrap();
            let b = with_threads(Some(2), || run_ev_experiment(&ev, m)).unwrap().unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn incremental_is_exp_of_exponent() {
        let a = run_sv_experiment(&spec(Family::GinibreBeta2, 2, 8, 5, Observable::SvLyapunov)).unwrap();
        let b = run_sv_experiment(&spec(Family::GinibreBeta2, 2, 8, 5, Observable::IncrementalSv)).unwrap();
        for (x, y) in a.pooled().iter().zip(b.pooled()) {
            assert_eq!(x.exp(), y);
        }
    }

    #[test]
    fn observable_and_method_mismatch_rejected() {
        let sv = spec(Family::GinibreBeta2, 2, 3, 2, Observable::SvLyapunov);
        assert!(run_ev_experiment(&sv, EvMethod::Matrix).is_err());
        let ev = spec(Family::GinibreBeta1, 2, 3, 2, Observable::EvLyapunov);
        assert!(run_sv_experiment(&ev).is_err());
        assert!(run_ev_experiment(&ev, EvMethod::GammaProduct).is_err());
        let custom = spec(Family::IsotropicCustom, 2, 3, 2, Observable::EvLyapunov);
        assert!(run_ev_experiment(&custom, EvMethod::GammaProduct).is_err());
        assert_eq!(EvMethod::default_for(Family::GinibreBeta4), EvMethod::GammaProduct);
        assert_eq!(EvMethod::default_for(Family::GinibreBeta1), EvMethod::Matrix);
    }

    #[test]
    fn quaternion_rows_have_n_entries() {
        let sv = run_sv_experiment(&spec(Family::GinibreBeta4, 2, 20, 20, Observable::SvLyapunov)).unwrap();
        assert_eq!(sv.n_cols(), 2);
        let ev = run_ev_experiment(&spec(Family::GinibreBeta4, 2, 20, 20, Observable::EvLyapunov), EvMethod::Matrix).unwrap();
        assert_eq!(ev.n_cols(), 2);
        // upper half-plane members only
        for a in ev.pooled_angles().unwrap() {
            assert!(a > 0.0 && a < std::f64::consts::PI);
        }
    }

    #[test]
    fn real_fraction_for_beta_one() {
        let ev = run_ev_experiment(&spec(Family::GinibreBeta1, 4, 1, 400, Observable::EvLyapunov), EvMethod::Matrix).unwrap();
        let f = ev.real_fraction.as_ref().unwrap();
        assert_eq!(f.len(), 400);
        // E[#real] = 11 sqrt(2) / 8 for 4x4 real Ginibre
        let (m, e) = mean_stderr(f);
        assert!((m - 11.0 * 2f64.sqrt() / 32.0).abs() < 4.0 * e, "{m}");
        // real eigenvalues occur in even numbers for even N: fractions 0, 1/2, 1
        assert!(f.iter().all(|&x| [0.0, 0.5, 1.0].contains(&x)));
        // many steps: almost all eigenvalues real
        let ev = run_ev_experiment(&spec(Family::GinibreBeta1, 3, 100, 100, Observable::EvLyapunov), EvMethod::Matrix).unwrap();
        let (m, _) = mean_stderr(ev.real_fraction.as_ref().unwrap());
        assert!(m > 0.9, "{m}");
    }

    #[test]
    fn failure_reports_the_sample() {
        let e = par_samples(10, |i| if i == 6 || i == 8 { Err(Error::Invalid("x".into())) } else { Ok(i) }).unwrap_err();
        assert!(matches!(e, Error::SampleFailure { sample: 6, .. }));
    }
}
