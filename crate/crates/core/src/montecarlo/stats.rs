//! Histograms and goodness-of-fit statistics.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use statrs::function::gamma::gamma_ur;

use super::SampleSet;
use crate::error::{Error, Result};
use crate::rng::EnsembleSpec;

/// Which entries of a [`SampleSet`] feed a histogram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Component {
    /// all N entries of every row, i.e. the one-point density
    Pooled,
    /// order statistic b, 1-based
    Index(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub n_bins: usize,
    pub counts: Vec<u64>,
    /// normalized over the in-range entries
    pub density: Vec<f64>,
    /// entries outside [lo, hi]
    pub outside: u64,
    /// digest of the generating spec
    pub provenance: String,
}

impl Histogram {
    pub fn bin_width(&self) -> f64 {
        (self.hi - self.lo) / self.n_bins as f64
    }

    pub fn centers(&self) -> Vec<f64> {
        let w = self.bin_width();
        (0..self.n_bins).map(|i| self.lo + (i as f64 + 0.5) * w).collect()
    }

    /// Largest gap between the binned empirical CDF and `cdf` at the bin edges,
    /// with the model renormalized to [lo, hi] like the density.
    pub fn ks<F: Fn(f64) -> f64>(&self, cdf: F) -> f64 {
        let total: u64 = self.counts.iter().sum();
        let (c0, c1) = (cdf(self.lo), cdf(self.hi));
        let w = self.bin_width();
        let mut acc = 0;
        let mut d: f64 = 0.0;
        for (i, &c) in self.counts.iter().enumerate() {
            acc += c;
            let model = (cdf(self.lo + (i + 1) as f64 * w) - c0) / (c1 - c0);
            d = d.max((acc as f64 / total as f64 - model).abs());
        }
        d
    }
}

/// Stable short digest of a spec (hex of SHA-256 over its JSON form).
pub fn spec_digest(spec: &EnsembleSpec) -> String {
    let json = serde_json::to_string(spec).expect("spec serializes");
    let h = Sha256::digest(json.as_bytes());
    h.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// Density histogram of a component of the samples on [lo, hi] (hi inclusive).
pub fn histogram(set: &SampleSet, component: Component, lo: f64, hi: f64, n_bins: usize) -> Result<Histogram> {
    let data = match component {
        Component::Pooled => set.pooled(),
        Component::Index(b) => set.column(b)?,
    };
    let mut h = histogram_of(&data, lo, hi, n_bins)?;
    h.provenance = spec_digest(&set.spec);
    Ok(h)
}

/// Density histogram of raw values; the density is normalized over the
/// values that fall inside [lo, hi]. `provenance` is left empty.
pub fn histogram_of(data: &[f64], lo: f64, hi: f64, n_bins: usize) -> Result<Histogram> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Invalid(format!("histogram range needs lo < hi, got [{lo}, {hi}]")));
    }
    if n_bins == 0 {
        return Err(Error::Invalid("histogram needs at least one bin".into()));
    }
    let w = (hi - lo) / n_bins as f64;
    let mut counts = vec![0u64; n_bins];
    let mut outside = 0;
    for &x in data {
        if x < lo || x > hi || x.is_nan() {
            outside += 1;
            continue;
        }
        let i = (((x - lo) / w) as usize).min(n_bins - 1);
        counts[i] += 1;
    }
    let inside = data.len() as u64 - outside;
    if inside == 0 {
        return Err(Error::Invalid(format!("no samples in [{lo}, {hi}]")));
    }
    let density = counts.iter().map(|&c| c as f64 / (inside as f64 * w)).collect();
    Ok(Histogram {
        lo,
        hi,
        n_bins,
        counts,
        density,
        outside,
        provenance: String::new(),
    })
}

/// sup |F_emp - F| of the samples against a model CDF.
pub fn ks_distance<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut x = samples.to_vec();
    x.sort_by(f64::total_cmp);
    let n = x.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &v) in x.iter().enumerate() {
        let f = cdf(v);
        d = d.max((i + 1) as f64 / n - f).max(f - i as f64 / n);
    }
    d
}

/// Two-sample Kolmogorov-Smirnov distance.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort_by(f64::total_cmp);
    y.sort_by(f64::total_cmp);
    let (na, nb) = (x.len() as f64, y.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < x.len() && j < y.len() {
        let v = x[i].min(y[j]);
        while i < x.len() && x[i] <= v {
            i += 1;
        }
        while j < y.len() && y[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Asymptotic P(D > d) for the KS distance of n samples (for two samples use
/// n = n1 n2 / (n1 + n2)), with the usual small-n correction.
pub fn kolmogorov_pvalue(d: f64, n: f64) -> f64 {
    let sn = n.sqrt();
    let lam = (sn + 0.12 + 0.11 / sn) * d;
    if lam < 1.0 {
        // Jacobi theta form, fast for small lambda
        let c = std::f64::consts::PI * std::f64::consts::PI / (8.0 * lam * lam);
        let s: f64 = (1..=20).map(|k| (-((2 * k - 1) as f64).powi(2) * c).exp()).sum();
        return (1.0 - (2.0 * std::f64::consts::PI).sqrt() / lam * s).clamp(0.0, 1.0);
    }
    let mut s = 0.0;
    for k in 1..=100 {
        let term = (-2.0 * (k * k) as f64 * lam * lam).exp();
        s += if k % 2 == 1 { term } else { -term };
        if term < 1e-18 {
            break;
        }
    }
    (2.0 * s).clamp(0.0, 1.0)
}

/// Chi-square test of uniformity of angles in [0, 2 pi) over equal sectors.
/// Returns (statistic, p-value).
pub fn chi_square_uniform(angles: &[f64], sectors: usize) -> Result<(f64, f64)> {
    if sectors < 2 {
        return Err(Error::Invalid("need at least 2 sectors".into()));
    }
    if angles.is_empty() {
        return Err(Error::Invalid("no angles".into()));
    }
    let tau = std::f64::consts::TAU;
    let mut counts = vec![0usize; sectors];
    for &a in angles {
        let u = a.rem_euclid(tau) / tau;
        counts[((u * sectors as f64) as usize).min(sectors - 1)] += 1;
    }
    let e = angles.len() as f64 / sectors as f64;
    let stat: f64 = counts.iter().map(|&c| (c as f64 - e).powi(2) / e).sum();
    let dof = (sectors - 1) as f64;
    Ok((stat, gamma_ur(dof / 2.0, stat / 2.0)))
}

/// Sample mean and standard error of the mean.
pub fn mean_stderr(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    if x.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let m = x.iter().sum::<f64>() / n;
    if x.len() < 2 {
        return (m, f64::NAN);
    }
    let v = x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n - 1.0);
    (m, (v / n).sqrt())
}
