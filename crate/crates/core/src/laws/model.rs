//! One-point density models with a CDF, for comparison with samples.

use serde::{Deserialize, Serialize};

use super::onepoint::{density_ev_exact, SvMethod, SvOnePoint};
use super::peaks::{peak_index, PeakParams};
use crate::error::{domain, Error, Result};
use crate::rng::Beta;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    /// exact singular-value one-point density (Meijer G)
    ExactMeijer,
    /// (1/N) sum of Gaussian peaks in mu or nu
    GaussianMixture,
    /// saddle point one-point density in mu
    Saddle,
    /// (1/N) sum of log-normal peaks in lambda = e^mu
    LognormalMixture,
    /// exact angle-integrated one-point density of nu
    EigenExact,
    /// Gaussian mixture at psi(2c)/2
    Beta4Radial,
}

/// Intervals of the tabulated CDF.
const TABLE_INTERVALS: usize = 3000;

#[derive(Debug, Clone)]
struct CdfTable {
    lo: f64,
    h: f64,
    /// pdf at the knots and at the interval midpoints
    knots: Vec<f64>,
    mids: Vec<f64>,
    cum: Vec<f64>,
    total: f64,
}

impl CdfTable {
    fn build<F: FnMut(f64) -> Result<f64>>(mut f: F, lo: f64, hi: f64) -> Result<Self> {
        let k = TABLE_INTERVALS;
        let h = (hi - lo) / k as f64;
        let knots = (0..=k).map(|i| f(lo + i as f64 * h).map(|v| v.max(0.0))).collect::<Result<Vec<_>>>()?;
        let mids = (0..k).map(|i| f(lo + (i as f64 + 0.5) * h).map(|v| v.max(0.0))).collect::<Result<Vec<_>>>()?;
        let mut cum = Vec::with_capacity(k + 1);
        let mut acc = 0.0;
        cum.push(0.0);
        for i in 0..k {
            acc += h / 6.0 * (knots[i] + 4.0 * mids[i] + knots[i + 1]);
            cum.push(acc);
        }
        if !(acc > 0.0) || !acc.is_finite() {
            return Err(Error::Invalid("density has no mass on its support".into()));
        }
        Ok(CdfTable {
            lo,
            h,
            knots,
            mids,
            cum,
            total: acc,
        })
    }

    fn cdf(&self, x: f64) -> f64 {
        let k = self.mids.len();
        let u = (x - self.lo) / self.h;
        if !(u > 0.0) {
            return 0.0;
        }
        if u >= k as f64 {
            return 1.0;
        }
        let i = u as usize;
        let s = u - i as f64;
        // integral over [0, s] of the quadratic through (0, f0), (1/2, fm), (1, f1)
        let (f0, fm, f1) = (self.knots[i], self.mids[i], self.knots[i + 1]);
        let c1 = -3.0 * f0 + 4.0 * fm - f1;
        let c2 = 2.0 * f0 - 4.0 * fm + 2.0 * f1;
        let part = self.h * (f0 * s + c1 * s * s / 2.0 + c2 * s * s * s / 3.0);
        ((self.cum[i] + part.max(0.0)) / self.total).clamp(0.0, 1.0)
    }
}

/// A one-point density model of N exponents after t steps.
#[derive(Debug, Clone)]
pub struct DensityModel {
    kind: ModelKind,
    n: usize,
    t: usize,
    beta: Beta,
    peaks: Vec<PeakParams>,
    sv: Option<SvOnePoint>,
    table: Option<CdfTable>,
}

impl DensityModel {
    pub fn new(kind: ModelKind, n: usize, t: usize, beta: Beta) -> Result<Self> {
        if n == 0 {
            return Err(domain("N", "N >= 1", 0.0));
        }
        if t == 0 {
            return Err(domain("t", "t >= 1", 0.0));
        }
        if beta == Beta::One {
            return Err(Error::Invalid("no analytic density for beta = 1".into()));
        }
        let beta = if kind == ModelKind::Beta4Radial { Beta::Four } else { beta };
        if matches!(kind, ModelKind::ExactMeijer | ModelKind::Saddle) && beta != Beta::Two {
            return Err(Error::Invalid(format!("{kind:?} is defined for beta = 2 only")));
        }
        let peaks = (1..=n)
            .map(|b| PeakParams::with_index(b, peak_index(b, beta), t))
            .collect::<Result<Vec<_>>>()?;
        let sv = match kind {
            ModelKind::ExactMeijer => Some(SvOnePoint::new(n, t, SvMethod::Exact)?),
            ModelKind::Saddle => Some(SvOnePoint::new(n, t, SvMethod::Saddle)?),
            _ => None,
        };
        let mut m = DensityModel {
            kind,
            n,
            t,
            beta,
            peaks,
            sv,
            table: None,
        };
        if matches!(kind, ModelKind::ExactMeijer | ModelKind::Saddle | ModelKind::EigenExact) {
            let (lo, hi) = m.support();
            let model = m.clone();
            m.table = Some(CdfTable::build(|x| model.pdf(x), lo, hi)?);
        }
        Ok(m)
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn beta(&self) -> Beta {
        self.beta
    }

    pub fn peaks(&self) -> &[PeakParams] {
        &self.peaks
    }

    /// Interval holding all but a negligible part of the mass (in lambda for
    /// the log-normal kind).
    pub fn support(&self) -> (f64, f64) {
        let lo = self.peaks.iter().map(|p| p.mean - 16.0 * p.std).fold(f64::INFINITY, f64::min);
        let hi = self.peaks.iter().map(|p| p.mean + 12.0 * p.std).fold(f64::NEG_INFINITY, f64::max);
        if self.kind == ModelKind::LognormalMixture {
            (lo.exp(), hi.exp())
        } else {
            (lo, hi)
        }
    }

    pub fn pdf(&self, x: f64) -> Result<f64> {
        let n = self.n as f64;
        match self.kind {
            ModelKind::GaussianMixture | ModelKind::Beta4Radial => {
                Ok(self.peaks.iter().map(|p| p.pdf(x)).sum::<f64>() / n)
            }
            ModelKind::LognormalMixture => Ok(self.peaks.iter().map(|p| p.lognormal_pdf(x)).sum::<f64>() / n),
            ModelKind::ExactMeijer | ModelKind::Saddle => self.sv.as_ref().expect("cofactor model").pdf(x),
            ModelKind::EigenExact => density_ev_exact(self.n, self.t, x, self.beta),
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match self.kind {
            ModelKind::GaussianMixture | ModelKind::Beta4Radial => {
                self.peaks.iter().map(|p| p.cdf(x)).sum::<f64>() / self.n as f64
            }
            ModelKind::LognormalMixture => {
                if x <= 0.0 {
                    0.0
                } else {
                    self.peaks.iter().map(|p| p.cdf(x.ln())).sum::<f64>() / self.n as f64
                }
            }
            _ => self.table.as_ref().expect("tabulated model").cdf(x),
        }
    }

    /// Per-peak CDF of component b (1-based) for the mixture kinds.
    pub fn component_cdf(&self, b: usize, x: f64) -> Option<f64> {
        let p = self.peaks.get(b.checked_sub(1)?)?;
        match self.kind {
            ModelKind::GaussianMixture | ModelKind::Beta4Radial => Some(p.cdf(x)),
            ModelKind::LognormalMixture => Some(if x <= 0.0 { 0.0 } else { p.cdf(x.ln()) }),
            _ => None,
        }
    }

    /// Mass of the raw pdf over the support, before the CDF is normalized.
    pub fn tabulated_mass(&self) -> Option<f64> {
        self.table.as_ref().map(|t| t.total)
    }
}
