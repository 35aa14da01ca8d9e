//! Gaussian peaks, cumulants and the deterministic limits.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::rng::Beta;
use crate::specfun::{digamma, ln_gamma, polygamma};

/// Mean psi(x)/2 and width sqrt(psi'(x)/(4t)) of a peak with real index x.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeakParams {
    pub b: usize,
    pub t: usize,
    pub mean: f64,
    pub std: f64,
}

impl PeakParams {
    /// Peak b of the singular value (or beta = 2 eigenvalue) spectrum.
    pub fn new(b: usize, t: usize) -> Result<Self> {
        Self::with_index(b, b as f64, t)
    }

    /// Peak centred at psi(x)/2; `b` is kept only as a label.
    pub fn with_index(b: usize, x: f64, t: usize) -> Result<Self> {
        if b == 0 {
            return Err(domain("b", "b >= 1", 0.0));
        }
        if t == 0 {
            return Err(domain("t", "t >= 1", 0.0));
        }
        if !(x > 0.0) {
            return Err(domain("index", "index > 0", x));
        }
        Ok(PeakParams {
            b,
            t,
            mean: 0.5 * digamma(x),
            std: (polygamma(1, x)? / (4.0 * t as f64)).sqrt(),
        })
    }

    pub fn pdf(&self, x: f64) -> f64 {
        let z = (x - self.mean) / self.std;
        (-0.5 * z * z).exp() / (self.std * (2.0 * PI).sqrt())
    }

    pub fn cdf(&self, x: f64) -> f64 {
        0.5 * statrs::function::erf::erfc(-(x - self.mean) / (self.std * std::f64::consts::SQRT_2))
    }

    /// Log-normal density in lambda = e^mu.
    pub fn lognormal_pdf(&self, lambda: f64) -> f64 {
        if lambda <= 0.0 {
            return 0.0;
        }
        self.pdf(lambda.ln()) / lambda
    }
}

/// Normal density with mean psi(b)/2 and variance psi'(b)/(4t).
pub fn gaussian_peak(b: usize, t: usize, x: f64) -> Result<f64> {
    Ok(PeakParams::new(b, t)?.pdf(x))
}

/// Cumulants kappa^(1..=n_max) of f_ab.
pub fn cumulants_ab(a: usize, b: usize, t: usize, n_max: usize) -> Result<Vec<f64>> {
    if a == 0 || b == 0 {
        return Err(domain("a, b", "a, b >= 1", a.min(b) as f64));
    }
    if t == 0 {
        return Err(domain("t", "t >= 1", 0.0));
    }
    if n_max == 0 || n_max > 8 {
        return Err(domain("n_max", "1 <= n_max <= 8", n_max as f64));
    }
    let tf = t as f64;
    let bf = b as f64;
    let c = (a + b - 1) as f64;
    (1..=n_max)
        .map(|n| {
            let k = (n - 1) as u32;
            let (pb, pc) = if k == 0 {
                (digamma(bf), digamma(c))
            } else {
                (polygamma(k, bf)?, polygamma(k, c)?)
            };
            Ok((0.5 * pb + (pc - pb) / (2.0 * tf)) / (2.0 * tf).powi(k as i32))
        })
        .collect()
}

/// Cumulants of the eigenvalue-side peak f~_ab (index (a+b)/2).
pub fn eigen_cumulants_ab(a: usize, b: usize, t: usize, n_max: usize) -> Result<Vec<f64>> {
    if a == 0 || b == 0 || t == 0 {
        return Err(domain("a, b, t", "a, b, t >= 1", 0.0));
    }
    if n_max == 0 || n_max > 8 {
        return Err(domain("n_max", "1 <= n_max <= 8", n_max as f64));
    }
    let x = 0.5 * (a + b) as f64;
    let tf = t as f64;
    (1..=n_max)
        .map(|n| {
            let k = (n - 1) as u32;
            let p = if k == 0 { digamma(x) } else { polygamma(k, x)? };
            Ok(0.5 * p / (2.0 * tf).powi(k as i32))
        })
        .collect()
}

/// D_ab(t) = (Gamma((a+b)/2) / sqrt(Gamma(a) Gamma(b)))^t.
pub fn eigen_prefactor(a: usize, b: usize, t: usize) -> Result<f64> {
    if a == 0 || b == 0 || t == 0 {
        return Err(domain("a, b, t", "a, b, t >= 1", 0.0));
    }
    if a == b {
        return Ok(1.0);
    }
    let l = ln_gamma(0.5 * (a + b) as f64) - 0.5 * (ln_gamma(a as f64) + ln_gamma(b as f64));
    Ok((t as f64 * l).exp())
}

/// psi(beta b / 2) / 2 for b = 1..=N, ascending.
pub fn deterministic_positions(n: usize, beta: Beta) -> Vec<f64> {
    let h = beta.value() as f64 / 2.0;
    (1..=n).map(|b| 0.5 * digamma(h * b as f64)).collect()
}

/// Index of peak b for Dyson index beta (beta b / 2).
pub fn peak_index(b: usize, beta: Beta) -> f64 {
    beta.value() as f64 * b as f64 / 2.0
}
