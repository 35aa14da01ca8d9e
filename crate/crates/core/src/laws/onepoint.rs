//! One-point densities of the finite-t exponents.

use serde::{Deserialize, Serialize};

use super::exact::{log_f_ab_exact, log_gamma_product_density, SaddlePeak};
use super::peaks::{peak_index, PeakParams};
use crate::error::{domain, Result};
use crate::rng::Beta;
use crate::specfun::{hankel_inverse_entry, ln_gamma, MAX_HANKEL_N};

/// Approximation used for the singular-value one-point density.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SvMethod {
    /// (1/N) sum_b gaussian_peak(b)
    Gaussian,
    /// Hankel-cofactor combination of renormalized saddle peaks
    Saddle,
    /// the same combination of the exact f_ab
    Exact,
}

/// The singular-value one-point density with its coefficients precomputed.
///
/// For the cofactor methods rho(mu) = (1/N) sum_{jl} (H^{-1})_{jl} Gamma(j+l-1) g_jl(mu),
/// H = [Gamma(a+b-1)], with g_jl = f_jl or its saddle form. The coefficients
/// alternate in sign and grow quickly with N, so precision falls off for N
/// near the upper limit.
#[derive(Debug, Clone)]
pub struct SvOnePoint {
    n: usize,
    t: usize,
    method: SvMethod,
    coeffs: Vec<f64>,
    peaks: Vec<PeakParams>,
    saddle: Vec<SaddlePeak>,
}

impl SvOnePoint {
    pub fn new(n: usize, t: usize, method: SvMethod) -> Result<Self> {
        if n == 0 {
            return Err(domain("N", "N >= 1", 0.0));
        }
        if t == 0 {
            return Err(domain("t", "t >= 1", 0.0));
        }
        let peaks = (1..=n).map(|b| PeakParams::new(b, t)).collect::<Result<Vec<_>>>()?;
        let mut coeffs = Vec::new();
        let mut saddle = Vec::new();
        if method != SvMethod::Gaussian {
            if n > MAX_HANKEL_N {
                return Err(domain("N", "N <= 12 for the cofactor methods", n as f64));
            }
            for j in 1..=n {
                for l in 1..=n {
                    coeffs.push(hankel_inverse_entry(n, j, l) * ln_gamma((j + l - 1) as f64).exp());
                    if method == SvMethod::Saddle {
                        saddle.push(SaddlePeak::new(j, l, t)?);
                    }
                }
            }
        }
        Ok(SvOnePoint {
            n,
            t,
            method,
            coeffs,
            peaks,
            saddle,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn method(&self) -> SvMethod {
        self.method
    }

    pub fn peaks(&self) -> &[PeakParams] {
        &self.peaks
    }

    pub fn pdf(&self, mu: f64) -> Result<f64> {
        let n = self.n;
        let sum = match self.method {
            SvMethod::Gaussian => self.peaks.iter().map(|p| p.pdf(mu)).sum::<f64>(),
            SvMethod::Saddle => {
                let mut s = 0.0;
                for (c, p) in self.coeffs.iter().zip(&self.saddle) {
                    s += c * p.pdf(mu)?;
                }
                s
            }
            SvMethod::Exact => {
                let mut s = 0.0;
                for j in 1..=n {
                    for l in 1..=n {
                        s += self.coeffs[(j - 1) * n + l - 1] * log_f_ab_exact(j, l, self.t, mu)?.exp();
                    }
                }
                s
            }
        };
        Ok(sum / n as f64)
    }
}

/// rho_N(mu) for the chosen approximation.
pub fn density_sv_lyapunov(n: usize, t: usize, mu: f64, method: SvMethod) -> Result<f64> {
    SvOnePoint::new(n, t, method)?.pdf(mu)
}

/// Log-normal mixture density of the incremental singular values lambda = e^mu.
pub fn density_incremental_sv(n: usize, t: usize, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(domain("lambda", "lambda > 0", lambda));
    }
    Ok(density_sv_lyapunov(n, t, lambda.ln(), SvMethod::Gaussian)? / lambda)
}

/// Gaussian mixture with means psi(2c)/2 and variances psi'(2c)/(4t).
pub fn density_beta4_radial(n: usize, t: usize, nu: f64) -> Result<f64> {
    if n == 0 || n > MAX_HANKEL_N {
        return Err(domain("N", "1 <= N <= 12", n as f64));
    }
    let mut s = 0.0;
    for c in 1..=n {
        s += PeakParams::with_index(c, peak_index(c, Beta::Four), t)?.pdf(nu);
    }
    Ok(s / n as f64)
}

/// Exact angle-integrated one-point density of nu = ln R / t: the moduli are
/// independent gamma products, so this is (1/N) sum_b f~_bb(nu) for beta = 2
/// and the analogue with index 2c for beta = 4.
pub fn density_ev_exact(n: usize, t: usize, nu: f64, beta: Beta) -> Result<f64> {
    if n == 0 {
        return Err(domain("N", "N >= 1", 0.0));
    }
    if beta == Beta::One {
        return Err(domain("beta", "beta = 2 or 4", 1.0));
    }
    let mut s = 0.0;
    for b in 1..=n {
        s += log_gamma_product_density(peak_index(b, beta), t, nu)?.exp();
    }
    Ok(s / n as f64)
}
