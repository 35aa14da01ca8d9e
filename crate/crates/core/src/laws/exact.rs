//! Exact one-variable densities built from G^{t,0}_{0,t}, and their saddle
//! point approximation.

use std::f64::consts::PI;

use crate::error::{domain, Result};
use crate::quad::integrate_line;
use crate::specfun::{digamma, ln_gamma, log_meijer_g_t0, polygamma, theta0, MeijerParams};

fn check_abt(a: usize, b: usize, t: usize) -> Result<()> {
    if a == 0 || b == 0 {
        return Err(domain("a, b", "a, b >= 1", a.min(b) as f64));
    }
    if t == 0 {
        return Err(domain("t", "t >= 1", 0.0));
    }
    Ok(())
}

/// ln f_ab(mu).
pub fn log_f_ab_exact(a: usize, b: usize, t: usize, mu: f64) -> Result<f64> {
    check_abt(a, b, t)?;
    let bf = b as f64;
    let c = (a + b - 1) as f64;
    let p = MeijerParams::from_groups(&[(bf, t - 1), (c, 1)])?;
    let tf = t as f64;
    let lg = log_meijer_g_t0(&p, 2.0 * tf * mu)?;
    Ok((2.0 * tf).ln() + lg - (tf - 1.0) * ln_gamma(bf) - ln_gamma(c))
}

/// f_ab(mu) = 2t G(b, ..., b, a+b-1 | e^{2t mu}) / (Gamma^{t-1}(b) Gamma(a+b-1)).
pub fn f_ab_exact(a: usize, b: usize, t: usize, mu: f64) -> Result<f64> {
    Ok(log_f_ab_exact(a, b, t, mu)?.exp())
}

/// Exact density of (1/2t) sum_j ln g_j with g_j ~ Gamma(x) independent:
/// 2t G(x, ..., x | e^{2t nu}) / Gamma^t(x).
pub fn log_gamma_product_density(x: f64, t: usize, nu: f64) -> Result<f64> {
    if t == 0 {
        return Err(domain("t", "t >= 1", 0.0));
    }
    let p = MeijerParams::from_groups(&[(x, t)])?;
    let tf = t as f64;
    Ok((2.0 * tf).ln() + log_meijer_g_t0(&p, 2.0 * tf * nu)? - tf * ln_gamma(x))
}

/// f~_ab(nu): all indices (a+b)/2.
pub fn eigen_peak_exact(a: usize, b: usize, t: usize, nu: f64) -> Result<f64> {
    check_abt(a, b, t)?;
    Ok(log_gamma_product_density(0.5 * (a + b) as f64, t, nu)?.exp())
}

/// ln h_ab(mu), where h_ab / Gamma(a+b-1) is the saddle point form of f_ab.
pub fn log_saddle_h_ab(a: usize, b: usize, t: usize, mu: f64) -> Result<f64> {
    check_abt(a, b, t)?;
    let th = theta0(mu)?;
    let tf = t as f64;
    let bf = b as f64;
    Ok(0.5 * (2.0 * tf / (PI * polygamma(1, th)?)).ln()
        + (tf - 1.0) * (ln_gamma(th) - ln_gamma(bf))
        + ln_gamma(a as f64 - 1.0 + th)
        - 2.0 * tf * mu * (th - bf))
}

/// h_ab(mu); integrates to Gamma(a+b-1) up to corrections in 1/t.
pub fn saddle_h_ab(a: usize, b: usize, t: usize, mu: f64) -> Result<f64> {
    Ok(log_saddle_h_ab(a, b, t, mu)?.exp())
}

/// Saddle point approximation of f_ab, renormalized by quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaddlePeak {
    pub a: usize,
    pub b: usize,
    pub t: usize,
    /// integral of h_ab / Gamma(a+b-1) before renormalization
    pub raw_mass: f64,
    log_gamma_c: f64,
}

impl SaddlePeak {
    pub fn new(a: usize, b: usize, t: usize) -> Result<Self> {
        check_abt(a, b, t)?;
        let log_gamma_c = ln_gamma((a + b - 1) as f64);
        let bf = b as f64;
        let center = 0.5 * digamma(bf);
        let width = (polygamma(1, bf)? / (4.0 * t as f64)).sqrt();
        let mut err = None;
        let raw_mass = integrate_line(
            |mu| match log_saddle_h_ab(a, b, t, mu) {
                Ok(l) => (l - log_gamma_c).exp(),
                Err(e) => {
                    err.get_or_insert(e);
                    0.0
                }
            },
            center,
            2.0 * width,
            1e-10,
        )?;
        if let Some(e) = err {
            return Err(e);
        }
        Ok(SaddlePeak {
            a,
            b,
            t,
            raw_mass,
            log_gamma_c,
        })
    }

    /// h_ab / Gamma(a+b-1) as printed (approximately normalized).
    pub fn raw_pdf(&self, mu: f64) -> Result<f64> {
        Ok((log_saddle_h_ab(self.a, self.b, self.t, mu)? - self.log_gamma_c).exp())
    }

    /// Normalized saddle density.
    pub fn pdf(&self, mu: f64) -> Result<f64> {
        Ok(self.raw_pdf(mu)? / self.raw_mass)
    }
}
