//! The Meijer G-function `G^{t,0}_{0,t}(a_1, ..., a_t | s)`.
//!
//! Convention: the Mellin transform is `prod_j Gamma(a_j + u)`, so that
//! `G(a | s) = s^a e^{-s}` at t = 1 and, in general, `G(a | s) / (s prod_j Gamma(a_j))`
//! is the density of a product of independent `Gamma(a_j)` variables.
//!
//! Evaluation is by trapezoid quadrature of the Mellin-Barnes integral along
//! the vertical line through the real saddle point of the integrand, after the
//! substitution `y = w sinh(v)` of the imaginary part. Everything is done in
//! the log domain, so large `t` does not overflow.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::{inverse_digamma, ln_gamma, ln_gamma_complex, psi_n};
use crate::error::{domain, Error, Result};

pub const MAX_T: usize = 1024;

/// Upper indices of `G^{t,0}_{0,t}`, stored grouped by multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct MeijerParams {
    groups: Vec<(f64, usize)>,
    t: usize,
}

impl MeijerParams {
    pub fn new(a: &[f64]) -> Result<Self> {
        let mut groups: Vec<(f64, usize)> = Vec::new();
        for &x in a {
            match groups.iter_mut().find(|g| g.0 == x) {
                Some(g) => g.1 += 1,
                None => groups.push((x, 1)),
            }
        }
        Self::from_groups(&groups)
    }

    /// Builds the list from (value, multiplicity) pairs.
    pub fn from_groups(groups: &[(f64, usize)]) -> Result<Self> {
        let mut merged: Vec<(f64, usize)> = Vec::new();
        for &(x, m) in groups {
            if !(x > 0.0) || !x.is_finite() {
                return Err(domain("a_j", "0 < a_j < inf", x));
            }
            if m == 0 {
                continue;
            }
            match merged.iter_mut().find(|g| g.0 == x) {
                Some(g) => g.1 += m,
                None => merged.push((x, m)),
            }
        }
        let t: usize = merged.iter().map(|g| g.1).sum();
        if t == 0 || t > MAX_T {
            return Err(domain("t", "1 <= t <= 1024", t as f64));
        }
        Ok(MeijerParams { groups: merged, t })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn groups(&self) -> &[(f64, usize)] {
        &self.groups
    }

    /// The full upper-index list, with repetitions.
    pub fn indices(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.t);
        for &(x, m) in &self.groups {
            out.extend(std::iter::repeat(x).take(m));
        }
        out
    }

    /// All indices shifted by `b`, i.e. the parameters of `s^b G(a | s)`.
    pub fn shifted(&self, b: f64) -> Result<Self> {
        let g: Vec<(f64, usize)> = self.groups.iter().map(|&(x, m)| (x + b, m)).collect();
        Self::from_groups(&g)
    }

    /// sum_j ln Gamma(a_j), the log of the Mellin transform at u = 0.
    pub fn log_gamma_sum(&self) -> f64 {
        self.groups.iter().map(|&(x, m)| m as f64 * ln_gamma(x)).sum()
    }

    fn a_min(&self) -> f64 {
        self.groups.iter().map(|g| g.0).fold(f64::INFINITY, f64::min)
    }

    fn psi_sum(&self, n: u32, c: f64) -> f64 {
        self.groups
            .iter()
            .map(|&(x, m)| m as f64 * psi_n(n, x + c))
            .sum()
    }

    fn phi(&self, c: f64, y: f64, ln_s: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(x, m) in &self.groups {
            acc += ln_gamma_complex(Complex64::new(x + c, y)) * m as f64;
        }
        acc - Complex64::new(c, y) * ln_s
    }
}

/// Result of a log-domain evaluation with its estimated relative error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeijerValue {
    pub log_value: f64,
    pub rel_error: f64,
}

const REL_TOL: f64 = 1e-13;
const MAX_HALVINGS: usize = 9;
const MAX_NODES: usize = 400_000;

/// Real saddle point of the Mellin-Barnes integrand: sum_j psi(a_j + c) = ln s.
fn saddle_abscissa(p: &MeijerParams, ln_s: f64) -> f64 {
    let a_min = p.a_min();
    let t = p.t as f64;
    let mean: f64 = p.groups.iter().map(|&(x, m)| x * m as f64).sum::<f64>() / t;
    let mut lo = -a_min;
    let mut hi = f64::INFINITY;
    let mut c = inverse_digamma(ln_s / t) - mean;
    if !(c > lo) {
        c = lo + inverse_digamma(ln_s / t).min(1.0);
    }
    for _ in 0..300 {
        let f = p.psi_sum(0, c) - ln_s;
        if f == 0.0 {
            return c;
        }
        if f > 0.0 {
            hi = hi.min(c);
        } else {
            lo = lo.max(c);
        }
        let mut next = c - f / p.psi_sum(1, c);
        if !(next > lo && next < hi) {
            next = if hi.is_finite() {
                0.5 * (lo + hi)
            } else {
                c + 2.0 * (c - lo).max(1.0)
            };
        }
        if (next - c).abs() <= 1e-14 * (1.0 + c.abs()) {
            return next;
        }
        c = next;
    }
    c
}

/// ln G^{t,0}_{0,t}(a | s) given ln s, with an error estimate.
pub fn log_meijer_g_t0_with_error(p: &MeijerParams, ln_s: f64) -> Result<MeijerValue> {
    if ln_s.is_nan() || ln_s == f64::INFINITY {
        return Err(domain("ln s", "a finite value", ln_s));
    }
    if ln_s == f64::NEG_INFINITY {
        return Ok(MeijerValue {
            log_value: f64::NEG_INFINITY,
            rel_error: 0.0,
        });
    }
    let c = saddle_abscissa(p, ln_s);
    let phi0 = p.phi(c, 0.0, ln_s).re;
    let curvature = p.psi_sum(1, c);
    let w = 1.0 / curvature.sqrt();

    // Differences phi(y) - phi(0) lose about |phi0| * eps absolutely; far in
    // the tails, where that exceeds the target, only the Gaussian saddle term
    // is meaningful (and the value is astronomically small anyway).
    let scale: f64 = p
        .groups
        .iter()
        .map(|&(x, m)| m as f64 * (ln_gamma(x + c).abs() + (x + c)))
        .sum::<f64>()
        + (c * ln_s).abs();
    if scale * f64::EPSILON > 1e-6 {
        return Ok(MeijerValue {
            log_value: phi0 - 0.5 * (2.0 * PI * curvature).ln(),
            rel_error: scale * f64::EPSILON,
        });
    }

    let integrand = |v: f64| -> (f64, f64) {
        let y = w * v.sinh();
        let d = p.phi(c, y, ln_s) - phi0;
        let env = d.re.exp() * w * v.cosh();
        (env * d.im.cos(), env)
    };

    // Sum of integrand values at v = start + k * step, k = 0, 1, ...
    let mut nodes = 0usize;
    let mut sweep = |start: f64, step: f64| -> Result<f64> {
        let mut sum = 0.0;
        let mut k = 0usize;
        loop {
            let v = start + k as f64 * step;
            let (val, env) = integrand(v);
            sum += val;
            nodes += 1;
            k += 1;
            let y = w * v.sinh();
            if (y > w && env < 1e-18 * sum.abs().max(1e-300)) || v > 60.0 {
                break;
            }
            if nodes > MAX_NODES {
                return Err(Error::NoConvergence {
                    what: "meijer_g_t0 quadrature",
                    bound: f64::INFINITY,
                });
            }
        }
        Ok(sum)
    };

    let mut h = 0.25;
    let g0 = integrand(0.0).0;
    let mut total = h * (0.5 * g0 + sweep(h, h)?);
    let mut err = f64::INFINITY;
    for _ in 0..MAX_HALVINGS {
        let mid = sweep(0.5 * h, h)?;
        let refined = 0.5 * total + 0.5 * h * mid;
        err = (refined - total).abs() / refined.abs().max(1e-300);
        total = refined;
        h *= 0.5;
        if err <= REL_TOL {
            break;
        }
    }
    if !(total > 0.0) || err > 1e-8 {
        return Err(Error::NoConvergence {
            what: "meijer_g_t0 quadrature",
            bound: err,
        });
    }
    Ok(MeijerValue {
        log_value: phi0 + (total / PI).ln(),
        rel_error: err.max(scale * f64::EPSILON),
    })
}

/// ln G^{t,0}_{0,t}(a | s) as a function of ln s.
pub fn log_meijer_g_t0(p: &MeijerParams, ln_s: f64) -> Result<f64> {
    log_meijer_g_t0_with_error(p, ln_s).map(|v| v.log_value)
}

/// G^{t,0}_{0,t}(a | s) for s > 0.
pub fn meijer_g_t0(p: &MeijerParams, s: f64) -> Result<f64> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(domain("s", "0 < s < inf", s));
    }
    Ok(log_meijer_g_t0(p, s.ln())?.exp())
}
