//! Exact inequalities and identities checked sample by sample, and the
//! projector average behind the deterministic large-t exponents.

use serde::{Deserialize, Serialize};

use super::{mean_stderr, mu_row, nu_row, par_samples};
use crate::error::{Error, Result};
use crate::linalg::{
    log_abs_det_chain, log_eigenvalue_moduli, log_singular_values, max_exponent_2x2, qr_positive, schur_chain_2x2,
};
use crate::rng::{derive_stream, sample_ginibre, Beta, EnsembleSpec, Family};
use crate::specfun::digamma;

/// Stream offset for the single-step draws of the 2x2 target, far from the
/// sample streams.
const TARGET_STREAM_BASE: u64 = 1 << 40;

/// mu and nu rows of the same chains.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairedSet {
    pub spec: EnsembleSpec,
    pub mu: Vec<Vec<f64>>,
    pub nu: Vec<Vec<f64>>,
    /// (1/t) sum_j ln|det X_j| per sample
    pub log_det: Vec<f64>,
}

/// Computes both constructions on every chain. Needs the full chain in memory.
pub fn run_paired_experiment(spec: &EnsembleSpec) -> Result<PairedSet> {
    spec.validate()?;
    let t = spec.t as f64;
    let out = par_samples(spec.samples, |i| {
        let chain = spec.draw_chain(i)?;
        let sv = log_singular_values(&chain)?;
        let ev = log_eigenvalue_moduli(&chain)?;
        let mut ld = log_abs_det_chain(&chain)? / t;
        if spec.family == Family::GinibreBeta4 {
            // the 2N x 2N determinant counts every exponent twice
            ld *= 0.5;
        }
        Ok((mu_row(spec, &sv), nu_row(spec, &ev).0, ld))
    })?;
    let mut p = PairedSet {
        spec: spec.clone(),
        mu: Vec::with_capacity(out.len()),
        nu: Vec::with_capacity(out.len()),
        log_det: Vec::with_capacity(out.len()),
    };
    for (m, n, d) in out {
        p.mu.push(m);
        p.nu.push(n);
        p.log_det.push(d);
    }
    Ok(p)
}

/// Worst-case residuals of the exact relations over a paired run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    /// max over samples of |sum mu - log_det| and |sum nu - log_det|
    pub det_residual: f64,
    /// max over samples and k < N of (sum of the k largest nu) - (sum of the k largest mu);
    /// Weyl's inequality says this is <= 0
    pub weyl_excess: f64,
    /// samples with weyl_excess above the rounding slack
    pub weyl_violations: usize,
}

/// Checks the determinant identities and Weyl domination of every sample.
/// `slack` absorbs rounding of the two independent kernels.
pub fn check_identities(p: &PairedSet, slack: f64) -> IdentityCheck {
    let mut det_residual: f64 = 0.0;
    let mut weyl_excess = f64::NEG_INFINITY;
    let mut weyl_violations = 0;
    for ((mu, nu), &ld) in p.mu.iter().zip(&p.nu).zip(&p.log_det) {
        let sm: f64 = mu.iter().sum();
        let sn: f64 = nu.iter().sum();
        det_residual = det_residual.max((sm - ld).abs()).max((sn - ld).abs());
        let mut pm = 0.0;
        let mut pn = 0.0;
        let mut worst = f64::NEG_INFINITY;
        for k in (1..mu.len()).rev() {
            pm += mu[k];
            pn += nu[k];
            worst = worst.max(pn - pm);
        }
        if worst > slack {
            weyl_violations += 1;
        }
        weyl_excess = weyl_excess.max(worst);
    }
    IdentityCheck {
        det_residual,
        weyl_excess,
        weyl_violations,
    }
}

/// One 2x2 chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoByTwoSample {
    /// largest singular-value exponent
    pub mu_max: f64,
    /// max(ln|z1|, ln|z2|) / t
    pub lower: f64,
    pub lower_ok: bool,
    /// |(mu1 + mu2) - (nu1 + nu2)|, with mu from the singular-value kernel
    pub sum_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoByTwoReport {
    pub t: usize,
    pub samples: Vec<TwoByTwoSample>,
    pub violations: usize,
    pub max_sum_residual: f64,
    pub mean_mu_max: f64,
    pub stderr_mu_max: f64,
    /// (1/2) E ln |X e_1|^2 over single factors, the large-t limit of mu_max
    pub target: f64,
    pub target_stderr: f64,
}

/// Lower bound and sum identity for every 2x2 chain, plus the large-t target.
///
/// The target is the single-step average of max(ln|z_1j|, ln|z_2j|) under the
/// factorized per-step law of the triangular form, where the maximum of the two
/// averages is taken. By isotropy it equals (1/2) E ln |X e_1|^2 for one factor,
/// which is what is estimated here (independent streams).
pub fn run_2x2_bounds(spec: &EnsembleSpec) -> Result<TwoByTwoReport> {
    spec.validate()?;
    if spec.realized_dim() != 2 {
        return Err(Error::Dimension(format!(
            "2x2 bounds need 2x2 factors (N = {}, family {:?})",
            spec.n, spec.family
        )));
    }
    let t = spec.t;
    let tf = t as f64;
    let samples = par_samples(spec.samples, |i| {
        let chain = spec.draw_chain(i)?;
        let sd = schur_chain_2x2(&chain)?;
        let mu_max = max_exponent_2x2(&sd, t);
        let lower = sd.log_z1.max(sd.log_z2) / tf;
        let sv = log_singular_values(&chain)?;
        let sum_residual = (sv.sum() / (2.0 * tf) - (sd.log_z1 + sd.log_z2) / tf).abs();
        Ok(TwoByTwoSample {
            mu_max,
            lower,
            lower_ok: mu_max >= lower,
            sum_residual,
        })
    })?;
    let singles = par_samples(spec.samples, |i| {
        let mut rng = derive_stream(spec.master_seed, TARGET_STREAM_BASE + i);
        let x = spec.draw_factor(&mut rng)?;
        Ok(0.5 * (x[(0, 0)].norm_sqr() + x[(1, 0)].norm_sqr()).ln())
    })?;
    let mu: Vec<f64> = samples.iter().map(|s| s.mu_max).collect();
    let (mean_mu_max, stderr_mu_max) = mean_stderr(&mu);
    let (target, target_stderr) = mean_stderr(&singles);
    Ok(TwoByTwoReport {
        t,
        violations: samples.iter().filter(|s| !s.lower_ok).count(),
        max_sum_residual: samples.iter().map(|s| s.sum_residual).fold(0.0, f64::max),
        samples,
        mean_mu_max,
        stderr_mu_max,
        target,
        target_stderr,
    })
}

/// (1/2) sum_{j=N-k+1}^{N} psi(j): the sum of the k largest Lyapunov exponents
/// of complex Ginibre products.
///
/// X P_k is an N x k Ginibre matrix, and the squared diagonal of its positive
/// QR factor are independent Gamma(N), Gamma(N-1), ..., Gamma(N-k+1) variables,
/// so the fixed embedding of the first k coordinates picks the top k.
pub fn newman_target(n: usize, k: usize) -> Result<f64> {
    if k == 0 || k > n {
        return Err(Error::Invalid(format!("need 1 <= k <= N, got k = {k}, N = {n}")));
    }
    Ok(0.5 * (n - k + 1..=n).map(|j| digamma(j as f64)).sum::<f64>())
}

/// Monte Carlo estimate of (1/2) E ln det(P_k^dagger X^dagger X P_k) over single
/// complex Ginibre draws, with its standard error.
pub fn newman_projector_average(n: usize, k: usize, samples: usize, seed: u64) -> Result<(f64, f64)> {
    newman_target(n, k)?;
    if samples < 2 {
        return Err(Error::Invalid("need at least 2 samples".into()));
    }
    let vals = par_samples(samples, |i| {
        let mut rng = derive_stream(seed, i);
        let x = sample_ginibre(&mut rng, Beta::Two, n)?;
        // the leading k columns of R are the QR factor of X P_k
        let (_, r) = qr_positive(&x)?;
        Ok((0..k).map(|j| r[(j, j)].re.ln()).sum::<f64>())
    })?;
    Ok(mean_stderr(&vals))
}
