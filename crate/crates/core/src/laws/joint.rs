//! Joint densities for small N.

use serde::{Deserialize, Serialize};

use super::exact::{log_f_ab_exact, log_gamma_product_density};
use super::peaks::PeakParams;
use crate::error::{domain, Error, Result};
use crate::specfun::{ln_gamma, permanent};

pub const MAX_EXACT_JOINT_N: usize = 6;
pub const MAX_PERMANENT_JOINT_N: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum JointKind {
    /// exact finite-t law of the singular-value exponents mu
    SvExact,
    /// large-t permanent of Gaussian peaks in mu
    SvPermanent,
    /// large-t permanent of Gaussian peaks in nu, angles integrated out
    EvPermanent,
    /// large-t permanent of log-normal peaks in the incremental radii r
    IncrementalPermanent,
    /// exact angle-integrated law of nu
    EvExact,
}

/// Joint density of the N unordered points (mu, nu, or r depending on the kind).
pub fn joint_density(points: &[f64], n: usize, t: usize, kind: JointKind) -> Result<f64> {
    if points.len() != n {
        return Err(Error::Dimension(format!("{} points for N = {n}", points.len())));
    }
    if n == 0 {
        return Err(domain("N", "N >= 1", 0.0));
    }
    if t == 0 {
        return Err(domain("t", "t >= 1", 0.0));
    }
    let limit = match kind {
        JointKind::SvExact | JointKind::EvExact => MAX_EXACT_JOINT_N,
        _ => MAX_PERMANENT_JOINT_N,
    };
    if n > limit {
        return Err(domain("N", "within the size limit of the kind", n as f64));
    }
    let nf = ln_gamma(n as f64 + 1.0).exp();
    match kind {
        JointKind::SvExact => sv_exact(points, t),
        JointKind::SvPermanent | JointKind::EvPermanent => {
            let peaks = (1..=n).map(|b| PeakParams::new(b, t)).collect::<Result<Vec<_>>>()?;
            let m: Vec<Vec<f64>> = points.iter().map(|&x| peaks.iter().map(|p| p.pdf(x)).collect()).collect();
            Ok(permanent(&m)? / nf)
        }
        JointKind::IncrementalPermanent => {
            let peaks = (1..=n).map(|b| PeakParams::new(b, t)).collect::<Result<Vec<_>>>()?;
            let m: Vec<Vec<f64>> = points
                .iter()
                .map(|&r| peaks.iter().map(|p| p.lognormal_pdf(r)).collect())
                .collect();
            Ok(permanent(&m)? / nf)
        }
        JointKind::EvExact => {
            let mut m = vec![vec![0.0; n]; n];
            for (a, &x) in points.iter().enumerate() {
                for b in 0..n {
                    m[a][b] = log_gamma_product_density((b + 1) as f64, t, x)?.exp();
                }
            }
            Ok(permanent(&m)? / nf)
        }
    }
}

/// (1 / (N! prod Gamma^2(a))) sum_omega det[Gamma(a+b-1) f_ab(mu_omega(b))].
fn sv_exact(points: &[f64], t: usize) -> Result<f64> {
    let n = points.len();
    // f[(a*n + b)*n + k] = Gamma(a+b-1) f_ab(mu_k) / Gamma(a)^2, 0-based a, b
    let mut f = vec![0.0; n * n * n];
    for a in 0..n {
        for b in 0..n {
            let lg = ln_gamma((a + b + 1) as f64) - 2.0 * ln_gamma((a + 1) as f64);
            for (k, &mu) in points.iter().enumerate() {
                f[(a * n + b) * n + k] = (lg + log_f_ab_exact(a + 1, b + 1, t, mu)?).exp();
            }
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = 0.0;
    let mut m = vec![0.0; n * n];
    loop {
        for a in 0..n {
            for b in 0..n {
                m[a * n + b] = f[(a * n + b) * n + perm[b]];
            }
        }
        total += det(&mut m, n);
        if !next_permutation(&mut perm) {
            break;
        }
    }
    let nf = ln_gamma(n as f64 + 1.0).exp();
    Ok((total / nf).max(0.0))
}

/// Determinant by LU with partial pivoting (destroys the input).
fn det(m: &mut [f64], n: usize) -> f64 {
    let mut d = 1.0;
    for c in 0..n {
        let p = (c..n)
            .max_by(|&x, &y| m[x * n + c].abs().total_cmp(&m[y * n + c].abs()))
            .unwrap_or(c);
        if m[p * n + c] == 0.0 {
            return 0.0;
        }
        if p != c {
            for j in 0..n {
                m.swap(p * n + j, c * n + j);
            }
            d = -d;
        }
        let piv = m[c * n + c];
        d *= piv;
        for r in c + 1..n {
            let q = m[r * n + c] / piv;
            for j in c..n {
                m[r * n + j] -= q * m[c * n + j];
            }
        }
    }
    d
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}
