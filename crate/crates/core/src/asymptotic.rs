//! Large-N laws of the incremental singular values and radii, and the two
//! orders of the limits t -> inf and N -> inf.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::montecarlo::{run_ev_experiment, EvMethod, SampleSet};
use crate::rng::{EnsembleSpec, Family, Observable};
use crate::specfun::{digamma, fuss_catalan};

/// 2 lambda on [0, 1]: density of the rescaled incremental values at t, N -> inf.
pub fn triangular_density(lambda: f64) -> f64 {
    if (0.0..=1.0).contains(&lambda) {
        2.0 * lambda
    } else {
        0.0
    }
}

/// lambda^2 clamped to [0, 1].
pub fn triangular_cdf(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        0.0
    } else if lambda >= 1.0 {
        1.0
    } else {
        lambda * lambda
    }
}

/// The same law for mu* = ln lambda*: 2 e^{2 mu*} for mu* <= 0.
pub fn triangular_exponent_density(mu: f64) -> f64 {
    if mu <= 0.0 {
        2.0 * (2.0 * mu).exp()
    } else {
        0.0
    }
}

/// n-th moment 2 / (n + 2) of the triangular law.
pub fn triangular_moment(n: u32) -> f64 {
    2.0 / (n as f64 + 2.0)
}

/// Counting function of the deterministic t = inf values exp[psi(n)/2] / sqrt(N).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StaircaseCdf {
    pub n: usize,
    /// ascending
    pub jumps: Vec<f64>,
}

impl StaircaseCdf {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(domain("N", "N >= 1", 0.0));
        }
        let s = (n as f64).sqrt();
        let jumps = (1..=n).map(|j| (0.5 * digamma(j as f64)).exp() / s).collect();
        Ok(StaircaseCdf { n, jumps })
    }

    pub fn jump_height(&self) -> f64 {
        1.0 / self.n as f64
    }

    /// Right-continuous step function.
    pub fn cdf(&self, lambda: f64) -> f64 {
        self.jumps.partition_point(|&x| x <= lambda) as f64 / self.n as f64
    }

    /// sup over lambda of |F(lambda) - triangular_cdf(lambda)|, exact: on each
    /// flat piece the gap is extremal at the ends.
    pub fn sup_deviation(&self) -> f64 {
        let h = self.jump_height();
        let mut d: f64 = 0.0;
        let mut left = 0.0;
        for (k, &x) in self.jumps.iter().enumerate() {
            let level = k as f64 * h;
            // flat piece [left, x) at height level
            d = d.max((level - triangular_cdf(left)).abs()).max((level - triangular_cdf(x)).abs());
            left = x;
        }
        // last piece [x_N, inf) at height 1
        d.max(1.0 - triangular_cdf(left))
    }
}

/// Convenience wrapper for one evaluation.
pub fn staircase_cdf(n: usize, lambda: f64) -> Result<f64> {
    Ok(StaircaseCdf::new(n)?.cdf(lambda))
}

/// <lambda*^n> in the limit N -> inf: at fixed t via the Fuss-Catalan numbers
/// at k = n / (2t) (`n_limit_first`), or after t -> inf, which gives 2 / (n + 2).
pub fn fuss_catalan_moment(n_limit_first: bool, t: usize, n: u32) -> Result<f64> {
    if n == 0 {
        return Err(domain("n", "n >= 1", 0.0));
    }
    if t == 0 {
        return Err(domain("t", "t >= 1", 0.0));
    }
    if n_limit_first {
        fuss_catalan(t as u64, n as f64 / (2.0 * t as f64))
    } else {
        Ok(triangular_moment(n))
    }
}

/// A finite discrete distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Atoms {
    pub locations: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Atoms {
    /// Total weight of the atoms in [lo, hi].
    pub fn mass_in(&self, lo: f64, hi: f64) -> f64 {
        self.locations
            .iter()
            .zip(&self.weights)
            .filter(|(x, _)| (lo..=hi).contains(*x))
            .map(|(_, w)| w)
            .sum()
    }
}

/// Spacings of the unfolded squared radii r*^2 at t = inf: N - 1 equal atoms at
/// e^{psi(j)} (e^{1/j} - 1), j = 1..N-1 (in units of the mean spacing 1/N).
pub fn level_spacing_finite_n(n: usize) -> Result<Atoms> {
    if n < 2 {
        return Err(domain("N", "N >= 2", n as f64));
    }
    let w = 1.0 / (n - 1) as f64;
    let locations = (1..n)
        .map(|j| {
            let jf = j as f64;
            digamma(jf).exp() * (1.0 / jf).exp_m1()
        })
        .collect();
    Ok(Atoms {
        locations,
        weights: vec![w; n - 1],
    })
}

/// Nearest-neighbour spacings of r^2 = R^{2/t} for each sample of complex
/// Ginibre products at finite N and t, pooled. With the r* = r / sqrt(N)
/// rescaling the mean spacing of r*^2 is 1/N, so these are already unfolded.
pub fn spacing_monte_carlo(n: usize, t: usize, samples: usize, seed: u64) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(domain("N", "N >= 2", n as f64));
    }
    let spec = EnsembleSpec::new(Family::GinibreBeta2, n, t, samples, seed, Observable::IncrementalRadius)?;
    let set = run_ev_experiment(&spec, EvMethod::Matrix)?;
    Ok(radial_spacings(&set))
}

/// Spacings of the squared entries of each row (rows hold radii r).
pub fn radial_spacings(set: &SampleSet) -> Vec<f64> {
    set.rows
        .iter()
        .flat_map(|r| r.windows(2).map(|w| w[1] * w[1] - w[0] * w[0]).collect::<Vec<_>>())
        .collect()
}

/// lambda* = lambda / sqrt(N) for every entry of an incremental-sv set.
pub fn rescaled_incremental(set: &SampleSet) -> Result<Vec<f64>> {
    if !matches!(set.kind, Observable::IncrementalSv | Observable::IncrementalRadius) {
        return Err(Error::Invalid(format!("expected incremental values, got {:?}", set.kind)));
    }
    let s = (set.spec.n as f64).sqrt();
    Ok(set.pooled().iter().map(|l| l / s).collect())
}
