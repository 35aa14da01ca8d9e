//! Deterministic random streams and the matrix ensembles.
//!
//! Every sample of an experiment draws from its own stream, keyed by
//! `(master_seed, stream_id)`, so results never depend on scheduling.

use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::linalg::{log_singular_values, qr_positive, ComplexMatrix};

/// A reproducible random stream.
#[derive(Debug, Clone)]
pub struct RngStream {
    master_seed: u64,
    stream_id: u64,
    inner: ChaCha8Rng,
}

/// Stream `stream_id` of the family seeded by `master_seed`.
pub fn derive_stream(master_seed: u64, stream_id: u64) -> RngStream {
    let mut inner = ChaCha8Rng::seed_from_u64(master_seed);
    inner.set_stream(stream_id);
    RngStream {
        master_seed,
        stream_id,
        inner,
    }
}

impl RngStream {
    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Uniform on [0, 1).
    pub fn uniform(&mut self) -> f64 {
        self.inner.random()
    }

    pub fn normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.inner)
    }

    /// Complex Gaussian with E|z|^2 = 1.
    pub fn complex_normal(&mut self) -> Complex64 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Complex64::new(self.normal() * s, self.normal() * s)
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

/// Dyson index of a Ginibre ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Beta {
    One,
    Two,
    Four,
}

impl Beta {
    pub fn value(self) -> u8 {
        match self {
            Beta::One => 1,
            Beta::Two => 2,
            Beta::Four => 4,
        }
    }
}

impl TryFrom<u8> for Beta {
    type Error = Error;

    fn try_from(b: u8) -> Result<Self> {
        match b {
            1 => Ok(Beta::One),
            2 => Ok(Beta::Two),
            4 => Ok(Beta::Four),
            _ => Err(domain("beta", "beta = 1, 2 or 4", b as f64)),
        }
    }
}

impl From<Beta> for u8 {
    fn from(b: Beta) -> u8 {
        b.value()
    }
}

/// Ginibre draw with weight exp(-Tr X^dagger X) (real Gaussian for beta = 1,
/// 2N x 2N quaternion blocks for beta = 4).
pub fn sample_ginibre(rng: &mut RngStream, beta: Beta, n: usize) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(domain("N", "N >= 1", 0.0));
    }
    match beta {
        Beta::One => ComplexMatrix::from_fn(n, n, |_, _| Complex64::new(rng.normal(), 0.0)),
        Beta::Two => ComplexMatrix::from_fn(n, n, |_, _| rng.complex_normal()),
        Beta::Four => {
            let a: Vec<Complex64> = (0..n * n).map(|_| rng.complex_normal()).collect();
            let b: Vec<Complex64> = (0..n * n).map(|_| rng.complex_normal()).collect();
            ComplexMatrix::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
                (true, true) => a[i * n + j],
                (true, false) => b[i * n + j - n],
                (false, true) => -b[(i - n) * n + j].conj(),
                (false, false) => a[(i - n) * n + j - n].conj(),
            })
        }
    }
}

/// Draw from Gamma(shape, 1).
pub fn sample_gamma(rng: &mut RngStream, shape: f64) -> Result<f64> {
    if !(shape > 0.0) || !shape.is_finite() {
        return Err(domain("shape", "shape > 0", shape));
    }
    let g = Gamma::new(shape, 1.0).map_err(|e| Error::Invalid(e.to_string()))?;
    Ok(g.sample(rng))
}

/// Haar unitary from the QR factorization of a Ginibre draw, with the
/// phases fixed so that R has a positive diagonal.
pub fn haar_unitary(rng: &mut RngStream, n: usize) -> Result<ComplexMatrix> {
    let x = sample_ginibre(rng, Beta::Two, n)?;
    Ok(qr_positive(&x)?.0)
}

/// `U diag(s) V` with independent Haar `U`, `V` and `s` from `sv_sampler`.
pub fn sample_isotropic_custom<F>(rng: &mut RngStream, n: usize, mut sv_sampler: F) -> Result<ComplexMatrix>
where
    F: FnMut(&mut RngStream) -> Result<Vec<f64>>,
{
    if n == 0 {
        return Err(domain("N", "N >= 1", 0.0));
    }
    let s = sv_sampler(rng)?;
    if s.len() != n {
        return Err(Error::Dimension(format!("sv_sampler returned {} values, expected {n}", s.len())));
    }
    if let Some(&bad) = s.iter().find(|&&x| !(x > 0.0) || !x.is_finite()) {
        return Err(domain("singular value", "s > 0 and finite", bad));
    }
    let u = haar_unitary(rng, n)?;
    let v = haar_unitary(rng, n)?;
    let us = ComplexMatrix::from_fn(n, n, |i, j| u[(i, j)] * s[j])?;
    us.matmul(&v)
}

/// Ensemble families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    GinibreBeta1,
    GinibreBeta2,
    GinibreBeta4,
    IsotropicCustom,
}

impl Family {
    pub fn beta(self) -> Option<Beta> {
        match self {
            Family::GinibreBeta1 => Some(Beta::One),
            Family::GinibreBeta2 => Some(Beta::Two),
            Family::GinibreBeta4 => Some(Beta::Four),
            Family::IsotropicCustom => None,
        }
    }

    pub fn from_beta(b: Beta) -> Family {
        match b {
            Beta::One => Family::GinibreBeta1,
            Beta::Two => Family::GinibreBeta2,
            Beta::Four => Family::GinibreBeta4,
        }
    }
}

/// Quantity recorded per sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Observable {
    SvLyapunov,
    EvLyapunov,
    IncrementalSv,
    IncrementalRadius,
    TwoByTwoSchur,
}

/// Singular value law of an isotropic custom ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "law")]
pub enum SvLaw {
    /// Singular values of a complex Ginibre draw.
    Ginibre,
    /// All ones: Haar unitary factors.
    Unit,
    /// ln s i.i.d. normal with the given standard deviation.
    LogNormal { sigma: f64 },
}

impl Default for SvLaw {
    fn default() -> Self {
        SvLaw::Ginibre
    }
}

impl SvLaw {
    pub fn sample(self, rng: &mut RngStream, n: usize) -> Result<Vec<f64>> {
        match self {
            SvLaw::Ginibre => {
                let x = sample_ginibre(rng, Beta::Two, n)?;
                let s = log_singular_values(&[x])?;
                Ok(s.values.iter().map(|l| (0.5 * l).exp()).collect())
            }
            SvLaw::Unit => Ok(vec![1.0; n]),
            SvLaw::LogNormal { sigma } => {
                if !(sigma >= 0.0) || !sigma.is_finite() {
                    return Err(domain("sigma", "sigma >= 0", sigma));
                }
                Ok((0..n).map(|_| (sigma * rng.normal()).exp()).collect())
            }
        }
    }
}

/// Full description of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub family: Family,
    pub n: usize,
    pub t: usize,
    pub samples: usize,
    pub master_seed: u64,
    pub observable: Observable,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sv_law: Option<SvLaw>,
}

impl EnsembleSpec {
    pub fn new(family: Family, n: usize, t: usize, samples: usize, master_seed: u64, observable: Observable) -> Result<Self> {
        let s = EnsembleSpec {
            family,
            n,
            t,
            samples,
            master_seed,
            observable,
            sv_law: None,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(domain("N", "N >= 1", 0.0));
        }
        if self.t == 0 {
            return Err(domain("t", "t >= 1", 0.0));
        }
        if self.samples == 0 {
            return Err(domain("samples", "samples >= 1", 0.0));
        }
        if self.family != Family::IsotropicCustom && self.sv_law.is_some() {
            return Err(Error::Invalid("sv_law applies to isotropic-custom only".into()));
        }
        Ok(())
    }

    /// Size of the complex matrices actually multiplied.
    pub fn realized_dim(&self) -> usize {
        if self.family == Family::GinibreBeta4 {
            2 * self.n
        } else {
            self.n
        }
    }

    /// One factor of the chain.
    pub fn draw_factor(&self, rng: &mut RngStream) -> Result<ComplexMatrix> {
        match self.family.beta() {
            Some(b) => sample_ginibre(rng, b, self.n),
            None => {
                let law = self.sv_law.unwrap_or_default();
                let n = self.n;
                sample_isotropic_custom(rng, n, |r| law.sample(r, n))
            }
        }
    }

    /// The t factors of sample `i` (`[0]` is `X_1`).
    pub fn draw_chain(&self, i: u64) -> Result<Vec<ComplexMatrix>> {
        let mut rng = derive_stream(self.master_seed, i);
        (0..self.t).map(|_| self.draw_factor(&mut rng)).collect()
    }
}
