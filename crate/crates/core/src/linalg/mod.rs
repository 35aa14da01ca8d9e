//! Dense complex matrices and spectral kernels for long matrix products.

mod chain2;
mod schur;
mod svd;

use std::ops::Index;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use chain2::{max_exponent_2x2, schur_chain_2x2, SchurData2x2};
pub use schur::log_eigenvalue_moduli;
pub use svd::{log_singular_values, SvdAccumulator};

pub(crate) use schur::periodic_schur;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Dense complex matrix, row-major. Entries are finite.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension("matrix dimensions must be positive".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Invalid("matrix entries must be finite".into()));
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    /// Real matrix from row-major entries.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::new(rows, cols, data.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn from_fn<F: FnMut(usize, usize) -> Complex64>(rows: usize, cols: usize, mut f: F) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::new(rows, cols, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn diagonal(values: &[Complex64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m.data[i * n + i] = v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub(crate) fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let orow = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn adjoint(&self) -> ComplexMatrix {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn sub(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension("shape mismatch in subtraction".into()));
        }
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

/// Which spectrum a [`LogSpectrum`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumKind {
    /// ln s_n, with s_n the eigenvalues of Pi^dagger Pi.
    LogSingular,
    /// ln R_n, with R_n the eigenvalue moduli of Pi.
    LogModulus,
}

/// Sorted (ascending) log-domain spectrum of a product of `t` factors.
///
/// For `LogSingular` the values are ln s_n, so they sum to `2 ln|det Pi|`;
/// for `LogModulus` they sum to `ln|det Pi|`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogSpectrum {
    pub kind: SpectrumKind,
    pub values: Vec<f64>,
    pub angles: Option<Vec<f64>>,
    pub t: usize,
    pub n: usize,
}

impl LogSpectrum {
    /// True when some value is the -inf sentinel of an exactly singular product.
    pub fn is_singular(&self) -> bool {
        self.values.iter().any(|&v| v == f64::NEG_INFINITY)
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }
}

pub(crate) fn check_chain(factors: &[ComplexMatrix]) -> Result<usize> {
    let first = factors
        .first()
        .ok_or_else(|| Error::Dimension("empty factor list (t must be at least 1)".into()))?;
    let n = first.rows;
    for (j, f) in factors.iter().enumerate() {
        if f.rows != n || f.cols != n {
            return Err(Error::Dimension(format!(
                "factor {j} is {}x{}, expected {n}x{n}",
                f.rows, f.cols
            )));
        }
    }
    Ok(n)
}

/// Sum over factors of ln|det X_j| (via QR of each factor).
pub fn log_abs_det_chain(factors: &[ComplexMatrix]) -> Result<f64> {
    check_chain(factors)?;
    let mut acc = 0.0;
    for f in factors {
        let mut a = f.clone();
        let n = a.rows;
        for k in 0..n {
            match householder_column(&a, k, k) {
                Some((v, beta, alpha)) => {
                    apply_left(&mut a, &v, beta, k, k);
                    acc += alpha.norm().ln();
                }
                None => return Ok(f64::NEG_INFINITY),
            }
        }
    }
    Ok(acc)
}

/// Householder reflector for column `col` of `a`, rows `row0..`:
/// returns (v, beta, alpha) with (I - beta v v^dagger) x = alpha e_1.
pub(crate) fn householder_column(
    a: &ComplexMatrix,
    row0: usize,
    col: usize,
) -> Option<(Vec<Complex64>, f64, Complex64)> {
    let n = a.cols;
    let x: Vec<Complex64> = (row0..a.rows).map(|i| a.data[i * n + col]).collect();
    householder(&x)
}

pub(crate) fn householder(x: &[Complex64]) -> Option<(Vec<Complex64>, f64, Complex64)> {
    let scale = x.iter().map(|z| z.re.abs().max(z.im.abs())).fold(0.0, f64::max);
    if scale == 0.0 {
        return None;
    }
    let norm = scale * x.iter().map(|z| (z / scale).norm_sqr()).sum::<f64>().sqrt();
    let x0 = x[0];
    let phase = if x0 == ZERO { ONE } else { x0 / x0.norm() };
    let alpha = -phase * norm;
    let mut v = x.to_vec();
    v[0] -= alpha;
    let vn = v.iter().map(|z| z.norm_sqr()).sum::<f64>();
    if vn == 0.0 {
        return None;
    }
    Some((v, 2.0 / vn, alpha))
}

/// a[row0.., col0..] <- (I - beta v v^dagger) a[row0.., col0..]
pub(crate) fn apply_left(a: &mut ComplexMatrix, v: &[Complex64], beta: f64, row0: usize, col0: usize) {
    let n = a.cols;
    for j in col0..n {
        let mut s = ZERO;
        for (i, vi) in v.iter().enumerate() {
            s += vi.conj() * a.data[(row0 + i) * n + j];
        }
        if s == ZERO {
            continue;
        }
        s *= beta;
        for (i, vi) in v.iter().enumerate() {
            a.data[(row0 + i) * n + j] -= vi * s;
        }
    }
}

/// a[.., col0..] <- a[.., col0..] (I - beta v v^dagger)
pub(crate) fn apply_right(a: &mut ComplexMatrix, v: &[Complex64], beta: f64, col0: usize) {
    let n = a.cols;
    for i in 0..a.rows {
        let row = &mut a.data[i * n + col0..i * n + col0 + v.len()];
        let mut s = ZERO;
        for (x, vj) in row.iter().zip(v) {
            s += x * vj;
        }
        if s == ZERO {
            continue;
        }
        s *= beta;
        for (x, vj) in row.iter_mut().zip(v) {
            *x -= s * vj.conj();
        }
    }
}

/// QR factorization with R having a strictly positive real diagonal.
pub fn qr_positive(a: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "qr_positive needs a square matrix, got {}x{}",
            a.rows, a.cols
        )));
    }
    let n = a.rows;
    let mut r = a.clone();
    let mut q = ComplexMatrix::identity(n);
    for k in 0..n {
        let (v, beta, alpha) = match householder_column(&r, k, k) {
            Some(h) => h,
            None => return Err(Error::RankDeficient { pivot: k }),
        };
        if alpha.norm() == 0.0 || !alpha.norm().is_normal() {
            return Err(Error::RankDeficient { pivot: k });
        }
        apply_left(&mut r, &v, beta, k, k);
        apply_right(&mut q, &v, beta, k);
        for i in k + 1..n {
            r.data[i * n + k] = ZERO;
        }
        r.data[k * n + k] = alpha;
    }
    // fix phases so that diag(R) > 0
    for k in 0..n {
        let d = r.data[k * n + k];
        let ph = d / d.norm();
        for j in 0..n {
            r.data[k * n + j] *= ph.conj();
        }
        for i in 0..n {
            q.data[i * n + k] *= ph;
        }
        r.data[k * n + k] = Complex64::new(d.norm(), 0.0);
    }
    Ok((q, r))
}

#[cfg(test)]
pub(crate) mod test_util {
    use super::*;
    use rand::SeedableRng;
    use rand_distr::{Distribution, StandardNormal};

    pub fn ginibre(n: usize, seed: u64) -> ComplexMatrix {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        ComplexMatrix::from_fn(n, n, |_, _| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(s * re, s * im)
        })
        .unwrap()
    }

    pub fn chain(n: usize, t: usize, seed: u64) -> Vec<ComplexMatrix> {
        (0..t).map(|j| ginibre(n, seed * 1000 + j as u64)).collect()
    }

    pub fn product(factors: &[ComplexMatrix]) -> ComplexMatrix {
        let n = factors[0].rows();
        factors
            .iter()
            .fold(ComplexMatrix::identity(n), |acc, f| f.matmul(&acc).unwrap())
    }
}
