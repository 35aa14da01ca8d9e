//! Log singular values of long products by a scaled one-sided Jacobi method.
//!
//! The running product is kept as `Pi = U diag(e^l) V^dagger` with `U` having
//! orthonormal columns and `l` the log singular values; `V` is never needed.
//! A new factor gives `X U diag(e^l)`, whose columns are re-orthogonalized by
//! one-sided Jacobi rotations written in terms of unit columns and their log
//! scales, so nothing leaves the double range however wide `l` gets.

use num_complex::Complex64;

use super::{check_chain, ComplexMatrix, LogSpectrum, SpectrumKind, ZERO};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 60;

/// Incremental log-singular-value state of a product `X_k ... X_1`.
#[derive(Debug, Clone)]
pub struct SvdAccumulator {
    n: usize,
    /// column-major: column j occupies cols[j*n .. (j+1)*n]
    cols: Vec<Complex64>,
    logs: Vec<f64>,
    steps: usize,
    scratch: Vec<Complex64>,
}

impl SvdAccumulator {
    pub fn new(n: usize) -> Self {
        let mut cols = vec![ZERO; n * n];
        for j in 0..n {
            cols[j * n + j] = Complex64::new(1.0, 0.0);
        }
        SvdAccumulator {
            n,
            cols,
            logs: vec![0.0; n],
            steps: 0,
            scratch: vec![ZERO; n * n],
        }
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Multiplies the product from the left by `x`.
    pub fn push(&mut self, x: &ComplexMatrix) -> Result<()> {
        let n = self.n;
        if x.rows() != n || x.cols() != n {
            return Err(Error::Dimension(format!(
                "factor is {}x{}, expected {n}x{n}",
                x.rows(),
                x.cols()
            )));
        }
        let xd = x.as_slice();
        for j in 0..n {
            let u = &self.cols[j * n..(j + 1) * n];
            for i in 0..n {
                let row = &xd[i * n..(i + 1) * n];
                let mut s = ZERO;
                for (a, b) in row.iter().zip(u) {
                    s += a * b;
                }
                self.scratch[j * n + i] = s;
            }
        }
        std::mem::swap(&mut self.cols, &mut self.scratch);
        for j in 0..n {
            self.normalize(j);
        }
        self.sort_columns();
        self.orthogonalize()?;
        self.steps += 1;
        Ok(())
    }

    fn normalize(&mut self, j: usize) {
        let n = self.n;
        let col = &mut self.cols[j * n..(j + 1) * n];
        if self.logs[j] == f64::NEG_INFINITY {
            col.iter_mut().for_each(|z| *z = ZERO);
            return;
        }
        let nrm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if nrm == 0.0 {
            self.logs[j] = f64::NEG_INFINITY;
            return;
        }
        self.logs[j] += nrm.ln();
        let inv = 1.0 / nrm;
        col.iter_mut().for_each(|z| *z *= inv);
    }

    fn sort_columns(&mut self) {
        let n = self.n;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| self.logs[b].total_cmp(&self.logs[a]));
        if order.iter().enumerate().all(|(i, &o)| i == o) {
            return;
        }
        for (dst, &src) in order.iter().enumerate() {
            self.scratch[dst * n..(dst + 1) * n].copy_from_slice(&self.cols[src * n..(src + 1) * n]);
        }
        std::mem::swap(&mut self.cols, &mut self.scratch);
        let logs: Vec<f64> = order.iter().map(|&o| self.logs[o]).collect();
        self.logs = logs;
    }

    fn orthogonalize(&mut self) -> Result<()> {
        let n = self.n;
        let tol = (n as f64).sqrt() * f64::EPSILON;
        for _ in 0..MAX_SWEEPS {
            let mut rotated = false;
            for i in 0..n {
                for j in i + 1..n {
                    if self.logs[i] == f64::NEG_INFINITY || self.logs[j] == f64::NEG_INFINITY {
                        continue;
                    }
                    if self.rotate(i, j, tol) {
                        rotated = true;
                    }
                }
            }
            if !rotated {
                return Ok(());
            }
        }
        Err(Error::NoConvergence {
            what: "one-sided Jacobi sweeps",
            bound: f64::NAN,
        })
    }

    /// One Jacobi rotation on columns (i, j); returns false when they are
    /// already orthogonal to working precision.
    fn rotate(&mut self, i: usize, j: usize, tol: f64) -> bool {
        let n = self.n;
        let (big, small) = if self.logs[i] >= self.logs[j] { (i, j) } else { (j, i) };
        let mut a = 0.0;
        let mut b = 0.0;
        let mut g = ZERO;
        {
            let cu = &self.cols[big * n..(big + 1) * n];
            let cv = &self.cols[small * n..(small + 1) * n];
            for (x, y) in cu.iter().zip(cv) {
                a += x.norm_sqr();
                b += y.norm_sqr();
                g += x.conj() * y;
            }
        }
        let gabs = g.norm();
        if gabs <= tol * (a * b).sqrt() {
            return false;
        }
        let rho = (self.logs[small] - self.logs[big]).exp();
        let zr = (rho * rho * b - a) / (2.0 * gabs);
        let sign = if zr >= 0.0 { 1.0 } else { -1.0 };
        let t_over_rho = sign / (zr.abs() + (rho * rho + zr * zr).sqrt());
        let tau = t_over_rho * rho;
        let c = 1.0 / (1.0 + tau * tau).sqrt();
        let ph = g.conj() / gabs;
        let k_uv = -c * tau * rho * ph; // coefficient of v in the new big column
        let k_vu = c * t_over_rho; // coefficient of u in the new small column
        let k_vv = c * ph;
        for r in 0..n {
            let x = self.cols[big * n + r];
            let y = self.cols[small * n + r];
            self.cols[big * n + r] = x * c + y * k_uv;
            self.cols[small * n + r] = x * k_vu + y * k_vv;
        }
        self.normalize(big);
        self.normalize(small);
        true
    }

    /// Current spectrum: ln s_n = 2 l_n, ascending.
    pub fn spectrum(&self) -> LogSpectrum {
        let mut values: Vec<f64> = self.logs.iter().map(|&l| 2.0 * l).collect();
        values.sort_by(f64::total_cmp);
        LogSpectrum {
            kind: SpectrumKind::LogSingular,
            values,
            angles: None,
            t: self.steps,
            n: self.n,
        }
    }
}

/// Logarithms ln s_n of the eigenvalues of `Pi^dagger Pi`, `Pi = X_t ... X_1`
/// (`factors[0]` is `X_1`), sorted ascending.
pub fn log_singular_values(factors: &[ComplexMatrix]) -> Result<LogSpectrum> {
    let n = check_chain(factors)?;
    let mut acc = SvdAccumulator::new(n);
    for f in factors {
        acc.push(f)?;
    }
    Ok(acc.spectrum())
}
