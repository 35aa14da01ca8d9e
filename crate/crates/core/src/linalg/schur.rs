//! Eigenvalue moduli of long products by a periodic Schur reduction.
//!
//! The chain `A_t ... A_1` is transformed by unitary similarities
//! `A_k <- Z_k^dagger A_k Z_{k-1}` (with `Z_t = Z_0`) into a form where
//! `A_1, ..., A_{t-1}` are upper triangular and `A_t` is upper Hessenberg;
//! single-shift periodic QR sweeps then drive `A_t` to triangular form. The
//! eigenvalues of the product are the products of the diagonal entries, so
//! their logarithms are sums of moderate numbers and never under/overflow.

use std::f64::consts::TAU;

use num_complex::Complex64;

use super::{apply_left, apply_right, check_chain, householder_column, ComplexMatrix, LogSpectrum, SpectrumKind, ZERO};
use crate::error::{Error, Result};

/// Rotation [[c, s], [-conj(s), c]] with c real.
#[derive(Debug, Clone, Copy)]
struct Givens {
    c: f64,
    s: Complex64,
}

impl Givens {
    /// Rotation mapping (x, y) to (r, 0).
    fn zeroing(x: Complex64, y: Complex64) -> Givens {
        if y == ZERO {
            return Givens { c: 1.0, s: ZERO };
        }
        let ax = x.norm();
        let ay = y.norm();
        if ax == 0.0 {
            return Givens {
                c: 0.0,
                s: y.conj() / ay,
            };
        }
        let norm = ax.hypot(ay);
        Givens {
            c: ax / norm,
            s: (x / ax) * y.conj() / norm,
        }
    }

    /// rows (i, i+1) of `a` <- G rows
    fn rows(&self, a: &mut ComplexMatrix, i: usize) {
        let n = a.cols();
        let d = a.data_mut();
        for j in 0..n {
            let x = d[i * n + j];
            let y = d[(i + 1) * n + j];
            d[i * n + j] = x * self.c + self.s * y;
            d[(i + 1) * n + j] = -self.s.conj() * x + y * self.c;
        }
    }

    /// columns (i, i+1) of `a` <- columns G^dagger
    fn cols(&self, a: &mut ComplexMatrix, i: usize) {
        let n = a.cols();
        let rows = a.rows();
        let d = a.data_mut();
        for r in 0..rows {
            let x = d[r * n + i];
            let y = d[r * n + i + 1];
            d[r * n + i] = x * self.c + y * self.s.conj();
            d[r * n + i + 1] = -x * self.s + y * self.c;
        }
    }
}

/// Reduces the chain (`factors[0]` = `X_1`) to periodic Schur form: every
/// returned factor is upper triangular and the product of the returned
/// factors is unitarily similar to the product of the inputs.
pub(crate) fn periodic_schur(factors: &[ComplexMatrix]) -> Result<Vec<ComplexMatrix>> {
    let n = check_chain(factors)?;
    let t = factors.len();
    let mut a: Vec<ComplexMatrix> = factors.to_vec();
    if n == 1 {
        return Ok(a);
    }

    // A_1 .. A_{t-1} upper triangular
    for k in 0..t - 1 {
        triangularize_from(&mut a, k, 0);
    }

    // A_t to Hessenberg, restoring the triangular factors after each column
    for j in 0..n.saturating_sub(2) {
        let Some((v, beta, _)) = householder_column(&a[t - 1], j + 1, j) else {
            continue;
        };
        apply_left(&mut a[t - 1], &v, beta, j + 1, 0);
        apply_right(&mut a[0], &v, beta, j + 1);
        let d = a[t - 1].data_mut();
        for i in j + 2..n {
            d[i * n + j] = ZERO;
        }
        for k in 0..t - 1 {
            triangularize_from(&mut a, k, j + 1);
        }
    }

    qr_sweeps(&mut a, n)?;
    Ok(a)
}

/// Householder QR of the trailing block a[k][from.., from..], with the
/// reflectors passed on to a[k+1] from the right.
fn triangularize_from(a: &mut [ComplexMatrix], k: usize, from: usize) {
    let n = a[k].rows();
    for c in from..n - 1 {
        let Some((v, beta, alpha)) = householder_column(&a[k], c, c) else {
            continue;
        };
        apply_left(&mut a[k], &v, beta, c, c);
        apply_right(&mut a[k + 1], &v, beta, c);
        let d = a[k].data_mut();
        d[c * n + c] = alpha;
        for i in c + 1..n {
            d[i * n + c] = ZERO;
        }
    }
}

fn qr_sweeps(a: &mut [ComplexMatrix], n: usize) -> Result<()> {
    let t = a.len();
    let eps = f64::EPSILON;
    let h_norm = a[t - 1].frobenius_norm().max(f64::MIN_POSITIVE);
    let mut hi = n - 1;
    let mut since_deflation = 0usize;
    let mut total = 0usize;
    let max_iter = 60 * n;
    while hi > 0 {
        let mut lo = hi;
        while lo > 0 {
            let h = &a[t - 1];
            let sub = h[(lo, lo - 1)].norm();
            let mut tol = eps * (h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm());
            if tol == 0.0 {
                tol = eps * h_norm;
            }
            if sub <= tol {
                a[t - 1].data_mut()[lo * n + lo - 1] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        if total >= max_iter {
            return Err(Error::NoConvergence {
                what: "periodic QR iteration",
                bound: a[t - 1][(hi, hi - 1)].norm() / h_norm,
            });
        }
        let (shift, shift_log) = wilkinson_shift(a, hi, since_deflation);
        chase(a, lo, hi, shift, shift_log);
        since_deflation += 1;
        total += 1;
    }
    Ok(())
}

/// Shift from the trailing 2x2 block product, as (mantissa, log scale).
fn wilkinson_shift(a: &[ComplexMatrix], hi: usize, iter: usize) -> (Complex64, f64) {
    let mut p = [[Complex64::new(1.0, 0.0), ZERO], [ZERO, Complex64::new(1.0, 0.0)]];
    let mut log_scale = 0.0;
    for f in a {
        let b = [
            [f[(hi - 1, hi - 1)], f[(hi - 1, hi)]],
            [f[(hi, hi - 1)], f[(hi, hi)]],
        ];
        let mut q = [[ZERO; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                q[i][j] = b[i][0] * p[0][j] + b[i][1] * p[1][j];
            }
        }
        let m = q
            .iter()
            .flatten()
            .map(|z| z.re.abs().max(z.im.abs()))
            .fold(0.0, f64::max);
        if m == 0.0 {
            return (ZERO, 0.0);
        }
        for row in q.iter_mut() {
            for z in row.iter_mut() {
                *z /= m;
            }
        }
        log_scale += m.ln();
        p = q;
    }
    let (pa, pb, pc, pd) = (p[0][0], p[0][1], p[1][0], p[1][1]);
    if iter > 0 && iter % 10 == 0 {
        // exceptional shift
        let ang = 0.7 * iter as f64;
        return (pd + Complex64::from_polar(0.75 * (pc.norm() + pd.norm()), ang), log_scale);
    }
    let half = (pa - pd) * 0.5;
    let disc = (half * half + pb * pc).sqrt();
    let den1 = half + disc;
    let den2 = half - disc;
    let den = if den1.norm() >= den2.norm() { den1 } else { den2 };
    let shift = if den == ZERO { pd } else { pd - pb * pc / den };
    (shift, log_scale)
}

fn chase(a: &mut [ComplexMatrix], lo: usize, hi: usize, shift: Complex64, shift_log: f64) {
    let t = a.len();
    // first column of (product - shift) restricted to the window
    let mut r_log = 0.0;
    let mut r_phase = Complex64::new(1.0, 0.0);
    for f in &a[..t - 1] {
        let d = f[(lo, lo)];
        let m = d.norm();
        if m == 0.0 {
            r_log = f64::NEG_INFINITY;
            break;
        }
        r_log += m.ln();
        r_phase *= d / m;
    }
    let h00 = a[t - 1][(lo, lo)];
    let h10 = a[t - 1][(lo + 1, lo)];
    let shift_mag_log = if shift == ZERO { f64::NEG_INFINITY } else { shift_log + shift.norm().ln() };
    let top = r_log + h00.norm().max(h10.norm()).ln();
    let m = top.max(shift_mag_log);
    let (mut x, y) = if m == f64::NEG_INFINITY {
        (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0))
    } else {
        let rs = if r_log == f64::NEG_INFINITY { 0.0 } else { (r_log - m).exp() };
        let ss = if shift == ZERO { 0.0 } else { (shift_log - m).exp() };
        (r_phase * h00 * rs - shift * ss, r_phase * h10 * rs)
    };
    if x == ZERO && y == ZERO {
        x = Complex64::new(1.0, 0.0);
    }
    let mut g = Givens::zeroing(x, y);
    let mut pair = lo;
    loop {
        g.rows(&mut a[t - 1], pair);
        if pair > lo {
            let n = a[t - 1].cols();
            a[t - 1].data_mut()[(pair + 1) * n + pair - 1] = ZERO;
        }
        g.cols(&mut a[0], pair);
        for k in 0..t - 1 {
            let gk = Givens::zeroing(a[k][(pair, pair)], a[k][(pair + 1, pair)]);
            gk.rows(&mut a[k], pair);
            let n = a[k].cols();
            a[k].data_mut()[(pair + 1) * n + pair] = ZERO;
            gk.cols(&mut a[k + 1], pair);
        }
        if pair + 2 > hi {
            break;
        }
        let h = &a[t - 1];
        g = Givens::zeroing(h[(pair + 1, pair)], h[(pair + 2, pair)]);
        pair += 1;
    }
}

/// Logarithms ln R_n of the eigenvalue moduli of `Pi = X_t ... X_1`
/// (`factors[0]` is `X_1`), ascending, with the eigenvalue arguments in [0, 2 pi).
pub fn log_eigenvalue_moduli(factors: &[ComplexMatrix]) -> Result<LogSpectrum> {
    let n = check_chain(factors)?;
    let tri = periodic_schur(factors)?;
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let mut lm = 0.0;
            let mut ang = 0.0;
            for f in &tri {
                let d = f[(i, i)];
                lm += d.norm().ln();
                if d != ZERO {
                    ang += d.arg();
                }
            }
            (lm, ang.rem_euclid(TAU) % TAU)
        })
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(LogSpectrum {
        kind: SpectrumKind::LogModulus,
        values: pairs.iter().map(|p| p.0).collect(),
        angles: Some(pairs.iter().map(|p| p.1).collect()),
        t: factors.len(),
        n,
    })
}
