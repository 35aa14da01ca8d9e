//! The 2x2 chain in triangular (generalized Schur) form.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{check_chain, periodic_schur, ComplexMatrix};
use crate::error::{Error, Result};

/// Product of a 2x2 chain written as [[z1, Delta], [0, z2]] after a unitary
/// similarity, in log-magnitude form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchurData2x2 {
    pub log_z1: f64,
    pub log_z2: f64,
    pub phase_z1: f64,
    pub phase_z2: f64,
    pub log_abs_delta: f64,
}

/// Complex number stored as exp(log) * mantissa, |mantissa| in [0.5, 2) or 0.
#[derive(Debug, Clone, Copy)]
struct Scaled {
    log: f64,
    m: Complex64,
}

impl Scaled {
    fn zero() -> Self {
        Scaled {
            log: 0.0,
            m: Complex64::new(0.0, 0.0),
        }
    }

    fn from(z: Complex64) -> Self {
        Scaled { log: 0.0, m: z }.renorm()
    }

    fn renorm(self) -> Self {
        let a = self.m.norm();
        if a == 0.0 {
            return Scaled::zero();
        }
        Scaled {
            log: self.log + a.ln(),
            m: self.m / a,
        }
    }

    fn mul(self, z: Complex64) -> Self {
        Scaled {
            log: self.log,
            m: self.m * z,
        }
        .renorm()
    }

    fn add(self, other: Scaled) -> Self {
        if self.m.norm() == 0.0 {
            return other;
        }
        if other.m.norm() == 0.0 {
            return self;
        }
        let top = self.log.max(other.log);
        Scaled {
            log: top,
            m: self.m * (self.log - top).exp() + other.m * (other.log - top).exp(),
        }
        .renorm()
    }

    fn log_abs(self) -> f64 {
        if self.m.norm() == 0.0 {
            f64::NEG_INFINITY
        } else {
            self.log + self.m.norm().ln()
        }
    }
}

/// Triangularizes a chain of 2x2 factors by unitary similarities and
/// accumulates z1, z2 and Delta of the product (`factors[0]` = `X_1`).
pub fn schur_chain_2x2(factors: &[ComplexMatrix]) -> Result<SchurData2x2> {
    let n = check_chain(factors)?;
    if n != 2 {
        return Err(Error::Dimension(format!("schur_chain_2x2 needs 2x2 factors, got {n}x{n}")));
    }
    let tri = periodic_schur(factors)?;
    // P_k = T_k P_{k-1}: z1 <- a z1, Delta <- a Delta + d z2, z2 <- b z2
    let mut lz1 = 0.0;
    let mut lz2 = 0.0;
    let mut ph1 = 0.0;
    let mut ph2 = 0.0;
    let mut z2 = Scaled::from(Complex64::new(1.0, 0.0));
    let mut delta = Scaled::zero();
    for f in &tri {
        let a = f[(0, 0)];
        let d = f[(0, 1)];
        let b = f[(1, 1)];
        lz1 += a.norm().ln();
        lz2 += b.norm().ln();
        ph1 += a.arg();
        ph2 += b.arg();
        delta = delta.mul(a).add(z2.mul(d));
        z2 = z2.mul(b);
    }
    let tau = std::f64::consts::TAU;
    Ok(SchurData2x2 {
        log_z1: lz1,
        log_z2: lz2,
        phase_z1: ph1.rem_euclid(tau) % tau,
        phase_z2: ph2.rem_euclid(tau) % tau,
        log_abs_delta: delta.log_abs(),
    })
}

/// Largest finite-t exponent ln s_max / (2t) of the product [[z1, D], [0, z2]],
/// evaluated without cancellation. Never below max(ln|z1|, ln|z2|) / t.
pub fn max_exponent_2x2(sd: &SchurData2x2, t: usize) -> f64 {
    let tf = t as f64;
    let m = 2.0 * sd.log_z1.max(sd.log_z2); // ln max(|z1|^2, |z2|^2)
    let lq = 2.0 * sd.log_z1.min(sd.log_z2);
    let ld = 2.0 * sd.log_abs_delta;
    if m == f64::NEG_INFINITY {
        return if ld == f64::NEG_INFINITY { f64::NEG_INFINITY } else { ld / (2.0 * tf) };
    }
    if ld - m > 300.0 {
        // normalize by |Delta|^2 instead
        let u = (2.0 * sd.log_z1 - ld).exp();
        let v = (2.0 * sd.log_z2 - ld).exp();
        let p = 1.0 + u + v;
        let x = (p * p - 4.0 * u * v).max(0.0).sqrt();
        let ls = ld + ((p + x) / 2.0).ln();
        return ls.max(m) / (2.0 * tf);
    }
    let q = (lq - m).exp();
    let d = (ld - m).exp();
    if d == 0.0 {
        return m / (2.0 * tf);
    }
    let big_x = (1.0 - q) * (1.0 - q) + d * (2.0 + 2.0 * q + d);
    let extra = 0.5 * (d + d * (2.0 + 2.0 * q + d) / (big_x.sqrt() + 1.0 - q));
    (m + extra.ln_1p()) / (2.0 * tf)
}

#[cfg(test)]
mod tests {
    use super::super::test_util::*;
    use super::super::{log_eigenvalue_moduli, log_singular_values};
    use super::*;

    #[test]
    fn triangular_factors() {
        let f: Vec<ComplexMatrix> = (0..6)
            .map(|j| {
                ComplexMatrix::from_real(2, 2, &[1.5 + j as f64, 0.3, 0.0, 0.5 + 0.1 * j as f64]).unwrap()
            })
            .collect();
        let sd = schur_chain_2x2(&f).unwrap();
        let want: f64 = (0..6).map(|j| (1.5 + j as f64).ln()).sum();
        assert!((sd.log_z1.max(sd.log_z2) - want).abs() < 1e-12);
    }

    #[test]
    fn diagonal_chain() {
        let x = ComplexMatrix::from_real(2, 2, &[2.0, 0.0, 0.0, 0.5]).unwrap();
        let sd = schur_chain_2x2(&vec![x; 7]).unwrap();
        assert!((sd.log_z1 - 7.0 * 2f64.ln()).abs() < 1e-13);
        assert!((sd.log_z2 + 7.0 * 2f64.ln()).abs() < 1e-13);
        assert_eq!(sd.log_abs_delta, f64::NEG_INFINITY);
        assert_eq!(max_exponent_2x2(&sd, 7), sd.log_z1 / 7.0);
    }

    #[test]
    fn max_exponent_special_cases() {
        let sd = SchurData2x2 {
            log_z1: 0.0,
            log_z2: 0.0,
            phase_z1: 0.0,
            phase_z2: 0.0,
            log_abs_delta: f64::NEG_INFINITY,
        };
        assert_eq!(max_exponent_2x2(&sd, 3), 0.0);
        let sd = SchurData2x2 {
            log_z1: -4.0,
            log_z2: 9.0,
            log_abs_delta: f64::NEG_INFINITY,
            ..sd
        };
        assert_eq!(max_exponent_2x2(&sd, 3), 3.0);
    }

    #[test]
    fn consistent_with_svd_kernel() {
        for seed in 0..10 {
            for &t in &[1usize, 5, 40, 200] {
                let f = chain(2, t, seed + 100);
                let sd = schur_chain_2x2(&f).unwrap();
                let sv = log_singular_values(&f).unwrap();
                let top = sv.values[1] / (2.0 * t as f64);
                let mx = max_exponent_2x2(&sd, t);
                assert!((mx - top).abs() <= 1e-8 * top.abs().max(1.0), "seed={seed} t={t}");
                let ev = log_eigenvalue_moduli(&f).unwrap();
                let lo = sd.log_z1.min(sd.log_z2);
                let hi = sd.log_z1.max(sd.log_z2);
                assert!((ev.values[0] - lo).abs() < 1e-8 * lo.abs().max(1.0));
                assert!((ev.values[1] - hi).abs() < 1e-8 * hi.abs().max(1.0));
                assert!(mx >= hi / t as f64);
            }
        }
    }
}
