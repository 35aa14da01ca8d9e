//! Fuss-Catalan numbers, the factorial Hankel determinant and its cofactors,
//! and permanents.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use super::gamma::{ln_factorial, ln_gamma};
use crate::error::{domain, Error, Result};

pub const MAX_HANKEL_N: usize = 12;
pub const MAX_PERMANENT_N: usize = 12;

fn binomial(n: u64, k: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Fuss-Catalan number binom((t+1)k, k) / (tk + 1), extended to real k through
/// gamma functions. Exact (big integer) for integer k <= 20.
pub fn fuss_catalan(t: u64, k: f64) -> Result<f64> {
    if t == 0 {
        return Err(domain("t", "t >= 1", 0.0));
    }
    let tf = t as f64;
    if !(k > -1.0 / (tf + 1.0)) || !k.is_finite() {
        return Err(domain("k", "k > -1/(t+1)", k));
    }
    if k.fract() == 0.0 && k <= 20.0 {
        let ki = k as u64;
        let num = binomial((t + 1) * ki, ki);
        let den = BigUint::from(t * ki + 1);
        let q = &num / &den;
        debug_assert!((&num % &den).is_zero());
        return q
            .to_f64()
            .ok_or_else(|| Error::Invalid("Fuss-Catalan number overflows f64".into()));
    }
    let v = ln_gamma((tf + 1.0) * k + 1.0) - ln_gamma(k + 1.0) - ln_gamma(tf * k + 2.0);
    Ok(v.exp())
}

fn check_hankel_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_HANKEL_N {
        return Err(domain("N", "1 <= N <= 12", n as f64));
    }
    Ok(())
}

/// ln det[Gamma(a+b-1)]_{a,b=1..N} = 2 sum_a ln Gamma(a); valid for any N.
pub fn log_hankel_gamma_det(n: usize) -> f64 {
    (1..=n).map(|a| 2.0 * ln_factorial(a as u32 - 1)).sum()
}

/// det[Gamma(a+b-1)]_{a,b=1..N} = prod_a Gamma(a)^2, N <= 12.
pub fn hankel_gamma_det(n: usize) -> Result<f64> {
    check_hankel_n(n)?;
    let mut acc = BigUint::one();
    for a in 1..=n {
        let f = factorial_big(a as u64 - 1);
        acc *= &f * &f;
    }
    Ok(acc.to_f64().unwrap_or(f64::INFINITY))
}

fn factorial_big(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// Determinant of an integer matrix by fraction-free (Bareiss) elimination.
fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

fn factorial_hankel(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|a| (0..n).map(|b| BigInt::from(factorial_big((a + b) as u64))).collect())
        .collect()
}

/// The same determinant evaluated directly by exact elimination.
pub fn hankel_gamma_det_direct(n: usize) -> Result<f64> {
    check_hankel_n(n)?;
    Ok(bareiss_det(factorial_hankel(n)).to_f64().unwrap_or(f64::INFINITY))
}

/// Cofactor C_jl of [Gamma(a+b-1)] from the closed-form sum, where terms with
/// 1/Gamma of a nonpositive integer vanish.
pub fn hankel_cofactor(n: usize, j: usize, l: usize) -> Result<f64> {
    check_hankel_n(n)?;
    if j == 0 || l == 0 || j > n || l > n {
        return Err(Error::Invalid(format!(
            "cofactor indices ({j}, {l}) out of range 1..={n}"
        )));
    }
    Ok(hankel_inverse_entry(n, j, l) * hankel_gamma_det(n)?)
}

/// (H^{-1})_{jl} = C_jl / det H from the closed form; all terms of the sum
/// have the same sign, so this is accurate to rounding.
pub(crate) fn hankel_inverse_entry(n: usize, j: usize, l: usize) -> f64 {
    let lj = ln_factorial(j as u32 - 1);
    let ll = ln_factorial(l as u32 - 1);
    let mut sum = 0.0;
    for k in 0..n {
        if k + 1 < j || k + 1 < l {
            continue;
        }
        let lk = ln_factorial(k as u32);
        let v = 2.0 * (lk - lj - ll) - ln_factorial((k + 1 - j) as u32) - ln_factorial((k + 1 - l) as u32);
        sum += v.exp();
    }
    if (j + l) % 2 == 0 {
        sum
    } else {
        -sum
    }
}

/// Cofactor C_jl from the signed minor, evaluated exactly.
pub fn hankel_cofactor_direct(n: usize, j: usize, l: usize) -> Result<f64> {
    check_hankel_n(n)?;
    if j == 0 || l == 0 || j > n || l > n {
        return Err(Error::Invalid(format!(
            "cofactor indices ({j}, {l}) out of range 1..={n}"
        )));
    }
    let full = factorial_hankel(n);
    let minor: Vec<Vec<BigInt>> = full
        .into_iter()
        .enumerate()
        .filter(|(r, _)| *r != j - 1)
        .map(|(_, row)| {
            row.into_iter()
                .enumerate()
                .filter(|(c, _)| *c != l - 1)
                .map(|(_, v)| v)
                .collect()
        })
        .collect();
    let d = bareiss_det(minor).to_f64().unwrap_or(f64::INFINITY);
    Ok(if (j + l) % 2 == 0 { d } else { -d })
}

/// Permanent of a square matrix given by rows (Ryser's formula, Gray-code order).
pub fn permanent(rows: &[Vec<f64>]) -> Result<f64> {
    let n = rows.len();
    if n > MAX_PERMANENT_N {
        return Err(domain("permanent size", "size <= 12", n as f64));
    }
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::Dimension("permanent needs a square matrix".into()));
    }
    if n == 0 {
        return Ok(1.0);
    }
    let mut row_sums = vec![0.0; n];
    let mut total = 0.0;
    let mut gray: u32 = 0;
    for k in 1u32..(1u32 << n) {
        let next = k ^ (k >> 1);
        let changed = (gray ^ next).trailing_zeros() as usize;
        let added = next & (1 << changed) != 0;
        for (s, row) in row_sums.iter_mut().zip(rows) {
            if added {
                *s += row[changed];
            } else {
                *s -= row[changed];
            }
        }
        gray = next;
        let prod: f64 = row_sums.iter().product();
        if gray.count_ones() % 2 == 0 {
            total += prod;
        } else {
            total -= prod;
        }
    }
    Ok(if n % 2 == 0 { total } else { -total })
}
