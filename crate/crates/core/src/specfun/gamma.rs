//! Log-gamma, polygamma and the inverse of the digamma function.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// Bernoulli numbers B_2, B_4, ..., B_20.
const BERNOULLI: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

const SERIES_TERMS: usize = 40;

/// zeta(k) - 1 for k = 2..SERIES_TERMS+1, by a partial sum up to n = 9
/// plus an Euler-Maclaurin tail from n = 10.
fn zeta_minus_one() -> &'static [f64; SERIES_TERMS] {
    static TABLE: OnceLock<[f64; SERIES_TERMS]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut out = [0.0; SERIES_TERMS];
        let big_n = 10.0_f64;
        for (idx, slot) in out.iter_mut().enumerate() {
            let k = (idx + 2) as f64;
            let mut tail = big_n.powf(1.0 - k) / (k - 1.0) + 0.5 * big_n.powf(-k);
            // B_{2j}/(2j)! * k (k+1) ... (k+2j-2) * N^{-k-2j+1}
            let mut rising = k;
            let mut fact = 2.0;
            let mut power = big_n.powf(-k - 1.0);
            for j in 1..=BERNOULLI.len() {
                tail += BERNOULLI[j - 1] / fact * rising * power;
                let jj = j as f64;
                rising *= (k + 2.0 * jj - 1.0) * (k + 2.0 * jj);
                fact *= (2.0 * jj + 1.0) * (2.0 * jj + 2.0);
                power /= big_n * big_n;
            }
            let mut head = 0.0;
            for n in (2..10).rev() {
                head += (n as f64).powf(-k);
            }
            *slot = head + tail;
        }
        out
    })
}

/// ln Gamma(2 + eps) for |eps| <= 1/2.
fn ln_gamma_two_plus(eps: f64) -> f64 {
    let z = zeta_minus_one();
    let mut sum = 0.0;
    let mut k = SERIES_TERMS;
    // Horner in eps over the coefficients (-1)^k (zeta(k)-1)/k.
    while k >= 1 {
        let order = (k + 1) as f64;
        let sign = if (k + 1) % 2 == 0 { 1.0 } else { -1.0 };
        sum = sum * eps + sign * z[k - 1] / order;
        k -= 1;
    }
    (1.0 - EULER_GAMMA) * eps + sum * eps * eps
}

fn stirling_tail(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut acc = 0.0;
    let mut p = inv;
    for (k, b) in BERNOULLI.iter().take(8).enumerate() {
        let kk = (k + 1) as f64;
        acc += b / (2.0 * kk * (2.0 * kk - 1.0)) * p;
        p *= inv2;
    }
    acc
}

/// Unchecked ln Gamma(x) for x > 0.
pub(crate) fn ln_gamma(x: f64) -> f64 {
    if !(x > 0.0) {
        return f64::NAN;
    }
    if x.is_infinite() {
        return f64::INFINITY;
    }
    if x < 0.5 {
        ln_gamma_two_plus(x) - x.ln_1p() - x.ln()
    } else if x < 1.5 {
        let eps = x - 1.0;
        ln_gamma_two_plus(eps) - eps.ln_1p()
    } else if x <= 2.5 {
        ln_gamma_two_plus(x - 2.0)
    } else if x < 10.0 {
        let n = (x - 1.5).floor();
        let y = x - n;
        let mut prod = 1.0;
        let mut k = 0.0;
        while k < n {
            prod *= y + k;
            k += 1.0;
        }
        ln_gamma_two_plus(y - 2.0) + prod.ln()
    } else {
        (x - 0.5) * x.ln() - x + HALF_LN_2PI + stirling_tail(x)
    }
}

/// Natural logarithm of the gamma function for x > 0.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(domain("x", "x > 0", x));
    }
    Ok(ln_gamma(x))
}

/// ln Gamma(z) for Re z > 0 (principal value up to a multiple of 2 pi i).
pub(crate) fn ln_gamma_complex(z: Complex64) -> Complex64 {
    let mut w = z;
    let mut prod = Complex64::new(1.0, 0.0);
    while w.norm_sqr() < 144.0 {
        prod *= w;
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut p = inv;
    for (k, b) in BERNOULLI.iter().take(8).enumerate() {
        let kk = (k + 1) as f64;
        acc += p * (b / (2.0 * kk * (2.0 * kk - 1.0)));
        p *= inv2;
    }
    (w - 0.5) * w.ln() - w + HALF_LN_2PI + acc - prod.ln()
}

fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Unchecked polygamma psi^(n)(x) for x > 0.
pub(crate) fn psi_n(n: u32, x: f64) -> f64 {
    if n == 0 {
        return digamma(x);
    }
    let nf = n as f64;
    let n_fact = factorial(n);
    let threshold = 10.0 + 2.0 * nf;
    let mut acc = 0.0;
    let mut y = x;
    while y < threshold {
        acc += n_fact / y.powi(n as i32 + 1);
        y += 1.0;
    }
    let inv = 1.0 / y;
    let mut asym = factorial(n - 1) * inv.powi(n as i32) + 0.5 * n_fact * inv.powi(n as i32 + 1);
    // B_{2k} (2k+n-1)! / (2k)! / y^{2k+n}
    // (2k+n-1)!/(2k)! starting at k = 1
    let mut ratio = factorial(n + 1) / 2.0;
    let mut p = inv.powi(n as i32 + 2);
    let inv2 = inv * inv;
    for (k, b) in BERNOULLI.iter().enumerate() {
        asym += b * ratio * p;
        let kk = (k + 1) as f64;
        // advance (2k+n-1)!/(2k)! -> (2k+n+1)!/(2k+2)!
        ratio *= (2.0 * kk + nf) * (2.0 * kk + nf + 1.0) / ((2.0 * kk + 1.0) * (2.0 * kk + 2.0));
        p *= inv2;
    }
    let total = acc + asym;
    if n % 2 == 1 {
        total
    } else {
        -total
    }
}

pub(crate) fn digamma(x: f64) -> f64 {
    if !(x > 0.0) {
        return f64::NAN;
    }
    let mut acc = 0.0;
    let mut y = x;
    while y < 10.0 {
        acc -= 1.0 / y;
        y += 1.0;
    }
    let inv2 = 1.0 / (y * y);
    let mut series = 0.0;
    let mut p = inv2;
    for (k, b) in BERNOULLI.iter().enumerate() {
        series += b / (2.0 * (k + 1) as f64) * p;
        p *= inv2;
    }
    acc + y.ln() - 0.5 / y - series
}

/// Polygamma function psi^(n)(x), n <= 8, x > 0.
pub fn polygamma(n: u32, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain("x", "0 < x < inf", x));
    }
    if n > 8 {
        return Err(domain("n", "n <= 8", n as f64));
    }
    Ok(psi_n(n, x))
}

/// Solves psi(x) = y for x > 0.
pub(crate) fn inverse_digamma(y: f64) -> f64 {
    if y.is_nan() {
        return f64::NAN;
    }
    let mut x = if y >= -2.22 {
        y.exp() + 0.5
    } else {
        -1.0 / (y + EULER_GAMMA)
    };
    // Bracket for safeguarding: psi is increasing on (0, inf).
    let mut lo = 0.0_f64;
    let mut hi = f64::INFINITY;
    for _ in 0..200 {
        let f = digamma(x) - y;
        if f == 0.0 {
            return x;
        }
        if f > 0.0 {
            hi = hi.min(x);
        } else {
            lo = lo.max(x);
        }
        let mut next = x - f / psi_n(1, x);
        if !(next > lo && next < hi) {
            next = if hi.is_finite() { 0.5 * (lo + hi) } else { 2.0 * x };
        }
        if (next - x).abs() <= 4.0 * f64::EPSILON * x {
            return next;
        }
        x = next;
    }
    x
}

/// The saddle location theta_0(mu), i.e. the solution of psi(theta_0) = 2 mu.
pub fn theta0(mu: f64) -> Result<f64> {
    if !mu.is_finite() {
        return Err(domain("mu", "a finite value", mu));
    }
    let x = inverse_digamma(2.0 * mu);
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(Error::NoConvergence {
            what: "theta0",
            bound: f64::INFINITY,
        })
    }
}

/// ln n!
pub(crate) fn ln_factorial(n: u32) -> f64 {
    ln_gamma(n as f64 + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn log_gamma_reference_points() {
        assert_eq!(log_gamma(1.0).unwrap(), 0.0);
        assert_eq!(log_gamma(2.0).unwrap(), 0.0);
        assert!(rel(log_gamma(0.5).unwrap(), 0.572_364_942_924_700_1) < 1e-15);
        assert!(rel(log_gamma(10.0).unwrap(), 362_880f64.ln()) < 1e-15);
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-1.0).is_err());
    }

    #[test]
    fn log_gamma_against_frozen_values() {
        // high precision reference values (50 digit arithmetic)
        let cases = [
            (1e-6, 13.815_509_980_749_432),
            (0.1, 2.252_712_651_734_205_9),
            (0.9, 0.066_376_239_734_742_954),
            (1.000_001, -5.772_148_423_874_146_7e-7),
            (1.461_632_144_968_362, -0.121_486_290_535_849_61),
            (2.5, 0.284_682_870_472_919_16),
            (3.7, 1.428_072_326_665_388_1),
            (9.99, 12.779_315_214_350_193),
            (25.5, 56.389_167_643_719_947),
            (1e3, 5_905.220_423_209_181_2),
            (1e6, 12_815_504.569_147_612),
        ];
        for (x, want) in cases {
            let got = log_gamma(x).unwrap();
            assert!(rel(got, want) < 1e-14, "x={x} got={got} want={want}");
        }
    }

    #[test]
    fn complex_log_gamma_matches_real_axis() {
        for &x in &[0.3, 1.0, 2.7, 11.0, 40.0] {
            let z = ln_gamma_complex(Complex64::new(x, 0.0));
            assert!((z.re - ln_gamma(x)).abs() < 1e-13 * (1.0 + ln_gamma(x).abs()));
        }
        // |Gamma(1/2 + iy)|^2 = pi / cosh(pi y)
        for &y in &[0.5, 3.0, 20.0] {
            let z = ln_gamma_complex(Complex64::new(0.5, y));
            let want = 0.5 * (PI / (PI * y).cosh()).ln();
            assert!((z.re - want).abs() < 1e-12, "y={y}");
        }
    }

    #[test]
    fn polygamma_reference_points() {
        let psi = |b: f64| polygamma(0, b).unwrap() / 2.0;
        assert!((psi(1.0) + 0.29).abs() < 5e-3);
        assert!((psi(2.0) - 0.21).abs() < 5e-3);
        assert!((psi(3.0) - 0.46).abs() < 5e-3);
        assert!(rel(polygamma(1, 1.0).unwrap(), PI * PI / 6.0) < 1e-13);
        let harmonic: f64 = (1..=9).map(|k| 1.0 / k as f64).sum();
        assert!(rel(polygamma(0, 10.0).unwrap(), harmonic - EULER_GAMMA) < 1e-14);
        assert!(rel(polygamma(0, 10.0).unwrap(), 2.251_752_589_066_721) < 1e-14);
        assert!(polygamma(0, 0.0).is_err());
        assert!(polygamma(9, 1.0).is_err());
    }

    #[test]
    fn polygamma_against_frozen_values() {
        let cases = [
            (0, 0.5, -1.963_510_026_021_423_5),
            (1, 0.5, 4.934_802_200_544_679_3),
            (2, 1.0, -2.404_113_806_319_188_6),
            (3, 2.5, 0.223_905_848_817_252_05),
            (4, 3.0, -0.136_266_123_440_878_23),
            (8, 1.0, -40_400.978_398_747_635),
            (1, 1e4, 1.000_050_001_666_666_7e-4),
            (5, 7.0, 0.002_009_493_175_049_029_1),
        ];
        for (n, x, want) in cases {
            let got = polygamma(n, x).unwrap();
            assert!(rel(got, want) < 1e-12, "n={n} x={x} got={got} want={want}");
        }
    }

    #[test]
    fn digamma_recursion() {
        for &x in &[0.01, 0.3, 1.0, 1.7, 4.2, 9.5, 10.5, 123.0] {
            let lhs = digamma(x + 1.0);
            let rhs = digamma(x) + 1.0 / x;
            assert!((lhs - rhs).abs() < 1e-13 * (1.0 + lhs.abs()), "x={x}");
        }
    }

    #[test]
    fn theta0_examples() {
        assert!((theta0(digamma(1.0) / 2.0).unwrap() - 1.0).abs() < 1e-13);
        assert!((theta0(digamma(2.0) / 2.0).unwrap() - 2.0).abs() < 1e-13);
        let root = theta0(0.0).unwrap();
        assert!((root - 1.461_632_144_968_362).abs() < 1e-10);
        assert!(digamma(root).abs() < 1e-12);
    }

    #[test]
    fn theta0_inverts_half_digamma() {
        let mut x = 0.1;
        while x <= 50.0 {
            let back = theta0(digamma(x) / 2.0).unwrap();
            assert!((back - x).abs() < 1e-10 * x.max(1.0), "x={x} back={back}");
            x *= 1.07;
        }
        for &mu in &[-300.0, -20.0, -1.0, 0.0, 3.0, 30.0, 300.0] {
            let th = theta0(mu).unwrap();
            assert!((digamma(th) - 2.0 * mu).abs() < 1e-12 * (1.0 + (2.0 * mu).abs()));
        }
    }
}
