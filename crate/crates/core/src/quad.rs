//! Adaptive Gauss-Kronrod (7/15) quadrature.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        kron += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    if !kron.is_finite() {
        return Err(Error::Invalid(format!(
            "non-finite integrand on [{a}, {b}]"
        )));
    }
    Ok((kron * h, ((kron - gauss) * h).abs()))
}

/// Integral of f over [a, b] to within max(abs_tol, rel_tol |I|).
/// Returns (value, error estimate).
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<(f64, f64)> {
    if a == b {
        return Ok((0.0, 0.0));
    }
    let mut pieces = vec![(a, b, gk15(&mut f, a, b)?)];
    for _ in 0..2000 {
        let total: f64 = pieces.iter().map(|p| p.2 .0).sum();
        let err: f64 = pieces.iter().map(|p| p.2 .1).sum();
        if err <= abs_tol.max(rel_tol * total.abs()) {
            return Ok((total, err));
        }
        let (idx, _) = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .2 .1.total_cmp(&y.1 .2 .1))
            .expect("nonempty");
        let (lo, hi, _) = pieces.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        pieces.push((lo, mid, gk15(&mut f, lo, mid)?));
        pieces.push((mid, hi, gk15(&mut f, mid, hi)?));
    }
    let total: f64 = pieces.iter().map(|p| p.2 .0).sum();
    let err: f64 = pieces.iter().map(|p| p.2 .1).sum();
    Err(Error::NoConvergence {
        what: "adaptive quadrature",
        bound: err / total.abs().max(1e-300),
    })
}

/// Integral over the real line of a function concentrated near `center` on
/// the length scale `scale`: panels of width `scale` are added outward until
/// several consecutive panels contribute nothing.
pub fn integrate_line<F: FnMut(f64) -> f64>(mut f: F, center: f64, scale: f64, rel_tol: f64) -> Result<f64> {
    let mut total = 0.0;
    for dir in [-1.0, 1.0] {
        let mut quiet = 0;
        let mut k = 0.0;
        while quiet < 3 {
            let (x0, x1) = if dir < 0.0 {
                (center - (k + 1.0) * scale, center - k * scale)
            } else {
                (center + k * scale, center + (k + 1.0) * scale)
            };
            let (v, _) = integrate(&mut f, x0, x1, 0.0, rel_tol)?;
            total += v;
            if v.abs() <= 1e-17 * total.abs() {
                quiet += 1;
            } else {
                quiet = 0;
            }
            k += 1.0;
            if k > 1e4 {
                return Err(Error::NoConvergence {
                    what: "line integral",
                    bound: f64::INFINITY,
                });
            }
        }
    }
    Ok(total)
}
