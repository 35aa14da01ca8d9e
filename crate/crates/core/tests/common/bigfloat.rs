//! Brute-force high precision reference: the product is formed explicitly in
//! big-float arithmetic and diagonalized by shifted QR iteration.

#![allow(dead_code)]

use astro_float::{BigFloat, Consts, RoundingMode};
use lyaprod::ComplexMatrix;

pub const DEFAULT_BITS: usize = 1200;
const RM: RoundingMode = RoundingMode::ToEven;

#[derive(Clone)]
struct C {
    re: BigFloat,
    im: BigFloat,
}

pub struct Oracle {
    p: usize,
    cc: Consts,
}

impl Oracle {
    pub fn new(bits: usize) -> Self {
        Oracle {
            p: bits,
            cc: Consts::new().expect("constants cache"),
        }
    }

    fn real(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, self.p)
    }

    fn c(&self, re: f64, im: f64) -> C {
        C {
            re: self.real(re),
            im: self.real(im),
        }
    }

    fn add(&self, a: &C, b: &C) -> C {
        C {
            re: a.re.add(&b.re, self.p, RM),
            im: a.im.add(&b.im, self.p, RM),
        }
    }

    fn sub(&self, a: &C, b: &C) -> C {
        C {
            re: a.re.sub(&b.re, self.p, RM),
            im: a.im.sub(&b.im, self.p, RM),
        }
    }

    fn mul(&self, a: &C, b: &C) -> C {
        let p = self.p;
        C {
            re: a.re.mul(&b.re, p, RM).sub(&a.im.mul(&b.im, p, RM), p, RM),
            im: a.re.mul(&b.im, p, RM).add(&a.im.mul(&b.re, p, RM), p, RM),
        }
    }

    fn conj(&self, a: &C) -> C {
        C {
            re: a.re.clone(),
            im: a.im.neg(),
        }
    }

    fn norm2(&self, a: &C) -> BigFloat {
        let p = self.p;
        a.re.mul(&a.re, p, RM).add(&a.im.mul(&a.im, p, RM), p, RM)
    }

    fn div(&self, a: &C, b: &C) -> C {
        let d = self.norm2(b);
        let n = self.mul(a, &self.conj(b));
        C {
            re: n.re.div(&d, self.p, RM),
            im: n.im.div(&d, self.p, RM),
        }
    }

    fn scale(&self, a: &C, s: &BigFloat) -> C {
        C {
            re: a.re.mul(s, self.p, RM),
            im: a.im.mul(s, self.p, RM),
        }
    }

    fn sqrt(&self, a: &C) -> C {
        let p = self.p;
        let r = self.norm2(a).sqrt(p, RM);
        let half = self.real(0.5);
        let x = r.add(&a.re, p, RM).mul(&half, p, RM).sqrt(p, RM);
        let mut y = r.sub(&a.re, p, RM).mul(&half, p, RM).sqrt(p, RM);
        if a.im.is_negative() {
            y = y.neg();
        }
        C { re: x, im: y }
    }

    fn to_f64(&mut self, x: &BigFloat) -> f64 {
        let s = format!("{}", x);
        s.parse().unwrap_or_else(|_| panic!("unparsable big float {s}"))
    }

    fn ln(&mut self, x: &BigFloat) -> f64 {
        let l = x.ln(self.p, RM, &mut self.cc);
        self.to_f64(&l)
    }

    fn product(&self, factors: &[ComplexMatrix]) -> Vec<C> {
        let n = factors[0].rows();
        let mut p: Vec<C> = (0..n * n)
            .map(|k| self.c(if k / n == k % n { 1.0 } else { 0.0 }, 0.0))
            .collect();
        for f in factors {
            let mut q = Vec::with_capacity(n * n);
            for i in 0..n {
                for j in 0..n {
                    let mut s = self.c(0.0, 0.0);
                    for k in 0..n {
                        let x = f[(i, k)];
                        s = self.add(&s, &self.mul(&self.c(x.re, x.im), &p[k * n + j]));
                    }
                    q.push(s);
                }
            }
            p = q;
        }
        p
    }

    /// Eigenvalues of a general complex matrix by shifted QR on the full matrix.
    fn eigenvalues(&self, mut a: Vec<C>, n: usize) -> Vec<C> {
        let p = self.p;
        let tiny = BigFloat::from_f64(2f64, p).powi(p - 40, p, RM).reciprocal(p, RM);
        let mut out = Vec::with_capacity(n);
        let mut m = n;
        let mut iter = 0usize;
        while m > 0 {
            if m == 1 {
                out.push(a[0].clone());
                break;
            }
            // deflate when the off-diagonal part of row m-1 is negligible
            let mut off = self.real(0.0);
            for j in 0..m - 1 {
                off = off.add(&self.norm2(&a[(m - 1) * n + j]), p, RM);
            }
            let diag = self.norm2(&a[(m - 1) * n + m - 1]).add(&self.norm2(&a[(m - 2) * n + m - 2]), p, RM);
            let thresh = diag.mul(&tiny, p, RM).mul(&tiny, p, RM);
            if off.cmp(&thresh).is_some_and(|c| c <= 0) {
                out.push(a[(m - 1) * n + m - 1].clone());
                m -= 1;
                iter = 0;
                continue;
            }
            iter += 1;
            assert!(iter < 500, "big-float QR failed to converge");
            // Wilkinson shift from the trailing 2x2 block
            let (x, y, z, w) = (
                &a[(m - 2) * n + m - 2],
                &a[(m - 2) * n + m - 1],
                &a[(m - 1) * n + m - 2],
                &a[(m - 1) * n + m - 1],
            );
            let shift = if iter % 11 == 10 {
                self.add(w, &self.c(0.37, 0.21))
            } else {
                let half = self.scale(&self.sub(x, w), &self.real(0.5));
                let disc = self.sqrt(&self.add(&self.mul(&half, &half), &self.mul(y, z)));
                let d1 = self.add(&half, &disc);
                let d2 = self.sub(&half, &disc);
                let den = if self.norm2(&d1).cmp(&self.norm2(&d2)).is_some_and(|c| c >= 0) { d1 } else { d2 };
                if den.re.is_zero() && den.im.is_zero() {
                    w.clone()
                } else {
                    self.sub(w, &self.div(&self.mul(y, z), &den))
                }
            };
            // QR of the shifted active block by modified Gram-Schmidt
            let mut cols: Vec<Vec<C>> = (0..m)
                .map(|j| {
                    (0..m)
                        .map(|i| if i == j { self.sub(&a[i * n + j], &shift) } else { a[i * n + j].clone() })
                        .collect()
                })
                .collect();
            let mut r = vec![self.c(0.0, 0.0); m * m];
            for j in 0..m {
                for k in 0..j {
                    let mut dot = self.c(0.0, 0.0);
                    for i in 0..m {
                        dot = self.add(&dot, &self.mul(&self.conj(&cols[k][i]), &cols[j][i]));
                    }
                    for i in 0..m {
                        let v = self.mul(&dot, &cols[k][i]);
                        cols[j][i] = self.sub(&cols[j][i], &v);
                    }
                    r[k * m + j] = self.add(&r[k * m + j], &dot);
                }
                let mut nn = self.real(0.0);
                for i in 0..m {
                    nn = nn.add(&self.norm2(&cols[j][i]), p, RM);
                }
                let nrm = nn.sqrt(p, RM);
                r[j * m + j] = C {
                    re: nrm.clone(),
                    im: self.real(0.0),
                };
                if !nrm.is_zero() {
                    let inv = nrm.reciprocal(p, RM);
                    for i in 0..m {
                        cols[j][i] = self.scale(&cols[j][i], &inv);
                    }
                }
            }
            // active block <- R Q + shift; coupling blocks follow the similarity
            let mut newblk = vec![self.c(0.0, 0.0); m * m];
            for i in 0..m {
                for j in 0..m {
                    let mut s = self.c(0.0, 0.0);
                    for k in i..m {
                        s = self.add(&s, &self.mul(&r[i * m + k], &cols[j][k]));
                    }
                    if i == j {
                        s = self.add(&s, &shift);
                    }
                    newblk[i * m + j] = s;
                }
            }
            for i in 0..m {
                for j in 0..m {
                    a[i * n + j] = newblk[i * m + j].clone();
                }
            }
        }
        out
    }

    /// ln s_n (eigenvalues of Pi^dagger Pi), ascending.
    pub fn log_singular_values(&mut self, factors: &[ComplexMatrix]) -> Vec<f64> {
        let n = factors[0].rows();
        let p = self.product(factors);
        let mut h = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut s = self.c(0.0, 0.0);
                for k in 0..n {
                    s = self.add(&s, &self.mul(&self.conj(&p[k * n + i]), &p[k * n + j]));
                }
                h.push(s);
            }
        }
        let ev = self.eigenvalues(h, n);
        let mut out: Vec<f64> = ev.iter().map(|z| self.ln(&z.re.abs())).collect();
        out.sort_by(f64::total_cmp);
        out
    }

    /// ln |lambda_n| of Pi, ascending.
    pub fn log_eigenvalue_moduli(&mut self, factors: &[ComplexMatrix]) -> Vec<f64> {
        let n = factors[0].rows();
        let p = self.product(factors);
        let ev = self.eigenvalues(p, n);
        let mut out: Vec<f64> = ev.iter().map(|z| 0.5 * self.ln(&self.norm2(z))).collect();
        out.sort_by(f64::total_cmp);
        out
    }
}
