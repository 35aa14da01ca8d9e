//! Both product kernels against the brute-force big-float reference.

mod common;

use common::bigfloat::{Oracle, DEFAULT_BITS};
use lyaprod::linalg::{log_eigenvalue_moduli, log_singular_values, max_exponent_2x2, schur_chain_2x2};
use lyaprod::rng::{derive_stream, sample_ginibre, Beta};
use lyaprod::ComplexMatrix;

fn chain(n: usize, t: usize, seed: u64) -> Vec<ComplexMatrix> {
    let mut r = derive_stream(seed, 0);
    (0..t).map(|_| sample_ginibre(&mut r, Beta::Two, n).unwrap()).collect()
}

fn assert_close(got: &[f64], want: &[f64], tol: f64, what: &str) {
    for (g, w) in got.iter().zip(want) {
        assert!((g - w).abs() <= tol * w.abs().max(1.0), "{what}: {got:?} vs {want:?}");
    }
}

#[test]
fn singular_values_n4_t100() {
    let mut o = Oracle::new(DEFAULT_BITS);
    for seed in 0..3 {
        let f = chain(4, 100, seed);
        let want = o.log_singular_values(&f);
        let got = log_singular_values(&f).unwrap();
        assert_close(&got.values, &want, 1e-8, "singular");
    }
}

#[test]
fn eigenvalue_moduli_n3_t50() {
    let mut o = Oracle::new(DEFAULT_BITS);
    for seed in 10..13 {
        let f = chain(3, 50, seed);
        let want = o.log_eigenvalue_moduli(&f);
        let got = log_eigenvalue_moduli(&f).unwrap();
        assert_close(&got.values, &want, 1e-8, "moduli");
    }
}

#[test]
fn two_by_two_maximum_exponent() {
    let mut o = Oracle::new(DEFAULT_BITS);
    for seed in 20..30 {
        let t = 1 + (seed as usize * 37) % 150;
        let f = chain(2, t, seed);
        let sd = schur_chain_2x2(&f).unwrap();
        let want = o.log_singular_values(&f)[1] / (2.0 * t as f64);
        let got = max_exponent_2x2(&sd, t);
        assert!((got - want).abs() <= 1e-10 * want.abs().max(1.0), "t={t} {got} {want}");
        let det: f64 = o.log_eigenvalue_moduli(&f).iter().sum();
        assert!((sd.log_z1 + sd.log_z2 - det).abs() < 1e-8);
    }
}
