//! Acceptance suite: one line per criterion.
//!
//! Runs without the libtest harness so the report is always printed. Pass
//! criterion numbers as arguments to run a subset. The process fails when a
//! check fails unexpectedly; a criterion whose bound is out of reach for the
//! exact law itself is reported as FAIL together with the measured gap, and
//! the run instead asserts that the samples match the exact law's value.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::bigfloat::{Oracle, DEFAULT_BITS};
use lyaprod::asymptotic::{
    fuss_catalan_moment, level_spacing_finite_n, rescaled_incremental, spacing_monte_carlo, triangular_cdf,
    StaircaseCdf,
};
use lyaprod::laws::{
    cumulants_ab, deterministic_positions, f_ab_exact, log_gamma_product_density, DensityModel, ModelKind,
};
use lyaprod::linalg::{log_eigenvalue_moduli, log_singular_values};
use lyaprod::montecarlo::{
    check_identities, ks_distance, ks_two_sample, newman_projector_average, newman_target, run_2x2_bounds,
    run_ev_experiment, run_paired_experiment, run_sv_experiment, EvMethod, SampleSet,
};
use lyaprod::quad::integrate;
use lyaprod::rng::{derive_stream, sample_gamma, sample_ginibre, Beta, EnsembleSpec, Family, Observable, SvLaw};
use lyaprod::specfun::{
    hankel_cofactor, hankel_cofactor_direct, hankel_gamma_det, hankel_gamma_det_direct, log_meijer_g_t0, MeijerParams,
};
use lyaprod::ComplexMatrix;

/// Outcome of one criterion.
struct Report {
    pass: bool,
    detail: String,
    /// why the bound cannot hold, when it is out of reach
    unattainable: Option<&'static str>,
}

impl Report {
    fn new(pass: bool, detail: String) -> Self {
        Report { pass, detail, unattainable: None }
    }
}

type Check = Result<Report, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)*) => {
        if !$cond {
            return Err(format!($($fmt)*));
        }
    };
}

fn spec(family: Family, n: usize, t: usize, samples: usize, seed: u64, obs: Observable) -> EnsembleSpec {
    EnsembleSpec::new(family, n, t, samples, seed, obs).unwrap()
}

fn sv_set(n: usize, t: usize, samples: usize, seed: u64) -> SampleSet {
    run_sv_experiment(&spec(Family::GinibreBeta2, n, t, samples, seed, Observable::SvLyapunov)).unwrap()
}

fn psi_half(n: usize, beta: Beta) -> Vec<f64> {
    deterministic_positions(n, beta)
}

fn fmt_list(v: &[f64], digits: usize) -> String {
    let s: Vec<String> = v.iter().map(|x| format!("{x:.digits$}")).collect();
    format!("[{}]", s.join(", "))
}

/// Peak positions at N = 3, t = 200.
fn c1() -> Check {
    let set = sv_set(3, 200, 10_000, 42);
    let want = psi_half(3, Beta::Two);
    let means: Vec<f64> = (1..=3).map(|b| set.index_mean(b).unwrap().0).collect();
    let worst = means.iter().zip(&want).map(|(m, w)| (m - w).abs()).fold(0.0, f64::max);
    Ok(Report::new(worst <= 0.01, format!("means {} vs {}, max gap {worst:.4} (tol 0.01)", fmt_list(&means, 4), fmt_list(&want, 4))))
}

/// Gaussian mixture at t = 200: the exact law itself is 0.0234 away.
fn c2() -> Check {
    let set = sv_set(3, 200, 10_000, 42);
    let pooled = set.pooled();
    let gauss = DensityModel::new(ModelKind::GaussianMixture, 3, 200, Beta::Two).unwrap();
    let exact = DensityModel::new(ModelKind::ExactMeijer, 3, 200, Beta::Two).unwrap();
    let ks_g = ks_distance(&pooled, |x| gauss.cdf(x));
    let ks_e = ks_distance(&pooled, |x| exact.cdf(x));
    // sup |F_gauss - F_exact| on a fine grid: the floor for any sample size
    let (lo, hi) = exact.support();
    let floor = (0..=20_000)
        .map(|i| lo + (hi - lo) * i as f64 / 20_000.0)
        .map(|x| (gauss.cdf(x) - exact.cdf(x)).abs())
        .fold(0.0, f64::max);
    ensure!(ks_e <= 0.01, "samples disagree with the exact law: KS {ks_e:.4}");
    ensure!((ks_g - floor).abs() <= 0.01, "KS vs gaussian {ks_g:.4} inconsistent with the population distance {floor:.4}");
    let mut r = Report::new(
        ks_g <= 0.02,
        format!("KS gaussian {ks_g:.4} (tol 0.02), KS exact {ks_e:.4}, population distance gaussian-exact {floor:.4}"),
    );
    if floor > 0.02 {
        r.unattainable = Some("the exact density differs from the Gaussian mixture by more than the tolerance");
    }
    Ok(r)
}

/// Saddle beats Gaussian at t = 30.
fn c3() -> Check {
    let set = sv_set(3, 30, 10_000, 42);
    let pooled = set.pooled();
    let gauss = DensityModel::new(ModelKind::GaussianMixture, 3, 30, Beta::Two).unwrap();
    let saddle = DensityModel::new(ModelKind::Saddle, 3, 30, Beta::Two).unwrap();
    let ks_g = ks_distance(&pooled, |x| gauss.cdf(x));
    let ks_s = ks_distance(&pooled, |x| saddle.cdf(x));
    Ok(Report::new(ks_s <= 0.03 && ks_s < ks_g, format!("KS saddle {ks_s:.4} (tol 0.03), KS gaussian {ks_g:.4}")))
}

/// Window of peak `b` (0-based) between the midpoints to its neighbours.
fn peak_window(pos: &[f64], b: usize) -> (f64, f64) {
    let n = pos.len();
    let lo = if b == 0 { pos[0] - 0.2 } else { 0.5 * (pos[b - 1] + pos[b]) };
    let hi = if b == n - 1 { pos[b] + 0.2 } else { 0.5 * (pos[b] + pos[b + 1]) };
    (lo, hi)
}

/// Argmax of `f` on a uniform grid.
fn grid_argmax(lo: f64, hi: f64, k: usize, f: impl Fn(f64) -> f64) -> f64 {
    let mut best = (lo, f64::MIN);
    for i in 0..=k {
        let x = lo + (hi - lo) * i as f64 / k as f64;
        let d = f(x);
        if d > best.1 {
            best = (x, d);
        }
    }
    best.0
}

/// Gaussian kernel density mode of the points inside [lo, hi].
fn kde_mode(x: &[f64], lo: f64, hi: f64) -> f64 {
    let inside: Vec<f64> = x.iter().copied().filter(|v| (lo..hi).contains(v)).collect();
    let n = inside.len() as f64;
    let mean = inside.iter().sum::<f64>() / n;
    let sd = (inside.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    let h = 0.9 * sd * n.powf(-0.2);
    grid_argmax(lo, hi, 1000, |g| inside.iter().map(|v| (-0.5 * ((g - v) / h).powi(2)).exp()).sum())
}

/// Incremental singular values at N = 10, t = 200.
fn c4() -> Check {
    let (n, t) = (10, 200);
    let s = spec(Family::GinibreBeta2, n, t, 1000, 42, Observable::IncrementalSv);
    let set = run_sv_experiment(&s).unwrap();
    let pooled = set.pooled();
    let model = DensityModel::new(ModelKind::LognormalMixture, n, t, Beta::Two).unwrap();
    let ks = ks_distance(&pooled, |x| model.cdf(x));
    let want: Vec<f64> = psi_half(n, Beta::Two).iter().map(|m| m.exp()).collect();
    let modes: Vec<f64> = (0..n)
        .map(|b| {
            let (lo, hi) = peak_window(&want, b);
            kde_mode(&pooled, lo, hi)
        })
        .collect();
    let gaps: Vec<f64> = modes.iter().zip(&want).map(|(m, w)| m - w).collect();
    let worst = gaps.iter().map(|g| g.abs()).fold(0.0, f64::max);
    // The largest exponent sits about 1.4/t above psi(N)/2 (order-statistic
    // repulsion), which moves the top peak of the exact one-point law itself.
    let exact = DensityModel::new(ModelKind::ExactMeijer, n, t, Beta::Two).unwrap();
    let (lo, hi) = peak_window(&want, n - 1);
    let top = grid_argmax(want[n - 1] - 0.02, want[n - 1] + 0.06, 160, |l| exact.pdf(l.ln()).unwrap() / l);
    let pop_gap = top - want[n - 1];
    ensure!(lo < top && top < hi, "exact top mode {top} outside its window");
    ensure!((modes[n - 1] - top).abs() <= 0.01, "top mode {:.4} vs exact-law mode {top:.4}", modes[n - 1]);
    ensure!(gaps[..n - 1].iter().all(|g| g.abs() <= 0.02), "lower modes {}", fmt_list(&gaps, 4));
    let mut r = Report::new(
        ks <= 0.05 && worst <= 0.02,
        format!(
            "KS lognormal {ks:.4} (tol 0.05), mode gaps {} (tol 0.02), exact-law top-mode gap {pop_gap:.4}",
            fmt_list(&gaps, 4)
        ),
    );
    if pop_gap > 0.02 {
        r.unattainable = Some("the exact law's top peak is shifted by more than the tolerance at t = 200");
    }
    Ok(r)
}

/// Rings: gamma-product radii at N = 5, t = 500 and the matrix cross-check.
fn c5() -> Check {
    let g = run_ev_experiment(&spec(Family::GinibreBeta2, 5, 500, 1000, 42, Observable::EvLyapunov), EvMethod::GammaProduct)
        .unwrap();
    let want = psi_half(5, Beta::Two);
    let means: Vec<f64> = (1..=5).map(|b| g.index_mean(b).unwrap().0).collect();
    let worst = means.iter().zip(&want).map(|(m, w)| (m - w).abs()).fold(0.0, f64::max);
    // two-sample KS at 10^3 per side has a typical size of 0.04, so the
    // cross-check uses 10^4 per side
    let a = run_ev_experiment(&spec(Family::GinibreBeta2, 3, 300, 10_000, 7, Observable::EvLyapunov), EvMethod::Matrix)
        .unwrap();
    let b = run_ev_experiment(&spec(Family::GinibreBeta2, 3, 300, 10_000, 8, Observable::EvLyapunov), EvMethod::GammaProduct)
        .unwrap();
    let ks: Vec<f64> = (1..=3).map(|k| ks_two_sample(&a.column(k).unwrap(), &b.column(k).unwrap())).collect();
    let ks_max = ks.iter().cloned().fold(0.0, f64::max);
    Ok(Report::new(
        worst <= 0.005 && ks_max <= 0.03,
        format!("max mean gap {worst:.4} (tol 0.005), matrix vs gamma-product KS {} (tol 0.03)", fmt_list(&ks, 4)),
    ))
}

/// CDF of one gamma-product exponent with shape x.
fn gamma_product_cdf(x: f64, t: usize, nu: f64) -> f64 {
    integrate(|y| log_gamma_product_density(x, t, y).unwrap().exp(), -4.0, nu, 1e-12, 1e-12).unwrap().0
}

/// Singular values vs radii at N = 5, t = 100.
fn c6() -> Check {
    let (n, t) = (5, 100);
    let sv = sv_set(n, t, 10_000, 42);
    let ev = run_ev_experiment(&spec(Family::GinibreBeta2, n, t, 10_000, 43, Observable::EvLyapunov), EvMethod::GammaProduct)
        .unwrap();
    let ks: Vec<f64> = (1..=n).map(|b| ks_two_sample(&sv.column(b).unwrap(), &ev.column(b).unwrap())).collect();
    // Population distances for the outer indices. The peaks are ~8 widths
    // apart, so near peak 1 the smallest exponent has CDF N F(x) with F the
    // exact one-point CDF, and near peak N the largest has 1 - N (1 - F(x));
    // the radii are gamma products with shapes 1 and N.
    let exact = DensityModel::new(ModelKind::ExactMeijer, n, t, Beta::Two).unwrap();
    let pos = psi_half(n, Beta::Two);
    let nf = n as f64;
    let split1 = 0.5 * (pos[0] + pos[1]);
    let split_n = 0.5 * (pos[n - 2] + pos[n - 1]);
    let mut pop1: f64 = 0.0;
    let mut pop_n: f64 = 0.0;
    for i in 0..=400 {
        let x = -1.0 + (split1 + 1.0) * i as f64 / 400.0;
        pop1 = pop1.max((nf * exact.cdf(x) - gamma_product_cdf(1.0, t, x)).abs());
        let y = split_n + (1.3 - split_n) * i as f64 / 400.0;
        pop_n = pop_n.max((1.0 - nf * (1.0 - exact.cdf(y)) - gamma_product_cdf(nf, t, y)).abs());
    }
    ensure!((ks[0] - pop1).abs() <= 0.03, "b = 1: KS {:.4} vs population {pop1:.4}", ks[0]);
    ensure!((ks[n - 1] - pop_n).abs() <= 0.03, "b = N: KS {:.4} vs population {pop_n:.4}", ks[n - 1]);
    ensure!(ks[2] <= 0.05, "middle index KS {:.4}", ks[2]);
    let pass = ks[0] <= 0.05 && ks.iter().all(|&k| k <= 0.1);
    let mut r = Report::new(
        pass,
        format!(
            "per-index KS {} (tol 0.05 for b = 1, 0.1 for all); exact-law distances b = 1 {pop1:.4}, b = N {pop_n:.4}",
            fmt_list(&ks, 4)
        ),
    );
    if !pass && (pop1 > 0.05 || pop_n > 0.1) {
        r.unattainable = Some("the exact laws differ by more than the tolerance (O(1/t) repulsion of the singular values)");
    }
    Ok(r)
}

/// Quaternion positions psi(2c)/2 from the drawn products.
fn c7() -> Check {
    let set = run_ev_experiment(&spec(Family::GinibreBeta4, 2, 500, 1000, 42, Observable::EvLyapunov), EvMethod::Matrix)
        .unwrap();
    let want = psi_half(2, Beta::Four);
    let means: Vec<f64> = (1..=2).map(|b| set.index_mean(b).unwrap().0).collect();
    let worst = means.iter().zip(&want).map(|(m, w)| (m - w).abs()).fold(0.0, f64::max);
    Ok(Report::new(worst <= 0.01, format!("means {} vs {}, max gap {worst:.4} (tol 0.01)", fmt_list(&means, 4), fmt_list(&want, 4))))
}

/// Triangular law and the two orders of limits.
fn c8() -> Check {
    let sup = StaircaseCdf::new(100).unwrap().sup_deviation();
    let fc: Vec<f64> = (1..=4u32)
        .map(|n| (fuss_catalan_moment(true, 10_000, n).unwrap() - 2.0 / (n as f64 + 2.0)).abs())
        .collect();
    let fc_max = fc.iter().cloned().fold(0.0, f64::max);
    let set = run_sv_experiment(&spec(Family::GinibreBeta2, 30, 300, 200, 42, Observable::IncrementalSv)).unwrap();
    let ks = ks_distance(&rescaled_incremental(&set).unwrap(), triangular_cdf);
    Ok(Report::new(
        sup <= 0.05 && fc_max <= 1e-3 && ks <= 0.06,
        format!("staircase sup {sup:.4} (tol 0.05), moment gap {fc_max:.2e} (tol 1e-3), Monte Carlo KS {ks:.4} (tol 0.06)"),
    ))
}

/// Spacings: t -> inf first vs N -> inf first.
fn c9() -> Check {
    let atoms = level_spacing_finite_n(10_000).unwrap().mass_in(0.9, 1.1);
    let d = spacing_monte_carlo(50, 1, 200, 42).unwrap();
    let mc = d.iter().filter(|&&x| (0.9..=1.1).contains(&x)).count() as f64 / d.len() as f64;
    Ok(Report::new(atoms >= 0.99 && mc < 0.5, format!("atom mass in [0.9, 1.1] {atoms:.4} (>= 0.99), Monte Carlo mass {mc:.4} (< 0.5)")))
}

/// CDF of ln s for s a product of independent Gamma(a_j), by quadrature of
/// the Meijer G density on a grid.
struct MeijerCdf {
    lo: f64,
    h: f64,
    cum: Vec<f64>,
}

impl MeijerCdf {
    fn new(a: &[f64], lo: f64, hi: f64, k: usize) -> Self {
        let p = MeijerParams::new(a).unwrap();
        let norm = p.log_gamma_sum();
        let f = |y: f64| (log_meijer_g_t0(&p, y).unwrap() - norm).exp();
        let h = (hi - lo) / k as f64;
        let mut cum = vec![0.0];
        let mut acc = 0.0;
        let mut left = f(lo);
        for i in 0..k {
            let x = lo + i as f64 * h;
            let right = f(x + h);
            acc += h / 6.0 * (left + 4.0 * f(x + 0.5 * h) + right);
            cum.push(acc);
            left = right;
        }
        MeijerCdf { lo, h, cum }
    }

    fn cdf(&self, y: f64) -> f64 {
        let u = (y - self.lo) / self.h;
        if u <= 0.0 {
            return 0.0;
        }
        let i = u as usize;
        if i + 1 >= self.cum.len() {
            return *self.cum.last().unwrap();
        }
        let s = u - i as f64;
        self.cum[i] * (1.0 - s) + self.cum[i + 1] * s
    }
}

/// The four oracle suites.
fn c10() -> Check {
    // (a) product kernels vs big-float arithmetic
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut oracle = Oracle::new(DEFAULT_BITS);
    let mut worst_a: f64 = 0.0;
    for case in 0..100u64 {
        let n = rng.random_range(1..=4);
        let t = rng.random_range(1..=100);
        let mut s = derive_stream(77, case);
        let chain: Vec<ComplexMatrix> = (0..t).map(|_| sample_ginibre(&mut s, Beta::Two, n).unwrap()).collect();
        let pairs = [
            (log_singular_values(&chain).unwrap().values, oracle.log_singular_values(&chain)),
            (log_eigenvalue_moduli(&chain).unwrap().values, oracle.log_eigenvalue_moduli(&chain)),
        ];
        for (got, want) in pairs {
            ensure!(got.len() == want.len(), "case {case}: length mismatch");
            for (g, w) in got.iter().zip(&want) {
                worst_a = worst_a.max((g - w).abs() / w.abs().max(1.0));
            }
        }
    }
    // (b) Meijer G density vs products of gamma variables
    let mut worst_b: f64 = 0.0;
    for (i, a) in [vec![1.0, 2.0, 3.0], vec![0.5, 1.5], vec![1.0; 6]].iter().enumerate() {
        let cdf = MeijerCdf::new(a, -90.0, 20.0, 40_000);
        ensure!((cdf.cdf(20.0) - 1.0).abs() < 1e-8, "Meijer density mass {}", cdf.cdf(20.0));
        let mut s = derive_stream(99, i as u64);
        let y: Vec<f64> = (0..1_000_000)
            .map(|_| a.iter().map(|&x| sample_gamma(&mut s, x).unwrap().ln()).sum())
            .collect();
        worst_b = worst_b.max(ks_distance(&y, |v| cdf.cdf(v)));
    }
    // (c) moments of f_ab by quadrature vs the closed-form cumulants
    let mut worst_c: f64 = 0.0;
    for t in [1, 2, 5, 20] {
        for a in 1..=4 {
            for b in 1..=4 {
                let k = cumulants_ab(a, b, t, 4).unwrap();
                let sd = k[1].sqrt();
                let (lo, hi) = (k[0] - 40.0 * sd, k[0] + 25.0 * sd);
                let f = |mu: f64| f_ab_exact(a, b, t, mu).unwrap();
                let m = |p: i32| integrate(|x| (x - k[0]).powi(p) * f(x), lo, hi, 1e-15, 1e-13).unwrap().0;
                let mass = m(0);
                let mean = k[0] + m(1) / mass;
                let c2 = m(2) / mass - (mean - k[0]).powi(2);
                let c3 = m(3) / mass;
                let c4 = m(4) / mass - 3.0 * c2 * c2;
                ensure!((mass - 1.0).abs() < 1e-10, "f_{a}{b} t={t} mass {mass}");
                for (got, want) in [(mean, k[0]), (c2, k[1]), (c3, k[2]), (c4, k[3])] {
                    worst_c = worst_c.max((got - want).abs() / want.abs());
                }
            }
        }
    }
    // (d) Hankel determinant and cofactors vs exact elimination
    let mut worst_d: f64 = 0.0;
    for n in 1..=8 {
        let d = hankel_gamma_det(n).unwrap();
        worst_d = worst_d.max((d - hankel_gamma_det_direct(n).unwrap()).abs() / d.abs());
        for j in 1..=n {
            for l in 1..=n {
                let c = hankel_cofactor_direct(n, j, l).unwrap();
                worst_d = worst_d.max((hankel_cofactor(n, j, l).unwrap() - c).abs() / c.abs());
            }
        }
    }
    Ok(Report::new(
        worst_a <= 1e-8 && worst_b <= 0.005 && worst_c <= 1e-6 && worst_d <= 1e-10,
        format!(
            "(a) kernels vs big-float {worst_a:.1e} (tol 1e-8), (b) Meijer KS {worst_b:.4} (tol 0.005), \
             (c) cumulants {worst_c:.1e} (tol 1e-6), (d) Hankel {worst_d:.1e} (tol 1e-10)"
        ),
    ))
}

/// Exact inequalities and identities on every sample.
fn c11() -> Check {
    let mut violations = 0;
    let mut sum_res: f64 = 0.0;
    let mut n_samples = 0;
    let custom = {
        let mut s = spec(Family::IsotropicCustom, 2, 60, 1000, 5, Observable::TwoByTwoSchur);
        s.sv_law = Some(SvLaw::LogNormal { sigma: 0.7 });
        s
    };
    let mut runs = vec![custom];
    for t in [1, 10, 200] {
        runs.push(spec(Family::GinibreBeta2, 2, t, 1000, t as u64, Observable::TwoByTwoSchur));
        runs.push(spec(Family::GinibreBeta1, 2, t, 1000, t as u64, Observable::TwoByTwoSchur));
    }
    for s in &runs {
        let r = run_2x2_bounds(s).unwrap();
        violations += r.violations;
        sum_res = sum_res.max(r.max_sum_residual);
        n_samples += r.samples.len();
    }
    // Weyl partial sums compare two independent kernels; the equality at
    // k = N makes rounding visible, hence 1e-9 of slack on exponents
    let mut weyl = 0;
    let mut det_res: f64 = 0.0;
    let mut excess = f64::NEG_INFINITY;
    for (family, n) in [(Family::GinibreBeta1, 3), (Family::GinibreBeta2, 4), (Family::GinibreBeta4, 2)] {
        for t in [1, 50] {
            let p = run_paired_experiment(&spec(family, n, t, 500, 11, Observable::SvLyapunov)).unwrap();
            let c = check_identities(&p, 1e-9);
            weyl += c.weyl_violations;
            det_res = det_res.max(c.det_residual);
            excess = excess.max(c.weyl_excess);
            n_samples += p.mu.len();
        }
    }
    Ok(Report::new(
        violations == 0 && weyl == 0 && sum_res <= 1e-8 && det_res <= 1e-8,
        format!(
            "{n_samples} samples: 2x2 bound violations {violations}, sum identity residual {sum_res:.1e} (tol 1e-8), \
             Weyl violations {weyl} (max excess {excess:.1e}), determinant residual {det_res:.1e} (tol 1e-8)"
        ),
    ))
}

/// Fixed-projector estimate of the top-k exponent sums.
fn c12() -> Check {
    let mut parts = Vec::new();
    let mut pass = true;
    for k in 1..=2 {
        let (m, se) = newman_projector_average(2, k, 100_000, 42 + k as u64).unwrap();
        let target = newman_target(2, k).unwrap();
        let z = (m - target).abs() / se;
        pass &= z <= 4.0;
        parts.push(format!("k = {k}: {m:.5} vs {target:.5} ({z:.2} stderr)"));
    }
    Ok(Report::new(pass, format!("{} (tol 4 stderr)", parts.join(", "))))
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn() -> Check); 12] = [
        (1, "peak positions", c1),
        (2, "gaussian law at large t", c2),
        (3, "saddle at small t", c3),
        (4, "incremental singular values", c4),
        (5, "rings", c5),
        (6, "singular/eigenvalue collapse", c6),
        (7, "quaternion positions", c7),
        (8, "triangular law and commuting limits", c8),
        (9, "spacing non-commutation", c9),
        (10, "oracle suites", c10),
        (11, "exact inequalities", c11),
        (12, "projector identity", c12),
    ];
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut broken = 0;
    let mut failed = 0;
    for (id, name, f) in criteria {
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let out = std::panic::catch_unwind(f);
        let secs = start.elapsed().as_secs_f64();
        match out {
            Ok(Ok(r)) => {
                let status = if r.pass { "PASS" } else { "FAIL" };
                let why = match (r.pass, r.unattainable) {
                    (false, Some(w)) => format!(" [out of reach: {w}]"),
                    _ => String::new(),
                };
                println!("criterion {id:>2} {status}: {name}: {}{why} ({secs:.1} s)", r.detail);
                if !r.pass {
                    failed += 1;
                    if r.unattainable.is_none() {
                        broken += 1;
                    }
                }
            }
            Ok(Err(msg)) => {
                println!("criterion {id:>2} FAIL: {name}: check broken: {msg} ({secs:.1} s)");
                broken += 1;
            }
            Err(_) => {
                println!("criterion {id:>2} FAIL: {name}: panicked ({secs:.1} s)");
                broken += 1;
            }
        }
    }
    println!("acceptance: {failed} criteria failed, {broken} unexpectedly");
    if broken == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
