use casimir_core::lattice::*;
use casimir_core::media::{self, TemporalKernel, TemporalPolynomial};
use casimir_core::Error;
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn within(est: f64, se: f64, target: f64, k: f64) -> bool {
    (est - target).abs() <= k * se
}

#[test]
fn single_mode_ou_variance() {
    let cfg = SimConfig::new(0.01, 2000, 100_000, 7, 1).unwrap().with_stride(10);
    let r = simulate_modes(&[c(1.0, 0.0)], 1.0, None, TemporalKernel::White, &cfg).unwrap();
    let (v, se) = (r.get(0, 0).re, r.stderr_re[0]);
    assert!(within(v, se, 0.5, 3.0), "{v} ± {se}");
    assert!(se < 0.02);
}

#[test]
fn fdt_noise_gives_equipartition() {
    // Noise intensity 2T on a mode of stiffness μ gives ⟨|φ|²⟩ = T/μ.
    let (t, mu) = (0.7, 2.0);
    let cfg = SimConfig::new(0.004, 2000, 50_000, 11, 2).unwrap().with_stride(10);
    let r = simulate_modes(&[c(mu, 0.0)], 2.0 * t, None, TemporalKernel::White, &cfg).unwrap();
    assert!(within(r.get(0, 0).re, r.stderr_re[0], t / mu, 3.0));
}

#[test]
fn non_hermitian_pair_matches_mode_sum() {
    let mu = [c(1.0, 2.0), c(1.0, -2.0)];
    let h = [c(1.0, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(1.0, 0.0)];
    let cfg = SimConfig::new(0.002, 5000, 50_000, 3, 2).unwrap().with_stride(25);
    let r = simulate_modes(&mu, 1.5, Some(&h), TemporalKernel::White, &cfg).unwrap();
    let p = predicted_correlators(&mu, 1.5, Some(&h), TemporalKernel::White).unwrap();
    for i in 0..2 {
        for j in 0..2 {
            let k = i * 2 + j;
            assert!(within(r.mean[k].re, r.stderr_re[k], p[k].re, 3.0), "({i},{j}) re {} vs {}", r.mean[k].re, p[k].re);
            assert!(within(r.mean[k].im, r.stderr_im[k], p[k].im, 3.0), "({i},{j}) im {} vs {}", r.mean[k].im, p[k].im);
        }
    }
    // The off-diagonal correlator is genuinely complex here.
    assert!(p[1].im.abs() > 0.05);
}

#[test]
fn exponential_noise_matches_laplace_kernel() {
    let mu = 1.0;
    let a = 1.0;
    let cfg = SimConfig::new(0.005, 4000, 50_000, 5, 2).unwrap().with_stride(20);
    let k = TemporalKernel::Exponential { a };
    let r = simulate_modes(&[c(mu, 0.0)], 1.0, None, k, &cfg).unwrap();
    let p = predicted_correlators(&[c(mu, 0.0)], 1.0, None, k).unwrap();
    assert!((p[0].re - 0.75).abs() < 1e-15);
    assert!(within(r.get(0, 0).re, r.stderr_re[0], p[0].re, 3.0), "{} ± {}", r.get(0, 0).re, r.stderr_re[0]);
}

#[test]
fn predicted_single_mode_equals_media_mode_sum() {
    let mu = [c(1.3, 0.0)];
    let k = TemporalKernel::Exponential { a: 0.4 };
    let p = predicted_correlators(&mu, 2.0, None, k).unwrap();
    let prob = media::ModeSumProblem {
        mu: mu.to_vec(),
        projections: media::Projections::Diagonal { h: vec![c(2.0, 0.0)], stress: vec![c(1.0, 0.0)] },
        kernel: k,
    };
    let s = media::stress_mode_sum(&prob).unwrap();
    assert!((p[0].re - s).abs() < 1e-15);
}

#[test]
fn second_order_kernel_variance() {
    let cfg = SimConfig::new(0.01, 2000, 50_000, 9, 2).unwrap().with_stride(10);
    let r = simulate_second_order(1.0, 1.0, 1.0, &cfg).unwrap();
    assert!((r.predicted - 1.0 / 8.0).abs() < 1e-12);
    assert!(within(r.variance, r.stderr, 1.0 / 8.0, 3.0), "{} ± {}", r.variance, r.stderr);
    let (mu, c2) = (2.0, 0.5);
    let r = simulate_second_order(mu, 1.0, c2, &cfg).unwrap();
    assert!((r.predicted - c2 / (8.0 * mu * mu.sqrt())).abs() < 1e-12);
    assert!(within(r.variance, r.stderr, r.predicted, 3.0));
}

#[test]
fn second_order_linear_in_gamma() {
    let cfg = SimConfig::new(0.01, 100, 2000, 4, 1).unwrap();
    let a = simulate_second_order(1.0, 1.0, 1.0, &cfg).unwrap();
    let b = simulate_second_order(1.0, 4.0, 1.0, &cfg).unwrap();
    assert!((b.variance / a.variance - 4.0).abs() < 1e-12);
    let z = simulate_second_order(1.0, 0.0, 1.0, &cfg).unwrap();
    assert_eq!(z.variance, 0.0);
}

#[test]
fn second_order_dt_halving() {
    let a = simulate_second_order(1.0, 1.0, 1.0, &SimConfig::new(0.02, 1000, 40_000, 21, 1).unwrap().with_stride(5)).unwrap();
    let b = simulate_second_order(1.0, 1.0, 1.0, &SimConfig::new(0.01, 2000, 40_000, 22, 1).unwrap().with_stride(10)).unwrap();
    let se = (a.stderr * a.stderr + b.stderr * b.stderr).sqrt();
    assert!((a.variance - b.variance).abs() < 3.0 * se);
}

#[test]
fn third_order_kernel_single_forward_pole() {
    let op = TemporalPolynomial::power(3, 1.0).unwrap();
    let cfg = SimConfig::new(0.01, 2000, 50_000, 13, 2).unwrap().with_stride(10);
    let r = simulate_kernel_mode(&op, 1.0, 1.0, &cfg).unwrap();
    assert!((r.predicted - 1.0 / 18.0).abs() < 1e-12);
    assert!(within(r.variance, r.stderr, r.predicted, 3.0));
}

#[test]
fn undamped_poles_rejected() {
    let op = TemporalPolynomial::power(4, 1.0).unwrap();
    let cfg = SimConfig::new(0.01, 0, 1000, 1, 1).unwrap();
    assert!(matches!(simulate_kernel_mode(&op, 1.0, 1.0, &cfg), Err(Error::Unsupported(_))));
    assert!(matches!(
        simulate_modes(&[c(1.0, 0.0)], 1.0, None, TemporalKernel::Quenched, &cfg),
        Err(Error::Unsupported(_))
    ));
}

#[test]
fn stability_margin_and_blowup() {
    let cfg = SimConfig::new(0.2, 0, 1000, 1, 1).unwrap();
    assert!(matches!(simulate_modes(&[c(1.0, 0.0)], 1.0, None, TemporalKernel::White, &cfg), Err(Error::Domain(_))));
    let cfg = SimConfig::new(0.05, 1000, 1000, 1, 1).unwrap();
    assert!(matches!(
        simulate_modes(&[c(1.0, 100.0)], 1.0, None, TemporalKernel::White, &cfg),
        Err(Error::Unstable(_))
    ));
    assert!(simulate_modes(&[c(-1.0, 0.0)], 1.0, None, TemporalKernel::White, &cfg).is_err());
}

#[test]
fn seed_determinism() {
    let mu = [c(1.0, 0.5), c(2.0, 0.0)];
    let cfg = SimConfig::new(0.01, 100, 2000, 42, 3).unwrap();
    let a = simulate_modes(&mu, 1.0, None, TemporalKernel::White, &cfg).unwrap();
    let b = simulate_modes(&mu, 1.0, None, TemporalKernel::White, &cfg).unwrap();
    assert_eq!(a, b);
    let mut other = cfg;
    other.seed = 43;
    let d = simulate_modes(&mu, 1.0, None, TemporalKernel::White, &other).unwrap();
    assert_ne!(a.mean, d.mean);
}

#[test]
fn error_bars_shrink_with_samples() {
    let base = SimConfig::new(0.01, 1000, 10_000, 17, 2).unwrap().with_stride(10);
    let mut big = base;
    big.samples = 40_000;
    let a = simulate_modes(&[c(1.0, 0.0)], 1.0, None, TemporalKernel::White, &base).unwrap();
    let b = simulate_modes(&[c(1.0, 0.0)], 1.0, None, TemporalKernel::White, &big).unwrap();
    assert!(a.stderr_re[0] / b.stderr_re[0] >= 2f64.sqrt());
}

#[test]
fn rd_stress_against_truncated_sum() {
    let cfg = SimConfig::new(0.01, 500, 8000, 99, 1).unwrap().with_stride(50);
    let r = estimate_rd_stress(1.0, 1.0, 1.0, 1.0, 64, &cfg).unwrap();
    assert!(within(r.difference, r.stderr, r.analytic_difference, 3.0), "{} ± {} vs {}", r.difference, r.stderr, r.analytic_difference);
    assert!(r.stderr < 0.1 * r.analytic_difference.abs(), "{r:?}");
}

#[test]
fn rd_stress_linear_in_gamma() {
    let cfg = SimConfig::new(0.02, 10, 1000, 5, 1).unwrap();
    let a = estimate_rd_stress(1.0, 1.0, 1.0, 1.0, 8, &cfg).unwrap();
    let b = estimate_rd_stress(1.0, 1.0, 3.0, 1.0, 8, &cfg).unwrap();
    assert!((b.difference / a.difference - 3.0).abs() < 1e-12);
}

#[test]
fn rd_truncated_difference_vanishes_at_large_gap() {
    let d = |l: f64| rd_truncated_stress(1.0, 1.0, 1.0, l, 64) - rd_truncated_stress(1.0, 1.0, 1.0, 5.0 * l, 322);
    assert!(d(1000.0).abs() < 0.01 * d(1.0).abs());
}

#[test]
fn csv_rows_layout() {
    let cfg = SimConfig::new(0.01, 10, 1000, 1, 1).unwrap();
    let r = simulate_modes(&[c(1.0, 0.0), c(2.0, 0.0)], 1.0, None, TemporalKernel::White, &cfg).unwrap();
    let rows = r.rows();
    assert_eq!(rows.len(), 4);
    assert_eq!((rows[1].0, rows[1].1), (0, 1));
    assert!(rows.iter().all(|row| row.4 >= 0.0));
}
