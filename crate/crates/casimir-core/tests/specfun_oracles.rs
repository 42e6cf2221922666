use casimir_core::specfun::*;
use core::f64::consts::PI;
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Ascending series of I_ν summed until the terms fall below 1e-16.
fn i_series_oracle(nu: f64, x: f64) -> f64 {
    let mut t = libm::pow(0.5 * x, nu) / libm::tgamma(nu + 1.0);
    let mut s = t;
    let mut k = 1.0;
    while t > 1e-17 * s {
        t *= 0.25 * x * x / (k * (nu + k));
        s += t;
        k += 1.0;
    }
    s
}

/// ∫₀^∞ e^{−x cosh t} cosh(νt) dt on a fine composite Gauss grid.
fn k_integral_oracle(nu: f64, x: f64) -> f64 {
    let tmax = libm::acosh(1.0 + 60.0 / x) + 1.0;
    casimir_core::quad::composite_gl(|t| libm::exp(-x * libm::cosh(t)) * libm::cosh(nu * t), 0.0, tmax, 200, 20)
}

/// Series J_n(x) = Σ (−1)^k (x/2)^{2k+n} / (k!(n+k)!), fine for moderate x.
fn j_series_oracle(n: u32, x: f64) -> f64 {
    let mut t = libm::pow(0.5 * x, n as f64) / libm::tgamma(n as f64 + 1.0);
    let mut s = t;
    for k in 1..200 {
        t *= -0.25 * x * x / (k as f64 * (n as f64 + k as f64));
        s += t;
    }
    s
}

fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    let fa = f(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if (f(m) > 0.0) == (fa > 0.0) {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

#[test]
fn i_three_halves_matches_series() {
    let v = bessel_i(1.5, 2.3).unwrap();
    let o = i_series_oracle(1.5, 2.3);
    assert!(rel(v, o) < 1e-14);
    assert!(rel(v, 1.520_832_893_303_204_6) < 1e-14);
    let closed = libm::sqrt(2.0 / (PI * 2.3)) * (libm::cosh(2.3) - libm::sinh(2.3) / 2.3);
    assert!(rel(v, closed) < 1e-13);
}

#[test]
fn k2_matches_integral_representation() {
    let v = bessel_k(2.0, 1.7).unwrap();
    assert!(rel(v, k_integral_oracle(2.0, 1.7)) < 1e-13);
    assert!(rel(v, 0.411_805_127_708_858_3) < 1e-14);
}

#[test]
fn k_fractional_orders_match_integral() {
    for &(nu, x) in &[(5.0 / 6.0, 0.3), (0.7, 3.3), (3.25, 0.01), (1.0 / 3.0, 2.0), (2.0 / 3.0, 2.0001)] {
        let v = bessel_k(nu, x).unwrap();
        let o = k_integral_oracle(nu, x);
        assert!(rel(v, o) < 1e-12, "nu={nu} x={x} v={v} o={o}");
    }
    assert!(rel(bessel_k(5.0 / 6.0, 0.3).unwrap(), 2.420_766_569_147_265) < 1e-13);
}

#[test]
fn i_large_argument_branch() {
    assert!(rel(bessel_i(2.5, 45.0).unwrap(), 1.942_142_450_568_708_2e18) < 1e-13);
    let seam = bessel_i(1.0, 40.0).unwrap();
    let after = bessel_i(1.0, 40.000_000_001).unwrap();
    assert!(rel(seam, after) < 1e-8);
    assert!(rel(seam, i_series_oracle(1.0, 40.0)) < 1e-13);
}

#[test]
fn dirichlet_and_neumann_disc_zeros() {
    assert!((bessel_j_zero(0, 1).unwrap() - 2.40482).abs() < 1e-5);
    let z = bessel_j_zero(0, 2).unwrap();
    let o = bisect(|x| j_series_oracle(0, x), 5.0, 6.0);
    assert!((z - o).abs() < 1e-10);
    let z = bessel_j_zero(1, 1).unwrap();
    let o = bisect(|x| j_series_oracle(1, x), 3.5, 4.0);
    assert!((z - o).abs() < 1e-10);
    assert!((z - 3.831_705_970_207_512).abs() < 1e-12);
    assert!((bessel_jprime_zero(1, 1).unwrap() - 1.84118).abs() < 1e-5);
    let z = bessel_jprime_zero(0, 1).unwrap();
    let o = bisect(|x| -j_series_oracle(1, x), 3.0, 4.5);
    assert!((z - o).abs() < 1e-10);
}

#[test]
fn neumann_spectrum_excludes_origin() {
    let z = bessel_jprime_zeros(0, 4.0);
    assert_eq!(z.len(), 1);
    assert!(z[0] > 3.8);
    let lowest = (0..5).filter_map(|n| bessel_jprime_zeros(n, 10.0).first().copied()).fold(f64::MAX, f64::min);
    assert!((lowest - 1.841_183_781_340_659).abs() < 1e-10);
}

#[test]
fn polylog_against_direct_series() {
    let mut s = 0.0;
    let mut zn = 1.0;
    for n in 1..200 {
        zn *= 0.5;
        s += zn / (n * n) as f64;
    }
    assert!((polylog(2.0, 0.5).unwrap() - s).abs() < 1e-13);
    for &(sv, z, exact) in &[
        (2.5, 0.9, 1.139_003_025_202_156_8),
        (0.5, 0.8, 2.337_556_409_557_823),
        (3.0, 0.95, 1.123_574_584_279_198_8),
        (2.000_01, 0.9, 1.299_710_377_900_336_9),
    ] {
        let v = polylog(sv, z).unwrap();
        assert!(rel(v, exact) < 1e-12, "s={sv} z={z} v={v}");
    }
}

#[test]
fn zeros_strictly_increasing_with_sign_changes() {
    for n in [0u32, 1, 2, 5, 12] {
        let z = bessel_j_zeros(n, 60.0);
        assert!(z.len() > 5);
        for w in z.windows(2) {
            assert!(w[1] > w[0]);
        }
        for r in z {
            assert!(bessel_j(n, r - 1e-6).signum() != bessel_j(n, r + 1e-6).signum());
        }
    }
}

proptest! {
    #[test]
    fn wronskian(idx in 0usize..5, x in 0.1f64..30.0) {
        let nu = [0.0, 0.5, 1.0, 1.5, 2.0][idx];
        let i0 = bessel_i(nu, x).unwrap();
        let i1 = bessel_i(nu + 1.0, x).unwrap();
        let (k0, k1) = bessel_k_pair(nu, x);
        let w = i0 * k1 + i1 * k0;
        prop_assert!((w * x - 1.0).abs() < 1e-10);
    }

    #[test]
    fn half_integer_k_closed_form(n in 0u32..4, x in 0.05f64..40.0) {
        // K_{n+1/2}(x) = sqrt(π/2x) e^{-x} Σ_k (n+k)!/(k!(n−k)!(2x)^k)
        let mut s = 0.0;
        for k in 0..=n {
            let num = libm::tgamma((n + k + 1) as f64);
            let den = libm::tgamma((k + 1) as f64) * libm::tgamma((n - k + 1) as f64) * libm::pow(2.0 * x, k as f64);
            s += num / den;
        }
        let closed = libm::sqrt(PI / (2.0 * x)) * libm::exp(-x) * s;
        let v = bessel_k(n as f64 + 0.5, x).unwrap();
        prop_assert!(((v - closed) / closed).abs() < 1e-12);
    }

    #[test]
    fn polylog_monotone_in_z(s in 0.2f64..5.0, z in 0.0f64..0.98, dz in 1e-3f64..0.02) {
        let a = polylog(s, z).unwrap();
        let b = polylog(s, z + dz).unwrap();
        prop_assert!(b > a);
    }
}
