use casimir_core::regulate::*;
use core::f64::consts::PI;
use proptest::prelude::*;

/// Σ_{n∈ℤ} f(|n|) with f(n) = (α²n²+ω²)^{−s}: direct terms up to N plus an
/// Euler–Maclaurin tail.
fn direct_z1(s: f64, a: f64, w: f64) -> f64 {
    let f = |n: f64| libm::pow(a * a * n * n + w * w, -s);
    let df = |n: f64| -2.0 * s * a * a * n * libm::pow(a * a * n * n + w * w, -s - 1.0);
    let n_max = 4000usize;
    let mut sum = f(0.0);
    for n in 1..n_max {
        sum += 2.0 * f(n as f64);
    }
    let big_n = n_max as f64;
    // ∫_N^∞ (an)^{-2s}(1 + ω²/(a²n²))^{-s} dn expanded in ω²/(a²n²)
    let e = w * w / (a * a);
    let mut integral = 0.0;
    let mut c = 1.0;
    for j in 0..6 {
        let p = 2.0 * s + 2.0 * j as f64;
        integral += c * libm::pow(e, j as f64) * libm::pow(big_n, 1.0 - p) / (p - 1.0);
        c *= -(s + j as f64) / (j as f64 + 1.0);
    }
    integral *= libm::pow(a, -2.0 * s);
    sum + 2.0 * (integral + 0.5 * f(big_n) - df(big_n) / 12.0)
}

#[test]
fn s1_matches_coth_form() {
    for w in [0.5, 1.0, 5.0] {
        let z = chowla_selberg_1d(1.0, PI, w).unwrap().total();
        let exact = PI / (PI * w) / libm::tanh(PI * w / PI);
        assert!((z - exact).abs() < 1e-9 * exact, "w={w}");
        assert!((z - direct_z1(1.0, PI, w)).abs() < 1e-10 * exact);
    }
}

#[test]
fn large_omega_leading_term_dominates() {
    let parts = chowla_selberg_1d(1.0, 1.0, 50.0).unwrap();
    assert!((parts.leading - PI / 50.0).abs() < 1e-15);
    assert!(parts.bessel_sum.abs() < 1e-12);
}

#[test]
fn s2_matches_direct_sum() {
    for &(a, w) in &[(1.0, 1.0), (PI, 0.3), (0.5, 2.0)] {
        let z = chowla_selberg_1d(2.0, a, w).unwrap().total();
        let d = direct_z1(2.0, a, w);
        assert!(((z - d) / d).abs() < 1e-11, "a={a} w={w}");
    }
}

#[test]
fn s1_bessel_part_is_geometric() {
    // With s = 1 the K_{1/2} series sums to (2π/(αω)) / (e^{2πω/α} − 1).
    for &(a, w) in &[(PI, 1.0), (PI / 3.0, 0.2), (2.0, 0.7)] {
        let p = chowla_selberg_1d(1.0, a, w).unwrap();
        let g = 2.0 * PI / (a * w) / libm::expm1(2.0 * PI * w / a);
        assert!(((p.bessel_sum - g) / g).abs() < 1e-13);
    }
}

#[test]
fn y1_identity_and_limits() {
    // Σ α²n²/(α²n²+ω²)² with an Euler–Maclaurin tail
    let (a, w) = (1.3, 0.8);
    let f = |n: f64| a * a * n * n / libm::pow(a * a * n * n + w * w, 2.0);
    let n_max = 20000;
    let mut sum = 0.0;
    for n in 1..n_max {
        sum += 2.0 * f(n as f64);
    }
    let big_n = n_max as f64;
    let tail = casimir_core::quad::integrate_to_inf(f, big_n, big_n, casimir_core::quad::QuadOptions::rel(1e-14)).unwrap()
        + 0.5 * f(big_n);
    let direct = sum + 2.0 * tail;
    let y = y1(2.0, a, w).unwrap();
    assert!(((y - direct) / direct).abs() < 1e-9);

    let y0 = y1(2.0, 1.7, 0.0).unwrap();
    assert!((y0 - 2.0 * PI * PI / 6.0 / (1.7 * 1.7)).abs() < 1e-14);

    let yr = y1(2.0, PI, 1.0).unwrap();
    assert!((yr - 0.294_486_812_266_510_4).abs() < 1e-13);
}

#[test]
fn elizalde_p2_against_double_sum() {
    // inner m-sum in closed form: Σ_m (m²+c)^{-2} = π coth(π√c)/(2c^{3/2}) + π² csch²(π√c)/(2c)
    let inner = |c: f64| {
        let r = libm::sqrt(c);
        PI / (2.0 * c * r) / libm::tanh(PI * r) + PI * PI / (2.0 * c) / libm::pow(libm::sinh(PI * r), 2.0)
    };
    let n_max = 20000;
    let mut s = inner(1.0);
    for n in 1..n_max {
        s += 2.0 * inner((n * n) as f64 + 1.0);
    }
    // tail: inner(c) → π/(2c^{3/2}), summed as an integral
    let big_n = n_max as f64;
    s += 2.0 * (PI / (2.0 * 2.0 * big_n * big_n) + 0.5 * inner(big_n * big_n + 1.0));
    let q = QuadraticFormDiag::new(vec![1.0, 1.0], 1.0).unwrap();
    let z = elizalde_z(&q, 2.0).unwrap();
    assert!((z - s).abs() < 1e-9);
    assert!((z - 3.226_581_364_423_359_8).abs() < 1e-12);
}

#[test]
fn elizalde_p1_routes_to_chowla_selberg() {
    let q = QuadraticFormDiag::new(vec![4.0], 0.9).unwrap();
    let a = elizalde_z(&q, 1.5).unwrap();
    let b = chowla_selberg_1d(1.5, 2.0, 0.9).unwrap().total();
    assert_eq!(a, b);
}

#[test]
fn matsubara_low_temperature_converges_to_integral() {
    let d = 1.0;
    let f = |k: f64| libm::exp(-2.0 * k * d) * (1.0 + 2.0 * k * d);
    let zero = matsubara_sum(f, &ThermalState::zero()).unwrap();
    let mut prev = f64::INFINITY;
    for i in 0..12 {
        let t = 0.5 * libm::pow(0.5, i as f64);
        let v = matsubara_sum(f, &ThermalState::new(t).unwrap()).unwrap();
        let gap = (v - zero).abs();
        assert!(gap < prev);
        prev = gap;
    }
    assert!(prev < 1e-6);
}

#[test]
fn matsubara_reports_non_convergence() {
    let mut st = ThermalState::new(1e-6).unwrap();
    st.n_max = 10;
    assert!(matsubara_sum(|k| libm::exp(-k), &st).is_err());
}

proptest! {
    #[test]
    fn chowla_selberg_equals_direct_sum(s in 0.6f64..3.0, a in 0.3f64..3.0, w in 0.2f64..3.0) {
        let z = chowla_selberg_1d(s, a, w).unwrap().total();
        let d = direct_z1(s, a, w);
        prop_assert!(((z - d) / d).abs() < 1e-9, "s={} a={} w={} z={} d={}", s, a, w, z, d);
    }

    #[test]
    fn leading_term_separates_plate_length(s in 0.6f64..3.0, l1 in 0.2f64..5.0, l2 in 0.2f64..5.0, w in 0.2f64..3.0) {
        // α = π/L: α·leading is L-independent, so leading/L drops out of a stress difference.
        let p1 = chowla_selberg_1d(s, PI / l1, w).unwrap();
        let p2 = chowla_selberg_1d(s, PI / l2, w).unwrap();
        let g1 = p1.leading / l1;
        let g2 = p2.leading / l2;
        prop_assert!(((g1 - g2) / g1).abs() < 1e-13);
    }

    #[test]
    fn matsubara_is_linear(c in -5.0f64..5.0, t in 0.01f64..2.0, d in 0.2f64..3.0) {
        let st = ThermalState::new(t).unwrap();
        let f = |k: f64| libm::exp(-2.0 * k * d);
        let a = matsubara_sum(|k| c * f(k), &st).unwrap();
        let b = matsubara_sum(f, &st).unwrap();
        prop_assert!((a - c * b).abs() <= 1e-13 * (c * b).abs().max(1e-300));
    }
}
