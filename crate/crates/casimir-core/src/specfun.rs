//! Modified Bessel functions, Bessel zeros, polylogarithm and Riemann zeta.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::quad::{self, QuadOptions};
use crate::roots;
use crate::{Error, Result};

/// Accuracy policy for series and quadrature based evaluations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalPolicy {
    pub rel_tol: f64,
    pub max_terms: usize,
    pub max_subdivisions: usize,
}

impl Default for EvalPolicy {
    fn default() -> Self {
        Self { rel_tol: 1e-15, max_terms: 100_000, max_subdivisions: 2000 }
    }
}

impl EvalPolicy {
    pub fn new(rel_tol: f64, max_terms: usize, max_subdivisions: usize) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol <= 1e-3) {
            return Err(Error::Domain("rel_tol must lie in (0, 1e-3]"));
        }
        if max_terms < 16 {
            return Err(Error::Domain("max_terms must be at least 16"));
        }
        if max_subdivisions == 0 {
            return Err(Error::Domain("max_subdivisions must be positive"));
        }
        Ok(Self { rel_tol, max_terms, max_subdivisions })
    }
}

/// Γ(x).
pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// 1/Γ(x), exactly zero at the non-positive integers.
pub fn rgamma(x: f64) -> f64 {
    if x <= 0.0 && x == libm::floor(x) {
        return 0.0;
    }
    if x > 170.0 {
        return libm::exp(-libm::lgamma(x));
    }
    1.0 / libm::tgamma(x)
}

// Taylor coefficients of 1/Γ(z) about z = 0; C[k] multiplies z^k.
const RGAMMA_TAYLOR: [f64; 27] = [
    0.0,
    1.0,
    0.577_215_664_901_532_860_61,
    -0.655_878_071_520_253_881_08,
    -0.042_002_635_034_095_235_529,
    0.166_538_611_382_291_489_5,
    -0.042_197_734_555_544_336_748,
    -0.009_621_971_527_876_973_562_1,
    0.007_218_943_246_663_099_542_4,
    -0.001_165_167_591_859_065_112_1,
    -0.000_215_241_674_114_950_972_82,
    0.000_128_050_282_388_116_186_15,
    -0.000_020_134_854_780_788_238_656,
    -1.250_493_482_142_670_657_3e-6,
    1.133_027_231_981_695_882_4e-6,
    -2.056_338_416_977_607_103_5e-7,
    6.116_095_104_481_415_817_9e-9,
    5.002_007_644_469_222_930_1e-9,
    -1.181_274_570_487_020_144_6e-9,
    1.043_426_711_691_100_510_5e-10,
    7.782_263_439_905_071_254e-12,
    -3.696_805_618_642_205_708_2e-12,
    5.100_370_287_454_475_979e-13,
    -2.058_326_053_566_506_783_2e-14,
    -5.348_122_539_423_017_982_4e-15,
    1.226_778_628_238_260_790_2e-15,
    -1.181_259_301_697_458_769_5e-16,
];

/// Temme's auxiliary functions Γ₁(μ), Γ₂(μ) for |μ| ≤ ½.
fn temme_gammas(mu: f64) -> (f64, f64) {
    let m2 = mu * mu;
    let mut g1 = 0.0;
    let mut g2 = 0.0;
    let mut p = 1.0;
    let mut k = 0;
    while 2 * k + 2 < RGAMMA_TAYLOR.len() {
        g1 -= RGAMMA_TAYLOR[2 * k + 2] * p;
        g2 += RGAMMA_TAYLOR[2 * k + 1] * p;
        p *= m2;
        k += 1;
    }
    (g1, g2)
}

/// (K_ν(x), K_{ν+1}(x)) for ν ≥ 0, x > 0, without argument checks.
///
/// Temme's series for x ≤ 2, Steed's continued fraction above, then
/// forward recurrence in the order.
pub fn bessel_k_pair(nu: f64, x: f64) -> (f64, f64) {
    let nl = libm::floor(nu + 0.5);
    let mu = nu - nl;
    let mu2 = mu * mu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let (mut kmu, mut k1);
    if x <= 2.0 {
        let x2 = 0.5 * x;
        let pimu = PI * mu;
        let fact = if pimu.abs() < 1e-15 { 1.0 } else { pimu / libm::sin(pimu) };
        let d = -libm::log(x2);
        let e = mu * d;
        let fact2 = if e.abs() < 1e-15 { 1.0 } else { libm::sinh(e) / e };
        let (g1, g2) = temme_gammas(mu);
        let gampl = g2 - mu * g1;
        let gammi = g2 + mu * g1;
        let mut ff = fact * (g1 * libm::cosh(e) + g2 * fact2 * d);
        let mut sum = ff;
        let ee = libm::exp(e);
        let mut p = 0.5 * ee / gampl;
        let mut q = 0.5 / (ee * gammi);
        let mut c = 1.0;
        let dd = x2 * x2;
        let mut sum1 = p;
        let mut i = 1.0;
        loop {
            ff = (i * ff + p + q) / (i * i - mu2);
            c *= dd / i;
            p /= i - mu;
            q /= i + mu;
            let del = c * ff;
            sum += del;
            let del1 = c * (p - i * ff);
            sum1 += del1;
            if del.abs() < sum.abs() * 1e-17 || i > 500.0 {
                break;
            }
            i += 1.0;
        }
        kmu = sum;
        k1 = sum1 * xi2;
    } else {
        let mut b = 2.0 * (1.0 + x);
        let mut d = 1.0 / b;
        let mut h = d;
        let mut delh = d;
        let mut q1 = 0.0;
        let mut q2 = 1.0;
        let a1 = 0.25 - mu2;
        let mut q = a1;
        let mut c = a1;
        let mut a = -a1;
        let mut s = 1.0 + q * delh;
        let mut i = 1.0;
        while i < 10_000.0 {
            a -= 2.0 * i;
            c = -a * c / (i + 1.0);
            let qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += c * qnew;
            b += 2.0;
            d = 1.0 / (b + a * d);
            delh = (b * d - 1.0) * delh;
            h += delh;
            let dels = q * delh;
            s += dels;
            if (dels / s).abs() < 1e-17 {
                break;
            }
            i += 1.0;
        }
        h *= a1;
        kmu = libm::sqrt(PI / (2.0 * x)) * libm::exp(-x) / s;
        k1 = kmu * (mu + x + 0.5 - h) * xi;
    }
    let mut i = 1.0;
    while i <= nl {
        let t = (mu + i) * xi2 * k1 + kmu;
        kmu = k1;
        k1 = t;
        i += 1.0;
    }
    (kmu, k1)
}

fn check_order_arg(nu: f64, x: f64) -> Result<()> {
    if !(nu >= 0.0) || !nu.is_finite() {
        return Err(Error::Domain("Bessel order must be a finite real ≥ 0"));
    }
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain("Bessel argument must be finite and > 0"));
    }
    Ok(())
}

/// Modified Bessel function of the second kind K_ν(x).
pub fn bessel_k(nu: f64, x: f64) -> Result<f64> {
    check_order_arg(nu, x)?;
    let v = bessel_k_pair(nu, x).0;
    if v.is_infinite() {
        return Err(Error::Overflow("K_ν(x) for tiny x"));
    }
    Ok(v)
}

/// Modified Bessel function of the first kind I_ν(x).
pub fn bessel_i(nu: f64, x: f64) -> Result<f64> {
    bessel_i_with(nu, x, &EvalPolicy::default())
}

pub fn bessel_i_with(nu: f64, x: f64, pol: &EvalPolicy) -> Result<f64> {
    check_order_arg(nu, x)?;
    let v = if x > 40.0f64.max(nu * nu) {
        bessel_i_asymptotic(nu, x)
    } else {
        bessel_i_series(nu, x, pol)?
    };
    if !v.is_finite() {
        return Err(Error::Overflow("I_ν(x) exceeds f64 range"));
    }
    Ok(v)
}

fn bessel_i_series(nu: f64, x: f64, pol: &EvalPolicy) -> Result<f64> {
    let q = 0.25 * x * x;
    let mut t = 1.0;
    let mut s = 1.0;
    let mut k = 1usize;
    loop {
        t *= q / (k as f64 * (nu + k as f64));
        s += t;
        if t < pol.rel_tol * 0.1 * s {
            break;
        }
        k += 1;
        if k > pol.max_terms {
            return Err(Error::NoConvergence("I_ν ascending series"));
        }
    }
    let lp = nu * libm::log(0.5 * x) - libm::lgamma(nu + 1.0);
    Ok(libm::exp(lp) * s)
}

fn bessel_i_asymptotic(nu: f64, x: f64) -> f64 {
    let m = 4.0 * nu * nu;
    let mut t = 1.0;
    let mut s = 1.0;
    let mut k = 1.0;
    while k < 200.0 {
        let nt = -t * (m - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (k * 8.0 * x);
        if nt.abs() > t.abs() {
            break;
        }
        t = nt;
        s += t;
        if t.abs() < 1e-17 * s.abs() {
            break;
        }
        k += 1.0;
    }
    let h = libm::exp(0.5 * x);
    h * (h * s / libm::sqrt(2.0 * PI * x))
}

/// Bessel function of the first kind J_n(x), integer order.
pub fn bessel_j(n: u32, x: f64) -> f64 {
    libm::jn(n as i32, x)
}

/// Derivative J′_n(x).
pub fn bessel_jp(n: u32, x: f64) -> f64 {
    if n == 0 {
        -libm::j1(x)
    } else {
        0.5 * (libm::jn(n as i32 - 1, x) - libm::jn(n as i32 + 1, x))
    }
}

const ZERO_STEP: f64 = 0.1;

fn zeros_below<F: Fn(f64) -> f64>(f: F, start: f64, xmax: f64) -> Vec<f64> {
    if xmax <= start {
        return Vec::new();
    }
    let steps = libm::ceil((xmax - start) / ZERO_STEP) as usize;
    roots::scan_roots(&f, start, start + steps as f64 * ZERO_STEP, steps, 1e-14)
        .into_iter()
        .filter(|r| *r > 0.0 && *r < xmax)
        .collect()
}

/// All positive zeros of J_n below `xmax`, ascending.
pub fn bessel_j_zeros(n: u32, xmax: f64) -> Vec<f64> {
    zeros_below(|x| bessel_j(n, x), 0.5 * n as f64 + 1e-3, xmax)
}

/// All positive zeros of J′_n below `xmax`, ascending. The zero of J′₀ at
/// the origin is excluded.
pub fn bessel_jprime_zeros(n: u32, xmax: f64) -> Vec<f64> {
    zeros_below(|x| bessel_jp(n, x), 0.5 * n as f64 + 1e-3, xmax)
}

fn kth_zero<F: Fn(u32, f64) -> Vec<f64>>(n: u32, k: u32, zeros: F) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("zero index k starts at 1"));
    }
    // j_{n,k} < n + π(k + n/2 + 1) comfortably bounds the k-th zero.
    let mut xmax = n as f64 + PI * (k as f64 + 0.5 * n as f64 + 1.0) + 5.0;
    for _ in 0..8 {
        let z = zeros(n, xmax);
        if z.len() >= k as usize {
            return Ok(z[k as usize - 1]);
        }
        xmax *= 2.0;
    }
    Err(Error::NoConvergence("Bessel zero search"))
}

/// The k-th positive zero j_{n,k} of J_n.
pub fn bessel_j_zero(n: u32, k: u32) -> Result<f64> {
    kth_zero(n, k, bessel_j_zeros)
}

/// The k-th positive zero j′_{n,k} of J′_n (origin excluded).
pub fn bessel_jprime_zero(n: u32, k: u32) -> Result<f64> {
    kth_zero(n, k, bessel_jprime_zeros)
}

/// Riemann zeta for real s > 1.
pub fn zeta(s: f64) -> Result<f64> {
    if s == 1.0 {
        return Err(Error::Pole("ζ(s) at s = 1"));
    }
    if !(s > 1.0) {
        return Err(Error::Domain("zeta requires s > 1"));
    }
    Ok(zeta_real(s))
}

/// Riemann zeta for any real s ≠ 1 (NaN at s = 1).
///
/// Borwein's alternating-series acceleration for s ≥ ½, reflection below.
pub fn zeta_real(s: f64) -> f64 {
    if s == 1.0 {
        return f64::NAN;
    }
    if s < 0.5 {
        if s == libm::floor(s) && (s as i64) % 2 == 0 {
            return if s == 0.0 { -0.5 } else { 0.0 };
        }
        let one_minus = 1.0 - s;
        return libm::pow(2.0, s) * libm::pow(PI, s - 1.0) * libm::sin(0.5 * PI * s) * libm::tgamma(one_minus)
            * zeta_real(one_minus);
    }
    if s > 60.0 {
        return 1.0 + libm::pow(2.0, -s) + libm::pow(3.0, -s);
    }
    const N: usize = 50;
    let mut d = [0.0f64; N + 1];
    let mut term = 1.0;
    let mut acc = 1.0;
    d[0] = 1.0;
    for i in 0..N {
        let fi = i as f64;
        let nf = N as f64;
        term *= 4.0 * (nf + fi) * (nf - fi) / ((2.0 * fi + 1.0) * (2.0 * fi + 2.0));
        acc += term;
        d[i + 1] = acc;
    }
    let dn = d[N];
    let mut eta = 0.0;
    for k in 0..N {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        eta += sign * (d[k] - dn) / libm::pow((k + 1) as f64, s);
    }
    eta = -eta / dn;
    let denom = -libm::expm1((1.0 - s) * core::f64::consts::LN_2);
    eta / denom
}

/// Polylogarithm Li_s(z) = Σ_{n≥1} zⁿ/n^s for real s > 0 and z ∈ [0, 1].
pub fn polylog(s: f64, z: f64) -> Result<f64> {
    polylog_with(s, z, &EvalPolicy::default())
}

pub fn polylog_with(s: f64, z: f64, pol: &EvalPolicy) -> Result<f64> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::Domain("polylog order must be > 0"));
    }
    if !(0.0..=1.0).contains(&z) {
        return Err(Error::Domain("polylog argument must lie in [0, 1]"));
    }
    if z == 1.0 {
        if s <= 1.0 {
            return Err(Error::Divergent("Li_s(1) diverges for s ≤ 1"));
        }
        return Ok(zeta_real(s));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    if s == 1.0 {
        return Ok(-libm::log1p(-z));
    }
    if z <= 0.5 {
        let mut zn = z;
        let mut sum = 0.0;
        for n in 1..=pol.max_terms {
            let t = zn / libm::pow(n as f64, s);
            sum += t;
            if t < 0.1 * pol.rel_tol * sum {
                return Ok(sum);
            }
            zn *= z;
        }
        return Err(Error::NoConvergence("polylog direct series"));
    }
    let mu = libm::log(z);
    let sr = libm::round(s);
    let is_int = s == sr;
    if !is_int && (s - sr).abs() < 1e-4 {
        return polylog_integral(s, z, pol);
    }
    let mut sum = 0.0;
    let mut mk = 1.0; // μ^k / k!
    for k in 0..60usize {
        let kf = k as f64;
        if k > 0 {
            mk *= mu / kf;
        }
        let t = if is_int && (k as f64) == sr - 1.0 {
            let harmonic: f64 = (1..k + 1).map(|j| 1.0 / j as f64).sum();
            mk * (harmonic - libm::log(-mu))
        } else {
            zeta_real(s - kf) * mk
        };
        sum += t;
        if k > sr as usize + 2 && t.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    if !is_int {
        sum += libm::tgamma(1.0 - s) * libm::pow(-mu, s - 1.0);
    }
    Ok(sum)
}

fn polylog_integral(s: f64, z: f64, pol: &EvalPolicy) -> Result<f64> {
    // Li_s(z) = z/Γ(s) ∫₀^∞ t^{s-1}/(e^t - z) dt, with t = u^{1/s} removing the endpoint power.
    let opts = QuadOptions { abs_tol: 1e-300, rel_tol: pol.rel_tol.max(1e-14), max_subdivisions: pol.max_subdivisions };
    let inv_s = 1.0 / s;
    let v = quad::integrate_to_inf(
        |u| {
            let t = libm::pow(u, inv_s);
            1.0 / (libm::expm1(t) + (1.0 - z))
        },
        0.0,
        1.0,
        opts,
    )?;
    Ok(z * v * inv_s * rgamma(s))
}

/// Bernoulli number B_{2k} from ζ(2k).
pub fn bernoulli_even(k: u32) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let n = 2 * k;
    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
    sign * 2.0 * libm::tgamma(n as f64 + 1.0) * zeta_real(n as f64) / libm::pow(2.0 * PI, n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_integer_closed_forms() {
        let x = 1.0;
        let i = bessel_i(0.5, x).unwrap();
        assert!((i - libm::sqrt(2.0 / PI) * libm::sinh(1.0)).abs() < 1e-15);
        let k = bessel_k(0.5, x).unwrap();
        assert!((k - libm::sqrt(PI / 2.0) * libm::exp(-1.0)).abs() < 1e-15);
    }

    #[test]
    fn i0_near_origin() {
        assert!((bessel_i(0.0, 1e-300).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn k0_large_argument_asymptote() {
        let x = 30.0;
        let k = bessel_k(0.0, x).unwrap();
        let a = libm::sqrt(PI / (2.0 * x)) * libm::exp(-x);
        assert!((k / a - 1.0).abs() < 1e-2);
        // the leading correction is -1/(8x)
        assert!((k / a - (1.0 - 1.0 / (8.0 * x))).abs() < 1e-3);
    }

    #[test]
    fn domain_errors() {
        assert!(bessel_i(1.0, 0.0).is_err());
        assert!(bessel_k(1.0, -1.0).is_err());
        assert!(bessel_k(-1.0, 1.0).is_err());
        assert!(matches!(bessel_i(0.0, 800.0), Err(Error::Overflow(_))));
        assert!(matches!(polylog(1.0, 1.0), Err(Error::Divergent(_))));
        assert!(matches!(zeta(1.0), Err(Error::Pole(_))));
    }

    #[test]
    fn zeta_values() {
        assert!((zeta(2.0).unwrap() - PI * PI / 6.0).abs() < 1e-15);
        assert!((zeta(3.0).unwrap() - 1.202_056_903_159_594_2).abs() < 1e-15);
        assert!((zeta_real(-1.0) + 1.0 / 12.0).abs() < 1e-15);
        assert!((zeta_real(0.0) + 0.5).abs() < 1e-15);
        assert!((zeta_real(1.0 + 2.0 / 2.0) - zeta(2.0).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn polylog_closed_forms() {
        for z in [0.1, 0.5, 0.7, 0.99] {
            assert!((polylog(1.0, z).unwrap() + libm::log(1.0 - z)).abs() < 1e-14);
        }
        assert!((polylog(3.0, 1.0).unwrap() - 1.202_056_903_159_594_2).abs() < 1e-15);
        // Li₂(½) = π²/12 − ln²2 / 2
        let l2 = PI * PI / 12.0 - 0.5 * core::f64::consts::LN_2 * core::f64::consts::LN_2;
        assert!((polylog(2.0, 0.5).unwrap() - l2).abs() < 1e-15);
    }

    #[test]
    fn bernoulli_numbers() {
        assert!((bernoulli_even(1) - 1.0 / 6.0).abs() < 1e-15);
        assert!((bernoulli_even(2) + 1.0 / 30.0).abs() < 1e-15);
        assert!((bernoulli_even(3) - 1.0 / 42.0).abs() < 1e-15);
    }

    #[test]
    fn policy_validation() {
        assert!(EvalPolicy::new(1e-2, 100, 10).is_err());
        assert!(EvalPolicy::new(1e-10, 8, 10).is_err());
        assert!(EvalPolicy::new(1e-10, 16, 10).is_ok());
    }
}
