//! Zeta-regularized lattice sums and Matsubara summation.
//!
//! The Chowla–Selberg and Elizalde expansions split a quadratic-form sum
//! into an algebraic leading term and an exponentially convergent series of
//! Macdonald functions. For plate geometries the leading term does not
//! depend on the separation and is dropped by force routines, so the two
//! pieces are returned separately.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::quad::{self, QuadOptions};
use crate::specfun::{self, rgamma};
use crate::{Error, Result};

/// Diagonal quadratic form `Σ a_i n_i² + ω²` with p = 1 or 2.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticFormDiag {
    coefficients: Vec<f64>,
    omega: f64,
}

impl QuadraticFormDiag {
    pub fn new(coefficients: Vec<f64>, omega: f64) -> Result<Self> {
        if coefficients.is_empty() || coefficients.len() > 2 {
            return Err(Error::Unsupported("only p = 1 or p = 2 quadratic forms"));
        }
        if coefficients.iter().any(|a| !(*a > 0.0)) {
            return Err(Error::Domain("quadratic form coefficients must be positive"));
        }
        if !(omega >= 0.0) {
            return Err(Error::Domain("omega must be non-negative"));
        }
        Ok(Self { coefficients, omega })
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn dim(&self) -> usize {
        self.coefficients.len()
    }
}

/// Leading algebraic term and Macdonald-function series of a zeta sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaParts {
    pub leading: f64,
    pub bessel_sum: f64,
}

impl ZetaParts {
    pub fn total(&self) -> f64 {
        self.leading + self.bessel_sum
    }
}

const SERIES_TOL: f64 = 1e-16;
const SERIES_MAX: usize = 1_000_000;

/// Z₁(s, α, ω) = Σ_{n∈ℤ} (α²n² + ω²)^{−s} through the Chowla–Selberg formula.
///
/// For ω = 0 the sum reduces to 2ζ(2s)/α^{2s}, returned as the series part.
pub fn chowla_selberg_1d(s: f64, alpha: f64, omega: f64) -> Result<ZetaParts> {
    if !(alpha > 0.0) {
        return Err(Error::Domain("alpha must be positive"));
    }
    if !(omega >= 0.0) {
        return Err(Error::Domain("omega must be non-negative"));
    }
    if omega == 0.0 {
        if s <= 0.5 {
            return Err(Error::Divergent("massless sum requires s > 1/2"));
        }
        return Ok(ZetaParts { leading: 0.0, bessel_sum: 2.0 * specfun::zeta_real(2.0 * s) * libm::pow(alpha, -2.0 * s) });
    }
    let rg = rgamma(s);
    if rg == 0.0 {
        return Ok(ZetaParts { leading: 0.0, bessel_sum: 0.0 });
    }
    let h = s - 0.5;
    if h <= 0.0 && h == libm::floor(h) {
        return Err(Error::Pole("Γ(s − 1/2) in the leading term"));
    }
    let leading = libm::sqrt(PI) * libm::tgamma(h) * rg / alpha * libm::pow(omega, 1.0 - 2.0 * s);
    Ok(ZetaParts { leading, bessel_sum: cs_series(s, alpha, omega, rg)? })
}

/// Macdonald-function series of [`chowla_selberg_1d`] alone.
///
/// Defined also where the leading term has a pole, which is where plate
/// force integrands need it.
pub fn chowla_selberg_series(s: f64, alpha: f64, omega: f64) -> Result<f64> {
    if !(alpha > 0.0) || !(omega > 0.0) {
        return Err(Error::Domain("series part requires alpha > 0 and omega > 0"));
    }
    let rg = rgamma(s);
    if rg == 0.0 {
        return Ok(0.0);
    }
    cs_series(s, alpha, omega, rg)
}

fn cs_series(s: f64, alpha: f64, omega: f64, rg: f64) -> Result<f64> {
    let h = s - 0.5;
    let nu = h.abs();
    let pref = 4.0 * libm::pow(PI, s) * rg / alpha;
    let step = 2.0 * PI * omega / alpha;
    let mut sum = 0.0;
    let mut n = 1usize;
    loop {
        let nf = n as f64;
        let k = specfun::bessel_k_pair(nu, step * nf).0;
        let t = libm::pow(nf / (alpha * omega), h) * k;
        sum += t;
        if t.abs() <= SERIES_TOL * sum.abs() || t == 0.0 {
            break;
        }
        n += 1;
        if n > SERIES_MAX {
            return Err(Error::NoConvergence("Chowla–Selberg Bessel series"));
        }
    }
    Ok(pref * sum)
}

/// Z_p(s, A, ω) for diagonal A, p ∈ {1, 2}, split into its two parts.
pub fn elizalde_parts(q: &QuadraticFormDiag, s: f64) -> Result<ZetaParts> {
    match q.dim() {
        1 => chowla_selberg_1d(s, libm::sqrt(q.coefficients[0]), q.omega),
        _ => elizalde_2d(q.coefficients[0], q.coefficients[1], q.omega, s),
    }
}

/// Z_p(s, A, ω) = Σ_{n∈ℤ^p} (nᵀAn + ω²)^{−s}.
pub fn elizalde_z(q: &QuadraticFormDiag, s: f64) -> Result<f64> {
    elizalde_parts(q, s).map(|p| p.total())
}

fn elizalde_2d(a1: f64, a2: f64, omega: f64, s: f64) -> Result<ZetaParts> {
    if omega == 0.0 {
        return Err(Error::Domain("p = 2 expansion requires omega > 0"));
    }
    let rg = rgamma(s);
    if rg == 0.0 {
        return Ok(ZetaParts { leading: 0.0, bessel_sum: 0.0 });
    }
    let h = s - 1.0;
    if h <= 0.0 && h == libm::floor(h) {
        return Err(Error::Pole("Γ(s − 1) in the leading term"));
    }
    let sqrt_det = libm::sqrt(a1 * a2);
    let leading = PI / sqrt_det * libm::tgamma(h) * rg * libm::pow(omega, 2.0 - 2.0 * s);
    let nu = h.abs();
    let pref = 2.0 * libm::pow(PI, s) * rg / sqrt_det;
    let term = |m1: i64, m2: i64| {
        let r = libm::sqrt((m1 * m1) as f64 / a1 + (m2 * m2) as f64 / a2);
        libm::pow(r / omega, h) * specfun::bessel_k_pair(nu, 2.0 * PI * omega * r).0
    };
    let mut sum = 0.0;
    let mut r = 1i64;
    loop {
        // ring of lattice points with max(|m1|, |m2|) = r, using the fourfold symmetry
        let mut ring = 2.0 * (term(r, 0) + term(0, r));
        for j in 1..=r {
            ring += 4.0 * term(r, j);
            if j < r {
                ring += 4.0 * term(j, r);
            }
        }
        sum += ring;
        if ring.abs() <= SERIES_TOL * sum.abs() || ring == 0.0 {
            break;
        }
        r += 1;
        if r as usize > 20_000 {
            return Err(Error::NoConvergence("Elizalde p = 2 ring sum"));
        }
    }
    Ok(ZetaParts { leading, bessel_sum: pref * sum })
}

/// Y₁(s, α, ω) = Z₁(s − 1, α, ω) − ω² Z₁(s, α, ω), split into its two parts.
pub fn y1_parts(s: f64, alpha: f64, omega: f64) -> Result<ZetaParts> {
    let a = chowla_selberg_1d(s - 1.0, alpha, omega)?;
    let b = chowla_selberg_1d(s, alpha, omega)?;
    let w2 = omega * omega;
    Ok(ZetaParts { leading: a.leading - w2 * b.leading, bessel_sum: a.bessel_sum - w2 * b.bessel_sum })
}

/// Series part of Y₁, finite wherever ω > 0.
pub fn y1_series(s: f64, alpha: f64, omega: f64) -> Result<f64> {
    let a = chowla_selberg_series(s - 1.0, alpha, omega)?;
    let b = chowla_selberg_series(s, alpha, omega)?;
    Ok(a - omega * omega * b)
}

/// Y₁(s, α, ω) = Σ_{n∈ℤ} α²n² (α²n² + ω²)^{−s}.
pub fn y1(s: f64, alpha: f64, omega: f64) -> Result<f64> {
    if omega == 0.0 {
        return chowla_selberg_1d(s - 1.0, alpha, 0.0).map(|p| p.total());
    }
    y1_parts(s, alpha, omega).map(|p| p.total())
}

/// Temperature and truncation policy for Matsubara sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalState {
    temperature: f64,
    pub n_max: usize,
    pub rel_tol: f64,
    /// Decay scale of the integrand in κ, used only by the T = 0 quadrature.
    pub kappa_scale: f64,
}

impl ThermalState {
    /// Weight of the n = 0 Matsubara term.
    pub const ZERO_MODE_WEIGHT: f64 = 0.5;

    pub fn new(temperature: f64) -> Result<Self> {
        if !(temperature >= 0.0) || !temperature.is_finite() {
            return Err(Error::Domain("temperature must be finite and ≥ 0"));
        }
        Ok(Self { temperature, n_max: 1_000_000, rel_tol: 1e-14, kappa_scale: 1.0 })
    }

    pub fn zero() -> Self {
        Self { temperature: 0.0, n_max: 1_000_000, rel_tol: 1e-14, kappa_scale: 1.0 }
    }

    pub fn with_kappa_scale(mut self, scale: f64) -> Self {
        self.kappa_scale = scale;
        self
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn zero_mode_weight(&self) -> f64 {
        Self::ZERO_MODE_WEIGHT
    }

    /// κ_n = 2πnT.
    pub fn kappa(&self, n: usize) -> f64 {
        2.0 * PI * n as f64 * self.temperature
    }
}

/// T Σ′_{n≥0} f(κ_n) for T > 0, or (1/2π) ∫₀^∞ f(κ) dκ for T = 0.
///
/// The tail of the thermal sum is bounded by a geometric ratio estimated
/// from the last three terms.
pub fn matsubara_sum<F: FnMut(f64) -> f64>(mut f: F, state: &ThermalState) -> Result<f64> {
    let t = state.temperature;
    if t == 0.0 {
        let opts = QuadOptions { abs_tol: 1e-300, rel_tol: state.rel_tol.max(1e-13), max_subdivisions: 4000 };
        let v = quad::integrate_to_inf(&mut f, 0.0, state.kappa_scale, opts)?;
        return Ok(v / (2.0 * PI));
    }
    let mut sum = ThermalState::ZERO_MODE_WEIGHT * f(0.0);
    let mut last = [f64::NAN; 3];
    for n in 1..=state.n_max {
        let term = f(state.kappa(n));
        if !term.is_finite() {
            return Err(Error::NoConvergence("non-finite Matsubara term"));
        }
        sum += term;
        last = [last[1], last[2], term.abs()];
        if n >= 3 {
            if last.iter().all(|v| *v == 0.0) {
                return Ok(t * sum);
            }
            let r = (last[2] / last[1]).max(last[1] / last[0]);
            if r < 1.0 {
                let tail = last[2] * r / (1.0 - r);
                if tail <= state.rel_tol * sum.abs() {
                    return Ok(t * sum);
                }
            }
        }
    }
    Err(Error::NoConvergence("Matsubara tail bound not met within n_max"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s1_closed_form() {
        let (a, w) = (PI, 1.0);
        let z = chowla_selberg_1d(1.0, a, w).unwrap().total();
        let exact = PI / (a * w) / libm::tanh(PI * w / a);
        assert!((z - exact).abs() < 1e-12);
    }

    #[test]
    fn zeta_at_zero_vanishes() {
        let z = chowla_selberg_1d(0.0, 2.0, 1.0).unwrap();
        assert_eq!(z.total(), 0.0);
    }

    #[test]
    fn pole_detection() {
        assert!(matches!(chowla_selberg_1d(0.5, 1.0, 1.0), Err(Error::Pole(_))));
        let q = QuadraticFormDiag::new(alloc::vec![1.0, 1.0], 1.0).unwrap();
        assert!(matches!(elizalde_z(&q, 1.0), Err(Error::Pole(_))));
    }

    #[test]
    fn quadratic_form_validation() {
        assert!(QuadraticFormDiag::new(alloc::vec![], 1.0).is_err());
        assert!(QuadraticFormDiag::new(alloc::vec![1.0, -1.0], 1.0).is_err());
        assert!(QuadraticFormDiag::new(alloc::vec![1.0, 1.0, 1.0], 1.0).is_err());
    }

    #[test]
    fn thermal_geometric_series() {
        let d = 0.7;
        let st = ThermalState::new(0.3).unwrap();
        let v = matsubara_sum(|k| libm::exp(-2.0 * k * d), &st).unwrap();
        let exact = 0.5 * 0.3 / libm::tanh(2.0 * PI * 0.3 * d);
        assert!((v - exact).abs() < 1e-13);
        let v0 = matsubara_sum(|k| libm::exp(-2.0 * k * d), &ThermalState::zero()).unwrap();
        assert!((v0 - 1.0 / (4.0 * PI * d)).abs() < 1e-13);
    }
}
