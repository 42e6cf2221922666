//! Pairwise summation approximation (diluted limit) for soft dielectric,
//! diamagnetic and magnetoelectric bodies, including topological insulators.
//!
//! Every energy is a double volume integral of a two-point kernel. In the
//! quantum regime the kernel at separation `R` is written
//!
//! `E(R) = −Γ(R) / ((4π)³ R⁷)`,
//!
//! where Γ collects the susceptibility products. For static media at T = 0,
//! Γ = γ₀ (see [`gamma0_static`]). In the classical regime the kernel is
//! `−3T γ_cl' / ((4π)² R⁶)` with `γ_cl = 3 γ_cl'`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::quad::{self, QuadOptions};
use crate::roots;
use crate::specfun;
use crate::{Error, Result};

/// Fine-structure constant used for the topological magnetoelectric coupling.
pub const FINE_STRUCTURE: f64 = 1.0 / 137.035999;

/// Susceptibility magnitude above which the diluted expansion is flagged.
pub const SOFT_LIMIT: f64 = 0.5;

/// Below this λ the kernels use their Laurent series instead of the closed forms.
const SERIES_SWITCH: f64 = 0.5;
const SERIES_TERMS: usize = 20;

const PT: f64 = 4.0 * PI;
const PT3: f64 = PT * PT * PT;

// ---------------------------------------------------------------------------
// Materials

/// Frequency-independent susceptibility offsets of a soft medium.
///
/// `eps`, `mu` are ε − 1 and μ − 1; `alpha`, `beta` the magnetoelectric
/// couplings of D to H and of B to E.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StaticMaterial {
    pub eps: f64,
    pub mu: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl StaticMaterial {
    pub fn new(eps: f64, mu: f64, alpha: f64, beta: f64) -> Result<Self> {
        if ![eps, mu, alpha, beta].iter().all(|v| v.is_finite()) {
            return Err(Error::Domain("susceptibilities must be finite"));
        }
        Ok(Self { eps, mu, alpha, beta })
    }

    pub fn dielectric(eps: f64) -> Self {
        Self { eps, ..Self::default() }
    }
}

/// Topological insulator with a single undamped resonance,
/// ε(iκ) = ε₀ + w²/(1 + κ²/ω_R²), μ = 1.
///
/// `theta` is the magnetoelectric angle in units of π, so the coupling is
/// ᾱ = α_fs·θ. The background ε₀ enters only the positive-energy check
/// |ᾱ| < √ε(0); the diluted kernel uses the resonant part w²/(1 + κ²/ω_R²).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TiMaterial {
    eps0: f64,
    w: f64,
    theta: f64,
    omega_r: f64,
}

impl TiMaterial {
    pub fn new(eps0: f64, w: f64, theta: f64, omega_r: f64) -> Result<Self> {
        if !(eps0 > 0.0) || !eps0.is_finite() {
            return Err(Error::Domain("ε₀ must be positive"));
        }
        if !(w >= 0.0) || !w.is_finite() {
            return Err(Error::Domain("w must be finite and ≥ 0"));
        }
        if !theta.is_finite() {
            return Err(Error::Domain("θ must be finite"));
        }
        if !(omega_r > 0.0) || !omega_r.is_finite() {
            return Err(Error::Domain("ω_R must be positive"));
        }
        let abar = FINE_STRUCTURE * theta;
        if !(abar.abs() < libm::sqrt(eps0 + w * w)) {
            return Err(Error::Domain("forbidden region: |ᾱ| must be below √ε(0)"));
        }
        Ok(Self { eps0, w, theta, omega_r })
    }

    pub fn eps0(&self) -> f64 {
        self.eps0
    }

    pub fn w(&self) -> f64 {
        self.w
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn omega_r(&self) -> f64 {
        self.omega_r
    }

    /// ᾱ = α_fs·θ.
    pub fn alpha_bar(&self) -> f64 {
        FINE_STRUCTURE * self.theta
    }

    /// ε(0) = ε₀ + w².
    pub fn eps_static(&self) -> f64 {
        self.eps0 + self.w * self.w
    }

    /// Effective electric offset w²/(1 + κ²/ω_R²) + ᾱ².
    pub fn eps_tilde(&self, kappa: f64) -> f64 {
        let r = kappa / self.omega_r;
        let a = self.alpha_bar();
        self.w * self.w / (1.0 + r * r) + a * a
    }
}

/// Isotropic static dipole polarizabilities of a point-like body
/// (volume units, α^E = ε̃V/4π).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PointPolarizability {
    pub alpha_e: f64,
    pub alpha_h: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MaterialPSA {
    Static(StaticMaterial),
    Ti(TiMaterial),
    Point(PointPolarizability),
}

impl MaterialPSA {
    /// False when |ε̃| or |μ̃| exceeds [`SOFT_LIMIT`]; the energy is still
    /// computed, but the diluted expansion is questionable.
    pub fn within_soft_limit(&self) -> bool {
        match self {
            MaterialPSA::Static(m) => m.eps.abs() <= SOFT_LIMIT && m.mu.abs() <= SOFT_LIMIT,
            MaterialPSA::Ti(m) => m.eps_tilde(0.0) <= SOFT_LIMIT,
            MaterialPSA::Point(_) => true,
        }
    }

    fn is_point(&self) -> bool {
        matches!(self, MaterialPSA::Point(_))
    }

    /// Couplings (ε̃, μ̃, α, β) at imaginary frequency κ. Point bodies carry
    /// 4πα as an integrated weight.
    fn couplings(&self, kappa: f64) -> [f64; 4] {
        match self {
            MaterialPSA::Static(m) => [m.eps, m.mu, m.alpha, m.beta],
            MaterialPSA::Ti(m) => {
                let a = m.alpha_bar();
                [m.eps_tilde(kappa), 0.0, a, a]
            }
            MaterialPSA::Point(p) => [PT * p.alpha_e, PT * p.alpha_h, 0.0, 0.0],
        }
    }

    fn dispersive(&self) -> bool {
        matches!(self, MaterialPSA::Ti(_))
    }
}

/// Channel weights: diagonal (EE-type) and crossed (EH-type).
fn channel_weights(c1: [f64; 4], c2: [f64; 4]) -> (f64, f64) {
    let [e1, m1, a1, b1] = c1;
    let [e2, m2, a2, b2] = c2;
    let diag = e1 * e2 + m1 * m2 + a1 * b2 + b1 * a2;
    let cross = e1 * m2 + m1 * e2 - a1 * a2 - b1 * b2;
    (diag, cross)
}

/// γ₀ = 23ε̃₁ε̃₂ − 7ε̃₁μ̃₂ − 7μ̃₁ε̃₂ + 23μ̃₁μ̃₂ + 7α₁α₂ + 23α₁β₂ + 23β₁α₂ + 7β₁β₂.
pub fn gamma0_static(m1: &StaticMaterial, m2: &StaticMaterial) -> f64 {
    let (d, c) = channel_weights([m1.eps, m1.mu, m1.alpha, m1.beta], [m2.eps, m2.mu, m2.alpha, m2.beta]);
    23.0 * d - 7.0 * c
}

/// γ_cl = 3ε̃₁ε̃₂ + 3μ̃₁μ̃₂ + 3α₁β₂ + 3β₁α₂. The crossed channel drops out.
pub fn gamma_cl(m1: &StaticMaterial, m2: &StaticMaterial) -> f64 {
    let (d, _) = channel_weights([m1.eps, m1.mu, m1.alpha, m1.beta], [m2.eps, m2.mu, m2.alpha, m2.beta]);
    3.0 * d
}

// ---------------------------------------------------------------------------
// Point-pair kernels

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    EE,
    HH,
    EH,
    HE,
}

impl Channel {
    fn crossed(self) -> bool {
        matches!(self, Channel::EH | Channel::HE)
    }
}

// e^{-2y} times these polynomials are the per-frequency integrands.
const P_EE: [f64; 5] = [6.0, 12.0, 10.0, 4.0, 2.0];
const P_EH: [f64; 5] = [0.0, 0.0, 1.0, 2.0, 1.0];

fn poly(c: &[f64; 5], y: f64) -> f64 {
    c[0] + y * (c[1] + y * (c[2] + y * (c[3] + y * c[4])))
}

/// Prefactor s with K = s·λ·Σ′ e^{-2λn} P(λn).
fn channel_scale(ch: Channel) -> f64 {
    if ch.crossed() {
        -4.0
    } else {
        2.0
    }
}

fn channel_poly(ch: Channel) -> &'static [f64; 5] {
    if ch.crossed() {
        &P_EH
    } else {
        &P_EE
    }
}

/// ∫₀^∞ e^{-2y} P(y) dy.
fn channel_integral(p: &[f64; 5]) -> f64 {
    // ∫ y^j e^{-2y} = j!/2^{j+1}
    let mut s = 0.0;
    let mut fact = 1.0;
    for (j, c) in p.iter().enumerate() {
        if j > 0 {
            fact *= j as f64;
        }
        s += c * fact / libm::pow(2.0, j as f64 + 1.0);
    }
    s
}

/// Laurent series of K(λ) = s·λ·Σ′ f(λn) with f = e^{-2y}P(y):
/// K = s [I + Σ_k (−B_{2k}/2k) f_{2k−1} λ^{2k}], f_j the Taylor coefficients.
fn kernel_series(ch: Channel, lambda: f64) -> f64 {
    let p = channel_poly(ch);
    let n = 2 * SERIES_TERMS;
    // Taylor coefficients of e^{-2y}
    let mut e = [0.0f64; 2 * SERIES_TERMS];
    e[0] = 1.0;
    for j in 1..n {
        e[j] = e[j - 1] * (-2.0) / j as f64;
    }
    let mut sum = channel_integral(p);
    let l2 = lambda * lambda;
    let mut lp = 1.0;
    for k in 1..=SERIES_TERMS {
        lp *= l2;
        let j = 2 * k - 1;
        let mut fj = 0.0;
        for (i, c) in p.iter().enumerate() {
            if i <= j {
                fj += c * e[j - i];
            }
        }
        sum += -specfun::bernoulli_even(k as u32) / (2 * k) as f64 * fj * lp;
    }
    channel_scale(ch) * sum
}

/// Closed forms of the Matsubara sums written in q = e^{-2λ}.
fn kernel_closed(ch: Channel, l: f64) -> f64 {
    let q = libm::exp(-2.0 * l);
    let l2 = l * l;
    let l3 = l2 * l;
    let l4 = l3 * l;
    let den = libm::pow(-libm::expm1(-2.0 * l), 5.0);
    let g = if ch.crossed() {
        let num = q * (1.0 + 2.0 * l + l2)
            + q * q * (-1.0 + 6.0 * l + 11.0 * l2)
            + q * q * q * (-1.0 - 6.0 * l + 11.0 * l2)
            + q * q * q * q * (1.0 - 2.0 * l + l2);
        l2 * num / den
    } else {
        let num = 3.0
            + q * (-9.0 + 12.0 * l + 10.0 * l2 + 4.0 * l3 + 2.0 * l4)
            + q * q * (6.0 - 36.0 * l - 10.0 * l2 + 12.0 * l3 + 22.0 * l4)
            + q * q * q * (6.0 + 36.0 * l - 10.0 * l2 - 12.0 * l3 + 22.0 * l4)
            + q * q * q * q * (-9.0 - 12.0 * l + 10.0 * l2 - 4.0 * l3 + 2.0 * l4)
            + 3.0 * q * q * q * q * q;
        num / den
    };
    channel_scale(ch) * l * g
}

/// Dimensionless finite-temperature kernel K(λ), λ = R·2πT, per unit
/// susceptibility product: `E = −K(λ)/((4π)³R⁷)`.
///
/// K → 23 (EE, HH) and −7 (EH, HE) as λ → 0.
/// Large λ gives the classical 6λ (EE, HH) and 0 (EH, HE).
pub fn pair_kernel_finite_t(lambda: f64, ch: Channel) -> Result<f64> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::Domain("λ must be finite and ≥ 0"));
    }
    if lambda < SERIES_SWITCH {
        Ok(kernel_series(ch, lambda))
    } else {
        Ok(kernel_closed(ch, lambda))
    }
}

/// Classical part of K: the n = 0 Matsubara term alone.
pub fn pair_kernel_classical(lambda: f64, ch: Channel) -> f64 {
    0.5 * channel_scale(ch) * lambda * channel_poly(ch)[0]
}

/// First high-temperature correction to K: the n = 1 Matsubara term.
pub fn pair_kernel_high_t_correction(lambda: f64, ch: Channel) -> f64 {
    channel_scale(ch) * lambda * libm::exp(-2.0 * lambda) * poly(channel_poly(ch), lambda)
}

/// Coefficient c of the leading low-temperature correction ΔE = c·T⁶/R per
/// unit susceptibility product.
///
/// Extracted from the closed forms alone: (K(λ) − K(0))/λ⁶ is sampled away
/// from the cancellation region and extrapolated to λ → 0 in powers of λ².
pub fn low_t_correction_coefficient(ch: Channel) -> f64 {
    let k0 = channel_scale(ch) * channel_integral(channel_poly(ch));
    const NODES: usize = 8;
    let mut xs = [0.0; NODES];
    let mut ys = [0.0; NODES];
    for i in 0..NODES {
        let l = 0.2 + 0.1 * i as f64;
        xs[i] = l * l;
        ys[i] = (kernel_closed(ch, l) - k0) / libm::pow(l, 6.0);
    }
    // Neville extrapolation to x = 0.
    for m in 1..NODES {
        for i in 0..NODES - m {
            ys[i] = (xs[i + m] * ys[i] - xs[i] * ys[i + 1]) / (xs[i + m] - xs[i]);
        }
    }
    // ΔE = −κ₆λ⁶/((4π)³R⁷) = −κ₆π³T⁶/R.
    -ys[0] * PI * PI * PI
}

// ---------------------------------------------------------------------------
// Topological insulator integrands

fn shape_integral(x: f64, power: i32) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain("x must be positive and finite"));
    }
    let g = |y: f64| {
        let r = y / x;
        let l = 1.0 / (1.0 + r * r);
        let lp = if power == 2 { l * l } else { l };
        libm::exp(-2.0 * y) * poly(&P_EE, y) * lp
    };
    let opts = QuadOptions { abs_tol: 1e-300, rel_tol: 1e-12, max_subdivisions: 400 };
    let mut total = 0.0;
    let a = x.min(1.0);
    total += quad::integrate(g, 0.0, a, opts)?;
    if a < 1.0 {
        total += quad::integrate(g, a, 1.0, opts)?;
    }
    total += quad::integrate_to_inf(g, 1.0, 1.0, opts)?;
    Ok(2.0 * total / x)
}

/// f₁(x) = (2/x)∫₀^∞ e^{-2y}(6 + 12y + 10y² + 4y³ + 2y⁴)/(1 + y²/x²)² dy.
///
/// Tends to 3π as x → 0 and to 23/x as x → ∞.
pub fn ti_f1(x: f64) -> Result<f64> {
    shape_integral(x, 2)
}

/// f₂(x), the same integral with a single resonance factor 1/(1 + y²/x²).
///
/// Tends to 6π as x → 0 and to 23/x as x → ∞.
pub fn ti_f2(x: f64) -> Result<f64> {
    shape_integral(x, 1)
}

fn same_resonance(m1: &TiMaterial, m2: &TiMaterial) -> Result<()> {
    if (m1.omega_r - m2.omega_r).abs() > 1e-12 * m1.omega_r {
        return Err(Error::Unsupported("TI pairs must share the resonance frequency ω_R"));
    }
    Ok(())
}

/// γ₀(x) = w₁²w₂²·x f₁(x) + 60ᾱ₁ᾱ₂ + 23ᾱ₁²ᾱ₂² + (ᾱ₁²w₂² + ᾱ₂²w₁²)·x f₂(x),
/// x = ω_R R.
pub fn ti_gamma0(x: f64, m1: &TiMaterial, m2: &TiMaterial) -> Result<f64> {
    same_resonance(m1, m2)?;
    let (a1, a2) = (m1.alpha_bar(), m2.alpha_bar());
    let (w1, w2) = (m1.w * m1.w, m2.w * m2.w);
    let mut g = 60.0 * a1 * a2 + 23.0 * a1 * a1 * a2 * a2;
    if w1 * w2 != 0.0 {
        g += w1 * w2 * x * ti_f1(x)?;
    }
    let mix = a1 * a1 * w2 + a2 * a2 * w1;
    if mix != 0.0 {
        g += mix * x * ti_f2(x)?;
    }
    Ok(g)
}

/// x → 0 limit of [`ti_gamma0`].
pub fn ti_gamma0_short(m1: &TiMaterial, m2: &TiMaterial) -> f64 {
    let (a1, a2) = (m1.alpha_bar(), m2.alpha_bar());
    60.0 * a1 * a2 + 23.0 * a1 * a1 * a2 * a2
}

/// x → ∞ limit of [`ti_gamma0`].
pub fn ti_gamma0_long(m1: &TiMaterial, m2: &TiMaterial) -> f64 {
    let (a1, a2) = (m1.alpha_bar(), m2.alpha_bar());
    let (w1, w2) = (m1.w * m1.w, m2.w * m2.w);
    23.0 * (w1 * w2 + a1 * a1 * a2 * a2 + a1 * a1 * w2 + a2 * a2 * w1) + 60.0 * a1 * a2
}

/// Classical coefficient w₁²w₂² + ᾱ₁²w₂² + ᾱ₂²w₁² + ᾱ₁²ᾱ₂² + 2ᾱ₁ᾱ₂; the
/// kernel is −3T γ/((4π)²R⁶).
pub fn ti_gamma_cl(m1: &TiMaterial, m2: &TiMaterial) -> f64 {
    let (a1, a2) = (m1.alpha_bar(), m2.alpha_bar());
    m1.eps_tilde(0.0) * m2.eps_tilde(0.0) + 2.0 * a1 * a2
}

// ---------------------------------------------------------------------------
// General pair energy density

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PsaRegime {
    /// Full Matsubara treatment; T = 0 is the quantum limit.
    Quantum { temperature: f64 },
    /// Zero-frequency term only.
    Classical { temperature: f64 },
}

impl PsaRegime {
    pub fn zero() -> Self {
        PsaRegime::Quantum { temperature: 0.0 }
    }

    fn validate(&self) -> Result<()> {
        let t = match *self {
            PsaRegime::Quantum { temperature } => temperature,
            PsaRegime::Classical { temperature } => temperature,
        };
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::Domain("temperature must be finite and ≥ 0"));
        }
        Ok(())
    }
}

/// Energy per unit volume of each body (per unit weight for point bodies)
/// of a pair of points at separation `r`.
pub fn pair_energy_density(r: f64, m1: &MaterialPSA, m2: &MaterialPSA, regime: PsaRegime) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain("separation must be positive"));
    }
    regime.validate()?;
    let r7 = libm::pow(r, 7.0);
    match regime {
        PsaRegime::Classical { temperature } => {
            let (d, _) = channel_weights(m1.couplings(0.0), m2.couplings(0.0));
            Ok(-3.0 * temperature * d / (PT * PT * libm::pow(r, 6.0)))
        }
        PsaRegime::Quantum { temperature } if !(m1.dispersive() || m2.dispersive()) => {
            let (d, c) = channel_weights(m1.couplings(0.0), m2.couplings(0.0));
            let gamma = if temperature == 0.0 {
                23.0 * d - 7.0 * c
            } else {
                let l = 2.0 * PI * temperature * r;
                d * pair_kernel_finite_t(l, Channel::EE)? + c * pair_kernel_finite_t(l, Channel::EH)?
            };
            Ok(-gamma / (PT3 * r7))
        }
        PsaRegime::Quantum { temperature } => {
            if let (MaterialPSA::Ti(a), MaterialPSA::Ti(b)) = (m1, m2) {
                if temperature == 0.0 && same_resonance(a, b).is_ok() {
                    return Ok(-ti_gamma0(a.omega_r * r, a, b)? / (PT3 * r7));
                }
            }
            Ok(-dispersive_gamma(r, m1, m2, temperature)? / (PT3 * r7))
        }
    }
}

/// Γ(R) for frequency-dependent couplings by a frequency integral (T = 0) or
/// a Matsubara sum.
fn dispersive_gamma(r: f64, m1: &MaterialPSA, m2: &MaterialPSA, t: f64) -> Result<f64> {
    let integrand = |y: f64| {
        let kappa = y / r;
        let (d, c) = channel_weights(m1.couplings(kappa), m2.couplings(kappa));
        libm::exp(-2.0 * y) * (2.0 * poly(&P_EE, y) * d - 4.0 * poly(&P_EH, y) * c)
    };
    if t == 0.0 {
        let opts = QuadOptions { abs_tol: 1e-300, rel_tol: 1e-11, max_subdivisions: 400 };
        return quad::integrate_to_inf(integrand, 0.0, 1.0, opts);
    }
    let l = 2.0 * PI * t * r;
    let mut sum = 0.5 * integrand(0.0);
    const MAX_TERMS: usize = 2_000_000;
    for n in 1..MAX_TERMS {
        let term = integrand(l * n as f64);
        sum += term;
        if 2.0 * l * n as f64 > 40.0 && term.abs() <= 1e-16 * sum.abs() {
            return Ok(l * sum);
        }
    }
    Err(Error::NoConvergence("Matsubara sum for dispersive PSA kernel"))
}

// ---------------------------------------------------------------------------
// Bodies

#[derive(Debug, Clone, PartialEq)]
pub enum BodyRegion {
    Sphere { radius: f64, center: [f64; 3] },
    /// Laterally infinite slab `z_low ≤ z ≤ z_high`; either bound may be infinite.
    Slab { z_low: f64, z_high: f64 },
    /// Cubic cells of volume `cell_volume` represented by `points`; each
    /// point carries the volume `weights[i]` ≤ `cell_volume` it stands for.
    VoxelCloud { points: Vec<[f64; 3]>, weights: Vec<f64>, cell_volume: f64 },
}

impl BodyRegion {
    pub fn sphere(radius: f64, center: [f64; 3]) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() || !center.iter().all(|c| c.is_finite()) {
            return Err(Error::Domain("sphere needs a positive radius and finite center"));
        }
        Ok(BodyRegion::Sphere { radius, center })
    }

    /// Slab whose upper face lies a distance `gap` below z = 0, with the given
    /// thickness (infinite for a half-space).
    pub fn halfspace_slab(thickness: f64, gap: f64) -> Result<Self> {
        if !(thickness > 0.0) || !gap.is_finite() {
            return Err(Error::Domain("slab needs a positive thickness and finite gap"));
        }
        Ok(BodyRegion::Slab { z_low: -gap - thickness, z_high: -gap })
    }

    pub fn slab(z_low: f64, z_high: f64) -> Result<Self> {
        if !(z_high > z_low) || z_low.is_nan() || z_high.is_nan() {
            return Err(Error::Domain("slab bounds must satisfy z_low < z_high"));
        }
        if z_low == f64::INFINITY || z_high == f64::NEG_INFINITY {
            return Err(Error::Domain("slab bounds must satisfy z_low < z_high"));
        }
        Ok(BodyRegion::Slab { z_low, z_high })
    }

    pub fn voxel_cloud(points: Vec<[f64; 3]>, cell_volume: f64) -> Result<Self> {
        if points.is_empty() || !(cell_volume > 0.0) || !cell_volume.is_finite() {
            return Err(Error::Domain("voxel cloud needs points and a positive cell volume"));
        }
        if !points.iter().all(|p| p.iter().all(|c| c.is_finite())) {
            return Err(Error::Domain("voxel points must be finite"));
        }
        let weights = alloc::vec![cell_volume; points.len()];
        Ok(BodyRegion::VoxelCloud { points, weights, cell_volume })
    }

    /// Voxel cloud with partially filled cells.
    pub fn voxel_cloud_weighted(points: Vec<[f64; 3]>, weights: Vec<f64>, cell_volume: f64) -> Result<Self> {
        let BodyRegion::VoxelCloud { points, .. } = Self::voxel_cloud(points, cell_volume)? else { unreachable!() };
        if weights.len() != points.len() || weights.iter().any(|w| !(*w > 0.0) || *w > cell_volume * (1.0 + 1e-12)) {
            return Err(Error::Domain("weights must be positive, at most the cell volume, one per point"));
        }
        Ok(BodyRegion::VoxelCloud { points, weights, cell_volume })
    }

    /// Cubic grid with `n` cells across the diameter. Boundary cells are
    /// subsampled 8³ times; they keep the inside fraction of their volume and
    /// move their point to the centroid of the inside part.
    pub fn voxelized_sphere(radius: f64, center: [f64; 3], n: usize) -> Result<Self> {
        if !(radius > 0.0) || n == 0 {
            return Err(Error::Domain("voxelized sphere needs a positive radius and n ≥ 1"));
        }
        const SUB: usize = 8;
        let h = 2.0 * radius / n as f64;
        let half_diag = 0.5 * h * libm::sqrt(3.0);
        let (mut pts, mut wts) = (Vec::new(), Vec::new());
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let c = [
                        -radius + (i as f64 + 0.5) * h,
                        -radius + (j as f64 + 0.5) * h,
                        -radius + (k as f64 + 0.5) * h,
                    ];
                    let r = libm::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
                    if r + half_diag <= radius {
                        pts.push([c[0] + center[0], c[1] + center[1], c[2] + center[2]]);
                        wts.push(h * h * h);
                    } else if r - half_diag < radius {
                        let (mut cnt, mut acc) = (0usize, [0.0; 3]);
                        for a in 0..SUB {
                            for b in 0..SUB {
                                for d in 0..SUB {
                                    let q = [
                                        c[0] + h * ((a as f64 + 0.5) / SUB as f64 - 0.5),
                                        c[1] + h * ((b as f64 + 0.5) / SUB as f64 - 0.5),
                                        c[2] + h * ((d as f64 + 0.5) / SUB as f64 - 0.5),
                                    ];
                                    if q[0] * q[0] + q[1] * q[1] + q[2] * q[2] < radius * radius {
                                        cnt += 1;
                                        for t in 0..3 {
                                            acc[t] += q[t];
                                        }
                                    }
                                }
                            }
                        }
                        if cnt > 0 {
                            let m = cnt as f64;
                            pts.push([acc[0] / m + center[0], acc[1] / m + center[1], acc[2] / m + center[2]]);
                            wts.push(h * h * h * m / (SUB * SUB * SUB) as f64);
                        }
                    }
                }
            }
        }
        Self::voxel_cloud_weighted(pts, wts, h * h * h)
    }

    /// Volume (infinite for slabs).
    pub fn volume(&self) -> f64 {
        match self {
            BodyRegion::Sphere { radius, .. } => 4.0 * PI * radius * radius * radius / 3.0,
            BodyRegion::Slab { .. } => f64::INFINITY,
            BodyRegion::VoxelCloud { weights, .. } => weights.iter().sum(),
        }
    }

    fn centroid(&self) -> Result<[f64; 3]> {
        match self {
            BodyRegion::Sphere { center, .. } => Ok(*center),
            BodyRegion::Slab { .. } => Err(Error::Unsupported("a slab has no centroid")),
            BodyRegion::VoxelCloud { points, .. } => {
                let mut c = [0.0; 3];
                for p in points {
                    for i in 0..3 {
                        c[i] += p[i];
                    }
                }
                let n = points.len() as f64;
                Ok([c[0] / n, c[1] / n, c[2] / n])
            }
        }
    }

    fn cell_side(&self) -> f64 {
        match self {
            BodyRegion::VoxelCloud { cell_volume, .. } => libm::cbrt(*cell_volume),
            _ => 0.0,
        }
    }
}

fn dist(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    let d = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    libm::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2])
}

/// Distance from a height to a slab, or None when inside (or on) it.
fn slab_distance(z: f64, lo: f64, hi: f64) -> Option<f64> {
    if z > hi {
        Some(z - hi)
    } else if z < lo {
        Some(lo - z)
    } else {
        None
    }
}

/// True when the supports of two bodies are disjoint.
pub fn bodies_disjoint(a: &BodyRegion, b: &BodyRegion) -> bool {
    use BodyRegion::*;
    match (a, b) {
        (Sphere { radius: r1, center: c1 }, Sphere { radius: r2, center: c2 }) => dist(c1, c2) > r1 + r2,
        (Sphere { radius, center }, Slab { z_low, z_high }) | (Slab { z_low, z_high }, Sphere { radius, center }) => {
            center[2] - radius > *z_high || center[2] + radius < *z_low
        }
        (Slab { z_low: l1, z_high: h1 }, Slab { z_low: l2, z_high: h2 }) => l1 >= h2 || l2 >= h1,
        (VoxelCloud { points, .. }, other) | (other, VoxelCloud { points, .. }) if !matches!(other, VoxelCloud { .. }) => {
            let h = if let VoxelCloud { .. } = a { a.cell_side() } else { b.cell_side() };
            let half = 0.5 * h;
            let diag = half * libm::sqrt(3.0);
            points.iter().all(|p| match other {
                Sphere { radius, center } => dist(p, center) >= radius + diag,
                Slab { z_low, z_high } => p[2] - half >= *z_high || p[2] + half <= *z_low,
                VoxelCloud { .. } => true,
            })
        }
        (VoxelCloud { points: p1, .. }, VoxelCloud { points: p2, .. }) => {
            let half = 0.5 * (a.cell_side() + b.cell_side());
            let tol = 1e-12 * half;
            p1.iter().all(|p| {
                p2.iter().all(|q| {
                    (p[0] - q[0]).abs() >= half - tol
                        || (p[1] - q[1]).abs() >= half - tol
                        || (p[2] - q[2]).abs() >= half - tol
                })
            })
        }
        _ => false,
    }
}

fn point_outside(p: &[f64; 3], body: &BodyRegion) -> bool {
    match body {
        BodyRegion::Sphere { radius, center } => dist(p, center) > *radius,
        BodyRegion::Slab { z_low, z_high } => slab_distance(p[2], *z_low, *z_high).is_some(),
        BodyRegion::VoxelCloud { points, .. } => {
            let half = 0.5 * body.cell_side();
            points.iter().all(|q| (0..3).any(|i| (p[i] - q[i]).abs() >= half))
        }
    }
}

// ---------------------------------------------------------------------------
// Volume integration

/// Quadrature tolerance for body integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsaQuad {
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for PsaQuad {
    fn default() -> Self {
        Self { rel_tol: 1e-9, max_subdivisions: 400 }
    }
}

impl PsaQuad {
    fn opts(&self) -> QuadOptions {
        QuadOptions { abs_tol: 1e-300, rel_tol: self.rel_tol, max_subdivisions: self.max_subdivisions }
    }
}

struct Kernel<'a> {
    m1: &'a MaterialPSA,
    m2: &'a MaterialPSA,
    regime: PsaRegime,
}

impl Kernel<'_> {
    fn eval(&self, r: f64) -> Result<f64> {
        pair_energy_density(r, self.m1, self.m2, self.regime)
    }
}

/// Tracks the first error raised inside a quadrature closure.
struct Trap {
    err: Option<Error>,
}

impl Trap {
    fn new() -> Self {
        Self { err: None }
    }

    fn take(&mut self, v: Result<f64>) -> f64 {
        match v {
            Ok(x) => x,
            Err(e) => {
                if self.err.is_none() {
                    self.err = Some(e);
                }
                0.0
            }
        }
    }

    fn finish(self, v: Result<f64>) -> Result<f64> {
        match self.err {
            Some(e) => Err(e),
            None => v,
        }
    }
}

/// Potential of a sphere (radius b) at distance s > b from its centre:
/// ∫_{s−b}^{s+b} f(R) (πR/s)(b² − (s−R)²) dR.
fn sphere_potential(k: &Kernel, b: f64, s: f64, q: PsaQuad) -> Result<f64> {
    let mut trap = Trap::new();
    let v = quad::integrate(
        |r| {
            let w = PI * r / s * (b * b - (s - r) * (s - r));
            w * trap.take(k.eval(r))
        },
        s - b,
        s + b,
        q.opts(),
    );
    trap.finish(v)
}

/// Potential of a slab of thickness t (possibly infinite) at distance u > 0
/// from its near face: 2π∫_u^∞ f(R) R (min(R, u+t) − u) dR.
fn slab_potential(k: &Kernel, t: f64, u: f64, q: PsaQuad) -> Result<f64> {
    let mut trap = Trap::new();
    let v = if t.is_finite() {
        let near = quad::integrate(|r| 2.0 * PI * r * (r - u) * trap.take(k.eval(r)), u, u + t, q.opts());
        let far = quad::integrate_to_inf(|r| 2.0 * PI * r * t * trap.take(k.eval(r)), u + t, u + t, q.opts());
        match (near, far) {
            (Ok(a), Ok(b)) => Ok(a + b),
            (Err(e), _) | (_, Err(e)) => Err(e),
        }
    } else {
        quad::integrate_to_inf(|r| 2.0 * PI * r * (r - u) * trap.take(k.eval(r)), u, u, q.opts())
    };
    trap.finish(v)
}

/// Potential of an analytic body at a point outside it.
fn body_potential(k: &Kernel, body: &BodyRegion, p: &[f64; 3], q: PsaQuad) -> Result<f64> {
    match body {
        BodyRegion::Sphere { radius, center } => {
            let s = dist(p, center);
            if !(s > *radius) {
                return Err(Error::Domain("bodies overlap"));
            }
            sphere_potential(k, *radius, s, q)
        }
        BodyRegion::Slab { z_low, z_high } => {
            let u = slab_distance(p[2], *z_low, *z_high).ok_or(Error::Domain("bodies overlap"))?;
            slab_potential(k, z_high - z_low, u, q)
        }
        BodyRegion::VoxelCloud { points, weights, .. } => {
            let mut s = 0.0;
            for (pt, w) in points.iter().zip(weights) {
                s += w * k.eval(dist(p, pt))?;
            }
            Ok(s)
        }
    }
}

/// Integrates the potential of `other` over `body`. `k` must have `body`'s
/// material first.
fn integrate_body(k: &Kernel, body: &BodyRegion, other: &BodyRegion, q: PsaQuad) -> Result<f64> {
    match body {
        BodyRegion::VoxelCloud { points, weights, .. } => {
            let mut s = 0.0;
            for (p, w) in points.iter().zip(weights) {
                s += w * body_potential(k, other, p, q)?;
            }
            Ok(s)
        }
        BodyRegion::Sphere { radius: a, center } => match other {
            BodyRegion::Sphere { radius: b, center: c2 } => {
                let d = dist(center, c2);
                let mut trap = Trap::new();
                let v = quad::integrate(
                    |s| {
                        let w = PI * s / d * (a * a - (d - s) * (d - s));
                        w * trap.take(sphere_potential(k, *b, s, q))
                    },
                    d - a,
                    d + a,
                    q.opts(),
                );
                trap.finish(v)
            }
            BodyRegion::Slab { z_low, z_high } => {
                let t = z_high - z_low;
                let zc = center[2];
                let mut trap = Trap::new();
                let v = quad::integrate(
                    |z| {
                        let w = PI * (a * a - (z - zc) * (z - zc));
                        let u = slab_distance(z, *z_low, *z_high).unwrap_or(0.0);
                        w * trap.take(if u > 0.0 { slab_potential(k, t, u, q) } else { Err(Error::Domain("bodies overlap")) })
                    },
                    zc - a,
                    zc + a,
                    q.opts(),
                );
                trap.finish(v)
            }
            BodyRegion::VoxelCloud { .. } => {
                let flipped = Kernel { m1: k.m2, m2: k.m1, regime: k.regime };
                integrate_body(&flipped, other, body, q)
            }
        },
        BodyRegion::Slab { z_low, z_high } => match other {
            BodyRegion::Slab { z_low: l2, z_high: h2 } => {
                // Energy per unit area.
                let t2 = h2 - l2;
                let mut trap = Trap::new();
                let v = if z_low >= h2 {
                    let (g, t1) = (z_low - h2, z_high - z_low);
                    let f = |u: f64| trap.take(slab_potential(k, t2, u, q));
                    if t1.is_finite() {
                        quad::integrate(f, g, g + t1, q.opts())
                    } else {
                        quad::integrate_to_inf(f, g, g.max(1e-300), q.opts())
                    }
                } else {
                    let (g, t1) = (l2 - z_high, z_high - z_low);
                    let f = |u: f64| trap.take(slab_potential(k, t2, u, q));
                    if t1.is_finite() {
                        quad::integrate(f, g, g + t1, q.opts())
                    } else {
                        quad::integrate_to_inf(f, g, g.max(1e-300), q.opts())
                    }
                };
                trap.finish(v)
            }
            _ => {
                let flipped = Kernel { m1: k.m2, m2: k.m1, regime: k.regime };
                integrate_body(&flipped, other, body, q)
            }
        },
    }
}

/// PSA energy ∫₁∫₂ E(|r₁ − r₂|) dr₁ dr₂ of two disjoint bodies.
///
/// Slab–slab pairs return the energy per unit area. A body with a
/// [`MaterialPSA::Point`] material is collapsed onto its centroid.
pub fn psa_energy(
    body1: &BodyRegion,
    body2: &BodyRegion,
    m1: &MaterialPSA,
    m2: &MaterialPSA,
    regime: PsaRegime,
) -> Result<f64> {
    psa_energy_with(body1, body2, m1, m2, regime, PsaQuad::default())
}

pub fn psa_energy_with(
    body1: &BodyRegion,
    body2: &BodyRegion,
    m1: &MaterialPSA,
    m2: &MaterialPSA,
    regime: PsaRegime,
    q: PsaQuad,
) -> Result<f64> {
    regime.validate()?;
    let k = Kernel { m1, m2, regime };
    match (m1.is_point(), m2.is_point()) {
        (true, true) => {
            let (p1, p2) = (body1.centroid()?, body2.centroid()?);
            let r = dist(&p1, &p2);
            if !(r > 0.0) {
                return Err(Error::Domain("point bodies coincide"));
            }
            k.eval(r)
        }
        (true, false) => {
            let p = body1.centroid()?;
            if !point_outside(&p, body2) {
                return Err(Error::Domain("bodies overlap"));
            }
            body_potential(&k, body2, &p, q)
        }
        (false, true) => {
            let p = body2.centroid()?;
            if !point_outside(&p, body1) {
                return Err(Error::Domain("bodies overlap"));
            }
            let flipped = Kernel { m1: m2, m2: m1, regime };
            body_potential(&flipped, body1, &p, q)
        }
        (false, false) => {
            if !bodies_disjoint(body1, body2) {
                return Err(Error::Domain("bodies overlap"));
            }
            integrate_body(&k, body1, body2, q)
        }
    }
}

/// Σ over unordered pairs of [`psa_energy`].
pub fn psa_nbody(bodies: &[(BodyRegion, MaterialPSA)], regime: PsaRegime) -> Result<f64> {
    let mut total = 0.0;
    for i in 0..bodies.len() {
        for j in 0..i {
            total += psa_energy(&bodies[j].0, &bodies[i].0, &bodies[j].1, &bodies[i].1, regime)?;
        }
    }
    Ok(total)
}

// ---------------------------------------------------------------------------
// Second order, classical limit

/// Quadrature points of a body for the triple integral: (position, weight).
fn body_nodes(body: &BodyRegion, order: usize) -> Result<Vec<([f64; 3], f64)>> {
    match body {
        BodyRegion::VoxelCloud { points, weights, .. } => Ok(points.iter().copied().zip(weights.iter().copied()).collect()),
        BodyRegion::Slab { .. } => Err(Error::Unsupported("second-order triple integral needs finite bodies")),
        BodyRegion::Sphere { radius, center } => {
            let (xr, wr) = quad::gauss_legendre(order);
            let (xc, wc) = quad::gauss_legendre(order);
            let nphi = 2 * order;
            let mut out = Vec::with_capacity(order * order * nphi);
            for (i, &x) in xr.iter().enumerate() {
                let r = 0.5 * radius * (x + 1.0);
                let w_r = 0.5 * radius * wr[i] * r * r;
                for (j, &c) in xc.iter().enumerate() {
                    let s = libm::sqrt(1.0 - c * c);
                    for k in 0..nphi {
                        let phi = 2.0 * PI * (k as f64 + 0.5) / nphi as f64;
                        let p = [
                            center[0] + r * s * libm::cos(phi),
                            center[1] + r * s * libm::sin(phi),
                            center[2] + r * c,
                        ];
                        out.push((p, w_r * wc[j] * 2.0 * PI / nphi as f64));
                    }
                }
            }
            Ok(out)
        }
    }
}

/// Σ_i Π_pairs (R² + 3R_i²) / (R₁₂⁵ R₂₃⁵ R₃₁⁵) for three points.
pub fn second_order_kernel(p1: &[f64; 3], p2: &[f64; 3], p3: &[f64; 3]) -> f64 {
    let d12 = [p1[0] - p2[0], p1[1] - p2[1], p1[2] - p2[2]];
    let d23 = [p2[0] - p3[0], p2[1] - p3[1], p2[2] - p3[2]];
    let d31 = [p3[0] - p1[0], p3[1] - p1[1], p3[2] - p1[2]];
    let n = |d: &[f64; 3]| d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
    let (a, b, c) = (n(&d12), n(&d23), n(&d31));
    let mut s = 0.0;
    for i in 0..3 {
        s += (a + 3.0 * d12[i] * d12[i]) * (b + 3.0 * d23[i] * d23[i]) * (c + 3.0 * d31[i] * d31[i]);
    }
    let r5 = |x: f64| x * x * libm::sqrt(x);
    s / (r5(a) * r5(b) * r5(c))
}

/// Classical second-order correction for three distinct, disjoint bodies
/// carrying electric offsets ε̃:
/// −(T/128π³) ε̃₁ε̃₂ε̃₃ ∫∫∫ [second_order_kernel].
///
/// Repeating a body in two slots is the self-interaction case whose
/// integrand is singular; it is rejected. `order` sets the Gauss rule used
/// for spheres (voxel clouds use their own cells).
pub fn psa_second_order_cl(bodies: [&BodyRegion; 3], eps: [f64; 3], temperature: f64, order: usize) -> Result<f64> {
    if !(temperature >= 0.0) || !temperature.is_finite() {
        return Err(Error::Domain("temperature must be finite and ≥ 0"));
    }
    if order == 0 {
        return Err(Error::Domain("quadrature order must be ≥ 1"));
    }
    for (i, j) in [(0, 1), (1, 2), (0, 2)] {
        if bodies[i] == bodies[j] {
            return Err(Error::Divergent("coincident bodies make the second-order integrand singular"));
        }
        if !bodies_disjoint(bodies[i], bodies[j]) {
            return Err(Error::Domain("bodies overlap"));
        }
    }
    let n1 = body_nodes(bodies[0], order)?;
    let n2 = body_nodes(bodies[1], order)?;
    let n3 = body_nodes(bodies[2], order)?;
    let mut total = 0.0;
    for (p1, w1) in &n1 {
        let mut s2 = 0.0;
        for (p2, w2) in &n2 {
            let mut s3 = 0.0;
            for (p3, w3) in &n3 {
                s3 += w3 * second_order_kernel(p1, p2, p3);
            }
            s2 += w2 * s3;
        }
        total += w1 * s2;
    }
    Ok(-temperature / (128.0 * PI * PI * PI) * eps[0] * eps[1] * eps[2] * total)
}

// ---------------------------------------------------------------------------
// Topological insulator phases

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseRegime {
    Quantum,
    Classical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseClass {
    AttractAll,
    RepelAll,
    StableEquilibrium,
}

/// Phase of a TI point pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TiPhase {
    pub class: PhaseClass,
    /// Dimensionless separation ω_R R where the pair energy changes sign.
    pub x_zero: Option<f64>,
    /// Dimensionless separation of the energy minimum (zero force).
    pub x_eq: Option<f64>,
}

/// Short-distance repulsion γ₀(0) < 0, i.e. −60/23 < ᾱ₁ᾱ₂ < 0.
pub fn ti_repulsive_short(theta1: f64, theta2: f64) -> bool {
    let p = FINE_STRUCTURE * FINE_STRUCTURE * theta1 * theta2;
    60.0 * p + 23.0 * p * p < 0.0
}

/// Large-distance repulsion bound for equal w:
/// w² < ½(−ᾱ₁² − ᾱ₂² + √(ᾱ₁⁴ + ᾱ₂⁴ − (240/23)ᾱ₁ᾱ₂ − 2ᾱ₁²ᾱ₂²)).
pub fn ti_repulsive_long(w: f64, theta1: f64, theta2: f64) -> bool {
    repulsion_bound(w, theta1, theta2, 240.0 / 23.0)
}

/// Classical repulsion bound for equal w:
/// w² < ½(−ᾱ₁² − ᾱ₂² + √(ᾱ₁⁴ + ᾱ₂⁴ − 8ᾱ₁ᾱ₂ − 2ᾱ₁²ᾱ₂²)).
pub fn ti_repulsive_classical(w: f64, theta1: f64, theta2: f64) -> bool {
    repulsion_bound(w, theta1, theta2, 8.0)
}

fn repulsion_bound(w: f64, theta1: f64, theta2: f64, c: f64) -> bool {
    let (a1, a2) = (FINE_STRUCTURE * theta1, FINE_STRUCTURE * theta2);
    let (s1, s2) = (a1 * a1, a2 * a2);
    let disc = s1 * s1 + s2 * s2 - c * a1 * a2 - 2.0 * s1 * s2;
    if disc < 0.0 {
        return false;
    }
    w * w < 0.5 * (-s1 - s2 + libm::sqrt(disc))
}

/// Classifies a pair of TI materials. x f₁ and x f₂ grow monotonically, so
/// γ₀(x) is increasing and changes sign at most once; the quantum class
/// follows from its two limits. A stable equilibrium reports both the sign
/// change and the energy minimum of −γ₀(x)/x⁷.
pub fn ti_phase(m1: &TiMaterial, m2: &TiMaterial, regime: PhaseRegime) -> Result<TiPhase> {
    same_resonance(m1, m2)?;
    match regime {
        PhaseRegime::Classical => {
            let class = if ti_gamma_cl(m1, m2) > 0.0 { PhaseClass::AttractAll } else { PhaseClass::RepelAll };
            Ok(TiPhase { class, x_zero: None, x_eq: None })
        }
        PhaseRegime::Quantum => {
            let short = ti_gamma0_short(m1, m2);
            let long = ti_gamma0_long(m1, m2);
            if short >= 0.0 {
                return Ok(TiPhase { class: PhaseClass::AttractAll, x_zero: None, x_eq: None });
            }
            if long <= 0.0 {
                return Ok(TiPhase { class: PhaseClass::RepelAll, x_zero: None, x_eq: None });
            }
            let x0 = sign_change(|x| ti_gamma0(x, m1, m2))?;
            // The minimum of −γ₀/x⁷ lies beyond the sign change.
            let mut hi = 2.0 * x0;
            let e = |x: f64| ti_gamma0(x, m1, m2).map(|g| -g / libm::pow(x, 7.0));
            let mut prev = e(hi)?;
            loop {
                let next = e(1.5 * hi)?;
                if next > prev {
                    hi *= 1.5;
                    break;
                }
                prev = next;
                hi *= 1.5;
                if hi > 1e8 * x0 {
                    return Err(Error::NoConvergence("TI energy minimum not bracketed"));
                }
            }
            let mut trap = Trap::new();
            // Scaled so the minimizer works with O(1) values.
            let scale = libm::pow(x0, 7.0);
            let (xm, _) = roots::minimize(|x| scale * trap.take(e(x)), x0, hi, 1e-12 * x0);
            trap.finish(Ok(0.0))?;
            Ok(TiPhase { class: PhaseClass::StableEquilibrium, x_zero: Some(x0), x_eq: Some(xm) })
        }
    }
}

/// Root of an increasing function that is negative at small x and positive
/// at large x, bracketed on a logarithmic scan.
fn sign_change<F: FnMut(f64) -> Result<f64>>(mut g: F) -> Result<f64> {
    let mut lo = 1e-8;
    if g(lo)? >= 0.0 {
        return Err(Error::NoConvergence("sign change below x = 1e-8"));
    }
    let mut hi = 2.0 * lo;
    while g(hi)? < 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::NoConvergence("sign change not bracketed"));
        }
    }
    let mut trap = Trap::new();
    let x = roots::brent(|x| trap.take(g(x)), lo, hi, 1e-14 * hi)?;
    trap.finish(Ok(x))
}

/// Sphere–plate energy curve in units ω_R = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct SpherePlateCurve {
    /// Gaps h̄ between the plate and the nearest point of the sphere.
    pub gaps: Vec<f64>,
    /// ē = E/(V ω_R⁴) at each gap.
    pub energy_density: Vec<f64>,
    /// Gap of the energy minimum, when one lies strictly inside the grid.
    pub equilibrium_gap: Option<f64>,
}

/// PSA energy per unit sphere volume of a TI sphere (radius R̄s) above a TI
/// half-space, at T = 0, for each gap.
pub fn sphere_plate_psa(rs: f64, sphere: &TiMaterial, plate: &TiMaterial, gaps: &[f64]) -> Result<SpherePlateCurve> {
    if !(rs > 0.0) || !rs.is_finite() {
        return Err(Error::Domain("sphere radius must be positive"));
    }
    if gaps.iter().any(|g| !(*g > 0.0) || !g.is_finite()) {
        return Err(Error::Domain("gaps must be positive"));
    }
    same_resonance(sphere, plate)?;
    // Lengths in units of 1/ω_R; ω_R is set to 1 by rescaling.
    let s = TiMaterial { omega_r: 1.0, ..*sphere };
    let p = TiMaterial { omega_r: 1.0, ..*plate };
    let (ms, mp) = (MaterialPSA::Ti(s), MaterialPSA::Ti(p));
    let plate_body = BodyRegion::halfspace_slab(f64::INFINITY, 0.0)?;
    let volume = 4.0 * PI * rs * rs * rs / 3.0;
    let q = PsaQuad { rel_tol: 1e-8, max_subdivisions: 400 };
    let energy = |h: f64| -> Result<f64> {
        let body = BodyRegion::Sphere { radius: rs, center: [0.0, 0.0, h + rs] };
        Ok(psa_energy_with(&body, &plate_body, &ms, &mp, PsaRegime::zero(), q)? / volume)
    };
    let mut e = Vec::with_capacity(gaps.len());
    for &h in gaps {
        e.push(energy(h)?);
    }
    let mut eq = None;
    if gaps.len() >= 3 {
        let imin = (0..e.len()).fold(0, |m, i| if e[i] < e[m] { i } else { m });
        if imin > 0 && imin + 1 < e.len() {
            let (a, b) = (gaps[imin - 1], gaps[imin + 1]);
            let mut trap = Trap::new();
            let sc = 1.0 / e[imin].abs().max(1e-300);
            let (hm, _) = roots::minimize(|h| sc * trap.take(energy(h)), a, b, 1e-9 * b);
            trap.finish(Ok(0.0))?;
            eq = Some(hm);
        }
    }
    Ok(SpherePlateCurve { gaps: gaps.to_vec(), energy_density: e, equilibrium_gap: eq })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_matches_closed_form_at_switch() {
        for ch in [Channel::EE, Channel::EH] {
            let a = kernel_series(ch, SERIES_SWITCH);
            let b = kernel_closed(ch, SERIES_SWITCH);
            assert!((a - b).abs() < 1e-13 * b.abs().max(1.0), "{ch:?} {a} {b}");
        }
    }

    #[test]
    fn zero_temperature_coefficients() {
        assert_eq!(kernel_series(Channel::EE, 0.0), 23.0);
        assert_eq!(kernel_series(Channel::EH, 0.0), -7.0);
    }

    #[test]
    fn ti_validation() {
        assert!(TiMaterial::new(1.0, 0.45, 1.0, 1.0).is_ok());
        assert!(TiMaterial::new(1.0, 0.0, 200.0, 1.0).is_err());
        assert!(TiMaterial::new(0.0, 0.45, 1.0, 1.0).is_err());
    }

    #[test]
    fn disjointness() {
        let a = BodyRegion::sphere(1.0, [0.0; 3]).unwrap();
        let b = BodyRegion::sphere(1.0, [2.5, 0.0, 0.0]).unwrap();
        let c = BodyRegion::sphere(1.0, [1.5, 0.0, 0.0]).unwrap();
        let s = BodyRegion::halfspace_slab(f64::INFINITY, 1.2).unwrap();
        assert!(bodies_disjoint(&a, &b));
        assert!(!bodies_disjoint(&a, &c));
        assert!(bodies_disjoint(&a, &s));
        assert!(!bodies_disjoint(&a, &BodyRegion::halfspace_slab(1.0, 0.5).unwrap()));
    }
}
