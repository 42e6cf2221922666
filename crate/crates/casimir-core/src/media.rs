//! Fluctuation-induced forces between parallel plates in classical media.
//!
//! Every routine returns the force per unit area with the sign convention
//! F/A = T(L) − T(∞), so F > 0 is an attraction. Closed forms are given
//! for reaction–diffusion and nematic media under white, exponentially
//! correlated, quenched and spatially homogeneous noise, together with a
//! generic mode-sum engine that works from a supplied spectrum.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::quad::{self, QuadOptions};
use crate::regulate;
use crate::roots;
use crate::specfun;
use crate::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Plate separation and inverse correlation length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlatesGeometry {
    gap: f64,
    k0: f64,
}

impl PlatesGeometry {
    pub fn new(gap: f64, k0: f64) -> Result<Self> {
        if !(gap > 0.0) || !gap.is_finite() {
            return Err(Error::Domain("plate gap must be positive"));
        }
        if !(k0 >= 0.0) || !k0.is_finite() {
            return Err(Error::Domain("k0 must be non-negative"));
        }
        Ok(Self { gap, k0 })
    }

    pub fn gap(&self) -> f64 {
        self.gap
    }

    pub fn k0(&self) -> f64 {
        self.k0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseKind {
    White,
    /// c(t) = (1 + a/2) e^{−a|t|}; a = 0 is the quenched limit.
    TemporalExponential { a: f64 },
    SpatialHomogeneous,
    Quenched,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    kind: NoiseKind,
    gamma: f64,
}

impl NoiseSpec {
    pub fn new(kind: NoiseKind, gamma: f64) -> Result<Self> {
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::Domain("noise intensity must be positive"));
        }
        if let NoiseKind::TemporalExponential { a } = kind {
            if !(a >= 0.0) || !a.is_finite() {
                return Err(Error::Domain("noise correlation rate must be non-negative"));
            }
        }
        Ok(Self { kind, gamma })
    }

    pub fn kind(&self) -> NoiseKind {
        self.kind
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MediumSpec {
    ReactionDiffusion { lambda: f64, d: f64 },
    Nematic { lambda: f64, kappa1: f64, kappa2: f64 },
    TwoField { lambda1: f64, lambda2: f64, lambda12: f64, d: f64, kappa: f64 },
    GeneralizedP { p: u32, c_p: f64, kappa1: f64, kappa2: f64 },
}

fn positive(x: f64, what: &'static str) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(what))
    }
}

impl MediumSpec {
    pub fn reaction_diffusion(lambda: f64, d: f64) -> Result<Self> {
        positive(lambda, "reaction rate must be positive")?;
        positive(d, "diffusion coefficient must be positive")?;
        Ok(Self::ReactionDiffusion { lambda, d })
    }

    pub fn nematic(lambda: f64, kappa1: f64, kappa2: f64) -> Result<Self> {
        positive(lambda, "transport coefficient must be positive")?;
        positive(kappa1, "kappa1 must be positive")?;
        positive(kappa2, "kappa2 must be positive")?;
        Ok(Self::Nematic { lambda, kappa1, kappa2 })
    }

    pub fn two_field(lambda1: f64, lambda2: f64, lambda12: f64, d: f64, kappa: f64) -> Result<Self> {
        positive(lambda1, "lambda1 must be positive")?;
        positive(lambda2, "lambda2 must be positive")?;
        positive(d, "diffusion coefficient must be positive")?;
        positive(kappa, "stress coefficient must be positive")?;
        if !lambda12.is_finite() {
            return Err(Error::Domain("lambda12 must be finite"));
        }
        if lambda1 == lambda2 {
            return Err(Error::NotDiagonalizable("lambda1 = lambda2 gives a Jordan block"));
        }
        Ok(Self::TwoField { lambda1, lambda2, lambda12, d, kappa })
    }

    pub fn generalized_p(p: u32, c_p: f64, kappa1: f64, kappa2: f64) -> Result<Self> {
        if p == 0 {
            return Err(Error::Domain("temporal order p must be at least 1"));
        }
        positive(c_p, "c_p must be positive")?;
        positive(kappa1, "kappa1 must be positive")?;
        positive(kappa2, "kappa2 must be positive")?;
        Ok(Self::GeneralizedP { p, c_p, kappa1, kappa2 })
    }

    /// Inverse correlation length fixed by the medium constants.
    pub fn k0(&self) -> f64 {
        match *self {
            Self::ReactionDiffusion { lambda, d } => libm::sqrt(lambda / d),
            Self::Nematic { kappa1, kappa2, .. } | Self::GeneralizedP { kappa1, kappa2, .. } => {
                libm::sqrt(kappa1 / kappa2)
            }
            Self::TwoField { lambda1, lambda2, d, .. } => libm::sqrt(lambda1.min(lambda2) / d),
        }
    }
}

/// Accepts the names of the linear media and rejects nonlinear ones.
pub fn ensure_linear_medium(name: &str) -> Result<()> {
    match name {
        "reaction_diffusion" | "nematic" | "two_field" | "generalized_p" => Ok(()),
        "ginzburg_landau" | "kpz" => Err(Error::Unsupported("nonlinear media are outside the linear formalism")),
        _ => Err(Error::Domain("unknown medium kind")),
    }
}

/// Force per unit area for a medium, noise and gap.
pub fn plate_force(medium: &MediumSpec, noise: &NoiseSpec, gap: f64) -> Result<f64> {
    let g = PlatesGeometry::new(gap, medium.k0())?;
    let gm = noise.gamma();
    let (l, k0) = (g.gap(), g.k0());
    match (*medium, noise.kind()) {
        (MediumSpec::ReactionDiffusion { d, .. }, NoiseKind::White) => rd_force_white(gm, d, k0, l),
        (MediumSpec::ReactionDiffusion { d, .. }, NoiseKind::TemporalExponential { a }) => {
            rd_force_temporal(gm, d, k0, a, l)
        }
        (MediumSpec::ReactionDiffusion { d, .. }, NoiseKind::Quenched) => rd_force_temporal(gm, d, k0, 0.0, l),
        (MediumSpec::ReactionDiffusion { lambda, .. }, NoiseKind::SpatialHomogeneous) => rd_force_spatial(gm, lambda),
        (MediumSpec::Nematic { lambda, kappa2, .. }, NoiseKind::White) => lc_force_white(gm, lambda, kappa2, k0, l),
        (MediumSpec::Nematic { lambda, kappa1, kappa2 }, NoiseKind::TemporalExponential { a }) => {
            lc_force_temporal(gm, lambda, kappa1, kappa2, a, l)
        }
        (MediumSpec::Nematic { lambda, kappa1, kappa2 }, NoiseKind::Quenched) => {
            lc_force_quenched(gm, lambda, kappa1, kappa2, l)
        }
        (MediumSpec::Nematic { lambda, .. }, NoiseKind::SpatialHomogeneous) => lc_force_spatialcorr(gm, lambda, k0, l),
        (MediumSpec::TwoField { lambda1, lambda2, lambda12, d, kappa }, NoiseKind::White) => {
            twofield_stress(gm, kappa, lambda1, lambda2, lambda12, d, l)
        }
        (MediumSpec::GeneralizedP { p, c_p, kappa2, .. }, NoiseKind::White) => genp_force(p, gm, c_p, kappa2, k0, l),
        _ => Err(Error::Unsupported("no closed form for this medium and noise combination")),
    }
}

// ---------------------------------------------------------------------------
// Mode sums

/// Laplace transform c̃(μ) of the temporal noise correlation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TemporalKernel {
    /// c(t) = δ(t), c̃ = 1/2.
    White,
    /// c(t) = (1 + a/2) e^{−a|t|}, c̃ = (1 + a/2)/(a + μ).
    Exponential { a: f64 },
    /// c(t) = 1, c̃ = 1/μ.
    Quenched,
}

impl TemporalKernel {
    pub fn laplace(&self, mu: Complex64) -> Complex64 {
        match *self {
            Self::White => Complex64::new(0.5, 0.0),
            Self::Exponential { a } => Complex64::new(1.0 + 0.5 * a, 0.0) / (mu + a),
            Self::Quenched => mu.inv(),
        }
    }
}

/// Noise projections h_nm and stress projections 𝕋_nm on the surface.
#[derive(Debug, Clone, PartialEq)]
pub enum Projections {
    /// Only n = m couples; vectors of length N.
    Diagonal { h: Vec<Complex64>, stress: Vec<Complex64> },
    /// Row-major N×N matrices.
    Dense { h: Vec<Complex64>, stress: Vec<Complex64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeSumProblem {
    pub mu: Vec<Complex64>,
    pub projections: Projections,
    pub kernel: TemporalKernel,
}

impl ModeSumProblem {
    fn validate(&self) -> Result<()> {
        let n = self.mu.len();
        if self.mu.iter().any(|m| !(m.re > 0.0)) {
            return Err(Error::Domain("every eigenvalue needs a positive real part"));
        }
        let ok = match &self.projections {
            Projections::Diagonal { h, stress } => h.len() == n && stress.len() == n,
            Projections::Dense { h, stress } => h.len() == n * n && stress.len() == n * n,
        };
        if !ok {
            return Err(Error::Domain("projection sizes do not match the spectrum"));
        }
        if let TemporalKernel::Exponential { a } = self.kernel {
            if !(a >= 0.0) {
                return Err(Error::Domain("noise correlation rate must be non-negative"));
            }
        }
        Ok(())
    }
}

/// ⟨T⟩ = Σ_nm [c̃(μ_n) + c̃(μ_m*)]/(μ_n + μ_m*) h_nm 𝕋_nm (real part).
pub fn stress_mode_sum(problem: &ModeSumProblem) -> Result<f64> {
    problem.validate()?;
    let ct: Vec<Complex64> = problem.mu.iter().map(|&m| problem.kernel.laplace(m)).collect();
    let ctc: Vec<Complex64> = problem.mu.iter().map(|&m| problem.kernel.laplace(m.conj())).collect();
    let mut acc = 0.0;
    match &problem.projections {
        Projections::Diagonal { h, stress } => {
            for i in 0..problem.mu.len() {
                let m = problem.mu[i];
                acc += ((ct[i] + ctc[i]) / (m + m.conj()) * h[i] * stress[i]).re;
            }
        }
        Projections::Dense { h, stress } => {
            let n = problem.mu.len();
            for i in 0..n {
                for j in 0..n {
                    let w = (ct[i] + ctc[j]) / (problem.mu[i] + problem.mu[j].conj());
                    acc += (w * h[i * n + j] * stress[i * n + j]).re;
                }
            }
        }
    }
    Ok(acc)
}

/// F = −Σ_nm [c̃(μ_n) + c̃(μ_m*)]/(μ_n + μ_m*) h_nm ∮𝕋_nm·n̂ dS.
///
/// The stress projections must already contain the oriented surface
/// integral.
pub fn force_mode_sum(problem: &ModeSumProblem) -> Result<f64> {
    stress_mode_sum(problem).map(|t| -t)
}

// ---------------------------------------------------------------------------
// Reaction–diffusion

fn ln_one_minus_exp(x: f64) -> f64 {
    // ln(1 − e^{−x}) for x > 0
    if x > core::f64::consts::LN_2 {
        libm::log1p(-libm::exp(-x))
    } else {
        libm::log(-libm::expm1(-x))
    }
}

/// White noise: −(Γk₀/8πD) ln(1 − e^{−2k₀L})/(k₀L).
pub fn rd_force_white(gamma: f64, d: f64, k0: f64, l: f64) -> Result<f64> {
    positive(gamma, "noise intensity must be positive")?;
    positive(d, "diffusion coefficient must be positive")?;
    positive(l, "plate gap must be positive")?;
    if k0 == 0.0 {
        return Err(Error::Divergent("force diverges as the correlation length tends to infinity"));
    }
    positive(k0, "k0 must be positive")?;
    Ok(-gamma / (8.0 * PI * d * l) * ln_one_minus_exp(2.0 * k0 * l))
}

/// Long-distance form (Γ/8πDL) e^{−2k₀L}.
pub fn rd_force_white_far(gamma: f64, d: f64, k0: f64, l: f64) -> f64 {
    gamma / (8.0 * PI * d * l) * libm::exp(-2.0 * k0 * l)
}

/// Short-distance form −(Γ/8πDL) ln(k₀L).
pub fn rd_force_white_near(gamma: f64, d: f64, k0: f64, l: f64) -> f64 {
    -gamma / (8.0 * PI * d * l) * libm::log(k0 * l)
}

/// Exponentially correlated noise; a = 0 gives the quenched closed form.
pub fn rd_force_temporal(gamma: f64, d: f64, k0: f64, a: f64, l: f64) -> Result<f64> {
    positive(gamma, "noise intensity must be positive")?;
    positive(d, "diffusion coefficient must be positive")?;
    positive(l, "plate gap must be positive")?;
    if !(a >= 0.0) || !a.is_finite() {
        return Err(Error::Domain("noise correlation rate must be non-negative"));
    }
    if k0 == 0.0 {
        return Err(Error::Divergent("force diverges as the correlation length tends to infinity"));
    }
    positive(k0, "k0 must be positive")?;
    if a == 0.0 {
        return Ok(gamma / (4.0 * PI * d * d * k0) / libm::expm1(2.0 * k0 * l));
    }
    let dk = (a / d) / (libm::sqrt(k0 * k0 + a / d) + k0);
    let k1 = k0 + dk;
    // ln[(1 − e^{−2k₀L})/(1 − e^{−2k₁L})] without cancellation for small a
    let e0 = libm::exp(-2.0 * k0 * l);
    let num = e0 * libm::expm1(-2.0 * dk * l);
    let den = -libm::expm1(-2.0 * k1 * l);
    let bracket = libm::log1p(num / den);
    Ok(-gamma * (1.0 + 0.5 * a) / (4.0 * a * PI * d * l) * bracket)
}

/// Spatially homogeneous noise: the stress is L-independent, so zero force.
pub fn rd_force_spatial(gamma: f64, lambda: f64) -> Result<f64> {
    rd_spatial_stress(gamma, lambda).map(|_| 0.0)
}

/// Stress Γ/(4λ) on either side of a plate under homogeneous noise.
pub fn rd_spatial_stress(gamma: f64, lambda: f64) -> Result<f64> {
    positive(gamma, "noise intensity must be positive")?;
    positive(lambda, "reaction rate must be positive")?;
    Ok(gamma / (4.0 * lambda))
}

// ---------------------------------------------------------------------------
// Nematic liquid crystal, Dirichlet plates

/// Li₃(q) + 2kL Li₂(q) + 2k²L² Li₁(q) with q = e^{−2kL}.
fn polylog_bracket(k: f64, l: f64) -> Result<f64> {
    if k == 0.0 {
        return specfun::zeta(3.0);
    }
    let x = k * l;
    let q = libm::exp(-2.0 * x);
    let li1 = -ln_one_minus_exp(2.0 * x);
    Ok(specfun::polylog(3.0, q)? + 2.0 * x * specfun::polylog(2.0, q)? + 2.0 * x * x * li1)
}

/// ∫_{k₀}^{k₁} 4k²L³/(e^{2kL} − 1) dk, equal to bracket(k₀) − bracket(k₁).
fn bracket_difference_quad(k0: f64, k1: f64, l: f64) -> Result<f64> {
    let f = |k: f64| {
        let x = 2.0 * k * l;
        if x == 0.0 {
            2.0 * k * l * l
        } else {
            4.0 * k * k * l * l * l / libm::expm1(x)
        }
    };
    quad::integrate(f, k0, k1, QuadOptions::rel(1e-14))
}

/// White noise: (Γ/16πλL³)[Li₃ + 2k₀L Li₂ + 2k₀²L² Li₁](e^{−2k₀L}).
///
/// κ₂ is accepted for uniformity with the other nematic routines; the white
/// noise force depends on it only through k₀.
pub fn lc_force_white(gamma: f64, lambda: f64, kappa2: f64, k0: f64, l: f64) -> Result<f64> {
    positive(gamma, "noise intensity must be positive")?;
    positive(lambda, "transport coefficient must be positive")?;
    positive(kappa2, "kappa2 must be positive")?;
    positive(l, "plate gap must be positive")?;
    if !(k0 >= 0.0) {
        return Err(Error::Domain("k0 must be non-negative"));
    }
    Ok(gamma / (16.0 * PI * lambda * l * l * l) * polylog_bracket(k0, l)?)
}

/// Long-distance form (Γk₀²/8πλL) e^{−2k₀L}.
pub fn lc_force_white_far(gamma: f64, lambda: f64, k0: f64, l: f64) -> f64 {
    gamma * k0 * k0 / (8.0 * PI * lambda * l) * libm::exp(-2.0 * k0 * l)
}

/// Exponentially correlated noise with k₁² = κ₁/κ₂ + a/(λκ₂).
pub fn lc_force_temporal(gamma: f64, lambda: f64, kappa1: f64, kappa2: f64, a: f64, l: f64) -> Result<f64> {
    positive(gamma, "noise intensity must be positive")?;
    positive(lambda, "transport coefficient must be positive")?;
    positive(kappa2, "kappa2 must be positive")?;
    positive(l, "plate gap must be positive")?;
    if !(kappa1 >= 0.0) {
        return Err(Error::Domain("kappa1 must be non-negative"));
    }
    if !(a >= 0.0) || !a.is_finite() {
        return Err(Error::Domain("noise correlation rate must be non-negative"));
    }
    if a == 0.0 {
        return lc_force_quenched(gamma, lambda, kappa1, kappa2, l);
    }
    let k0 = libm::sqrt(kappa1 / kappa2);
    let k1 = libm::sqrt(kappa1 / kappa2 + a / (lambda * kappa2));
    let diff = if (k1 - k0) * l > 0.1 {
        polylog_bracket(k0, l)? - polylog_bracket(k1, l)?
    } else {
        bracket_difference_quad(k0, k1, l)?
    };
    Ok((1.0 + 0.5 * a) * gamma / (8.0 * PI * a * lambda * l * l * l) * diff)
}

/// Quenched noise: (Γ/4πλ²κ₂L) k₀L/(e^{2k₀L} − 1).
pub fn lc_force_quenched(gamma: f64, lambda: f64, kappa1: f64, kappa2: f64, l: f64) -> Result<f64> {
    positive(gamma, "noise intensity must be positive")?;
    positive(lambda, "transport coefficient must be positive")?;
    positive(kappa2, "kappa2 must be positive")?;
    positive(l, "plate gap must be positive")?;
    if !(kappa1 >= 0.0) {
        return Err(Error::Domain("kappa1 must be non-negative"));
    }
    let x = libm::sqrt(kappa1 / kappa2) * l;
    let ratio = if x == 0.0 { 0.5 } else { x / libm::expm1(2.0 * x) };
    Ok(gamma / (4.0 * PI * lambda * lambda * kappa2 * l) * ratio)
}

/// Coefficient of −(Γ/λ) ln(k₀L) in the short-distance form of the
/// spatially homogeneous noise force.
pub const SPATIALCORR_ALPHA: f64 = (7.0 + 12.0 * 2.236_067_977_499_79 - 20.0 * core::f64::consts::SQRT_2) / 16.0;

/// Truncation policy for the K₀ double sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingSumOptions {
    pub rel_tol: f64,
    pub max_rings: usize,
}

impl Default for RingSumOptions {
    fn default() -> Self {
        Self { rel_tol: 1e-15, max_rings: 2000 }
    }
}

fn k0_fn(x: f64) -> f64 {
    if x > 745.0 {
        0.0
    } else {
        specfun::bessel_k_pair(0.0, x).0
    }
}

fn spatial_combination(c: f64, n: f64, m: f64) -> f64 {
    let (n2, m2) = (n * n, m * m);
    k0_fn(c * libm::sqrt(n2 + m2)) - 0.5 * k0_fn(c * libm::sqrt(0.25 * n2 + m2))
        - 0.5 * k0_fn(c * libm::sqrt(n2 + 0.25 * m2))
        + 0.25 * k0_fn(c * 0.5 * libm::sqrt(n2 + m2))
}

/// Σ′ over ℤ² of the four-K₀ combination at argument scale c = 2√2 k₀L,
/// summed ring by ring in the max norm.
pub fn spatialcorr_ring_sum(x: f64, opts: RingSumOptions) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain("k0 L must be positive"));
    }
    let c = 2.0 * core::f64::consts::SQRT_2 * x;
    let mut total = 0.0;
    let mut quiet = 0;
    let mut last = 0.0;
    for r in 1..=opts.max_rings {
        let rf = r as f64;
        let mut ring = 0.0;
        let mut ring_max: f64 = 0.0;
        for m in 0..=r {
            let mult = if m == 0 || m == r { 4.0 } else { 8.0 };
            let t = mult * spatial_combination(c, rf, m as f64);
            ring += t;
            ring_max = ring_max.max(t.abs());
        }
        total += ring;
        last = ring_max;
        if ring_max < opts.rel_tol * total.abs() {
            quiet += 1;
            if quiet == 2 {
                return Ok(total);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::Truncation { last, total })
}

/// Σ_{m≥1} K₀(m y).
fn row_k0_sum(y: f64) -> f64 {
    if y >= 1.0 {
        let mut s = 0.0;
        let mut m = 1.0;
        loop {
            let t = k0_fn(m * y);
            s += t;
            if t < 1e-18 * s {
                return s;
            }
            m += 1.0;
        }
    }
    // Poisson-resummed form, exact for 0 < y < 2π
    const NL: usize = 1000;
    let mut tail = 0.0;
    for l in 1..=NL {
        let w = 2.0 * PI * l as f64;
        tail += 1.0 / libm::sqrt(y * y + w * w) - 1.0 / w;
    }
    let nn = (NL + 1) as f64;
    let z3 = 1.0 / (2.0 * nn * nn) + 1.0 / (2.0 * nn * nn * nn) + 1.0 / (4.0 * nn * nn * nn * nn);
    let z5 = 1.0 / (4.0 * nn * nn * nn * nn);
    let tp = 2.0 * PI;
    tail += -0.5 * y * y / (tp * tp * tp) * z3 + 0.375 * libm::pow(y, 4.0) / libm::pow(tp, 5.0) * z5;
    PI / (2.0 * y) + 0.5 * (libm::log(y / (4.0 * PI)) + EULER_GAMMA) + PI * tail
}

/// Σ′_{(n,m)∈ℤ²} K₀(c √(a²n² + b²m²)) by a Poisson transform along m.
fn lattice_k0_sum(c: f64, a: f64, b: f64) -> f64 {
    let row0 = 2.0 * row_k0_sum(c * b);
    let geom = |q: f64| {
        let e = libm::exp(-a * q);
        2.0 * e / (-libm::expm1(-a * q))
    };
    let mut rest = PI / (b * c) * geom(c);
    let mut k = 1.0;
    loop {
        let w = 2.0 * PI * k / b;
        let q = libm::sqrt(c * c + w * w);
        let t = 2.0 * PI / b / q * geom(q);
        rest += t;
        if t < 1e-18 * rest.abs() || a * q > 745.0 {
            break;
        }
        k += 1.0;
    }
    row0 + rest
}

/// Same double sum as [`spatialcorr_ring_sum`], evaluated through a
/// one-dimensional Poisson transform; usable for arbitrarily small k₀L.
pub fn spatialcorr_resummed_sum(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain("k0 L must be positive"));
    }
    let c = 2.0 * core::f64::consts::SQRT_2 * x;
    Ok(lattice_k0_sum(c, 1.0, 1.0) - 0.5 * lattice_k0_sum(c, 0.5, 1.0) - 0.5 * lattice_k0_sum(c, 1.0, 0.5)
        + 0.25 * lattice_k0_sum(c, 0.5, 0.5))
}

fn spatialcorr_checks(gamma: f64, lambda: f64, k0: f64, l: f64) -> Result<f64> {
    positive(gamma, "noise intensity must be positive")?;
    positive(lambda, "transport coefficient must be positive")?;
    positive(l, "plate gap must be positive")?;
    if k0 == 0.0 {
        return Err(Error::Divergent("force diverges as the correlation length tends to infinity"));
    }
    positive(k0, "k0 must be positive")?;
    Ok(k0 * l)
}

/// Spatially homogeneous noise: −(Γ/λ) Σ′ of the four-K₀ combination.
///
/// Small k₀L needs many rings; when the budget is exhausted a
/// [`Error::Truncation`] is returned.
pub fn lc_force_spatialcorr(gamma: f64, lambda: f64, k0: f64, l: f64) -> Result<f64> {
    lc_force_spatialcorr_with(gamma, lambda, k0, l, RingSumOptions::default())
}

pub fn lc_force_spatialcorr_with(gamma: f64, lambda: f64, k0: f64, l: f64, opts: RingSumOptions) -> Result<f64> {
    let x = spatialcorr_checks(gamma, lambda, k0, l)?;
    Ok(-gamma / lambda * spatialcorr_ring_sum(x, opts)?)
}

/// As [`lc_force_spatialcorr`] using the resummed evaluator.
pub fn lc_force_spatialcorr_resummed(gamma: f64, lambda: f64, k0: f64, l: f64) -> Result<f64> {
    let x = spatialcorr_checks(gamma, lambda, k0, l)?;
    Ok(-gamma / lambda * spatialcorr_resummed_sum(x)?)
}

/// Long-distance form (Γ/2λ) √(√2π/(k₀L)) e^{−√2 k₀L}.
pub fn lc_force_spatialcorr_far(gamma: f64, lambda: f64, k0: f64, l: f64) -> f64 {
    let x = k0 * l;
    gamma / (2.0 * lambda) * libm::sqrt(core::f64::consts::SQRT_2 * PI / x) * libm::exp(-core::f64::consts::SQRT_2 * x)
}

/// Short-distance form −α(Γ/λ) ln(k₀L).
pub fn lc_force_spatialcorr_near(gamma: f64, lambda: f64, k0: f64, l: f64) -> f64 {
    -SPATIALCORR_ALPHA * gamma / lambda * libm::log(k0 * l)
}

// ---------------------------------------------------------------------------
// Two coupled fields with a non-Hermitian dynamic matrix

/// Stress difference for the reaction–diffusion pair driven through λ₁₂.
pub fn twofield_stress(gamma: f64, kappa: f64, lambda1: f64, lambda2: f64, lambda12: f64, d: f64, l: f64) -> Result<f64> {
    positive(gamma, "noise intensity must be positive")?;
    positive(kappa, "stress coefficient must be positive")?;
    positive(d, "diffusion coefficient must be positive")?;
    positive(l, "plate gap must be positive")?;
    if lambda1 == 0.0 || lambda2 == 0.0 {
        return Err(Error::Divergent("undamped field performs an unbounded random walk"));
    }
    positive(lambda1, "lambda1 must be positive")?;
    positive(lambda2, "lambda2 must be positive")?;
    if lambda1 == lambda2 {
        return Err(Error::NotDiagonalizable("lambda1 = lambda2 gives a Jordan block"));
    }
    if lambda12 == 0.0 {
        return Ok(0.0);
    }
    let k1 = libm::sqrt(lambda1 / d);
    let k2 = libm::sqrt(lambda2 / d);
    let k3 = libm::sqrt((lambda1 + lambda2) / (2.0 * d));
    let log = ln_one_minus_exp(2.0 * k1 * l) + ln_one_minus_exp(2.0 * k2 * l) - 2.0 * ln_one_minus_exp(2.0 * k3 * l);
    let dl = lambda1 - lambda2;
    Ok(-gamma * kappa * lambda12 * lambda12 / (4.0 * PI * d * l * dl * dl) * log)
}

// ---------------------------------------------------------------------------
// Higher temporal derivatives

/// Printed values of C(p) for p = 1..6.
pub const C_TABLE: [f64; 6] = [2.0, 8.0, 18.0, 32.0, 50.0, 36.0];

pub fn c_table(p: u32) -> Result<f64> {
    match p {
        1..=6 => Ok(C_TABLE[p as usize - 1]),
        0 => Err(Error::Domain("temporal order p must be at least 1")),
        _ => Err(Error::Unsupported("C(p) is tabulated only for p ≤ 6")),
    }
}

fn genp_prefactor(p: u32, gamma: f64, c_p: f64, kappa2: f64) -> Result<f64> {
    positive(gamma, "noise intensity must be positive")?;
    positive(c_p, "c_p must be positive")?;
    positive(kappa2, "kappa2 must be positive")?;
    let pf = p as f64;
    Ok(gamma * c_p * libm::pow(kappa2, 1.0 / pf - 1.0) / c_table(p)?)
}

/// Force for (∂ₜφ/c_p)^p = κ₂∇²φ − κ₁φ + ξ between Dirichlet plates.
///
/// Evaluates −(P/4πL) ∫_{k₀}^∞ ω Y₁ᴷ(2 − 1/p, π/L, ω) dω, where Y₁ᴷ is the
/// Macdonald series of Y₁ and P = Γ c_p κ₂^{1/p−1}/C(p).
pub fn genp_force(p: u32, gamma: f64, c_p: f64, kappa2: f64, k0: f64, l: f64) -> Result<f64> {
    let pref = genp_prefactor(p, gamma, c_p, kappa2)?;
    positive(l, "plate gap must be positive")?;
    if !(k0 > 0.0) || !k0.is_finite() {
        return Err(Error::Domain("k0 must be positive"));
    }
    let s = 2.0 - 1.0 / p as f64;
    let alpha = PI / l;
    let mut err = None;
    let f = |w: f64| -> f64 {
        if !(w > 0.0) || !w.is_finite() {
            return 0.0;
        }
        match regulate::y1_series(s, alpha, w) {
            Ok(y) => w * y,
            Err(e) => {
                err.get_or_insert(e);
                0.0
            }
        }
    };
    let v = quad::integrate_to_inf(f, k0, 0.5 / l, QuadOptions::rel(1e-12))?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok(-pref / (4.0 * PI * l) * v)
}

/// Long-distance form P k₀ e^{−2k₀L} (k₀/L)^{1/p} / (4π Γ(2 − 1/p)).
pub fn genp_force_far(p: u32, gamma: f64, c_p: f64, kappa2: f64, k0: f64, l: f64) -> Result<f64> {
    let pref = genp_prefactor(p, gamma, c_p, kappa2)?;
    let pf = p as f64;
    Ok(pref * k0 * libm::exp(-2.0 * k0 * l) * libm::pow(k0 / l, 1.0 / pf) / (4.0 * PI * specfun::gamma(2.0 - 1.0 / pf)))
}

/// Short-distance form P sin(π/p) Γ(2/p) ζ(1 + 2/p) / (2^{1+2/p} π² (p − 1) L^{1+2/p}).
pub fn genp_force_near(p: u32, gamma: f64, c_p: f64, kappa2: f64, l: f64) -> Result<f64> {
    let pref = genp_prefactor(p, gamma, c_p, kappa2)?;
    let pf = p as f64;
    // sin(π/p)/(p − 1) → π as p → 1
    let ratio = if p == 1 { PI } else { libm::sin(PI / pf) / (pf - 1.0) };
    let e = 1.0 + 2.0 / pf;
    Ok(pref * ratio * specfun::gamma(2.0 / pf) * specfun::zeta(e)? / (libm::pow(2.0, e) * PI * PI * libm::pow(l, e)))
}

/// Polynomial temporal operator F(x) = Σ_j a_j x^j.
#[derive(Debug, Clone, PartialEq)]
pub struct TemporalPolynomial {
    coeffs: Vec<f64>,
}

impl TemporalPolynomial {
    /// Coefficients in increasing degree; the degree must be at least one.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::Domain("operator coefficients must be finite"));
        }
        let mut c = coeffs;
        while c.last() == Some(&0.0) {
            c.pop();
        }
        if c.len() < 2 {
            return Err(Error::Domain("temporal operator must have degree at least one"));
        }
        Ok(Self { coeffs: c })
    }

    /// (x/c)^p.
    pub fn power(p: u32, c: f64) -> Result<Self> {
        positive(c, "c_p must be positive")?;
        if p == 0 {
            return Err(Error::Domain("temporal order p must be at least 1"));
        }
        let mut v = alloc::vec![0.0; p as usize + 1];
        v[p as usize] = libm::pow(c, -(p as f64));
        Self::new(v)
    }

    /// Wave operator x²/c².
    pub fn wave(c: f64) -> Result<Self> {
        Self::power(2, c)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    fn derivative_at(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in (1..self.coeffs.len()).rev() {
            acc = acc * z + self.coeffs[j] * j as f64;
        }
        acc
    }
}

/// Which side of t = t′ a pole contributes to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CausalTag {
    /// Re ω > 0, relevant for t > t′.
    Forward,
    /// Re ω < 0, relevant for t < t′.
    Backward,
    /// Re ω = 0, undamped; carries weight ½.
    Marginal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelPole {
    pub omega: Complex64,
    pub residue: Complex64,
    pub tag: CausalTag,
}

const MARGINAL_TOL: f64 = 1e-10;

/// Poles ω_m of 1/(F(ω) − μ) with residues 1/F′(ω_m), classified by Re ω.
pub fn greens_kernel_decomposition(op: &TemporalPolynomial, mu: Complex64) -> Result<Vec<KernelPole>> {
    if !(mu.re.is_finite() && mu.im.is_finite()) || mu == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain("mode eigenvalue must be finite and non-zero"));
    }
    let mut c: Vec<Complex64> = op.coeffs.iter().map(|&a| Complex64::new(a, 0.0)).collect();
    c[0] -= mu;
    let zs = roots::poly_roots(&c)?;
    let mut out = Vec::with_capacity(zs.len());
    for w in zs {
        let d = op.derivative_at(w);
        if d.norm() == 0.0 {
            return Err(Error::NotDiagonalizable("repeated pole in the temporal kernel"));
        }
        let tag = if w.re.abs() <= MARGINAL_TOL * w.norm() {
            CausalTag::Marginal
        } else if w.re > 0.0 {
            CausalTag::Forward
        } else {
            CausalTag::Backward
        };
        let omega = if tag == CausalTag::Marginal { Complex64::new(0.0, w.im) } else { w };
        out.push(KernelPole { omega, residue: d.inv(), tag });
    }
    Ok(out)
}

/// Steady-state mode correlator Γ Σ′Σ′ R_m R_{m′}*/(ω_m + ω_{m′}*).
///
/// Backward poles are dropped, marginal poles weigh ½, and pairs of two
/// marginal poles contribute nothing.
pub fn steady_correlator(poles: &[KernelPole], gamma: f64) -> f64 {
    let weight = |t: CausalTag| match t {
        CausalTag::Forward => 1.0,
        CausalTag::Marginal => 0.5,
        CausalTag::Backward => 0.0,
    };
    let mut acc = 0.0;
    for a in poles {
        for b in poles {
            let w = weight(a.tag) * weight(b.tag);
            if w == 0.0 || (a.tag == CausalTag::Marginal && b.tag == CausalTag::Marginal) {
                continue;
            }
            let rr = a.residue * b.residue.conj();
            let sr = a.omega.re + b.omega.re;
            let di = a.omega.im - b.omega.im;
            acc += w * (rr.re * sr + rr.im * di) / (sr * sr + di * di);
        }
    }
    gamma * acc
}

/// C(p) recovered from the pole–residue correlator of (x/c)^p at μ = c = Γ = 1.
pub fn c_from_poles(p: u32) -> Result<f64> {
    let op = TemporalPolynomial::power(p, 1.0)?;
    let poles = greens_kernel_decomposition(&op, Complex64::new(1.0, 0.0))?;
    let v = steady_correlator(&poles, 1.0);
    if !(v > 0.0) {
        return Err(Error::Domain("correlator vanishes for this operator"));
    }
    Ok(1.0 / v)
}
