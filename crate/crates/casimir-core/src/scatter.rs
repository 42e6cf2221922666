//! Large-separation multiscattering results.
//!
//! * Two spheres (perfect metal, plasma, Drude) at arbitrary temperature in
//!   the dipole approximation: free energy, entropy and force.
//! * Two anisotropic atoms near a perfectly reflecting wall, and the
//!   `(R/L)` series for two perfect-metal spheres near the wall.
//! * Tilted cylinders: scalar and vector translation matrices, far-field
//!   asymptotic energies, the angular function Ω(γ) and the proximity
//!   force approximation.
//!
//! Spheres use the dimensionless variable `z = d/λ_T = 2πTd` and the reduced
//! energy `E_ad(z) = 2π d⁷ E / R⁶`, which is a function of `z` alone.

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::quad::{self, QuadOptions};
use crate::roots;
use crate::specfun;
use crate::{Error, Result};

/// `f64::powi` lives in std; without it integer powers go by squaring.
#[cfg(not(feature = "std"))]
trait Powi {
    fn powi(self, n: i32) -> f64;
}

#[cfg(not(feature = "std"))]
impl Powi for f64 {
    fn powi(self, n: i32) -> f64 {
        let (mut base, mut e) = (if n < 0 { 1.0 / self } else { self }, n.unsigned_abs());
        let mut acc = 1.0;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base *= base;
            e >>= 1;
        }
        acc
    }
}

/// Above this `R/d` the dipole asymptotics are no longer trustworthy.
pub const LARGE_SEPARATION_LIMIT: f64 = 0.2;

// ---------------------------------------------------------------------------
// Forward-mode derivative carrier for the closed forms.

#[derive(Debug, Clone, Copy)]
struct Dual {
    v: f64,
    d: f64,
}

impl Dual {
    fn var(v: f64) -> Self {
        Self { v, d: 1.0 }
    }
    fn c(v: f64) -> Self {
        Self { v, d: 0.0 }
    }
    fn exp(self) -> Self {
        let e = libm::exp(self.v);
        Self { v: e, d: e * self.d }
    }
    fn cosh(self) -> Self {
        Self { v: libm::cosh(self.v), d: libm::sinh(self.v) * self.d }
    }
    fn sinh(self) -> Self {
        Self { v: libm::sinh(self.v), d: libm::cosh(self.v) * self.d }
    }
    fn powi(self, n: i32) -> Self {
        let p = libm::pow(self.v, n as f64);
        Self { v: p, d: n as f64 * libm::pow(self.v, (n - 1) as f64) * self.d }
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, o: Dual) -> Dual {
        Dual { v: self.v + o.v, d: self.d + o.d }
    }
}
impl Sub for Dual {
    type Output = Dual;
    fn sub(self, o: Dual) -> Dual {
        Dual { v: self.v - o.v, d: self.d - o.d }
    }
}
impl Mul for Dual {
    type Output = Dual;
    fn mul(self, o: Dual) -> Dual {
        Dual { v: self.v * o.v, d: self.d * o.v + self.v * o.d }
    }
}
impl Div for Dual {
    type Output = Dual;
    fn div(self, o: Dual) -> Dual {
        Dual { v: self.v / o.v, d: (self.d * o.v - self.v * o.d) / (o.v * o.v) }
    }
}
impl Mul<Dual> for f64 {
    type Output = Dual;
    fn mul(self, o: Dual) -> Dual {
        Dual { v: self * o.v, d: self * o.d }
    }
}
impl Add<f64> for Dual {
    type Output = Dual;
    fn add(self, o: f64) -> Dual {
        Dual { v: self.v + o, d: self.d }
    }
}
impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        Dual { v: -self.v, d: -self.d }
    }
}

// ---------------------------------------------------------------------------
// Two spheres

/// Electromagnetic response of the sphere material.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SphereMaterial {
    Perfect,
    /// Plasma model with plasma wavelength `λ_P`.
    Plasma { lambda_p: f64 },
    /// Drude model; at the dipole level only the electric channel survives,
    /// so neither parameter enters the asymptotic energy.
    Drude { lambda_p: f64, sigma: f64 },
}

/// Two identical spheres of radius `R` with centers a distance `d` apart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereModel {
    pub material: SphereMaterial,
    radius: f64,
    separation: f64,
}

impl SphereModel {
    pub fn new(material: SphereMaterial, radius: f64, separation: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::Domain("sphere radius must be positive"));
        }
        if !(separation > 2.0 * radius) || !separation.is_finite() {
            return Err(Error::Domain("center separation must exceed 2R"));
        }
        match material {
            SphereMaterial::Perfect => {}
            SphereMaterial::Plasma { lambda_p } => {
                if !(lambda_p > 0.0) || !lambda_p.is_finite() {
                    return Err(Error::Domain("plasma wavelength must be positive"));
                }
            }
            SphereMaterial::Drude { lambda_p, sigma } => {
                if !(lambda_p > 0.0) || !(sigma > 0.0) || !lambda_p.is_finite() || !sigma.is_finite() {
                    return Err(Error::Domain("Drude parameters must be positive"));
                }
            }
        }
        Ok(Self { material, radius, separation })
    }

    pub fn perfect(radius: f64, separation: f64) -> Result<Self> {
        Self::new(SphereMaterial::Perfect, radius, separation)
    }

    pub fn plasma(lambda_p: f64, radius: f64, separation: f64) -> Result<Self> {
        Self::new(SphereMaterial::Plasma { lambda_p }, radius, separation)
    }

    pub fn drude(lambda_p: f64, sigma: f64, radius: f64, separation: f64) -> Result<Self> {
        Self::new(SphereMaterial::Drude { lambda_p, sigma }, radius, separation)
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn separation(&self) -> f64 {
        self.separation
    }

    pub fn with_separation(&self, separation: f64) -> Result<Self> {
        Self::new(self.material, self.radius, separation)
    }

    /// `R/d ≤ 0.2`, where the dipole asymptotics apply.
    pub fn large_separation(&self) -> bool {
        self.radius / self.separation <= LARGE_SEPARATION_LIMIT
    }

    /// Static dipole polarizabilities `(α_E, α_M)` in units of `R³`.
    pub fn dipole_polarizabilities(&self) -> (f64, f64) {
        match self.material {
            SphereMaterial::Perfect => (1.0, -0.5),
            SphereMaterial::Plasma { lambda_p } => (1.0, plasma_magnetic_polarizability(2.0 * PI * self.radius / lambda_p)),
            SphereMaterial::Drude { .. } => (1.0, 0.0),
        }
    }

    /// Reduced energy `E_ad(z) = 2π d⁷ E / R⁶`.
    pub fn energy_ad(&self, z: f64) -> Result<f64> {
        if !(z >= 0.0) || !z.is_finite() {
            return Err(Error::Domain("z = d/λ_T must be finite and ≥ 0"));
        }
        match self.material {
            SphereMaterial::Perfect => Ok(perfect_energy_ad(Dual::c(z)).v),
            SphereMaterial::Drude { .. } => Ok(drude_energy_ad(Dual::c(z)).v),
            SphereMaterial::Plasma { .. } => Ok(self.plasma_energy_ad(Dual::c(z)).v),
        }
    }

    /// `dE_ad/dz`, exact (forward-mode differentiation of every route).
    pub fn energy_ad_slope(&self, z: f64) -> Result<f64> {
        if !(z >= 0.0) || !z.is_finite() {
            return Err(Error::Domain("z = d/λ_T must be finite and ≥ 0"));
        }
        match self.material {
            SphereMaterial::Perfect => Ok(perfect_energy_ad(Dual::var(z)).d),
            SphereMaterial::Drude { .. } => Ok(drude_energy_ad(Dual::var(z)).d),
            SphereMaterial::Plasma { .. } => Ok(self.plasma_energy_ad(Dual::var(z)).d),
        }
    }

    fn plasma_energy_ad(&self, z: Dual) -> Dual {
        let (ae, am) = self.dipole_polarizabilities();
        let (a, b) = (ae * ae + am * am, 2.0 * ae * am);
        if z.v < PLASMA_SERIES_BELOW {
            dipole_energy_series(z, a, b)
        } else {
            plasma_matsubara_sum(z, a, b)
        }
    }
}

/// Below this `z` the Matsubara sum needs more than ~10³ terms and the
/// Euler–Maclaurin form of the same sum is used instead.
const PLASMA_SERIES_BELOW: f64 = 0.05;

/// Magnetic dipole polarizability of a plasma sphere in units of `R³`,
/// `−(3 + y² − 3y coth y)/(2y²)` with `y = 2πR/λ_P`.
pub fn plasma_magnetic_polarizability(y: f64) -> f64 {
    if y < 1.0 {
        // 3 + y² − 3y coth y = −3 Σ_{k≥2} 2^{2k} B_{2k} y^{2k}/(2k)!
        let mut s = 0.0;
        let mut fact = 24.0;
        let mut pow = 16.0 * y.powi(4);
        for k in 2..30u32 {
            s += specfun::bernoulli_even(k) * pow / fact;
            let n = 2.0 * k as f64;
            fact *= (n + 1.0) * (n + 2.0);
            pow *= 4.0 * y * y;
        }
        return 1.5 * s / (y * y);
    }
    let x = 3.0 + y * y - 3.0 * y / libm::tanh(y);
    -x / (2.0 * y * y)
}

const P_EE: [f64; 5] = [6.0, 12.0, 10.0, 4.0, 2.0];
const P_EH: [f64; 5] = [0.0, 0.0, 1.0, 2.0, 1.0];

/// Euler–Maclaurin form of `E_ad(z) = −z Σ′ F(nz)`, `F = e^{−2x}(A P_EE − 2B P_EH)`.
fn dipole_energy_series(z: Dual, a: f64, b: f64) -> Dual {
    let q: [f64; 5] = core::array::from_fn(|i| a * P_EE[i] - 2.0 * b * P_EH[i]);
    // ∫₀^∞ e^{−2x} x^i dx = i!/2^{i+1}
    let mut integral = 0.0;
    let mut fact = 1.0;
    for (i, qi) in q.iter().enumerate() {
        if i > 0 {
            fact *= i as f64;
        }
        integral += qi * fact / libm::pow(2.0, (i + 1) as f64);
    }
    let deriv = |j: usize| -> f64 {
        // F^{(j)}(0) = Σ_i C(j,i) i! q_i (−2)^{j−i}
        let mut s = 0.0;
        let mut binom = 1.0;
        let mut fi = 1.0;
        for i in 0..=j.min(4) {
            if i > 0 {
                binom *= (j + 1 - i) as f64 / i as f64;
                fi *= i as f64;
            }
            s += binom * fi * q[i] * libm::pow(-2.0, (j - i) as f64);
        }
        s
    };
    let mut e = Dual::c(-integral);
    let mut fact2k = 1.0;
    for k in 1..=20u32 {
        let n = 2 * k;
        fact2k *= ((n - 1) * n) as f64;
        let c = specfun::bernoulli_even(k) / fact2k * deriv(n as usize - 1);
        e = e + c * z.powi(n as i32);
    }
    e
}

fn perfect_energy_ad(z: Dual) -> Dual {
    if z.v < 0.5 {
        return dipole_energy_series(z, 1.25, -1.0);
    }
    if z.v > 40.0 {
        return dipole_energy_direct(z, 1.25, -1.0);
    }
    let z2 = z * z;
    let z4 = z2 * z2;
    let ch = |k: f64| (k * z).cosh();
    let bracket = 2.0 * ((15.0 * Dual::c(1.0) - 29.0 * z2 + 99.0 * z4) * ch(1.0))
        + 15.0 * ch(5.0)
        + (-45.0 * Dual::c(1.0) + 58.0 * z2 + 18.0 * z4) * ch(3.0)
        + 24.0 * (z * ((6.0 * z2 + (-5.0)) + (5.0 * Dual::c(1.0) + 3.0 * z2) * ch(2.0)) * z.sinh());
    let pre = z * (5.0 * z).exp() / (2.0 * ((2.0 * z).exp() + (-1.0)).powi(5));
    -(pre * bracket)
}

fn drude_energy_ad(z: Dual) -> Dual {
    if z.v < 0.5 {
        return dipole_energy_series(z, 1.0, 0.0);
    }
    if z.v > 40.0 {
        return dipole_energy_direct(z, 1.0, 0.0);
    }
    let z2 = z * z;
    let z3 = z2 * z;
    let z4 = z2 * z2;
    let bracket = (6.0 * Dual::c(1.0) - 10.0 * z2 + 22.0 * z4) * z.cosh()
        + (-36.0 * z + 12.0 * z3) * z.sinh()
        + (12.0 * z + 4.0 * z3) * (3.0 * z).sinh()
        + 3.0 * (5.0 * z).cosh()
        + (-9.0 * Dual::c(1.0) + 10.0 * z2 + 2.0 * z4) * (3.0 * z).cosh();
    let pre = 2.0 * z * (5.0 * z).exp() / ((2.0 * z).exp() + (-1.0)).powi(5);
    -(pre * bracket)
}

/// Direct Matsubara sum, used where the hyperbolic forms overflow.
fn dipole_energy_direct(z: Dual, a: f64, b: f64) -> Dual {
    let mut s = Dual::c(0.0);
    for n in 0..4 {
        let x = (n as f64) * z;
        let mut q = Dual::c(0.0);
        for k in (0..5).rev() {
            q = q * x + (a * P_EE[k] - 2.0 * b * P_EH[k]);
        }
        let term = (-2.0 * x).exp() * q;
        s = s + if n == 0 { 0.5 * term } else { term };
    }
    -(z * s)
}

/// `E_ad(z) = −z Σ′_n Tr N(2πnT)` summed term by term until the
/// remaining terms are below double precision.
fn plasma_matsubara_sum(z: Dual, a: f64, b: f64) -> Dual {
    let mut s = Dual::c(0.0);
    let mut n = 0u32;
    loop {
        let x = (n as f64) * z;
        let mut q = Dual::c(0.0);
        for k in (0..5).rev() {
            q = q * x + (a * P_EE[k] - 2.0 * b * P_EH[k]);
        }
        let term = (-2.0 * x).exp() * q;
        s = s + if n == 0 { 0.5 * term } else { term };
        if x.v > 20.0 && term.v.abs() < 1e-18 * s.v.abs() {
            break;
        }
        n += 1;
    }
    -(z * s)
}

fn check_temperature(t: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain("temperature must be finite and ≥ 0"));
    }
    Ok(())
}

/// Casimir free energy between the two spheres at temperature `T`.
pub fn spheres_energy(model: &SphereModel, temperature: f64) -> Result<f64> {
    check_temperature(temperature)?;
    let z = 2.0 * PI * temperature * model.separation;
    let e = model.energy_ad(z)?;
    Ok(e * model.radius.powi(6) / (2.0 * PI * model.separation.powi(7)))
}

/// Entropy `S = −∂E/∂T`, from the exact `z`-derivative of `E_ad`.
pub fn spheres_entropy(model: &SphereModel, temperature: f64) -> Result<f64> {
    check_temperature(temperature)?;
    if temperature == 0.0 {
        return Ok(0.0);
    }
    let (r, d) = (model.radius, model.separation);
    let z = 2.0 * PI * temperature * d;
    Ok(-model.energy_ad_slope(z)? * r.powi(6) / d.powi(6))
}

/// Force `F = −∂E/∂d` (negative is attractive).
///
/// Since `E = R⁶ d⁻⁷ Φ(Td)`, the force follows as `F = (7E + TS)/d`.
pub fn spheres_force(model: &SphereModel, temperature: f64) -> Result<f64> {
    let e = spheres_energy(model, temperature)?;
    let s = spheres_entropy(model, temperature)?;
    Ok((7.0 * e + temperature * s) / model.separation)
}

/// Both sides of `∂F/∂T = ∂S/∂d`, from central differences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoCheck {
    pub df_dt: f64,
    pub ds_dd: f64,
}

impl ThermoCheck {
    pub fn rel_mismatch(&self) -> f64 {
        (self.df_dt - self.ds_dd).abs() / self.df_dt.abs().max(self.ds_dd.abs())
    }
}

pub fn thermo_cross_check(model: &SphereModel, temperature: f64) -> Result<ThermoCheck> {
    if !(temperature > 0.0) {
        return Err(Error::Domain("cross check needs T > 0"));
    }
    let ht = 1e-3 * temperature;
    let hd = 1e-3 * model.separation;
    let f = |t: f64| spheres_force(model, t);
    let df_dt = (-f(temperature + 2.0 * ht)? + 8.0 * f(temperature + ht)? - 8.0 * f(temperature - ht)?
        + f(temperature - 2.0 * ht)?)
        / (12.0 * ht);
    let s = |dd: f64| -> Result<f64> { spheres_entropy(&model.with_separation(dd)?, temperature) };
    let d = model.separation;
    let ds_dd = (-s(d + 2.0 * hd)? + 8.0 * s(d + hd)? - 8.0 * s(d - hd)? + s(d - 2.0 * hd)?) / (12.0 * hd);
    Ok(ThermoCheck { df_dt, ds_dd })
}

/// Values of `z = d/λ_T` in `(0, 20]` where the entropy vanishes.
///
/// These are also the extrema of `E/E₀` at fixed separation.
pub fn entropy_zeros(model: &SphereModel) -> Result<Vec<f64>> {
    let mut err = None;
    let mut slope = |z: f64| match model.energy_ad_slope(z) {
        Ok(v) => v,
        Err(e) => {
            err.get_or_insert(e);
            0.0
        }
    };
    let roots = roots::scan_roots(&mut slope, 0.05, 20.0, 800, 1e-13);
    if let Some(e) = err {
        return Err(e);
    }
    Ok(roots)
}

/// Smallest `λ_P/R` for which the plasma entropy stays non-negative at all `z`.
///
/// Below it the plasma spheres show the perfect-metal interval of negative
/// entropy.
pub fn plasma_negative_entropy_threshold() -> Result<f64> {
    let min_slope_sign = |ratio: f64| -> Result<f64> {
        let m = SphereModel::plasma(ratio, 1.0, 10.0)?;
        let mut err = None;
        // Negative entropy ⇔ positive slope of E_ad.
        let (_, v) = roots::minimize(
            |z| match m.energy_ad_slope(z) {
                Ok(s) => -s,
                Err(e) => {
                    err.get_or_insert(e);
                    0.0
                }
            },
            0.5,
            6.0,
            1e-8,
        );
        match err {
            Some(e) => Err(e),
            None => Ok(-v),
        }
    };
    let (mut lo, mut hi) = (0.2, 50.0);
    if min_slope_sign(lo)? <= 0.0 || min_slope_sign(hi)? > 0.0 {
        return Err(Error::NoConvergence("negative-entropy threshold not bracketed"));
    }
    while hi - lo > 1e-9 * hi {
        let mid = 0.5 * (lo + hi);
        if min_slope_sign(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

// ---------------------------------------------------------------------------
// Atoms and spheres near a wall

/// Static electric (`α`) and magnetic (`β`) dipole polarizabilities,
/// perpendicular (`z`) and parallel (`∥`) to the wall.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomPolarizability {
    pub alpha_z: f64,
    pub alpha_par: f64,
    pub beta_z: f64,
    pub beta_par: f64,
}

impl AtomPolarizability {
    pub fn new(alpha_z: f64, alpha_par: f64, beta_z: f64, beta_par: f64) -> Result<Self> {
        for v in [alpha_z, alpha_par, beta_z, beta_par] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::Domain("polarizabilities must be finite and ≥ 0"));
            }
        }
        Ok(Self { alpha_z, alpha_par, beta_z, beta_par })
    }

    pub fn isotropic(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(alpha, alpha, beta, beta)
    }
}

/// Energy of two atoms at distance `L`, both a height `H` above the wall.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomWallEnergy {
    pub total: f64,
    /// Direct Casimir–Polder term.
    pub two_body_direct: f64,
    /// Atom–image term at distance `D = √(L²+4H²)`.
    pub two_body_image: f64,
    /// Atom–atom–image term.
    pub three_body: f64,
}

/// Sym(x, y) = x₁y₂ + x₂y₁, the bilinear form used for two different atoms.
fn sym(x1: f64, y2: f64, x2: f64, y1: f64) -> f64 {
    x1 * y2 + x2 * y1
}

/// Casimir–Polder energy of two atoms a distance `L` apart in free space.
pub fn casimir_polder(l: f64, p1: &AtomPolarizability, p2: &AtomPolarizability) -> Result<f64> {
    if !(l > 0.0) || !l.is_finite() {
        return Err(Error::Domain("atom separation must be positive"));
    }
    let (a, b) = (p1, p2);
    let br = 33.0 * a.alpha_par * b.alpha_par + 13.0 * a.alpha_z * b.alpha_z
        - 7.0 * sym(a.alpha_par, b.beta_z, b.alpha_par, a.beta_z)
        + 33.0 * a.beta_par * b.beta_par
        + 13.0 * a.beta_z * b.beta_z
        - 7.0 * sym(a.beta_par, b.alpha_z, b.beta_par, a.alpha_z);
    Ok(-br / (8.0 * PI * l.powi(7)))
}

fn image_term(d: f64, ell: f64, a: &AtomPolarizability, b: &AtomPolarizability) -> f64 {
    let l2 = ell * ell;
    let l4 = l2 * l2;
    let channel = |xp1: f64, xz1: f64, xp2: f64, xz2: f64| {
        26.0 * xp1 * xp2 + 20.0 * xz1 * xz2 - 14.0 * l2 * (4.0 * xp1 * xp2 - 4.5 * sym(xp1, xz2, xp2, xz1) + 5.0 * xz1 * xz2)
            + 63.0 * l4 * (xp1 - xz1) * (xp2 - xz2)
    };
    let br = channel(a.alpha_par, a.alpha_z, b.alpha_par, b.alpha_z)
        + channel(a.beta_par, a.beta_z, b.beta_par, b.beta_z)
        - 7.0 * ((1.0 - l2) * sym(a.alpha_par, b.beta_par, b.alpha_par, a.beta_par) + l2 * sym(a.alpha_par, b.beta_z, b.alpha_par, a.beta_z))
        - 7.0 * ((1.0 - l2) * sym(a.beta_par, b.alpha_par, b.beta_par, a.alpha_par) + l2 * sym(a.beta_par, b.alpha_z, b.beta_par, a.alpha_z));
    -br / (8.0 * PI * d.powi(7))
}

fn three_body_term(l: f64, d: f64, ell: f64, a: &AtomPolarizability, b: &AtomPolarizability) -> f64 {
    let p_par = ((((((3.0 * ell + 15.0) * ell + 28.0) * ell + 20.0) * ell + 6.0) * ell - 5.0) * ell) - 1.0;
    let p_z = ((((((3.0 * ell + 15.0) * ell + 24.0) * ell + 0.0) * ell - 10.0) * ell - 5.0) * ell) - 1.0;
    let p_x = 4.0 * ell * ell * (ell * ell + 5.0 * ell + 1.0);
    let br = p_par * (a.alpha_par * b.alpha_par - a.beta_par * b.beta_par)
        - p_z * (a.alpha_z * b.alpha_z - a.beta_z * b.beta_z)
        + p_x * 0.5 * (sym(a.alpha_z, b.beta_par, b.alpha_z, a.beta_par) - sym(a.alpha_par, b.beta_z, b.alpha_par, a.beta_z));
    4.0 / PI * br / (l.powi(3) * d.powi(4) * (ell + 1.0).powi(5))
}

/// Two atoms a distance `L` apart at height `H` above a perfect mirror,
/// to second order in the polarizabilities.
///
/// For two different atoms the identical-atom expressions are symmetrized
/// bilinearly (`α² → α₁α₂`, `αβ → (α₁β₂ + α₂β₁)/2`).
pub fn atoms_wall_energy(l: f64, h: f64, p1: &AtomPolarizability, p2: &AtomPolarizability) -> Result<AtomWallEnergy> {
    if !(h >= 0.0) || !h.is_finite() {
        return Err(Error::Domain("wall distance must be finite and ≥ 0"));
    }
    let direct = casimir_polder(l, p1, p2)?;
    let d = libm::sqrt(l * l + 4.0 * h * h);
    let ell = l / d;
    let image = image_term(d, ell, p1, p2);
    let three = three_body_term(l, d, ell, p1, p2);
    Ok(AtomWallEnergy { total: direct + image + three, two_body_direct: direct, two_body_image: image, three_body: three })
}

/// Three-body energy for `H ≫ L`, through order `H⁻⁶`.
pub fn three_body_large_h(l: f64, h: f64, p1: &AtomPolarizability, p2: &AtomPolarizability) -> f64 {
    let (a, b) = (p1, p2);
    let h4 = 4.0 * l.powi(3) * h.powi(4);
    let h6 = 8.0 * l * h.powi(6);
    ((a.alpha_z * b.alpha_z - a.alpha_par * b.alpha_par) / h4 - (a.beta_z * b.beta_z - a.beta_par * b.beta_par) / h4
        + (9.0 * a.alpha_par * b.alpha_par - a.alpha_z * b.alpha_z - sym(a.alpha_par, b.beta_z, b.alpha_par, a.beta_z)) / h6
        - (9.0 * a.beta_par * b.beta_par - a.beta_z * b.beta_z - sym(a.beta_par, b.alpha_z, b.beta_par, a.alpha_z)) / h6)
        / PI
}

/// `(1+4u)^{p} · P(u)` minus a polynomial, divided by `u^k`, where all
/// powers below `k` cancel. Series in `u = h²`, used for `4u < 0.64`.
fn cancelled_series(power: f64, p: &[f64], sign: f64, q: &[f64], k: usize, u: f64) -> f64 {
    const TERMS: usize = 160;
    let mut binom = [0.0; TERMS + 12];
    let mut c = 1.0;
    for (m, slot) in binom.iter_mut().enumerate() {
        *slot = c * libm::pow(4.0, m as f64);
        c *= (power - m as f64) / (m as f64 + 1.0);
    }
    let mut s = 0.0;
    let mut up = 1.0;
    for m in k..k + TERMS {
        let mut cm = 0.0;
        for (i, pi) in p.iter().enumerate() {
            if i <= m {
                cm += pi * binom[m - i];
            }
        }
        let qm = q.get(m).copied().unwrap_or(0.0);
        s += (sign * cm + qm) * up;
        up *= u;
    }
    s
}

const F6_P: [f64; 5] = [18.0, 312.0, 2052.0, 6048.0, 5719.0];
const F6_Q: [f64; 5] = [18.0, -12.0, 0.0, 0.0, 1001.0];
const F8_P: [f64; 7] = [6210.0, 140554.0, 1315364.0, 6500242.0, 17830560.0, 25611168.0, 15000675.0];
const F8_Q: [f64; 7] = [-6210.0, -3934.0, 764.0, -78.0, 0.0, 0.0, 71523.0];

fn poly(c: &[f64], u: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, v| acc * u + v)
}

/// Coefficient `f₆(h)` of `(R/L)⁸` in the sphere–sphere force near a wall, `h = H/L`.
///
/// `f₆ = −[−s⁻⁹ P(h²) + 18 − 12h² + 1001h⁸]/(16h⁸)`, `s = √(1+4h²)`.
pub fn f6(h: f64) -> Result<f64> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::Domain("h = H/L must be positive"));
    }
    let u = h * h;
    if h < 0.4 {
        return Ok(-cancelled_series(-4.5, &F6_P, -1.0, &F6_Q, 4, u) / 16.0);
    }
    let s9 = libm::pow(1.0 + 4.0 * u, -4.5);
    Ok(-(-s9 * poly(&F6_P, u) + poly(&F6_Q, u)) / (16.0 * u.powi(4)))
}

/// Coefficient `f₈(h)` of `(R/L)¹⁰`.
pub fn f8(h: f64) -> Result<f64> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::Domain("h = H/L must be positive"));
    }
    let u = h * h;
    if h < 0.4 {
        return Ok(-cancelled_series(-5.5, &F8_P, 1.0, &F8_Q, 6, u) / 160.0);
    }
    let s11 = libm::pow(1.0 + 4.0 * u, -5.5);
    Ok(-(s11 * poly(&F8_P, u) + poly(&F8_Q, u)) / (160.0 * u.powi(6)))
}

/// `f_j(h)` for `6 ≤ j ≤ 8` (`f₇ = 0`). Higher orders are not available.
pub fn wall_force_coefficient(j: u32, h: f64) -> Result<f64> {
    match j {
        6 => f6(h),
        7 => {
            f6(h)?;
            Ok(0.0)
        }
        8 => f8(h),
        0..=5 => Err(Error::Domain("series starts at j = 6")),
        _ => Err(Error::Unsupported("coefficients beyond j = 8 are not available")),
    }
}

/// Force between two perfect-metal spheres of radius `R` a distance `L`
/// apart at height `H` over a mirror, `F = (1/πR²) Σ_{j=6}^{j_max} f_j (R/L)^{j+2}`.
pub fn spheres_wall_force_series(r: f64, l: f64, h: f64, j_max: u32) -> Result<f64> {
    if !(r > 0.0) || !(l > 2.0 * r) || !r.is_finite() || !l.is_finite() {
        return Err(Error::Domain("need R > 0 and L > 2R"));
    }
    if j_max < 6 {
        return Err(Error::Domain("j_max must be at least 6"));
    }
    if j_max > 8 {
        return Err(Error::Unsupported("coefficients beyond j = 8 are not available"));
    }
    let hh = h / l;
    let mut f = 0.0;
    for j in 6..=j_max {
        f += wall_force_coefficient(j, hh)? * (r / l).powi(j as i32 + 2);
    }
    Ok(f / (PI * r * r))
}

/// Location and value of the extremum of `f₆` (minimum of `|f₆|`).
pub fn f6_extremum() -> Result<(f64, f64)> {
    let mut err = None;
    let mut g = |h: f64| match f6(h) {
        Ok(v) => v,
        Err(e) => {
            err.get_or_insert(e);
            0.0
        }
    };
    // Coarse grid, then refine around the largest value.
    let mut best = (0.05, f64::NEG_INFINITY);
    for i in 1..200 {
        let h = 0.02 * i as f64;
        let v = g(h);
        if v > best.1 {
            best = (h, v);
        }
    }
    let (x, v) = roots::minimize(|h| -g(h), (best.0 - 0.02).max(1e-3), best.0 + 0.02, 1e-10);
    if let Some(e) = err {
        return Err(e);
    }
    Ok((x, -v))
}

// ---------------------------------------------------------------------------
// Tilted cylinders

/// Boundary condition on both cylinders.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CylinderBc {
    Dirichlet,
    Neumann,
    PerfectMetal,
}

/// Two cylinders of radius `R`, axes a normal distance `d` apart along the
/// direction at azimuth `θ`, tilted by `γ` about that direction.
///
/// Points map as `x' = R(d̂, −γ) x + d`; with this orientation the tilted
/// axis in the unprimed frame is `(sinθ sinγ, −cosθ sinγ, cosγ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylinderConfig {
    radius: f64,
    separation: f64,
    tilt: f64,
    azimuth: f64,
    pub bc: CylinderBc,
}

impl CylinderConfig {
    /// `tilt ∈ [0, π/2]`; `tilt = 0` is only meaningful for the parallel routines.
    pub fn new(radius: f64, separation: f64, tilt: f64, azimuth: f64, bc: CylinderBc) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::Domain("cylinder radius must be positive"));
        }
        if !(separation > 0.0) || !separation.is_finite() {
            return Err(Error::Domain("axis separation must be positive"));
        }
        if !(0.0..=PI / 2.0).contains(&tilt) {
            return Err(Error::Domain("tilt must lie in [0, π/2]"));
        }
        if !azimuth.is_finite() {
            return Err(Error::Domain("azimuth must be finite"));
        }
        Ok(Self { radius, separation, tilt, azimuth, bc })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
    pub fn separation(&self) -> f64 {
        self.separation
    }
    pub fn tilt(&self) -> f64 {
        self.tilt
    }
    pub fn azimuth(&self) -> f64 {
        self.azimuth
    }

    pub fn with_azimuth(&self, azimuth: f64) -> Self {
        Self { azimuth, ..*self }
    }

    /// Rotation matrix `R(d̂, −γ)`.
    pub fn rotation(&self) -> [[f64; 3]; 3] {
        let (st, ct) = libm::sincos(self.azimuth);
        let (s, c) = libm::sincos(-self.tilt);
        let n = [ct, st, 0.0];
        let k = [[0.0, 0.0, st], [0.0, 0.0, -ct], [-st, ct, 0.0]];
        core::array::from_fn(|i| {
            core::array::from_fn(|j| {
                let id = if i == j { 1.0 } else { 0.0 };
                c * id + s * k[i][j] + (1.0 - c) * n[i] * n[j]
            })
        })
    }

    fn require_tilted(&self) -> Result<f64> {
        let s = libm::sin(self.tilt);
        if s == 0.0 {
            return Err(Error::Unsupported("parallel cylinders: use the γ = 0 routines"));
        }
        Ok(s)
    }
}

struct Kinematics {
    p: f64,
    p_out: f64,
    xi: f64,
    xi_out: f64,
    q: f64,
}

fn kinematics(kz_out: f64, kz: f64, kappa: f64, tilt: f64) -> Result<Kinematics> {
    if !(kappa >= 0.0) || !kappa.is_finite() || !kz.is_finite() || !kz_out.is_finite() {
        return Err(Error::Domain("need κ ≥ 0 and finite k_z"));
    }
    let (s, c) = libm::sincos(tilt);
    let p = libm::hypot(kappa, kz);
    let p_out = libm::hypot(kappa, kz_out);
    if p == 0.0 || p_out == 0.0 {
        return Err(Error::Domain("p = √(κ²+k_z²) must be nonzero"));
    }
    let k_perp = (c * kz - kz_out) / s;
    let k_perp_out = (kz - c * kz_out) / s;
    Ok(Kinematics { p, p_out, xi: k_perp / p, xi_out: k_perp_out / p_out, q: libm::hypot(k_perp_out, p_out) })
}

/// Scalar translation amplitude between tilted cylindrical bases, without
/// the `2π/L` factor that cancels against the `k_z` measure.
///
/// With it, `K_{n'}(ρ'p')e^{in'θ'}e^{ik_z'z'} = Σ_n ∫dk_z U I_n(ρp)e^{inθ}e^{ik_z z}`.
pub fn cyl_translation_scalar(n_out: i32, kz_out: f64, n: i32, kz: f64, kappa: f64, cfg: &CylinderConfig) -> Result<Complex64> {
    let s = cfg.require_tilted()?;
    let k = kinematics(kz_out, kz, kappa, cfg.tilt)?;
    // (ξ + √(1+ξ²))^m = e^{m asinh ξ}
    let expo = n_out as f64 * libm::asinh(k.xi_out) - n as f64 * libm::asinh(k.xi) - cfg.separation * k.q;
    let mag = libm::exp(expo) / (2.0 * k.q * s);
    let sign = if n.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    Ok(Complex64::from_polar(sign * mag, (n_out - n) as f64 * cfg.azimuth))
}

/// Parallel-axes (`γ = 0`) translation amplitude, the coefficient of
/// `(2π/L) δ(k_z − k_z')`: `(−1)ⁿ e^{i(n'−n)θ} K_{n−n'}(d√(κ²+k_z²))`.
pub fn cyl_translation_parallel(n_out: i32, n: i32, kappa: f64, kz: f64, d: f64, azimuth: f64) -> Result<Complex64> {
    let p = libm::hypot(kappa, kz);
    if !(p > 0.0) || !(d > 0.0) {
        return Err(Error::Domain("need d > 0 and √(κ²+k_z²) > 0"));
    }
    let k = specfun::bessel_k((n - n_out).abs() as f64, d * p)?;
    let sign = if n.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    Ok(Complex64::from_polar(sign * k, (n_out - n) as f64 * azimuth))
}

/// Polarization mixing block (including `p/p'`) for the vector translation.
///
/// Entries `a = cosγ − sinγ (k_z/p) ξ` on the diagonal and
/// `b = −sinγ (κ/p) √(1+ξ²)` off it, as `[[a, b], [−b, a]]`.
pub fn cyl_polarization_mixing(kz_out: f64, kz: f64, kappa: f64, tilt: f64) -> Result<[[f64; 2]; 2]> {
    if tilt == 0.0 {
        return Ok([[1.0, 0.0], [0.0, 1.0]]);
    }
    let k = kinematics(kz_out, kz, kappa, tilt)?;
    let (s, c) = libm::sincos(tilt);
    let ratio = k.p / k.p_out;
    let a = c - s * kz / k.p * k.xi;
    let b = -s * kappa / k.p * libm::sqrt(1.0 + k.xi * k.xi);
    Ok([[ratio * a, ratio * b], [-ratio * b, ratio * a]])
}

/// Vector translation block acting on `(M, N)`: scalar amplitude times the mixing block.
pub fn cyl_translation_em(n_out: i32, kz_out: f64, n: i32, kz: f64, kappa: f64, cfg: &CylinderConfig) -> Result<[[Complex64; 2]; 2]> {
    let u = cyl_translation_scalar(n_out, kz_out, n, kz, kappa, cfg)?;
    let m = cyl_polarization_mixing(kz_out, kz, kappa, cfg.tilt)?;
    Ok([[u * m[0][0], u * m[0][1]], [u * m[1][0], u * m[1][1]]])
}

/// Zero-temperature or classical limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThermalLimit {
    Quantum,
    Classical { temperature: f64 },
}

impl ThermalLimit {
    fn temperature(&self) -> Result<f64> {
        match *self {
            ThermalLimit::Quantum => Ok(0.0),
            ThermalLimit::Classical { temperature } => {
                if !(temperature > 0.0) || !temperature.is_finite() {
                    return Err(Error::Domain("classical limit needs T > 0"));
                }
                Ok(temperature)
            }
        }
    }
}

/// How an asymptotic energy was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergyProvenance {
    /// Trace of the scattering operator.
    Direct,
    /// The zero-frequency operator is not trace class; the energy is
    /// `∫_d^∞ F dx` of the (well defined) force.
    ForceIntegrated,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylinderAsymptotic {
    pub energy: f64,
    pub force: f64,
    pub provenance: EnergyProvenance,
}

/// Far-field energy and force between tilted cylinders (`R ≪ d`).
pub fn cyl_energy_asymptotic(cfg: &CylinderConfig, limit: ThermalLimit) -> Result<CylinderAsymptotic> {
    let s = cfg.require_tilted()?;
    let (r, d) = (cfg.radius, cfg.separation);
    if !(r < d) {
        return Err(Error::Domain("far-field asymptotics need R < d"));
    }
    let t = limit.temperature()?;
    let lg = libm::log(r / d);
    let c2 = libm::cos(2.0 * cfg.tilt);
    // d/dd of 1/log(R/d) is 1/(d log²)
    let out = match (cfg.bc, limit) {
        (CylinderBc::Dirichlet | CylinderBc::PerfectMetal, ThermalLimit::Quantum) => {
            let omega = if cfg.bc == CylinderBc::PerfectMetal { omega_gamma(cfg.tilt)? } else { 1.0 };
            let energy = -omega / (8.0 * d * s * lg * lg);
            let force = omega / (8.0 * s * d * d) * (2.0 / (lg * lg * lg) - 1.0 / (lg * lg));
            CylinderAsymptotic { energy, force, provenance: EnergyProvenance::Direct }
        }
        (CylinderBc::Dirichlet | CylinderBc::PerfectMetal, ThermalLimit::Classical { .. }) => CylinderAsymptotic {
            energy: t * PI / (4.0 * s * lg),
            force: -t * PI / (4.0 * d * s * lg * lg),
            provenance: EnergyProvenance::ForceIntegrated,
        },
        (CylinderBc::Neumann, ThermalLimit::Quantum) => {
            let energy = -r.powi(4) * (167.0 + c2) / (320.0 * d.powi(5) * s);
            CylinderAsymptotic { energy, force: 5.0 * energy / d, provenance: EnergyProvenance::Direct }
        }
        (CylinderBc::Neumann, ThermalLimit::Classical { .. }) => {
            let energy = -3.0 * t * PI * r.powi(4) * (98.0 + c2) / (1024.0 * d.powi(4) * s);
            CylinderAsymptotic { energy, force: 4.0 * energy / d, provenance: EnergyProvenance::Direct }
        }
    };
    Ok(out)
}

/// Dirichlet far-field energy per unit length for parallel cylinders.
pub fn cyl_energy_parallel_dirichlet(radius: f64, separation: f64) -> Result<f64> {
    if !(radius > 0.0) || !(separation > radius) {
        return Err(Error::Domain("need 0 < R < d"));
    }
    let lg = libm::log(radius / separation);
    Ok(-1.0 / (8.0 * PI * separation * separation * lg * lg))
}

fn omega_integrand(tilt: f64, vp: f64, ph: f64) -> f64 {
    let (s, c) = libm::sincos(tilt);
    let (sv, cv) = libm::sincos(vp);
    let (sp, cp) = libm::sincos(ph);
    let num = c * sv + s * cv * sp;
    let den_a = s * cv + c * sv * sp;
    let den = den_a * den_a + sv * sv * cp * cp;
    if den == 0.0 {
        return 0.0;
    }
    sv * num * num / den
}

fn omega_with(tilt: f64, rel_tol: f64) -> Result<f64> {
    if !(0.0..=PI / 2.0).contains(&tilt) {
        return Err(Error::Domain("tilt must lie in [0, π/2]"));
    }
    if tilt == 0.0 {
        return Ok(1.0);
    }
    // The integrand is bounded but discontinuous at (φ = γ, ϕ = 3π/2)
    // (and at ϕ = π/2 when γ = π/2); split there.
    let inner_opts = QuadOptions { abs_tol: 1e-15, rel_tol, max_subdivisions: 400 };
    let outer_opts = QuadOptions { abs_tol: 1e-14, rel_tol, max_subdivisions: 400 };
    let mut err = None;
    let mut inner = |vp: f64| -> f64 {
        let breaks = [0.0, PI / 2.0, 1.5 * PI, 2.0 * PI];
        let mut s = 0.0;
        for w in breaks.windows(2) {
            match quad::integrate(|ph| omega_integrand(tilt, vp, ph), w[0], w[1], inner_opts) {
                Ok(v) => s += v,
                Err(e) => {
                    err.get_or_insert(e);
                }
            }
        }
        s
    };
    let mut total = 0.0;
    let outer_breaks = if tilt < PI / 2.0 { [0.0, tilt, PI / 2.0] } else { [0.0, PI / 4.0, PI / 2.0] };
    for w in outer_breaks.windows(2) {
        total += quad::integrate(&mut inner, w[0], w[1], outer_opts)?;
    }
    if let Some(e) = err {
        return Err(e);
    }
    Ok(total / (2.0 * PI))
}

/// Angular suppression Ω(γ) of the perfect-metal far-field energy relative
/// to Dirichlet; Ω(0) = 1 and Ω(π/2) = 1 − ln 2.
pub fn omega_gamma(tilt: f64) -> Result<f64> {
    omega_with(tilt, 1e-11)
}

/// Fourier coefficients `Ω_{2n}` of `Ω(γ) = Σ Ω_{2n} cos(2nγ)`, `n < count`,
/// by cosine projection on a 512-point midpoint grid over `[0, π/2]`.
pub fn omega_fourier(count: usize) -> Result<Vec<f64>> {
    const N: usize = 512;
    let mut vals = Vec::with_capacity(N);
    for j in 0..N {
        let g = (j as f64 + 0.5) * PI / (2.0 * N as f64);
        vals.push((g, omega_with(g, 1e-9)?));
    }
    let mut out = Vec::with_capacity(count);
    for n in 0..count {
        let s: f64 = vals.iter().map(|(g, v)| v * libm::cos(2.0 * n as f64 * g)).sum();
        let norm = if n == 0 { 1.0 } else { 2.0 };
        out.push(norm * s / N as f64);
    }
    Ok(out)
}

fn pfa_args(radius: f64, gap: f64, tilt: f64) -> Result<f64> {
    if !(radius > 0.0) || !(gap > 0.0) || !radius.is_finite() || !gap.is_finite() {
        return Err(Error::Domain("need R > 0 and l = d − 2R > 0"));
    }
    let s = libm::sin(tilt);
    if !(tilt > 0.0 && tilt <= PI / 2.0) {
        return Err(Error::Domain("tilt must lie in (0, π/2]"));
    }
    Ok(s)
}

/// Small-gap PFA for tilted perfect-metal cylinders, `l = d − 2R`.
pub fn cyl_pfa(radius: f64, gap: f64, tilt: f64, limit: ThermalLimit) -> Result<f64> {
    let s = pfa_args(radius, gap, tilt)?;
    let t = limit.temperature()?;
    Ok(match limit {
        ThermalLimit::Quantum => -PI.powi(3) * radius / (720.0 * s * gap * gap),
        ThermalLimit::Classical { .. } => -t * specfun::zeta_real(3.0) * radius / (4.0 * s * gap),
    })
}

/// PFA integral over the overlap parallelogram without the small-gap expansion.
pub fn cyl_pfa_exact(radius: f64, gap: f64, tilt: f64, limit: ThermalLimit) -> Result<f64> {
    let s = pfa_args(radius, gap, tilt)?;
    let t = limit.temperature()?;
    let d = gap + 2.0 * radius;
    // u|sinγ| = R(1 + sin φ): the local gap is d − R cos φ − R cos ψ.
    let (pw, pre) = match limit {
        ThermalLimit::Quantum => (3, -PI * PI / 720.0),
        ThermalLimit::Classical { .. } => (2, -t * specfun::zeta_real(3.0) / (8.0 * PI)),
    };
    let width = libm::sqrt(gap / radius).min(1.0);
    let opts = QuadOptions { abs_tol: 1e-300, rel_tol: 1e-11, max_subdivisions: 400 };
    let breaks = [0.0, width, 4.0 * width, PI / 2.0];
    let segs = |f: &mut dyn FnMut(f64) -> f64| -> Result<f64> {
        let mut acc = 0.0;
        for w in breaks.windows(2) {
            if w[1] > w[0] {
                acc += quad::integrate(&mut *f, w[0], w[1].min(PI / 2.0), opts)?;
            }
        }
        Ok(acc)
    };
    let mut err = None;
    let mut outer = |phi: f64| -> f64 {
        let cphi = libm::cos(phi);
        let mut inner = |psi: f64| {
            let h = d - radius * cphi - radius * libm::cos(psi);
            libm::cos(psi) / libm::pow(h, pw as f64)
        };
        match segs(&mut inner) {
            Ok(v) => cphi * v,
            Err(e) => {
                err.get_or_insert(e);
                0.0
            }
        }
    };
    let v = segs(&mut outer)?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok(pre * 4.0 * radius * radius * v / s)
}

/// PFA energy per unit length for parallel perfect-metal cylinders.
pub fn cyl_pfa_parallel(radius: f64, gap: f64, limit: ThermalLimit) -> Result<f64> {
    pfa_args(radius, gap, PI / 2.0)?;
    let t = limit.temperature()?;
    Ok(match limit {
        ThermalLimit::Quantum => -PI.powi(3) / 1920.0 * libm::sqrt(radius / gap.powi(5)),
        ThermalLimit::Classical { .. } => -specfun::zeta_real(3.0) / 16.0 * t * libm::sqrt(radius / gap.powi(3)),
    })
}

/// Zero-temperature PFA for two perfect-metal spheres with surface gap `l`.
pub fn sphere_pfa(r1: f64, r2: f64, gap: f64) -> Result<f64> {
    if !(r1 > 0.0) || !(r2 > 0.0) || !(gap > 0.0) {
        return Err(Error::Domain("need positive radii and gap"));
    }
    Ok(-PI.powi(3) / (720.0 * gap * gap) * r1 * r2 / (r1 + r2))
}
