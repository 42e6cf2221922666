//! Electromagnetic Casimir force on a perfectly conducting piston.
//!
//! The piston is a cylinder of arbitrary cross section closed by two plates
//! at distance `L`. The force only depends on the 2D Laplacian spectrum of
//! the section: Dirichlet eigenvalues (TM) and nonzero Neumann eigenvalues
//! (TE). Attraction is negative.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::regulate::{self, ThermalState};
use crate::specfun;
use crate::{Error, Result};

/// Default number of modes (counted with degeneracy) for generated spectra.
pub const DEFAULT_MODES: usize = 1000;

/// Eigenvalues λ of one boundary-condition family with their degeneracies.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumEV {
    entries: Vec<(f64, u32)>,
}

impl SpectrumEV {
    /// Entries must be positive, strictly ascending and have g ≥ 1.
    pub fn new(entries: Vec<(f64, u32)>) -> Result<Self> {
        for (i, &(l, g)) in entries.iter().enumerate() {
            if !(l > 0.0) || !l.is_finite() {
                return Err(Error::Domain("eigenvalues must be positive and finite"));
            }
            if g == 0 {
                return Err(Error::Domain("degeneracy must be at least 1"));
            }
            if i > 0 && !(l > entries[i - 1].0) {
                return Err(Error::Domain("eigenvalues must be strictly ascending"));
            }
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[(f64, u32)] {
        &self.entries
    }

    /// Number of modes retained, counting degeneracy.
    pub fn truncation(&self) -> usize {
        self.entries.iter().map(|e| e.1 as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Piston cross section.
#[derive(Debug, Clone, PartialEq)]
pub enum CrossSection {
    /// Disc of radius `r`; its spectrum is generated on demand with
    /// [`DEFAULT_MODES`] modes.
    Circular { r: f64 },
    Explicit { dirichlet: SpectrumEV, neumann: SpectrumEV, area: f64, perimeter: f64, chi: f64 },
}

impl CrossSection {
    pub fn circular(r: f64) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::Domain("radius must be positive"));
        }
        Ok(Self::Circular { r })
    }

    pub fn explicit(dirichlet: SpectrumEV, neumann: SpectrumEV, area: f64, perimeter: f64, chi: f64) -> Result<Self> {
        if !(area > 0.0) || !(perimeter > 0.0) || !chi.is_finite() {
            return Err(Error::Domain("area and perimeter must be positive"));
        }
        if dirichlet.is_empty() && neumann.is_empty() {
            return Err(Error::Domain("spectrum is empty"));
        }
        Ok(Self::Explicit { dirichlet, neumann, area, perimeter, chi })
    }

    /// The explicit form, generating the disc spectrum if needed.
    pub fn to_explicit(&self) -> Result<Self> {
        match self {
            Self::Circular { r } => spectrum_circular(*r, DEFAULT_MODES),
            e => Ok(e.clone()),
        }
    }

    pub fn area(&self) -> f64 {
        match self {
            Self::Circular { r } => PI * r * r,
            Self::Explicit { area, .. } => *area,
        }
    }

    pub fn perimeter(&self) -> f64 {
        match self {
            Self::Circular { r } => 2.0 * PI * r,
            Self::Explicit { perimeter, .. } => *perimeter,
        }
    }

    pub fn chi(&self) -> f64 {
        match self {
            Self::Circular { .. } => DISC_CHI,
            Self::Explicit { chi, .. } => *chi,
        }
    }
}

/// Geometric constant χ of a smooth disc.
pub const DISC_CHI: f64 = 1.0 / 6.0;

/// χ = (1/24) Σ_i (π/α_i − α_i/π) + (1/12π) ∮κ dγ for a section with vertex
/// angles `alpha` and total turning of the smooth arcs `curvature_integral`.
///
/// The curvature term is normalized so that a disc (∮κ = 2π) gives 1/6.
pub fn chi_from_geometry(alpha: &[f64], curvature_integral: f64) -> Result<f64> {
    let mut c = curvature_integral / (12.0 * PI);
    for &a in alpha {
        if !(a > 0.0 && a < 2.0 * PI) {
            return Err(Error::Domain("vertex angle must lie in (0, 2π)"));
        }
        c += (PI / a - a / PI) / 24.0;
    }
    Ok(c)
}

/// Disc spectrum with the lowest `count` modes (counting degeneracy) of the
/// combined Dirichlet and Neumann families.
///
/// Dirichlet λ = j_{ν,k}/R, Neumann λ = j′_{ν,k}/R; g = 2 for ν ≥ 1 and 1
/// for ν = 0. The last kept level may be split to hit `count` exactly.
pub fn spectrum_circular(r: f64, count: usize) -> Result<CrossSection> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain("radius must be positive"));
    }
    if count == 0 {
        return Err(Error::Domain("mode count must be positive"));
    }
    // Weyl counting for both families on the unit disc is ≈ x²/2.
    let mut xmax = libm::sqrt(2.0 * count as f64) + 10.0;
    loop {
        let mut all: Vec<(f64, u32, bool)> = Vec::new();
        for nu in 0u32.. {
            if nu as f64 > xmax {
                break;
            }
            let g = if nu == 0 { 1 } else { 2 };
            all.extend(specfun::bessel_j_zeros(nu, xmax).into_iter().map(|x| (x, g, true)));
            all.extend(specfun::bessel_jprime_zeros(nu, xmax).into_iter().map(|x| (x, g, false)));
        }
        let total: usize = all.iter().map(|e| e.1 as usize).sum();
        if total < count {
            xmax *= 1.3;
            continue;
        }
        all.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut kept = 0usize;
        let (mut d, mut n) = (Vec::new(), Vec::new());
        for (x, g, is_d) in all {
            if kept >= count {
                break;
            }
            let g = g.min((count - kept) as u32);
            kept += g as usize;
            if is_d { d.push((x / r, g)) } else { n.push((x / r, g)) }
        }
        let dirichlet = SpectrumEV::new(d)?;
        let neumann = SpectrumEV::new(n)?;
        return CrossSection::explicit(dirichlet, neumann, PI * r * r, 2.0 * PI * r, DISC_CHI);
    }
}

/// Both families merged into one ascending list.
fn merged(cs: &CrossSection) -> Result<(Vec<(f64, u32)>, f64, f64)> {
    match cs.to_explicit()? {
        CrossSection::Explicit { dirichlet, neumann, area, chi, .. } => {
            let mut v: Vec<(f64, u32)> = dirichlet.entries().to_vec();
            v.extend_from_slice(neumann.entries());
            v.sort_by(|a, b| a.0.total_cmp(&b.0));
            Ok((v, area, chi))
        }
        CrossSection::Circular { .. } => unreachable!("to_explicit returns Explicit"),
    }
}

fn check_gap(l: f64) -> Result<()> {
    if !(l > 0.0) || !l.is_finite() {
        return Err(Error::Domain("plate distance must be positive"));
    }
    Ok(())
}

/// K₀(x) + K₂(x).
fn k0_plus_k2(x: f64) -> f64 {
    if x > 740.0 {
        return 0.0;
    }
    let (k0, k1) = specfun::bessel_k_pair(0.0, x);
    2.0 * k0 + 2.0 * k1 / x
}

/// Zero-temperature force of one mode: −(λ²/2π) Σ_n [K₀ + K₂](2nLλ).
pub fn mode_force_t0(lambda: f64, l: f64) -> f64 {
    let x = 2.0 * l * lambda;
    let mut s = 0.0;
    for n in 1.. {
        let t = k0_plus_k2(n as f64 * x);
        s += t;
        if t <= 1e-17 * s {
            break;
        }
    }
    -lambda * lambda * s / (2.0 * PI)
}

/// Zero-temperature force from the retained modes only.
pub fn piston_force_t0_truncated(cs: &CrossSection, l: f64) -> Result<f64> {
    check_gap(l)?;
    let (modes, _, _) = merged(cs)?;
    Ok(modes.iter().map(|&(lam, g)| g as f64 * mode_force_t0(lam, l)).sum())
}

/// Contribution of modes above the truncation, from the Weyl density
/// ρ(k) = A k/π of both families combined.
///
/// The cut λ_c matches the Weyl counting A λ_c²/2π + 2χ − 1 to the number of
/// retained modes. Per reflection n, with c = 2nLλ_c,
/// ∫_{λ_c}^∞ k³[K₀ + K₂](2nLk) dk = (2c³K₁(c) + 6c²K₂(c))/(2nL)⁴.
pub fn weyl_tail_t0(area: f64, chi: f64, modes: usize, l: f64) -> Result<f64> {
    check_gap(l)?;
    let n_eff = modes as f64 - 2.0 * chi + 1.0;
    if !(n_eff > 0.0) {
        return Err(Error::Domain("too few modes for the Weyl tail"));
    }
    let lc = libm::sqrt(2.0 * PI * n_eff / area);
    let mut s = 0.0;
    for n in 1.. {
        let b = 2.0 * n as f64 * l;
        let c = b * lc;
        let t = if c > 740.0 {
            0.0
        } else {
            let (k1, k2) = specfun::bessel_k_pair(1.0, c);
            (2.0 * c * c * c * k1 + 6.0 * c * c * k2) / (b * b * b * b)
        };
        s += t;
        if t <= 1e-17 * s {
            break;
        }
    }
    Ok(-area * s / (2.0 * PI * PI))
}

/// Zero-temperature force: the Bessel sum over the retained modes plus the
/// Weyl tail for the modes beyond the truncation.
pub fn piston_force_t0(cs: &CrossSection, l: f64) -> Result<f64> {
    check_gap(l)?;
    let (modes, area, chi) = merged(cs)?;
    let count: usize = modes.iter().map(|e| e.1 as usize).sum();
    let head: f64 = modes.iter().map(|&(lam, g)| g as f64 * mode_force_t0(lam, l)).sum();
    Ok(head + weyl_tail_t0(area, chi, count, l)?)
}

/// Polarization selector for the short-distance force.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarization {
    Te,
    Tm,
    Total,
}

/// Short-distance (L ≪ section size) zero-temperature force.
///
/// TE excludes the Neumann zero mode, which is where the −1 in its χ term
/// comes from. The perimeter terms cancel in the total.
pub fn piston_force_near(area: f64, perimeter: f64, chi: f64, l: f64, pol: Polarization) -> Result<f64> {
    check_gap(l)?;
    let a = PI * PI * area / (480.0 * l * l * l * l);
    let p = specfun::zeta_real(3.0) * perimeter / (32.0 * PI * l * l * l);
    let c = PI / (24.0 * l * l);
    Ok(match pol {
        Polarization::Te => -(a + p + c * (chi - 1.0)),
        Polarization::Tm => -(a - p + c * chi),
        Polarization::Total => -(2.0 * a + c * (2.0 * chi - 1.0)),
    })
}

/// Lowest eigenvalue and its degeneracy across both families.
pub fn lowest_mode(cs: &CrossSection) -> Result<(f64, u32)> {
    let (modes, _, _) = merged(cs)?;
    let (l1, _) = modes[0];
    let g: u32 = modes.iter().take_while(|e| e.0 <= l1 * (1.0 + 1e-12)).map(|e| e.1).sum();
    Ok((l1, g))
}

/// Long-distance (Lλ₁ ≫ 1) zero-temperature force from the lowest level.
pub fn piston_force_far(lambda1: f64, g1: u32, l: f64) -> Result<f64> {
    check_gap(l)?;
    Ok(-(g1 as f64) * lambda1 * libm::sqrt(lambda1) * libm::exp(-2.0 * l * lambda1) / (2.0 * libm::sqrt(PI * l)))
}

/// √(κ² + λ²)/(e^{2L√(κ²+λ²)} − 1).
fn thermal_integrand(kappa: f64, lambda: f64, l: f64) -> f64 {
    let w = libm::hypot(kappa, lambda);
    let x = 2.0 * l * w;
    if x > 709.0 {
        return 0.0;
    }
    w / libm::expm1(x)
}

/// Finite-temperature force −T Σ_p g_p Σ_{m∈ℤ} √(m²Λ² + λ_p²)/(e^{2L√·} − 1),
/// Λ = 2πT, over the retained modes.
///
/// At T = 0 the Matsubara sum becomes an integral over κ. The sum is
/// rejected with [`Error::Truncation`] when the last retained level
/// contributes more than `rel_tol` of the total.
pub fn piston_force_with(cs: &CrossSection, l: f64, state: &ThermalState, rel_tol: f64) -> Result<f64> {
    check_gap(l)?;
    let (modes, _, _) = merged(cs)?;
    let st = state.with_kappa_scale(0.5 / l);
    let mut total = 0.0;
    let mut last = 0.0;
    for &(lam, g) in &modes {
        let m = regulate::matsubara_sum(|k| thermal_integrand(k, lam, l), &st)?;
        last = -2.0 * g as f64 * m;
        total += last;
    }
    if last.abs() > rel_tol * total.abs() {
        return Err(Error::Truncation { last, total });
    }
    Ok(total)
}

/// Default bound on the last retained level's share of the force.
pub const DEFAULT_TRUNCATION_TOL: f64 = 1e-4;

/// [`piston_force_with`] with [`DEFAULT_TRUNCATION_TOL`].
pub fn piston_force(cs: &CrossSection, l: f64, state: &ThermalState) -> Result<f64> {
    piston_force_with(cs, l, state, DEFAULT_TRUNCATION_TOL)
}

/// High-temperature force −T Σ_p g_p λ_p/(e^{2Lλ_p} − 1) (only m = 0).
pub fn piston_force_classical(cs: &CrossSection, l: f64, temperature: f64) -> Result<f64> {
    check_gap(l)?;
    let (modes, _, _) = merged(cs)?;
    Ok(-temperature * modes.iter().map(|&(lam, g)| g as f64 * thermal_integrand(0.0, lam, l)).sum::<f64>())
}

/// Short-distance classical force −T[ζ(3)A/(4πL³) + (2χ − 1)/(2L)].
///
/// This is the branch where the Weyl density is integrated before the
/// reflection sum; the other order gives a different area coefficient.
pub fn piston_force_classical_near(area: f64, chi: f64, l: f64, temperature: f64) -> Result<f64> {
    check_gap(l)?;
    Ok(-temperature * (specfun::zeta_real(3.0) * area / (4.0 * PI * l * l * l) + (2.0 * chi - 1.0) / (2.0 * l)))
}

/// Long-distance classical force −T g₁λ₁e^{−2Lλ₁}.
pub fn piston_force_classical_far(lambda1: f64, g1: u32, l: f64, temperature: f64) -> Result<f64> {
    check_gap(l)?;
    Ok(-temperature * g1 as f64 * lambda1 * libm::exp(-2.0 * l * lambda1))
}

/// Variance of the piston force, σ² = 2F².
pub fn piston_variance(cs: &CrossSection, l: f64, state: &ThermalState) -> Result<f64> {
    let f = piston_force(cs, l, state)?;
    Ok(2.0 * f * f)
}

/// Mode weight (1/√μ)[1 + 2/(e^{√μ/T} − 1)] = coth(√μ/2T)/√μ; 1/√μ at T = 0.
pub fn fluctuation_weight(mu: f64, temperature: f64) -> Result<f64> {
    if !(mu > 0.0) {
        return Err(Error::Domain("mode eigenvalue must be positive"));
    }
    let w = libm::sqrt(mu);
    if temperature == 0.0 {
        return Ok(1.0 / w);
    }
    if !(temperature > 0.0) {
        return Err(Error::Domain("temperature must be ≥ 0"));
    }
    let x = w / temperature;
    Ok((1.0 + 2.0 / libm::expm1(x)) / w)
}

/// Mean force Σ_n (w_n/2) S_nn from the mode weights and the diagonal of
/// the stress coupling matrix `s` (row-major, n × n).
pub fn force_double_mode_mean(mu: &[f64], s: &[f64], temperature: f64) -> Result<f64> {
    let n = mu.len();
    if s.len() != n * n {
        return Err(Error::Domain("coupling matrix must be n × n"));
    }
    let mut acc = 0.0;
    for i in 0..n {
        acc += 0.5 * fluctuation_weight(mu[i], temperature)? * s[i * n + i];
    }
    Ok(acc)
}

/// General variance σ² = ½ Σ_{n,m} w_n w_m S_nm S_mn, where S_nm is the
/// surface integral of the stress bilinear form on modes n and m.
pub fn variance_double_mode_sum(mu: &[f64], s: &[f64], temperature: f64) -> Result<f64> {
    let n = mu.len();
    if s.len() != n * n {
        return Err(Error::Domain("coupling matrix must be n × n"));
    }
    let w = mu.iter().map(|&m| fluctuation_weight(m, temperature)).collect::<Result<Vec<_>>>()?;
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            acc += w[i] * w[j] * s[i * n + j] * s[j * n + i];
        }
    }
    Ok(0.5 * acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disc_lowest_levels() {
        let cs = spectrum_circular(1.0, 20).unwrap();
        let (l1, g1) = lowest_mode(&cs).unwrap();
        assert!((l1 - 1.841183781).abs() < 1e-8);
        assert_eq!(g1, 2);
        if let CrossSection::Explicit { dirichlet, neumann, .. } = cs {
            assert!((dirichlet.entries()[0].0 - 2.404825558).abs() < 1e-8);
            assert_eq!(dirichlet.entries()[0].1, 1);
            assert_eq!(dirichlet.truncation() + neumann.truncation(), 20);
        }
    }

    #[test]
    fn spectrum_validation() {
        assert!(SpectrumEV::new(alloc::vec![(1.0, 1), (1.0, 1)]).is_err());
        assert!(SpectrumEV::new(alloc::vec![(0.0, 1)]).is_err());
        assert!(SpectrumEV::new(alloc::vec![(1.0, 0)]).is_err());
        assert!(SpectrumEV::new(alloc::vec![(1.0, 1), (2.0, 3)]).is_ok());
    }

    #[test]
    fn chi_of_square_and_disc() {
        assert!((chi_from_geometry(&[], 2.0 * PI).unwrap() - DISC_CHI).abs() < 1e-15);
        let sq = chi_from_geometry(&[PI / 2.0; 4], 0.0).unwrap();
        assert!((sq - 0.25).abs() < 1e-15);
    }

    #[test]
    fn near_perimeter_cancels() {
        let te = piston_force_near(2.0, 7.0, 0.3, 0.1, Polarization::Te).unwrap();
        let tm = piston_force_near(2.0, 7.0, 0.3, 0.1, Polarization::Tm).unwrap();
        let tot = piston_force_near(2.0, 7.0, 0.3, 0.1, Polarization::Total).unwrap();
        assert!(((te + tm) - tot).abs() < 1e-12 * tot.abs());
    }
}
