//! Stochastic oracle: Euler–Maruyama integration of Langevin mode dynamics.
//!
//! Each mode obeys dφ_n = −μ_n φ_n dt + dη_n with complex noise of
//! covariance Γh_nm. Random numbers come from ChaCha8 streams keyed by
//! (seed, realization, mode), so results are reproducible bit for bit and
//! independent of evaluation order.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::media::{self, CausalTag, TemporalKernel, TemporalPolynomial};
use crate::{Error, Result};

/// Largest allowed dt·(rate) for the explicit scheme.
pub const STABILITY_MARGIN: f64 = 0.1;

/// Minimum number of recorded samples per realization.
pub const MIN_SAMPLES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub dt: f64,
    pub burn_in: usize,
    pub samples: usize,
    /// Steps between recorded samples.
    pub stride: usize,
    pub seed: u64,
    pub realizations: usize,
    /// Batches per realization for the batch-means error bars.
    pub batches: usize,
}

impl SimConfig {
    pub fn new(dt: f64, burn_in: usize, samples: usize, seed: u64, realizations: usize) -> Result<Self> {
        let c = Self { dt, burn_in, samples, stride: 1, seed, realizations, batches: 20 };
        c.validate()?;
        Ok(c)
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.stride = stride;
        self
    }

    pub fn with_batches(mut self, batches: usize) -> Self {
        self.batches = batches;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::Domain("time step must be positive"));
        }
        if self.samples < MIN_SAMPLES {
            return Err(Error::Domain("at least 1000 samples are required"));
        }
        if self.realizations == 0 || self.stride == 0 {
            return Err(Error::Domain("realizations and stride must be positive"));
        }
        if self.batches < 2 || self.batches > self.samples {
            return Err(Error::Domain("batch count must lie in [2, samples]"));
        }
        Ok(())
    }

    fn check_rate(&self, rate: f64) -> Result<()> {
        if self.dt * rate >= STABILITY_MARGIN {
            return Err(Error::Domain("dt·max Re μ violates the stability margin"));
        }
        Ok(())
    }
}

/// Empirical equal-time correlators ⟨φ_n φ_m*⟩ with batch-means error bars.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeCorrelators {
    pub n: usize,
    pub mean: Vec<Complex64>,
    pub stderr_re: Vec<f64>,
    pub stderr_im: Vec<f64>,
}

impl ModeCorrelators {
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.mean[i * self.n + j]
    }

    /// Combined error bar √(σ_re² + σ_im²) of entry (i, j).
    pub fn stderr(&self, i: usize, j: usize) -> f64 {
        let k = i * self.n + j;
        libm::hypot(self.stderr_re[k], self.stderr_im[k])
    }

    /// (n, m, re, im, stderr) rows in row-major order.
    pub fn rows(&self) -> Vec<(usize, usize, f64, f64, f64)> {
        let mut out = Vec::with_capacity(self.n * self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let v = self.get(i, j);
                out.push((i, j, v.re, v.im, self.stderr(i, j)));
            }
        }
        out
    }
}

/// Analytic steady correlator Γh_nm[c̃(μ_n) + c̃(μ_m*)]/(μ_n + μ_m*).
pub fn predicted_correlators(mu: &[Complex64], gamma: f64, h: Option<&[Complex64]>, kernel: TemporalKernel) -> Result<Vec<Complex64>> {
    let n = mu.len();
    let h = noise_matrix(n, h)?;
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            let mj = mu[j].conj();
            out[i * n + j] = gamma * h[i * n + j] * (kernel.laplace(mu[i]) + kernel.laplace(mj)) / (mu[i] + mj);
        }
    }
    Ok(out)
}

fn noise_matrix(n: usize, h: Option<&[Complex64]>) -> Result<Vec<Complex64>> {
    match h {
        None => {
            let mut m = vec![Complex64::new(0.0, 0.0); n * n];
            for i in 0..n {
                m[i * n + i] = Complex64::new(1.0, 0.0);
            }
            Ok(m)
        }
        Some(h) if h.len() == n * n => Ok(h.to_vec()),
        Some(_) => Err(Error::Domain("noise matrix must be n × n")),
    }
}

/// Lower factor L with L L† = h for Hermitian positive semidefinite h.
fn cholesky(n: usize, h: &[Complex64]) -> Result<Vec<Complex64>> {
    let scale = (0..n).map(|i| h[i * n + i].re.abs()).fold(0.0, f64::max);
    let tol = 1e-12 * scale.max(f64::MIN_POSITIVE);
    let mut l = vec![Complex64::new(0.0, 0.0); n * n];
    for j in 0..n {
        for i in 0..n {
            if (h[i * n + j] - h[j * n + i].conj()).norm() > 1e-12 * scale.max(1.0) {
                return Err(Error::Domain("noise matrix must be Hermitian"));
            }
        }
        let mut d = h[j * n + j].re;
        for k in 0..j {
            d -= l[j * n + k].norm_sqr();
        }
        if d < -tol {
            return Err(Error::Domain("noise matrix must be positive semidefinite"));
        }
        if d <= tol {
            for i in j + 1..n {
                let mut s = h[i * n + j];
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k].conj();
                }
                if s.norm() > 1e-9 * scale.max(1.0) {
                    return Err(Error::Domain("noise matrix must be positive semidefinite"));
                }
            }
            continue;
        }
        let djj = libm::sqrt(d);
        l[j * n + j] = Complex64::new(djj, 0.0);
        for i in j + 1..n {
            let mut s = h[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k].conj();
            }
            l[i * n + j] = s / djj;
        }
    }
    Ok(l)
}

/// One ChaCha8 stream per (realization, mode).
fn streams(seed: u64, realization: usize, n: usize) -> Vec<ChaCha8Rng> {
    (0..n)
        .map(|m| {
            let mut r = ChaCha8Rng::seed_from_u64(seed);
            r.set_stream(((realization as u64) << 32) | m as u64);
            r
        })
        .collect()
}

/// Complex standard normal with E|z|² = 1.
fn cnormal(r: &mut ChaCha8Rng) -> Complex64 {
    let x: f64 = r.sample(StandardNormal);
    let y: f64 = r.sample(StandardNormal);
    Complex64::new(x, y) * core::f64::consts::FRAC_1_SQRT_2
}

fn correlated(l: &[Complex64], rngs: &mut [ChaCha8Rng], z: &mut [Complex64], out: &mut [Complex64]) {
    let n = z.len();
    for (zi, r) in z.iter_mut().zip(rngs.iter_mut()) {
        *zi = cnormal(r);
    }
    for i in 0..n {
        let mut s = Complex64::new(0.0, 0.0);
        for k in 0..=i {
            s += l[i * n + k] * z[k];
        }
        out[i] = s;
    }
}

/// Running batch statistics for an n×n complex correlator.
struct BatchStats {
    n: usize,
    per_batch: usize,
    count: usize,
    acc: Vec<Complex64>,
    sum: Vec<Complex64>,
    sum_sq_re: Vec<f64>,
    sum_sq_im: Vec<f64>,
    batches: usize,
}

impl BatchStats {
    fn new(n: usize, per_batch: usize) -> Self {
        let z = vec![Complex64::new(0.0, 0.0); n * n];
        Self { n, per_batch, count: 0, acc: z.clone(), sum: z, sum_sq_re: vec![0.0; n * n], sum_sq_im: vec![0.0; n * n], batches: 0 }
    }

    fn push(&mut self, phi: &[Complex64]) {
        for i in 0..self.n {
            for j in 0..self.n {
                self.acc[i * self.n + j] += phi[i] * phi[j].conj();
            }
        }
        self.count += 1;
        if self.count == self.per_batch {
            let inv = 1.0 / self.per_batch as f64;
            for k in 0..self.acc.len() {
                let b = self.acc[k] * inv;
                self.sum[k] += b;
                self.sum_sq_re[k] += b.re * b.re;
                self.sum_sq_im[k] += b.im * b.im;
                self.acc[k] = Complex64::new(0.0, 0.0);
            }
            self.count = 0;
            self.batches += 1;
        }
    }

    fn finish(self) -> ModeCorrelators {
        let nb = self.batches as f64;
        let mean: Vec<Complex64> = self.sum.iter().map(|s| s / nb).collect();
        let se = |sq: f64, m: f64| libm::sqrt(((sq / nb - m * m) * nb / (nb - 1.0)).max(0.0) / nb);
        let stderr_re = (0..mean.len()).map(|k| se(self.sum_sq_re[k], mean[k].re)).collect();
        let stderr_im = (0..mean.len()).map(|k| se(self.sum_sq_im[k], mean[k].im)).collect();
        ModeCorrelators { n: self.n, mean, stderr_re, stderr_im }
    }
}

const BLOWUP: f64 = 1e150;

fn check_finite(phi: &[Complex64]) -> Result<()> {
    if phi.iter().any(|p| !(p.norm_sqr() < BLOWUP)) {
        return Err(Error::Unstable("mode amplitude diverged"));
    }
    Ok(())
}

/// Simulated steady correlators ⟨φ_n φ_m*⟩ for modes with eigenvalues `mu`.
///
/// `h` is the Hermitian noise projection (identity when `None`). White noise
/// has ⟨η_n(t)η_m*(t′)⟩ = Γh_nm δ(t − t′). Exponential noise is generated by
/// an auxiliary Ornstein–Uhlenbeck process with correlation
/// Γh_nm(1 + a/2)e^{−a|t−t′|}. Quenched noise is not simulated.
pub fn simulate_modes(mu: &[Complex64], gamma: f64, h: Option<&[Complex64]>, kernel: TemporalKernel, cfg: &SimConfig) -> Result<ModeCorrelators> {
    cfg.validate()?;
    let n = mu.len();
    if n == 0 {
        return Err(Error::Domain("no modes"));
    }
    if mu.iter().any(|m| !(m.re > 0.0)) {
        return Err(Error::Domain("every eigenvalue needs a positive real part"));
    }
    if !(gamma >= 0.0) {
        return Err(Error::Domain("noise intensity must be non-negative"));
    }
    let rate = mu.iter().map(|m| m.re).fold(0.0, f64::max);
    cfg.check_rate(rate)?;
    let a = match kernel {
        TemporalKernel::White => None,
        TemporalKernel::Exponential { a } => {
            if !(a > 0.0) {
                return Err(Error::Domain("noise correlation rate must be positive"));
            }
            cfg.check_rate(a)?;
            Some(a)
        }
        TemporalKernel::Quenched => return Err(Error::Unsupported("quenched noise is not simulated")),
    };
    let l = cholesky(n, &noise_matrix(n, h)?)?;
    let dt = cfg.dt;
    let per_batch = cfg.samples / cfg.batches;
    let mut stats = BatchStats::new(n, per_batch);
    let mut z = vec![Complex64::new(0.0, 0.0); n];
    let mut eta = vec![Complex64::new(0.0, 0.0); n];
    for rz in 0..cfg.realizations {
        let mut rngs = streams(cfg.seed, rz, n);
        let mut phi = vec![Complex64::new(0.0, 0.0); n];
        let mut zeta = vec![Complex64::new(0.0, 0.0); n];
        let (amp, zamp) = match a {
            None => (libm::sqrt(gamma * dt), 0.0),
            Some(a) => {
                correlated(&l, &mut rngs, &mut z, &mut eta);
                let s0 = libm::sqrt(gamma * (1.0 + 0.5 * a));
                for (zi, e) in zeta.iter_mut().zip(&eta) {
                    *zi = e * s0;
                }
                (0.0, libm::sqrt((2.0 * a + a * a) * gamma * dt))
            }
        };
        let total = cfg.burn_in + per_batch * cfg.batches * cfg.stride;
        for step in 1..=total {
            correlated(&l, &mut rngs, &mut z, &mut eta);
            match a {
                None => {
                    for i in 0..n {
                        let p = phi[i];
                        phi[i] = p - mu[i] * p * dt + eta[i] * amp;
                    }
                }
                Some(a) => {
                    for i in 0..n {
                        let (p, q) = (phi[i], zeta[i]);
                        phi[i] = p + (q - mu[i] * p) * dt;
                        zeta[i] = q - a * q * dt + eta[i] * zamp;
                    }
                }
            }
            if step > cfg.burn_in && (step - cfg.burn_in) % cfg.stride == 0 {
                check_finite(&phi)?;
                stats.push(&phi);
            }
        }
    }
    Ok(stats.finish())
}

/// Steady variance of a mode driven through a higher-order temporal kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelVariance {
    pub variance: f64,
    pub stderr: f64,
    /// Pole–residue prediction for the same mode.
    pub predicted: f64,
}

/// Simulates F(∂_t)φ = −μφ + ξ in its causal pole representation.
///
/// The Green function is Σ R_m e^{−ω_m t} over the forward poles, so
/// φ = Σ R_m ψ_m with dψ_m = −ω_m ψ_m dt + dW driven by one shared white
/// noise of intensity Γ. Kernels with undamped (marginal) poles have no
/// stationary simulation and are rejected.
pub fn simulate_kernel_mode(op: &TemporalPolynomial, mu: f64, gamma: f64, cfg: &SimConfig) -> Result<KernelVariance> {
    cfg.validate()?;
    if !(mu > 0.0) || !(gamma >= 0.0) {
        return Err(Error::Domain("need μ > 0 and Γ ≥ 0"));
    }
    let poles = media::greens_kernel_decomposition(op, Complex64::new(mu, 0.0))?;
    if poles.iter().any(|p| p.tag == CausalTag::Marginal) {
        return Err(Error::Unsupported("kernel has undamped poles"));
    }
    let fwd: Vec<_> = poles.iter().filter(|p| p.tag == CausalTag::Forward).copied().collect();
    if fwd.is_empty() {
        return Err(Error::Domain("kernel has no causal poles"));
    }
    let rate = fwd.iter().map(|p| p.omega.norm()).fold(0.0, f64::max);
    cfg.check_rate(rate)?;
    let predicted = media::steady_correlator(&poles, gamma);
    let dt = cfg.dt;
    let amp = libm::sqrt(gamma * dt);
    let per_batch = cfg.samples / cfg.batches;
    let mut stats = BatchStats::new(1, per_batch);
    for rz in 0..cfg.realizations {
        let mut rng = streams(cfg.seed, rz, 1).remove(0);
        let mut psi = vec![Complex64::new(0.0, 0.0); fwd.len()];
        let total = cfg.burn_in + per_batch * cfg.batches * cfg.stride;
        for step in 1..=total {
            let xi = cnormal(&mut rng) * amp;
            for (s, p) in psi.iter_mut().zip(&fwd) {
                *s = *s - p.omega * *s * dt + xi;
            }
            if step > cfg.burn_in && (step - cfg.burn_in) % cfg.stride == 0 {
                let phi: Complex64 = psi.iter().zip(&fwd).map(|(s, p)| s * p.residue).sum();
                check_finite(&[phi])?;
                stats.push(&[phi]);
            }
        }
    }
    let c = stats.finish();
    Ok(KernelVariance { variance: c.mean[0].re, stderr: c.stderr_re[0], predicted })
}

/// Wave-type kernel (∂_t/c₂)² φ = −μφ + ξ; the prediction is Γc₂/(8μ^{3/2}).
pub fn simulate_second_order(mu: f64, gamma: f64, c2: f64, cfg: &SimConfig) -> Result<KernelVariance> {
    let op = TemporalPolynomial::power(2, c2)?;
    simulate_kernel_mode(&op, mu, gamma, cfg)
}

/// Result of the one-dimensional reaction–diffusion stress oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RdStressEstimate {
    pub stress_gap: f64,
    pub stress_reference: f64,
    /// Simulated T(L) − T(L′).
    pub difference: f64,
    pub stderr: f64,
    /// Truncated analytic mode sums for the same modes.
    pub analytic_difference: f64,
}

/// Reference gap L′ = `REFERENCE_FACTOR`·L. An odd factor makes the matched
/// cutoff (N′ + ½)π/L′ = (N + ½)π/L land on an integer N′.
pub const REFERENCE_FACTOR: usize = 5;

fn rd_modes(d: f64, k0: f64, l: f64, count: usize) -> Vec<(f64, f64)> {
    (0..count)
        .map(|n| {
            let k = n as f64 * core::f64::consts::PI / l;
            let w = if n == 0 { 1.0 } else { 2.0 };
            (d * (k * k + k0 * k0), w / (2.0 * l))
        })
        .collect()
}

/// Truncated 1D stress Σ_{n<N} 𝕋_nn Γ/(2μ_n), 𝕋_nn = |f_n(0)|²/2 with
/// Neumann modes on [0, L].
pub fn rd_truncated_stress(k0: f64, d: f64, gamma: f64, l: f64, modes: usize) -> f64 {
    rd_modes(d, k0, l, modes).iter().map(|&(mu, t)| t * gamma / (2.0 * mu)).sum()
}

/// Mode-space estimate of the 1D reaction–diffusion plate stress, gap L with
/// `modes` modes against gap 5L with the matched cutoff.
///
/// Modes are independent, so each one is integrated with its own step
/// dt_n = cfg.dt/μ_n (cfg.dt is then the dimensionless ratio dt·μ) and
/// records one sample every `stride` steps.
pub fn estimate_rd_stress(k0: f64, d: f64, gamma: f64, l: f64, modes: usize, cfg: &SimConfig) -> Result<RdStressEstimate> {
    cfg.validate()?;
    if !(k0 > 0.0) || !(d > 0.0) || !(l > 0.0) || modes == 0 {
        return Err(Error::Domain("need k₀, D, L > 0 and at least one mode"));
    }
    cfg.check_rate(1.0)?;
    let modes_ref = REFERENCE_FACTOR * modes + (REFERENCE_FACTOR - 1) / 2;
    let run = |set: Vec<(f64, f64)>, offset: u64| -> Result<(f64, f64)> {
        let (mut s, mut v) = (0.0, 0.0);
        for (i, (mu, t)) in set.into_iter().enumerate() {
            let mut c = *cfg;
            c.dt = cfg.dt / mu;
            c.seed = cfg.seed ^ (offset.wrapping_add(i as u64)).wrapping_mul(0x9E37_79B9_7F4A_7C15);
            let r = simulate_modes(&[Complex64::new(mu, 0.0)], gamma, None, TemporalKernel::White, &c)?;
            s += t * r.mean[0].re;
            v += t * t * r.stderr_re[0] * r.stderr_re[0];
        }
        Ok((s, v))
    };
    let (sg, vg) = run(rd_modes(d, k0, l, modes), 0)?;
    let lr = REFERENCE_FACTOR as f64 * l;
    let (sr, vr) = run(rd_modes(d, k0, lr, modes_ref), 1 << 40)?;
    let analytic = rd_truncated_stress(k0, d, gamma, l, modes) - rd_truncated_stress(k0, d, gamma, lr, modes_ref);
    Ok(RdStressEstimate {
        stress_gap: sg,
        stress_reference: sr,
        difference: sg - sr,
        stderr: libm::sqrt(vg + vr),
        analytic_difference: analytic,
    })
}
