//! Canonical phase and phase-difference statistics.
//!
//! Phase moments are Susskind-Glogower moments: <exp(i m phi)> = Tr(rho E^m)
//! for m >= 0, with the complex conjugate giving negative m. For two modes
//! the phase-difference moment convention is
//! <exp(i m Delta)> = Tr[rho E_a^m (E_b†)^m] with Delta = phi_a - phi_b,
//! and the distribution is the truncated Fourier series
//! P(Delta) = (1/2pi) sum over |p| <= p_max of exp(i p Delta) <exp(-i p Delta)>.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::hilbert::{DensityOperator, LinearOperator, ModeSpace};

/// Default grid resolution for sampled distributions.
pub const DEFAULT_GRID_SIZE: usize = 4096;

const FOURIER_RESIDUE_TOL: f64 = 1e-8;
const DENSITY_NEGATIVITY_TOL: f64 = 1e-9;

/// A sampled 2pi-periodic phase density.
///
/// `grid[k] = window_origin + k * 2pi / len`, covering one period without
/// repeating the endpoint; the periodic trapezoidal integral is then just
/// the Riemann sum.
#[derive(Debug, Clone)]
pub struct PhaseDistribution {
    window_origin: f64,
    density: Vec<f64>,
}

impl PhaseDistribution {
    pub fn new(window_origin: f64, density: Vec<f64>) -> Result<Self> {
        if density.len() < 8 {
            return Err(Error::InvalidConfig("phase grid needs at least 8 points".into()));
        }
        let dist = Self { window_origin, density };
        let min = dist.density.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < -DENSITY_NEGATIVITY_TOL {
            return Err(Error::InvalidConfig(format!(
                "phase density negative beyond tolerance: {min:.3e}"
            )));
        }
        let total = dist.integral();
        if (total - 1.0).abs() > 1e-6 {
            return Err(Error::InvalidConfig(format!(
                "phase density integrates to {total} over the window"
            )));
        }
        Ok(dist)
    }

    pub fn window_origin(&self) -> f64 {
        self.window_origin
    }

    pub fn len(&self) -> usize {
        self.density.len()
    }

    pub fn is_empty(&self) -> bool {
        self.density.is_empty()
    }

    pub fn step(&self) -> f64 {
        2.0 * PI / self.len() as f64
    }

    pub fn grid(&self) -> impl Iterator<Item = f64> + '_ {
        let h = self.step();
        (0..self.len()).map(move |k| self.window_origin + k as f64 * h)
    }

    pub fn density(&self) -> &[f64] {
        &self.density
    }

    /// Periodic trapezoidal integral over the full window.
    pub fn integral(&self) -> f64 {
        self.step() * self.density.iter().sum::<f64>()
    }

    /// Grid point with the highest density.
    pub fn peak(&self) -> f64 {
        let (k, _) = self
            .density
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (k, &v)| {
                if v > best.1 {
                    (k, v)
                } else {
                    best
                }
            });
        self.window_origin + k as f64 * self.step()
    }

    /// Second moment about `center` in the window [center - pi, center + pi).
    pub fn circular_variance(&self, center: f64) -> f64 {
        let h = self.step();
        self.grid()
            .zip(&self.density)
            .map(|(delta, &p)| {
                let d = wrap_to_pi(delta - center);
                d * d * p * h
            })
            .sum()
    }
}

/// Map an angle into [-pi, pi).
pub fn wrap_to_pi(x: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut y = (x + PI).rem_euclid(two_pi);
    if y < 0.0 {
        y += two_pi;
    }
    y - PI
}

/// E^m on a truncated mode: entries |n><n+m|. Built directly; agrees with
/// the m-fold product of E wherever both are defined.
pub fn sg_power(mode: &ModeSpace, m: usize) -> LinearOperator {
    LinearOperator::from_fn(mode.into(), move |i, j| {
        if j == i + m {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::ZERO
        }
    })
}

fn single_mode(rho: &DensityOperator) -> Result<ModeSpace> {
    let factors = rho.space().factors();
    if factors.len() != 1 {
        return Err(Error::DimensionMismatch(format!(
            "expected a single-mode state, got {} factors",
            factors.len()
        )));
    }
    Ok(ModeSpace::new(factors[0].label(), factors[0].dim() - 1))
}

fn two_modes(rho: &DensityOperator) -> Result<(ModeSpace, ModeSpace)> {
    let factors = rho.space().factors();
    if factors.len() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "expected a two-mode state, got {} factors",
            factors.len()
        )));
    }
    Ok((
        ModeSpace::new(factors[0].label(), factors[0].dim() - 1),
        ModeSpace::new(factors[1].label(), factors[1].dim() - 1),
    ))
}

/// <exp(i m phi)> = Tr(rho E^m) for a single-mode state; m = 0 gives 1.
pub fn phase_moment(rho: &DensityOperator, m: usize) -> Result<Complex64> {
    let mode = single_mode(rho)?;
    rho.expectation(&sg_power(&mode, m))
}

/// <exp(i m Delta)> = Tr[rho E_a^m (E_b^†)^m] for a two-mode state,
/// Delta = phi_a - phi_b (first factor minus second).
pub fn phase_difference_moment(rho: &DensityOperator, m: usize) -> Result<Complex64> {
    let (mode_a, mode_b) = two_modes(rho)?;
    if m == 0 {
        return Ok(rho.op().trace());
    }
    let da = mode_a.dim();
    let db = mode_b.dim();
    // K = E_a^m tensor (E_b^†)^m has one nonzero per row:
    // K[(na, nb + m), (na + m, nb)] = 1. Tr(rho K) reads the matching
    // entries of rho directly.
    let mut acc = Complex64::ZERO;
    let flat = |ia: usize, ib: usize| ia * db + ib;
    for na in 0..da.saturating_sub(m) {
        for nb in 0..db.saturating_sub(m) {
            // Tr(rho K) = sum_{i,j} rho[i,j] K[j,i] with
            // j = (na, nb + m), i = (na + m, nb).
            acc += rho.op().entry(flat(na + m, nb), flat(na, nb + m));
        }
    }
    Ok(acc)
}

/// Fourier synthesis of P(Delta) from phase-difference moments up to
/// `p_max`, sampled on `grid_size` points starting at `window_origin`.
pub fn phase_difference_distribution(
    rho: &DensityOperator,
    p_max: usize,
    grid_size: usize,
    window_origin: f64,
) -> Result<PhaseDistribution> {
    if p_max < 1 {
        return Err(Error::InvalidConfig("p_max must be at least 1".into()));
    }
    if grid_size < 8 {
        return Err(Error::InvalidConfig("grid_size must be at least 8".into()));
    }
    let moments: Vec<Complex64> = (0..=p_max)
        .map(|m| phase_difference_moment(rho, m))
        .collect::<Result<_>>()?;
    let h = 2.0 * PI / grid_size as f64;
    let mut density = Vec::with_capacity(grid_size);
    let mut worst_residue = 0.0f64;
    for k in 0..grid_size {
        let delta = window_origin + k as f64 * h;
        // sum_p e^{i p Delta} <e^{-i p Delta}>; the p and -p terms are
        // conjugates, so the sum is real up to roundoff.
        let mut acc = moments[0];
        for (m, mu) in moments.iter().enumerate().skip(1) {
            let e = Complex64::new(0.0, m as f64 * delta).exp();
            acc += e * mu.conj() + e.conj() * mu;
        }
        worst_residue = worst_residue.max(acc.im.abs());
        density.push(acc.re / (2.0 * PI));
    }
    if worst_residue > FOURIER_RESIDUE_TOL {
        return Err(Error::FourierResidue { residue: worst_residue });
    }
    PhaseDistribution::new(window_origin, density)
}

/// Convenience: distribution windowed around its own peak. Synthesizes
/// once to locate the peak, then re-centers the window on it.
pub fn peak_centered_distribution(
    rho: &DensityOperator,
    p_max: usize,
    grid_size: usize,
) -> Result<PhaseDistribution> {
    let scout = phase_difference_distribution(rho, p_max, grid_size, -PI)?;
    let peak = scout.peak();
    phase_difference_distribution(rho, p_max, grid_size, peak - PI)
}
