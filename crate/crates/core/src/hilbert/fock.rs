//! Standard single-mode operators and states on a truncated Fock space.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::operator::LinearOperator;
use crate::hilbert::space::{CompositeSpace, ModeSpace};
use crate::hilbert::state::StateVector;

/// Tail mass a coherent state may leave above the truncation.
pub const COHERENT_TAIL_TOL: f64 = 1e-12;

/// Annihilation operator: <n-1| a |n> = sqrt(n). Truncation only drops
/// the action out of the top of the space.
pub fn annihilation(mode: &ModeSpace) -> LinearOperator {
    let space: CompositeSpace = mode.into();
    LinearOperator::from_fn(space, |i, j| {
        if j == i + 1 {
            Complex64::new((j as f64).sqrt(), 0.0)
        } else {
            Complex64::ZERO
        }
    })
}

pub fn creation(mode: &ModeSpace) -> LinearOperator {
    annihilation(mode).adjoint()
}

/// Photon number operator a^† a.
pub fn number_operator(mode: &ModeSpace) -> LinearOperator {
    let space: CompositeSpace = mode.into();
    LinearOperator::from_fn(space, |i, j| {
        if i == j {
            Complex64::new(i as f64, 0.0)
        } else {
            Complex64::ZERO
        }
    })
}

/// N^{1/2}, exact diagonal square root in the number basis.
pub fn sqrt_number_operator(mode: &ModeSpace) -> LinearOperator {
    let space: CompositeSpace = mode.into();
    LinearOperator::from_fn(space, |i, j| {
        if i == j {
            Complex64::new((i as f64).sqrt(), 0.0)
        } else {
            Complex64::ZERO
        }
    })
}

/// The non-unitary Susskind-Glogower lowering operator sum_n |n><n+1|.
pub fn susskind_glogower(mode: &ModeSpace) -> LinearOperator {
    let space: CompositeSpace = mode.into();
    LinearOperator::from_fn(space, |i, j| {
        if j == i + 1 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::ZERO
        }
    })
}

/// Uniform phase-shift operator exp(-i a^† a dphi), diagonal with entries
/// exp(-i n dphi).
pub fn phase_shift_operator(mode: &ModeSpace, dphi: f64) -> LinearOperator {
    let space: CompositeSpace = mode.into();
    LinearOperator::from_fn(space, |i, j| {
        if i == j {
            Complex64::new(0.0, -(i as f64) * dphi).exp()
        } else {
            Complex64::ZERO
        }
    })
}

/// Number state |n>.
pub fn number_state(n: usize, mode: &ModeSpace) -> Result<StateVector> {
    if n > mode.n_max() {
        return Err(Error::Truncation(format!(
            "number state |{n}> exceeds n_max = {}",
            mode.n_max()
        )));
    }
    StateVector::basis(mode.into(), n)
}

/// Poisson weight |<n|alpha>|^2 = e^{-|a|^2} |a|^{2n} / n!.
pub fn poisson_weight(mean: f64, n: usize) -> f64 {
    // log-space to survive large n.
    let mut logw = -mean;
    for k in 1..=n {
        logw += mean.ln() - (k as f64).ln();
    }
    if mean == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    logw.exp()
}

/// Truncated coherent state, renormalized. Errors if the truncation drops
/// more than `COHERENT_TAIL_TOL` of probability mass.
pub fn coherent_state(alpha: Complex64, mode: &ModeSpace) -> Result<StateVector> {
    let mean = alpha.norm_sqr();
    let kept: f64 = (0..=mode.n_max()).map(|n| poisson_weight(mean, n)).sum();
    let tail = (1.0 - kept).max(0.0);
    if tail >= COHERENT_TAIL_TOL {
        return Err(Error::Truncation(format!(
            "coherent state |alpha|^2 = {mean:.4} leaves tail mass {tail:.3e} above n_max = {}",
            mode.n_max()
        )));
    }
    let dim = mode.dim();
    let mut amps = DVector::<Complex64>::zeros(dim);
    // alpha^n / sqrt(n!) built recursively.
    let mut a = Complex64::new(1.0, 0.0);
    for n in 0..dim {
        if n > 0 {
            a = a * alpha / Complex64::new((n as f64).sqrt(), 0.0);
        }
        amps[n] = a;
    }
    let scale = Complex64::new(1.0 / amps.norm(), 0.0);
    StateVector::new(mode.into(), amps.map(|x| x * scale))
}
