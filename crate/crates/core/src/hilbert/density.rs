//! Validated density operators.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::operator::LinearOperator;
use crate::hilbert::state::StateVector;

pub const HERMITICITY_TOL: f64 = 1e-10;
pub const POSITIVITY_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;

/// A positive, unit-trace operator. Construction validates Hermiticity,
/// positivity and trace; the checks cannot be bypassed outside this module.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    op: LinearOperator,
}

impl DensityOperator {
    pub fn new(op: LinearOperator) -> Result<Self> {
        let herm = op.hermiticity_defect();
        if herm > HERMITICITY_TOL {
            return Err(Error::InvalidDensity(format!(
                "Hermiticity defect {herm:.3e} exceeds {HERMITICITY_TOL:.0e}"
            )));
        }
        let tr = op.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::InvalidDensity(format!(
                "trace {} deviates from 1 beyond {TRACE_TOL:.0e}",
                tr.re
            )));
        }
        if !is_positive_semidefinite(&op, POSITIVITY_TOL)? {
            return Err(Error::InvalidDensity(
                "negative eigenvalue beyond tolerance".into(),
            ));
        }
        Ok(Self { op })
    }

    pub fn from_pure(state: &StateVector) -> Result<Self> {
        // |psi><psi| is positive by construction; skip the spectral check.
        Self::new_structurally_positive(state.normalized()?.outer())
    }

    /// Constructor for operators that are positive by construction
    /// (projectors, conjugations J rho J^†, convex mixtures of such).
    /// Hermiticity and trace are still enforced.
    pub(crate) fn new_structurally_positive(op: LinearOperator) -> Result<Self> {
        let herm = op.hermiticity_defect();
        if herm > HERMITICITY_TOL {
            return Err(Error::InvalidDensity(format!(
                "Hermiticity defect {herm:.3e} exceeds {HERMITICITY_TOL:.0e}"
            )));
        }
        let tr = op.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::InvalidDensity(format!(
                "trace {} deviates from 1 beyond {TRACE_TOL:.0e}",
                tr.re
            )));
        }
        Ok(Self { op })
    }

    /// Normalize an (unnormalized) positive operator by its trace.
    pub fn from_unnormalized(op: LinearOperator) -> Result<Self> {
        let tr = op.trace().re;
        if tr <= 1e-14 {
            return Err(Error::DegenerateNormalization { trace: tr });
        }
        Self::new(op.scale(Complex64::new(1.0 / tr, 0.0)))
    }

    pub fn op(&self) -> &LinearOperator {
        &self.op
    }

    pub fn into_op(self) -> LinearOperator {
        self.op
    }

    pub fn space(&self) -> &crate::hilbert::space::CompositeSpace {
        self.op.space()
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    /// Tr(rho A)
    pub fn expectation(&self, op: &LinearOperator) -> Result<Complex64> {
        self.op.trace_product(op)
    }

    pub fn partial_trace(&self, keep: &[&str]) -> Result<Self> {
        Self::new(self.op.partial_trace(keep)?)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.op.max_abs_diff(other.op())
    }
}

/// PSD check with a fast path: a Cholesky factorization of rho + tol*I
/// certifies all eigenvalues >= -tol. Rank-deficient matrices can fail
/// the factorization spuriously, so the eigenvalue check is the arbiter.
fn is_positive_semidefinite(op: &LinearOperator, tol: f64) -> Result<bool> {
    if cholesky_succeeds(op, tol) {
        return Ok(true);
    }
    let min = op
        .eigenvalues_hermitian()?
        .first()
        .copied()
        .unwrap_or(0.0);
    Ok(min >= -tol)
}

/// Right-looking Cholesky on rho + shift*I with an explicit pivot check.
/// nalgebra's complex Cholesky cannot be used here: a complex square root
/// always exists, so it does not detect indefiniteness.
fn cholesky_succeeds(op: &LinearOperator, shift: f64) -> bool {
    let d = op.dim();
    let mut a = op.matrix().clone();
    for i in 0..d {
        a[(i, i)] += Complex64::new(shift, 0.0);
    }
    for k in 0..d {
        let pivot = a[(k, k)].re;
        if pivot <= 0.0 {
            return false;
        }
        let l = pivot.sqrt();
        for i in k + 1..d {
            a[(i, k)] /= Complex64::new(l, 0.0);
        }
        for j in k + 1..d {
            let ljk = a[(j, k)].conj();
            for i in j..d {
                let update = a[(i, k)] * ljk;
                a[(i, j)] -= update;
            }
        }
    }
    true
}
