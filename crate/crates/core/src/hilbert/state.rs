//! Pure states over composite spaces.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::operator::LinearOperator;
use crate::hilbert::space::CompositeSpace;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    space: CompositeSpace,
    amplitudes: DVector<Complex64>,
}

impl StateVector {
    pub fn new(space: CompositeSpace, amplitudes: DVector<Complex64>) -> Result<Self> {
        if amplitudes.len() != space.dim() {
            return Err(Error::DimensionMismatch(format!(
                "amplitude vector length {} does not match space dimension {}",
                amplitudes.len(),
                space.dim()
            )));
        }
        Ok(Self { space, amplitudes })
    }

    /// Basis state |index> of the space.
    pub fn basis(space: CompositeSpace, index: usize) -> Result<Self> {
        if index >= space.dim() {
            return Err(Error::DimensionMismatch(format!(
                "basis index {} out of range for dimension {}",
                index,
                space.dim()
            )));
        }
        let mut v = DVector::zeros(space.dim());
        v[index] = Complex64::new(1.0, 0.0);
        Ok(Self { space, amplitudes: v })
    }

    pub fn space(&self) -> &CompositeSpace {
        &self.space
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n * n <= 1e-14 {
            return Err(Error::DegenerateNormalization { trace: n * n });
        }
        Ok(Self {
            space: self.space.clone(),
            amplitudes: self.amplitudes.map(|x| x / Complex64::new(n, 0.0)),
        })
    }

    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.space != other.space {
            return Err(Error::DimensionMismatch("states on different spaces".into()));
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    pub fn tensor(states: &[&StateVector]) -> Result<Self> {
        let mut iter = states.iter();
        let first = iter
            .next()
            .ok_or_else(|| Error::InvalidConfig("empty tensor product".into()))?;
        let mut space = first.space.clone();
        let mut amps = first.amplitudes.clone();
        for s in iter {
            space = space.join(&s.space)?;
            amps = amps.kronecker(&s.amplitudes);
        }
        Ok(Self { space, amplitudes: amps })
    }

    /// |psi><psi| as a plain operator (not trace-normalized unless |psi| is).
    pub fn outer(&self) -> LinearOperator {
        let m = &self.amplitudes * self.amplitudes.adjoint();
        LinearOperator::new(self.space.clone(), m).expect("outer product dimensions")
    }

    pub fn apply(&self, op: &LinearOperator) -> Result<Self> {
        if op.space() != &self.space {
            return Err(Error::DimensionMismatch("operator space differs from state space".into()));
        }
        Ok(Self { space: self.space.clone(), amplitudes: op.apply(&self.amplitudes)? })
    }

    /// <psi| A |psi>
    pub fn expectation(&self, op: &LinearOperator) -> Result<Complex64> {
        let av = self.apply(op)?;
        self.inner(&av)
    }

    /// Maximum amplitude deviation from another state.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }
}
