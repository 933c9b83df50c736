//! Dense complex operators over composite spaces.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::space::CompositeSpace;

/// A square complex matrix together with the space it acts on.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearOperator {
    space: CompositeSpace,
    matrix: DMatrix<Complex64>,
}

impl LinearOperator {
    pub fn new(space: CompositeSpace, matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() != space.dim() || matrix.ncols() != space.dim() {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{} but space dimension is {}",
                matrix.nrows(),
                matrix.ncols(),
                space.dim()
            )));
        }
        Ok(Self { space, matrix })
    }

    pub fn identity(space: CompositeSpace) -> Self {
        let d = space.dim();
        Self { matrix: DMatrix::identity(d, d), space }
    }

    pub fn zero(space: CompositeSpace) -> Self {
        let d = space.dim();
        Self { matrix: DMatrix::zeros(d, d), space }
    }

    /// Build from an entry function over (row, col).
    pub fn from_fn(space: CompositeSpace, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let d = space.dim();
        Self { matrix: DMatrix::from_fn(d, d, f), space }
    }

    pub fn space(&self) -> &CompositeSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    fn check_same_space(&self, other: &Self) -> Result<()> {
        if self.space != other.space {
            return Err(Error::DimensionMismatch(
                "operators act on different spaces".into(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        Ok(Self { space: self.space.clone(), matrix: &self.matrix + &other.matrix })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        Ok(Self { space: self.space.clone(), matrix: &self.matrix - &other.matrix })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        Ok(Self { space: self.space.clone(), matrix: &self.matrix * &other.matrix })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { space: self.space.clone(), matrix: self.matrix.map(|x| c * x) }
    }

    pub fn adjoint(&self) -> Self {
        Self { space: self.space.clone(), matrix: self.matrix.adjoint() }
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.diagonal().sum()
    }

    /// Tr(self * other), computed without forming the product.
    pub fn trace_product(&self, other: &Self) -> Result<Complex64> {
        self.check_same_space(other)?;
        let d = self.dim();
        let mut acc = Complex64::ZERO;
        for i in 0..d {
            for k in 0..d {
                acc += self.matrix[(i, k)] * other.matrix[(k, i)];
            }
        }
        Ok(acc)
    }

    /// Apply to a column vector.
    pub fn apply(&self, v: &DVector<Complex64>) -> Result<DVector<Complex64>> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "vector length {} does not match operator dimension {}",
                v.len(),
                self.dim()
            )));
        }
        Ok(&self.matrix * v)
    }

    /// Maximum elementwise deviation from Hermiticity.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..d {
            for j in i..d {
                let dev = (self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm();
                worst = worst.max(dev);
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// Maximum elementwise modulus.
    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().fold(0.0, |m, x| m.max(x.norm()))
    }

    /// Maximum elementwise modulus of the difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.matrix
            .iter()
            .zip(other.matrix.iter())
            .fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// Tensor product of a list of operators, first factor slowest.
    pub fn tensor(ops: &[&LinearOperator]) -> Result<Self> {
        let mut iter = ops.iter();
        let first = iter
            .next()
            .ok_or_else(|| Error::InvalidConfig("empty tensor product".into()))?;
        let mut space = first.space.clone();
        let mut matrix = first.matrix.clone();
        for op in iter {
            space = space.join(&op.space)?;
            matrix = matrix.kronecker(&op.matrix);
        }
        Ok(Self { space, matrix })
    }

    /// Lift an operator on a subset of factors into a larger space by
    /// tensoring with identity on every other factor. The operator's own
    /// factors must appear contiguously and in order in `target`.
    pub fn embed(&self, target: &CompositeSpace) -> Result<Self> {
        let own = self.space.factors();
        let tgt = target.factors();
        let start = (0..tgt.len().saturating_sub(own.len() - 1))
            .find(|&s| tgt[s..s + own.len()] == *own)
            .ok_or_else(|| {
                Error::DimensionMismatch(
                    "operator factors not found contiguously in target space".into(),
                )
            })?;
        let before: usize = tgt[..start].iter().map(|f| f.dim()).product();
        let after: usize = tgt[start + own.len()..].iter().map(|f| f.dim()).product();
        let mut matrix = DMatrix::identity(before, before).kronecker(&self.matrix);
        if after > 1 {
            matrix = matrix.kronecker(&DMatrix::identity(after, after));
        }
        Self::new(target.clone(), matrix)
    }

    /// Partial trace keeping the listed factor labels (in their original
    /// order). Trace is preserved: Tr(result) = Tr(self).
    pub fn partial_trace(&self, keep: &[&str]) -> Result<Self> {
        let factors = self.space.factors();
        for label in keep {
            self.space.factor_index(label)?;
        }
        let kept: Vec<usize> = factors
            .iter()
            .enumerate()
            .filter(|(_, f)| keep.contains(&f.label()))
            .map(|(i, _)| i)
            .collect();
        if kept.is_empty() {
            return Err(Error::InvalidConfig("partial trace must keep at least one factor".into()));
        }
        let out_space = CompositeSpace::new(
            kept.iter().map(|&i| factors[i].clone()).collect(),
        )?;
        let d = self.dim();
        // Precompute for every flat index its (kept, traced) sub-indices.
        let mut keep_idx = vec![0usize; d];
        let mut trace_idx = vec![0usize; d];
        for i in 0..d {
            let multi = self.space.unflatten(i);
            let mut k = 0usize;
            let mut t = 0usize;
            for (pos, f) in factors.iter().enumerate() {
                if kept.contains(&pos) {
                    k = k * f.dim() + multi[pos];
                } else {
                    t = t * f.dim() + multi[pos];
                }
            }
            keep_idx[i] = k;
            trace_idx[i] = t;
        }
        let dk = out_space.dim();
        let mut out = DMatrix::<Complex64>::zeros(dk, dk);
        for i in 0..d {
            for j in 0..d {
                if trace_idx[i] == trace_idx[j] {
                    out[(keep_idx[i], keep_idx[j])] += self.matrix[(i, j)];
                }
            }
        }
        Self::new(out_space, out)
    }

    /// Eigenvalues of a Hermitian operator, ascending.
    pub fn eigenvalues_hermitian(&self) -> Result<Vec<f64>> {
        if !self.is_hermitian(1e-8) {
            return Err(Error::InvalidConfig(format!(
                "operator is not Hermitian (defect {:.3e})",
                self.hermiticity_defect()
            )));
        }
        // Symmetrize to kill roundoff before the solver.
        let h = (&self.matrix + self.matrix.adjoint()).map(|x| 0.5 * x);
        let eig = nalgebra::SymmetricEigen::new(h);
        let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(vals)
    }

    /// Matrix exponential. Hermitian and anti-Hermitian generators go
    /// through an eigendecomposition; anything else falls back to
    /// scaling-and-squaring with a Taylor kernel.
    pub fn matrix_exponential(&self) -> Self {
        let tol = 1e-12 * self.max_abs().max(1.0);
        if self.is_hermitian(tol) {
            return self.exp_via_eigen(Complex64::new(1.0, 0.0));
        }
        // Anti-Hermitian: A = -iH with H = iA Hermitian, exp(A) = V e^{-i lambda} V^†.
        let i_a = self.scale(Complex64::I);
        if i_a.is_hermitian(tol) {
            return i_a.exp_via_eigen(Complex64::new(0.0, -1.0));
        }
        self.exp_via_scaling_squaring()
    }

    /// For Hermitian self with eigenpairs (lambda, v), return
    /// V diag(exp(phase * lambda)) V^†.
    fn exp_via_eigen(&self, phase: Complex64) -> Self {
        let h = (&self.matrix + self.matrix.adjoint()).map(|x| 0.5 * x);
        let eig = nalgebra::SymmetricEigen::new(h);
        let d = self.dim();
        let mut scaled = eig.eigenvectors.clone();
        for (k, lambda) in eig.eigenvalues.iter().enumerate() {
            let e = (phase * Complex64::new(*lambda, 0.0)).exp();
            for r in 0..d {
                scaled[(r, k)] *= e;
            }
        }
        let matrix = scaled * eig.eigenvectors.adjoint();
        Self { space: self.space.clone(), matrix }
    }

    fn exp_via_scaling_squaring(&self) -> Self {
        let norm = self.max_abs() * self.dim() as f64;
        let s = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
        let scaled = self.matrix.map(|x| x / Complex64::new(2f64.powi(s as i32), 0.0));
        let d = self.dim();
        let mut result = DMatrix::<Complex64>::identity(d, d);
        let mut term = DMatrix::<Complex64>::identity(d, d);
        for k in 1..=30 {
            term = (&term * &scaled).map(|x| x / Complex64::new(k as f64, 0.0));
            result += &term;
            if term.iter().fold(0.0f64, |m, x| m.max(x.norm())) < 1e-18 {
                break;
            }
        }
        for _ in 0..s {
            result = &result * &result;
        }
        Self { space: self.space.clone(), matrix: result }
    }

    /// Nonzero entries as (row, col, value).
    pub fn nonzeros(&self) -> Vec<(usize, usize, Complex64)> {
        let d = self.dim();
        let mut out = Vec::new();
        for j in 0..d {
            for i in 0..d {
                let v = self.matrix[(i, j)];
                if v != Complex64::ZERO {
                    out.push((i, j, v));
                }
            }
        }
        out
    }

    /// J self J^†, exploiting the sparsity of `jump`. Exact for any jump
    /// operator; cost is O(nnz(J)^2).
    pub fn sandwich(&self, jump: &Self) -> Result<Self> {
        self.check_same_space(jump)?;
        let nz = jump.nonzeros();
        let d = self.dim();
        let mut out = DMatrix::<Complex64>::zeros(d, d);
        for &(i, k, v1) in &nz {
            for &(j, l, v2) in &nz {
                out[(i, j)] += v1 * self.matrix[(k, l)] * v2.conj();
            }
        }
        Ok(Self { space: self.space.clone(), matrix: out })
    }
}
