//! Labeled truncated spaces and their tensor products.
//!
//! A [`ModeSpace`] is a single field mode truncated at photon number
//! `n_max` (dimension `n_max + 1`). A [`CompositeSpace`] is an ordered
//! list of factors; the factor order is authoritative for indexing, with
//! the *last* factor varying fastest.

use crate::error::{Error, Result};

/// A single-mode truncated Fock space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModeSpace {
    label: String,
    n_max: usize,
}

impl ModeSpace {
    pub fn new(label: impl Into<String>, n_max: usize) -> Self {
        Self { label: label.into(), n_max }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Maximum photon number kept in the truncation.
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        self.n_max + 1
    }

    pub fn factor(&self) -> Factor {
        Factor { label: self.label.clone(), dim: self.dim() }
    }
}

/// One factor of a composite space: a mode, an atom, or any other
/// finite-dimensional subsystem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    label: String,
    dim: usize,
}

impl Factor {
    pub fn new(label: impl Into<String>, dim: usize) -> Self {
        assert!(dim >= 1, "factor dimension must be at least 1");
        Self { label: label.into(), dim }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

impl From<&ModeSpace> for Factor {
    fn from(m: &ModeSpace) -> Self {
        m.factor()
    }
}

/// An ordered tensor product of factors. Labels must be unique.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositeSpace {
    factors: Vec<Factor>,
}

impl CompositeSpace {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        for (i, f) in factors.iter().enumerate() {
            if factors[..i].iter().any(|g| g.label() == f.label()) {
                return Err(Error::InvalidConfig(format!(
                    "duplicate factor label '{}'",
                    f.label()
                )));
            }
        }
        Ok(Self { factors })
    }

    pub fn single(factor: Factor) -> Self {
        Self { factors: vec![factor] }
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(Factor::dim).product()
    }

    pub fn factor_index(&self, label: &str) -> Result<usize> {
        self.factors
            .iter()
            .position(|f| f.label() == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Tensor product of two composite spaces, `self` factors first.
    pub fn join(&self, other: &CompositeSpace) -> Result<CompositeSpace> {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        CompositeSpace::new(factors)
    }

    /// Decompose a flat index into per-factor indices (last factor fastest).
    pub fn unflatten(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.factors.len()];
        for (k, f) in self.factors.iter().enumerate().rev() {
            out[k] = index % f.dim();
            index /= f.dim();
        }
        out
    }

    /// Flatten per-factor indices into a flat index (last factor fastest).
    pub fn flatten(&self, indices: &[usize]) -> usize {
        debug_assert_eq!(indices.len(), self.factors.len());
        self.factors
            .iter()
            .zip(indices)
            .fold(0, |acc, (f, &i)| acc * f.dim() + i)
    }
}

impl From<&ModeSpace> for CompositeSpace {
    fn from(m: &ModeSpace) -> Self {
        CompositeSpace::single(m.factor())
    }
}
