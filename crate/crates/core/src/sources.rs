//! Quantum sources of light: an oscillator coupled to a field mode, and a
//! small collection of two-level atoms.
//!
//! Both use the energy-conserving coupling H = i lambda (a^† c - c^† a),
//! where c lowers the source. A source prepared in a c-eigenstate feeds the
//! field a coherent state whose phase tracks the source phase; a source
//! prepared in an energy-diagonal state leaves the field with no optical
//! coherences at all.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{
    annihilation, coherent_state, number_operator, number_state, CompositeSpace,
    DensityOperator, Factor, LinearOperator, ModeSpace, StateVector,
};

const HERMITICITY_BUILD_TOL: f64 = 1e-12;
const EXCITATION_COMMUTATOR_TOL: f64 = 1e-12;
const TOP_OCCUPATION_TOL: f64 = 1e-8;

/// A source system coupled to a single field mode. The composite space is
/// ordered [field, source...].
#[derive(Debug, Clone)]
pub struct SourceFieldSystem {
    space: CompositeSpace,
    field_mode: ModeSpace,
    lambda: f64,
    hamiltonian: LinearOperator,
    /// Total excitation number N_field + N_source, conserved by H.
    total_excitation: LinearOperator,
    /// Lowering operator of the source, embedded in the composite space.
    source_lowering: LinearOperator,
}

impl SourceFieldSystem {
    fn build(
        field_mode: ModeSpace,
        source_factors: CompositeSpace,
        source_lowering_local: &LinearOperator,
        source_excitation_local: &LinearOperator,
        lambda: f64,
    ) -> Result<Self> {
        let space = CompositeSpace::from(&field_mode).join(&source_factors)?;
        let a = annihilation(&field_mode).embed(&space)?;
        let c = source_lowering_local.embed(&space)?;
        // H = i lambda (a^† c - c^† a)
        let hamiltonian = a
            .adjoint()
            .mul(&c)?
            .sub(&c.adjoint().mul(&a)?)?
            .scale(Complex64::new(0.0, lambda));
        let defect = hamiltonian.hermiticity_defect();
        if defect > HERMITICITY_BUILD_TOL {
            return Err(Error::InvalidConfig(format!(
                "hamiltonian hermiticity defect {defect:.3e}"
            )));
        }
        let total_excitation = number_operator(&field_mode)
            .embed(&space)?
            .add(&source_excitation_local.embed(&space)?)?;
        let comm = hamiltonian.commutator(&total_excitation)?.max_abs();
        if comm > EXCITATION_COMMUTATOR_TOL {
            return Err(Error::InvalidConfig(format!(
                "hamiltonian does not conserve excitation number (defect {comm:.3e})"
            )));
        }
        Ok(Self {
            space,
            field_mode,
            lambda,
            hamiltonian,
            total_excitation,
            source_lowering: c,
        })
    }

    pub fn space(&self) -> &CompositeSpace {
        &self.space
    }

    pub fn field_mode(&self) -> &ModeSpace {
        &self.field_mode
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn hamiltonian(&self) -> &LinearOperator {
        &self.hamiltonian
    }

    pub fn total_excitation(&self) -> &LinearOperator {
        &self.total_excitation
    }

    pub fn source_lowering(&self) -> &LinearOperator {
        &self.source_lowering
    }

    /// exp(-i H t)
    pub fn propagator(&self, t: f64) -> LinearOperator {
        self.hamiltonian
            .scale(Complex64::new(0.0, -t))
            .matrix_exponential()
    }

    pub fn evolve(&self, psi: &StateVector, t: f64) -> Result<StateVector> {
        psi.apply(&self.propagator(t))
    }

    /// Occupation of the top field level of a joint pure state; a guard
    /// against truncation artifacts.
    pub fn top_field_occupation(&self, psi: &StateVector) -> Result<f64> {
        let top = number_state(self.field_mode.n_max(), &self.field_mode)?
            .outer()
            .embed(&self.space)?;
        Ok(psi.expectation(&top)?.re)
    }
}

/// A charged harmonic oscillator as the source: c is the oscillator
/// annihilation operator.
pub fn build_oscillator_source(
    source_n_max: usize,
    field_n_max: usize,
    lambda: f64,
) -> Result<SourceFieldSystem> {
    let source_mode = ModeSpace::new("source", source_n_max);
    SourceFieldSystem::build(
        ModeSpace::new("field", field_n_max),
        (&source_mode).into(),
        &annihilation(&source_mode),
        &number_operator(&source_mode),
        lambda,
    )
}

/// Report from [`coherence_transfer_check`].
#[derive(Debug, Clone)]
pub struct CoherenceReport {
    /// Field amplitude alpha(t) = <a> after evolution.
    pub alpha: Complex64,
    /// Source amplitude <c> after evolution.
    pub source_mean: Complex64,
    /// ||(a - alpha)|psi(t)>||: how far the field is from an a-eigenstate.
    pub eigenvalue_residual: f64,
    /// |arg alpha(t) - arg gamma|, 0 when either amplitude vanishes.
    pub arg_alignment: f64,
    /// |Im(alpha*(t) <c(t)>)|: vanishes when phase transfers faithfully.
    pub cross_imag: f64,
}

/// Evolve |gamma>_S |0>_F and check that the field stays (approximately)
/// in a coherent state with the source's phase.
pub fn coherence_transfer_check(
    sys: &SourceFieldSystem,
    source_state: &StateVector,
    t: f64,
) -> Result<CoherenceReport> {
    // The source state must be a c-eigenstate (truncated-coherent).
    let field_vac = number_state(0, &sys.field_mode)?;
    let joint0 = StateVector::tensor(&[&field_vac, source_state])?;
    let c = &sys.source_lowering;
    let gamma = joint0.expectation(c)?;
    let c_residual = {
        let shifted = joint0
            .apply(c)?
            .amplitudes()
            .clone()
            - joint0.amplitudes().clone().map(|x| gamma * x);
        shifted.norm()
    };
    // Truncated coherent states carry a residual of order the top
    // amplitude, so the gate is loose relative to the tail tolerance.
    if c_residual > 1e-4 {
        return Err(Error::InvalidConfig(format!(
            "source state is not a c-eigenstate (residual {c_residual:.3e})"
        )));
    }
    let psi_t = sys.evolve(&joint0, t)?;
    let top = sys.top_field_occupation(&psi_t)?;
    if top > TOP_OCCUPATION_TOL {
        return Err(Error::Truncation(format!(
            "top field level occupation {top:.3e} after evolution"
        )));
    }
    let a = annihilation(&sys.field_mode).embed(&sys.space)?;
    let alpha = psi_t.expectation(&a)?;
    let residual = {
        let shifted =
            psi_t.apply(&a)?.amplitudes().clone() - psi_t.amplitudes().clone().map(|x| alpha * x);
        shifted.norm()
    };
    let source_mean = psi_t.expectation(c)?;
    let arg_alignment = if alpha.norm() < 1e-12 || gamma.norm() < 1e-12 {
        0.0
    } else {
        crate::phase::wrap_to_pi(alpha.arg() - gamma.arg()).abs()
    };
    Ok(CoherenceReport {
        alpha,
        source_mean,
        eigenvalue_residual: residual,
        arg_alignment,
        cross_imag: (alpha.conj() * source_mean).im.abs(),
    })
}

/// Truncated-coherent source state |gamma>_S for an oscillator system.
pub fn oscillator_coherent_source(
    sys: &SourceFieldSystem,
    gamma: Complex64,
) -> Result<StateVector> {
    let factors = sys.space.factors();
    let source = ModeSpace::new("source", factors[1].dim() - 1);
    coherent_state(gamma, &source)
}

/// Evolve an energy-diagonal oscillator mixture sum_N P_N |N><N| from the
/// field vacuum and return the reduced field state. `weights[N]` = P_N.
pub fn number_mixture_field(
    sys: &SourceFieldSystem,
    weights: &[f64],
    t: f64,
) -> Result<DensityOperator> {
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidConfig(format!(
            "mixture weights sum to {total}, need 1"
        )));
    }
    let factors = sys.space.factors();
    let source_dim = factors[1].dim();
    if weights.len() > source_dim {
        return Err(Error::Truncation(format!(
            "mixture needs source levels up to {}, space has {}",
            weights.len() - 1,
            source_dim - 1
        )));
    }
    let source = ModeSpace::new("source", source_dim - 1);
    let field_vac = number_state(0, &sys.field_mode)?;
    let u = sys.propagator(t);
    let mut acc = LinearOperator::zero(sys.space.clone());
    for (n, &p) in weights.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        if p < 0.0 {
            return Err(Error::InvalidConfig("negative mixture weight".into()));
        }
        let joint = StateVector::tensor(&[&field_vac, &number_state(n, &source)?])?;
        let evolved = joint.apply(&u)?;
        let top = sys.top_field_occupation(&evolved)?;
        if top > TOP_OCCUPATION_TOL {
            return Err(Error::Truncation(format!(
                "top field level occupation {top:.3e} for source level {n}"
            )));
        }
        acc = acc.add(&evolved.outer().scale(Complex64::new(p, 0.0)))?;
    }
    DensityOperator::new_structurally_positive(acc)?.partial_trace(&["field"])
}

/// Maximum number of atoms in the toy atomic source.
pub const MAX_ATOMS: usize = 4;

/// Atom factor convention: dimension 2, basis ordered (|g>, |e>).
pub fn atom_space(k_atoms: usize) -> Result<CompositeSpace> {
    if k_atoms == 0 || k_atoms > MAX_ATOMS {
        return Err(Error::InvalidConfig(format!(
            "atom count {k_atoms} outside 1..={MAX_ATOMS}"
        )));
    }
    CompositeSpace::new(
        (0..k_atoms)
            .map(|i| Factor::new(format!("atom{i}"), 2))
            .collect(),
    )
}

/// sigma^- = |g><e| on a single atom factor.
fn lowering_on(space: &CompositeSpace, atom_index: usize) -> Result<LinearOperator> {
    let single = CompositeSpace::single(space.factors()[atom_index].clone());
    // |g><e| in the (g, e) ordering.
    let sigma = LinearOperator::from_fn(single, |i, j| {
        if i == 0 && j == 1 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::ZERO
        }
    });
    sigma.embed(space)
}

/// A k-atom lasing medium: c = sum_i g_i |g><e|_i.
pub fn build_atomic_source(
    couplings: &[f64],
    field_n_max: usize,
) -> Result<SourceFieldSystem> {
    let k = couplings.len();
    let atoms = atom_space(k)?;
    // Space sizing rule: the field must hold every excitation plus margin.
    if field_n_max < k + 2 {
        return Err(Error::Truncation(format!(
            "field n_max {field_n_max} below {k} atoms + 2 margin"
        )));
    }
    let mut c = LinearOperator::zero(atoms.clone());
    let mut excitation = LinearOperator::zero(atoms.clone());
    for (i, &g) in couplings.iter().enumerate() {
        c = c.add(&lowering_on(&atoms, i)?.scale(Complex64::new(g, 0.0)))?;
        let e_proj = {
            let single = CompositeSpace::single(atoms.factors()[i].clone());
            LinearOperator::from_fn(single, |r, s| {
                if r == 1 && s == 1 {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::ZERO
                }
            })
        };
        excitation = excitation.add(&e_proj.embed(&atoms)?)?;
    }
    SourceFieldSystem::build(
        ModeSpace::new("field", field_n_max),
        atoms,
        &c,
        &excitation,
        1.0,
    )
}

/// Evolve field (x) atoms under the atomic-source Hamiltonian and return
/// the reduced field state. The initial field must be number-diagonal.
pub fn atomic_source_field(
    sys: &SourceFieldSystem,
    atom_state: &DensityOperator,
    initial_field: Option<&DensityOperator>,
    t: f64,
) -> Result<DensityOperator> {
    let field_space: CompositeSpace = (&sys.field_mode).into();
    let field_rho = match initial_field {
        Some(f) => {
            if f.space() != &field_space {
                return Err(Error::DimensionMismatch(
                    "initial field state on wrong space".into(),
                ));
            }
            let d = f.dim();
            for r in 0..d {
                for c in 0..d {
                    if r != c && f.op().entry(r, c).norm() > 1e-12 {
                        return Err(Error::InvalidConfig(
                            "initial field state must be number-diagonal".into(),
                        ));
                    }
                }
            }
            f.clone()
        }
        None => DensityOperator::from_pure(&number_state(0, &sys.field_mode)?)?,
    };
    let joint = LinearOperator::tensor(&[field_rho.op(), atom_state.op()])?;
    if joint.space() != &sys.space {
        return Err(Error::DimensionMismatch(
            "atom state does not match the source system".into(),
        ));
    }
    let u = sys.propagator(t);
    let evolved = u.mul(&joint)?.mul(&u.adjoint())?;
    let rho_t = DensityOperator::new_structurally_positive(evolved)?;
    // Truncation guard on the top field level.
    let top = number_state(sys.field_mode.n_max(), &sys.field_mode)?
        .outer()
        .embed(&sys.space)?;
    let occ = rho_t.expectation(&top)?.re;
    if occ > TOP_OCCUPATION_TOL {
        return Err(Error::Truncation(format!(
            "top field level occupation {occ:.3e} after evolution"
        )));
    }
    rho_t.partial_trace(&["field"])
}
