//! Resonant Jaynes-Cummings pi-pulse and the phase-disruption experiment.
//!
//! The interaction is H = i lambda (a^† |g><e| - a |e><g|). Inserting a pi
//! phase shift of the field halfway through a pi-pulse undoes the pulse for
//! every field state, because U(pi) anticommutes with the generator:
//! exp(-iHt/2) U(pi) exp(-iHt/2) = U(pi).

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{
    number_state, phase_shift_operator, CompositeSpace, DensityOperator, Factor,
    LinearOperator, ModeSpace, StateVector,
};

/// Margin between the pulse reference level and the truncation boundary.
pub const TRUNCATION_MARGIN: usize = 5;

/// Atom factor: dimension 2, basis ordered (|g>, |e>).
pub fn atom_factor() -> Factor {
    Factor::new("atom", 2)
}

/// The (atom, field) composite space, atom factor first.
pub fn atom_field_space(field_n_max: usize) -> CompositeSpace {
    CompositeSpace::single(atom_factor())
        .join(&(&ModeSpace::new("field", field_n_max)).into())
        .expect("distinct labels")
}

fn atom_op(g_row: usize, e_col: usize) -> LinearOperator {
    LinearOperator::from_fn(CompositeSpace::single(atom_factor()), move |i, j| {
        if i == g_row && j == e_col {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::ZERO
        }
    })
}

/// H = i lambda (a^† |g><e| - a |e><g|) on the (atom, field) space.
pub fn jc_hamiltonian(field_n_max: usize, lambda: f64) -> LinearOperator {
    let space = atom_field_space(field_n_max);
    let mode = ModeSpace::new("field", field_n_max);
    let a = crate::hilbert::annihilation(&mode).embed(&space).expect("field factor");
    let sigma_minus = atom_op(0, 1).embed(&space).expect("atom factor");
    let term = a
        .adjoint()
        .mul(&sigma_minus)
        .expect("same space");
    term.sub(&term.adjoint())
        .expect("same space")
        .scale(Complex64::new(0.0, lambda))
}

/// N + |e><e|, the conserved excitation number.
pub fn excitation_operator(field_n_max: usize) -> LinearOperator {
    let space = atom_field_space(field_n_max);
    let mode = ModeSpace::new("field", field_n_max);
    let n = crate::hilbert::number_operator(&mode).embed(&space).expect("field factor");
    let e_proj = atom_op(1, 1).embed(&space).expect("atom factor");
    n.add(&e_proj).expect("same space")
}

/// Atom-field state under a fixed coupling.
#[derive(Debug, Clone)]
pub struct AtomFieldState {
    state: DensityOperator,
    lambda: f64,
    field_n_max: usize,
}

impl AtomFieldState {
    pub fn new(state: DensityOperator, lambda: f64) -> Result<Self> {
        let factors = state.space().factors();
        if factors.len() != 2 || factors[0] != atom_factor() || factors[1].label() != "field" {
            return Err(Error::DimensionMismatch(
                "expected an (atom, field) space with a 2-level atom first".into(),
            ));
        }
        let field_n_max = factors[1].dim() - 1;
        Ok(Self { state, lambda, field_n_max })
    }

    pub fn from_pure(psi: &StateVector, lambda: f64) -> Result<Self> {
        Self::new(DensityOperator::from_pure(psi)?, lambda)
    }

    /// |g> (x) field state.
    pub fn ground_with_field(field: &DensityOperator, lambda: f64) -> Result<Self> {
        let factors = field.space().factors();
        if factors.len() != 1 || factors[0].label() != "field" {
            return Err(Error::DimensionMismatch(
                "field state must live on a single 'field' factor".into(),
            ));
        }
        let g = LinearOperator::from_fn(CompositeSpace::single(atom_factor()), |i, j| {
            if i == 0 && j == 0 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::ZERO
            }
        });
        let joint = LinearOperator::tensor(&[&g, field.op()])?;
        Self::new(DensityOperator::new_structurally_positive(joint)?, lambda)
    }

    pub fn state(&self) -> &DensityOperator {
        &self.state
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn field_n_max(&self) -> usize {
        self.field_n_max
    }

    /// exp(-iHt) applied on both sides.
    pub fn evolve(&self, t: f64) -> Result<Self> {
        let u = jc_hamiltonian(self.field_n_max, self.lambda)
            .scale(Complex64::new(0.0, -t))
            .matrix_exponential();
        let evolved = u.mul(self.state.op())?.mul(&u.adjoint())?;
        Ok(Self {
            state: DensityOperator::new_structurally_positive(evolved)?,
            lambda: self.lambda,
            field_n_max: self.field_n_max,
        })
    }

    /// Apply the field phase shift exp(-i N dphi).
    pub fn shift_field_phase(&self, dphi: f64) -> Result<Self> {
        let space = atom_field_space(self.field_n_max);
        let u = phase_shift_operator(&ModeSpace::new("field", self.field_n_max), dphi)
            .embed(&space)?;
        let shifted = u.mul(self.state.op())?.mul(&u.adjoint())?;
        Ok(Self {
            state: DensityOperator::new_structurally_positive(shifted)?,
            lambda: self.lambda,
            field_n_max: self.field_n_max,
        })
    }

    /// Probability of finding the atom in |g>.
    pub fn ground_probability(&self) -> Result<f64> {
        let space = atom_field_space(self.field_n_max);
        let g_proj = atom_op(0, 0).embed(&space)?;
        Ok(self.state.expectation(&g_proj)?.re)
    }

    pub fn excitation(&self) -> Result<f64> {
        Ok(self
            .state
            .expectation(&excitation_operator(self.field_n_max))?
            .re)
    }
}

/// Duration of a pi-pulse referenced to field level n: pi / (2 sqrt(n) lambda).
pub fn pi_pulse_time(n_ref: usize, lambda: f64) -> Result<f64> {
    if n_ref == 0 {
        return Err(Error::InvalidConfig("pi-pulse reference level must be >= 1".into()));
    }
    if lambda == 0.0 {
        return Err(Error::InvalidConfig("pi-pulse needs a nonzero coupling".into()));
    }
    Ok(PI / (2.0 * (n_ref as f64).sqrt() * lambda.abs()))
}

/// Outcome of a pi-pulse with a midway pi phase shift of the field.
#[derive(Debug, Clone)]
pub struct DisruptedPulse {
    pub final_state: AtomFieldState,
    pub midpoint_state: AtomFieldState,
    pub ground_probability: f64,
}

/// Run evolve(t_pi/2), U(pi) on the field, evolve(t_pi/2), starting from
/// |g> (x) `field`. The atom ends in |g> for any field state.
pub fn disrupted_pi_pulse(
    field: &DensityOperator,
    n_ref: usize,
    lambda: f64,
) -> Result<DisruptedPulse> {
    let field_n_max = field.space().factors()[0].dim() - 1;
    if field_n_max < n_ref + TRUNCATION_MARGIN {
        return Err(Error::Truncation(format!(
            "field n_max {field_n_max} below reference level {n_ref} + {TRUNCATION_MARGIN}"
        )));
    }
    let t_half = pi_pulse_time(n_ref, lambda)? / 2.0;
    let start = AtomFieldState::ground_with_field(field, lambda)?;
    let midpoint = start.evolve(t_half)?;
    let final_state = midpoint.shift_field_phase(PI)?.evolve(t_half)?;
    let ground_probability = final_state.ground_probability()?;
    Ok(DisruptedPulse { final_state, midpoint_state: midpoint, ground_probability })
}

/// Max deviation of exp(-iHt_pi/2) U(pi) exp(-iHt_pi/2) from U(pi) over the
/// whole truncated space.
pub fn combined_unitary_identity_check(
    field_n_max: usize,
    lambda: f64,
    n_ref: usize,
) -> Result<f64> {
    combined_unitary_deviation_at(field_n_max, lambda, pi_pulse_time(n_ref, lambda)? / 2.0)
}

/// Same identity at an arbitrary half-time (it holds for every t).
pub fn combined_unitary_deviation_at(
    field_n_max: usize,
    lambda: f64,
    t_half: f64,
) -> Result<f64> {
    let space = atom_field_space(field_n_max);
    let u_half = jc_hamiltonian(field_n_max, lambda)
        .scale(Complex64::new(0.0, -t_half))
        .matrix_exponential();
    let u_pi =
        phase_shift_operator(&ModeSpace::new("field", field_n_max), PI).embed(&space)?;
    let combined = u_half.mul(&u_pi)?.mul(&u_half)?;
    Ok(combined.max_abs_diff(&u_pi))
}

/// Joint ket |atom> (x) |n> for tests and reports.
pub fn atom_number_ket(excited: bool, n: usize, field_n_max: usize) -> Result<StateVector> {
    let atom = StateVector::basis(
        CompositeSpace::single(atom_factor()),
        if excited { 1 } else { 0 },
    )?;
    let field = number_state(n, &ModeSpace::new("field", field_n_max))?;
    StateVector::tensor(&[&atom, &field])
}
