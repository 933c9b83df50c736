//! Complex operator algebra over labeled truncated Fock spaces.

mod density;
mod fock;
mod operator;
mod space;
mod state;

pub use density::{DensityOperator, HERMITICITY_TOL, POSITIVITY_TOL, TRACE_TOL};
pub use fock::{
    annihilation, coherent_state, creation, number_operator, number_state,
    phase_shift_operator, poisson_weight, sqrt_number_operator, susskind_glogower,
    COHERENT_TAIL_TOL,
};
pub use operator::LinearOperator;
pub use space::{CompositeSpace, Factor, ModeSpace};
pub use state::StateVector;
