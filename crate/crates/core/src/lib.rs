//! Truncated-Fock-space quantum optics toolkit.
//!
//! The library covers four connected pieces of machinery:
//!
//! * [`hilbert`] — dense complex operator algebra over labeled truncated
//!   Fock spaces (states, standard operators, tensor products, partial
//!   traces, matrix functions).
//! * [`prepmeas`] — the symmetric preparation/measurement formalism:
//!   preparation device operators, probability operator measures, and
//!   predictive/retrodictive probabilities.
//! * [`phase`] — canonical phase and phase-difference statistics from
//!   Susskind-Glogower moments.
//! * [`sources`], [`twolaser`], [`jcpulse`] — the physical models:
//!   coherent-state generation by quantum sources, two-cavity
//!   photodetection collapse and interference, and Jaynes-Cummings
//!   pi-pulse phase disruption.
//!
//! The `phaselight` binary exposes each experiment as a CLI subcommand;
//! see [`cli`].

pub mod cli;
pub mod error;
pub mod hilbert;
pub mod jcpulse;
pub mod phase;
pub mod prepmeas;
pub mod sources;
pub mod twolaser;

pub use error::{Error, Result};
