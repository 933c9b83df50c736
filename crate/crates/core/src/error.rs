use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A truncated Fock space is too small for the requested construction.
    #[error("truncation error: {0}")]
    Truncation(String),

    /// A normalizing trace fell below the degeneracy threshold (1e-14).
    #[error("degenerate normalization: trace {trace:.3e}")]
    DegenerateNormalization { trace: f64 },

    #[error("unknown label: {0}")]
    UnknownLabel(String),

    /// Detection attempted on a state with no photons to give.
    #[error("no photon: detection weight {weight:.3e}")]
    NoPhoton { weight: f64 },

    /// The Fourier synthesis of a phase distribution left a complex residue.
    #[error("Fourier imaginary residue {residue:.3e} exceeds 1e-8")]
    FourierResidue { residue: f64 },

    #[error("invalid density operator: {0}")]
    InvalidDensity(String),

    #[error("invalid device: {0}")]
    InvalidDevice(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
