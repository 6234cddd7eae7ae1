use thiserror::Error;

/// Failures raised by the numerical routines and the phase constructions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("matrix is not Hermitian (max asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not unitary (max deviation from identity {0:e})")]
    NonUnitary(f64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("degenerate spectrum: eigenvalue splitting {0:e} below threshold")]
    DegenerateSpectrum(f64),

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("ring undersampled: phase step {step} has magnitude {magnitude} rad")]
    UndersampledRing { step: usize, magnitude: f64 },

    #[error("gap closure: minimum gap {min_gap:e} at kappa = {kappa}")]
    GapClosure { min_gap: f64, kappa: f64 },

    #[error("successive overlap {overlap} at step {index} is below the floor; increase M")]
    OverlapTooSmall { index: usize, overlap: f64 },

    #[error("vanishing overlap factor (|<u|v>| = {0:e}) in Bargmann product")]
    ZeroOverlap(f64),

    #[error("initial and final states are orthogonal (|overlap| = {0:e}); total phase undefined")]
    OrthogonalStates(f64),

    #[error("overlap matrix is singular (|det| = {0:e})")]
    SingularOverlapMatrix(f64),

    #[error("norm drift {0:e} in a single integration step")]
    NormDrift(f64),

    #[error("time step too large: spectral radius * dt = {0}")]
    StepTooLarge(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
