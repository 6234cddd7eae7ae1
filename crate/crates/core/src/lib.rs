//! Geometric phases of one-dimensional Bloch bands.
//!
//! The central quantity is the Pancharatnam-Zak phase of a band, computed as
//! the argument of a discrete Bargmann invariant over the Brillouin zone. It
//! is independent of the phases the eigensolver assigns to individual Bloch
//! vectors, unlike the open-path Zak phase, which is also provided for
//! comparison. Filled-band (many-fermion) phases and a direct time-evolution
//! cross-check build on the same chain.

pub mod adiabatic;
pub mod error;
pub mod manybody;
pub mod models;
pub mod numerics;
pub mod phase;

pub use error::{Error, Result};
pub use models::{BasisConvention, BlochModel, ContinuumModel, Embedding, KitaevModel, SshModel};
pub use numerics::{wrap_angle, Angle, C64};
pub use phase::{
    bargmann_invariant, build_chain, pancharatnam_zak, zak_phase, BargmannChain, PhaseKind, PhaseResult, ZakEndpoint,
};
