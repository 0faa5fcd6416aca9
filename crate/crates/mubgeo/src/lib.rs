//! Mutually unbiased bases (MUB) in prime dimension d ≠ 2, the dual affine
//! plane geometry (DAPG) they realize, the d² maximally entangled line-state
//! basis built two independent ways, and the Mean King tracking protocol.
//!
//! Everything is desk-scale and exact: amplitudes are d-th roots of unity
//! scaled by powers of 1/√d, tracked both as complex doubles and as an exact
//! phase type ([`linalg::PhaseAmp`]).

pub mod collective;
pub mod dapg;
pub mod entangled;
mod error;
pub mod linalg;
pub mod line_ops;
pub mod mean_king;
pub mod mub;
pub mod prime_field;
pub mod verify;

pub use error::Error;

/// Default absolute per-entry comparison tolerance.
pub const TOL: f64 = 1e-9;
/// Tolerance for identities expected to hold at machine precision.
pub const TOL_EXACT: f64 = 1e-12;
/// Tolerance for aggregate sweeps (Gram matrices, overlap tables).
pub const TOL_SWEEP: f64 = 1e-10;
