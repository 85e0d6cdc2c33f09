//! Superradiant emission of `N` two-level atoms.
//!
//! Two regimes are covered:
//!
//! * the small-sample (Dicke) limit, where the ensemble descends the ladder of
//!   symmetric Dicke states `|J, M>` and emits a burst whose peak grows as `N²`
//!   ([`small_sample`]);
//! * far-distant, non-interacting atoms whose emission is conditioned on photon
//!   detections in the forward direction, where every click applies the
//!   collective lowering operator `S₋` ([`reduced`], [`trace_distance`]).
//!
//! Every quantity is available along independent routes that check each other:
//! exact combinatorics ([`dicke`]), the class-indexed reduced state
//! ([`reduced`]) and brute-force density matrices on the full `2^N` space
//! ([`brute`]).
//!
//! Conventions used throughout:
//!
//! * computational basis index: atom 1 is the most significant bit, a set bit
//!   means the atom is in `|g>`; the ground-state count of a basis state is the
//!   population count of its index;
//! * `gamma` is the half decay rate `γ = Γ/2`, so a single atom decays as
//!   `exp(-2γt)`;
//! * all cascades start from `t = 0` and measurement times are absolute.

pub mod brute;
pub mod cascade;
pub mod combinatorics;
pub mod crosscheck;
pub mod dicke;
mod error;
pub mod figures;
mod ode;
pub mod reduced;
pub mod small_sample;
pub mod trace_distance;

pub use cascade::{CascadeRecord, Segment};
pub use dicke::{DickeLabel, PathCount};
pub use error::{Error, Result};
pub use reduced::ReducedState;
pub use small_sample::PopulationCurve;

/// Largest `N` for which explicit state vectors are built.
pub const MAX_VECTOR_ATOMS: usize = 12;

/// Largest `N` for which full `2^N × 2^N` density matrices are built.
pub const MAX_DENSITY_ATOMS: usize = 8;
