//! Hamiltonians and collective states of the two-level and Λ ensembles.
//!
//! Collective-subspace matrices use fixed basis orderings, see [`BasisLabel`]:
//! `(|+⟩, |−⟩)` for the two-level family (plus `|G0⟩` for decay models) and
//! `(|u₁⟩, |u₂⟩, |u₃⟩)` for the Λ family.
//!
//! Full-space operators act on `atom₁ ⊗ … ⊗ atom_N ⊗ field`, atom 1 being the
//! slowest index. Atomic levels are indexed `g = 0`, `e = 1`, `s = 2`.

mod hamiltonians;
mod params;
mod space;

pub use hamiltonians::{
    lambda_full_h, lambda_global_shift, lambda_nonresonant_h, lambda_resonant_h,
    two_level_collective_h, two_level_effective_h, two_level_full_h, two_level_global_shift,
    with_global_shift,
};
pub use params::{BasisLabel, LambdaParams, TwoLevelParams};
pub use space::{
    collective_state, AtomLevels, CollectiveKind, FullSpace, DEFAULT_FOCK_CUTOFF,
    DEFAULT_STATE_DIM_CAP, LEVEL_E, LEVEL_G, LEVEL_S, MAX_ORACLE_ATOMS,
};
