//! Dynamics of N-atom ensembles detuned from a cavity mode.
//!
//! The crate is organised bottom-up:
//!
//! * [`numerics`] - dense complex matrices, Hermitian eigensolver, unitary
//!   propagators, a fixed-step RK4 Lindblad integrator and a companion-matrix
//!   cubic solver.
//! * [`models`] - Hamiltonians of the two-level and Λ ensembles, both in the
//!   single-excitation collective subspace and in the full tensor-product
//!   space used as a brute-force oracle for small N.
//! * [`propagators`] - closed-form time evolution in the collective subspace
//!   and the ε-expansion of the two-photon-detuned Λ system.
//! * [`dissipative`] - cavity and atomic decay via the Lindblad equation.
//! * [`analysis`] - leakage metrics, minimal detunings, the √N scaling fit,
//!   condition reports and parameter sweeps.
//!
//! All quantities are expressed in units where the single-atom coupling sets
//! the scale (g = 1 in the presets); times are in units of 1/g.

pub mod analysis;
pub mod dissipative;
pub mod error;
pub mod models;
pub mod numerics;
pub mod propagators;
pub mod trajectory;

pub use error::{Error, Result};
pub use models::{BasisLabel, LambdaParams, TwoLevelParams};
pub use numerics::{C64, ComplexMatrix, ComplexVector, EigDecomposition};
pub use trajectory::{Series, Trajectory};
