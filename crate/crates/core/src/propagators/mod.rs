//! Closed-form time evolution in the collective subspace, and the ε-expansion
//! of the two-photon-detuned Λ system.
//!
//! Closed forms are given with the identity parts of the generators removed,
//! exactly like the builders in [`crate::models`]. The Λ resonant closed form
//! additionally carries the factor `e^{+iΔt/2}` relative to
//! `exp(−it H)`.

mod lambda;
mod nonresonant;
mod two_level;

pub use lambda::{lambda_resonant_u, max_leakage_lambda_resonant, LambdaClosedForm};
pub use nonresonant::{
    lambda_nonresonant_exact, lambda_nonresonant_perturbative, reduce_variables, Branch,
    ExpansionWarning, NonresonantSolution, ReducedVariables, SolutionKind, LARGE_EPSILON,
};
pub use two_level::{max_leakage_two_level, two_level_u, TwoLevelClosedForm};

/// Points used for "maximum over time" scans of one fast period.
pub const SCAN_POINTS: usize = 4001;

/// Maximum of `f` over `points` uniform samples of `[0, period]`.
///
/// Resolution-limited: the true supremum can exceed the result by the
/// curvature of `f` times the squared half-spacing.
pub fn scan_max(period: f64, points: usize, f: impl Fn(f64) -> f64) -> f64 {
    crate::trajectory::uniform_grid(0.0, period, points)
        .into_iter()
        .map(f)
        .fold(f64::NEG_INFINITY, f64::max)
}
