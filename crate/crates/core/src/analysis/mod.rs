//! Leakage metrics, minimal detunings, the √N scaling fit, validity-condition
//! reports and parameter sweeps.

mod conditions;
mod fidelity;
mod leakage;
mod sweep;
mod threshold;

pub use conditions::{condition_report, ConditionRatio, ConditionReport, ModelParams, DEFAULT_THRESHOLD};
pub use fidelity::{effective_fidelity, effective_fidelity_from, effective_state, interaction_state};
pub use leakage::{max_transfer_scan, TransferScan};
pub use sweep::{sweep, Metric, SweepAxis, SweepBase, SweepResult, SweepRow, SweepSpec};
pub use threshold::{
    min_detuning, min_detuning_bisection, scaling_exponent, scaling_exponent_with, scan_leakage,
};
