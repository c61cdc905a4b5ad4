use serde::Serialize;

use crate::models::{LambdaParams, TwoLevelParams};
use crate::{Error, Result};

/// Ratio that "≫" is taken to mean when no other value is given.
pub const DEFAULT_THRESHOLD: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelParams {
    TwoLevel(TwoLevelParams),
    Lambda(LambdaParams),
}

impl From<TwoLevelParams> for ModelParams {
    fn from(p: TwoLevelParams) -> Self {
        ModelParams::TwoLevel(p)
    }
}

impl From<LambdaParams> for ModelParams {
    fn from(p: LambdaParams) -> Self {
        ModelParams::Lambda(p)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionRatio {
    pub name: &'static str,
    pub condition: &'static str,
    pub value: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub threshold: f64,
    pub ratios: Vec<ConditionRatio>,
    /// Δ/g, the single-atom criterion.
    pub legacy_ratio: f64,
    pub legacy_pass: bool,
}

impl ConditionReport {
    pub fn get(&self, name: &str) -> Option<&ConditionRatio> {
        self.ratios.iter().find(|r| r.name == name)
    }

    /// Verdict on Δ/(√N g).
    pub fn collective_pass(&self) -> bool {
        self.ratios[0].pass
    }

    pub fn all_pass(&self) -> bool {
        self.ratios.iter().all(|r| r.pass)
    }
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        if num == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        num / den
    }
}

/// Dimensionless large-detuning ratios with pass/fail at `threshold`.
///
/// Two-level: Δ/(√N g). Λ: additionally Δ/Ω and δ/(√N gΩ/Δ). Detunings enter
/// by magnitude. A vanishing denominator gives an infinite ratio.
pub fn condition_report(params: impl Into<ModelParams>, threshold: f64) -> Result<ConditionReport> {
    if !(threshold > 1.0) || !threshold.is_finite() {
        return Err(Error::InvalidParameter {
            name: "threshold",
            reason: format!("must be a finite number above 1, got {threshold}"),
        });
    }
    let verdict = |x: f64| x >= threshold;
    let mut ratios = Vec::new();
    let mut push = |name, condition, value: f64| {
        ratios.push(ConditionRatio { name, condition, value, pass: verdict(value) })
    };
    let (detuning, g) = match params.into() {
        ModelParams::TwoLevel(p) => {
            push("delta_over_sqrtn_g", "Δ ≫ √N g", ratio(p.detuning.abs(), p.collective_coupling()));
            (p.detuning, p.g)
        }
        ModelParams::Lambda(p) => {
            let d = p.detuning.abs();
            push("delta_over_sqrtn_g", "Δ ≫ √N g", ratio(d, p.collective_coupling()));
            push("delta_over_omega", "Δ ≫ Ω", ratio(d, p.omega.abs()));
            push(
                "raman_ratio",
                "δ ≫ √N gΩ/Δ",
                ratio(p.raman_detuning.abs(), p.raman_rabi().abs()),
            );
            (p.detuning, p.g)
        }
    };
    let legacy_ratio = ratio(detuning.abs(), g);
    Ok(ConditionReport { threshold, ratios, legacy_ratio, legacy_pass: verdict(legacy_ratio) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn collective_condition_is_stricter() {
        let r = condition_report(TwoLevelParams::new(25, 1.0, 10.0).unwrap(), 10.0).unwrap();
        assert!(r.legacy_pass);
        assert!(!r.collective_pass());
        assert_eq!(r.get("delta_over_sqrtn_g").unwrap().value, 2.0);
        assert_eq!(r.ratios.len(), 1);
    }

    #[test]
    fn single_atom_agrees() {
        let r = condition_report(TwoLevelParams::new(1, 1.0, 10.0).unwrap(), 10.0).unwrap();
        assert!(r.legacy_pass && r.collective_pass());
    }

    #[test]
    fn lambda_raman_ratio() {
        let p = LambdaParams::new(25, 1.0, 10.0, 100.0, 0.3).unwrap();
        let r = condition_report(p, DEFAULT_THRESHOLD).unwrap();
        let raman = r.get("raman_ratio").unwrap();
        assert!((raman.value - 0.6).abs() < 1e-12);
        assert!(!raman.pass);
        assert_eq!(r.get("delta_over_omega").unwrap().value, 10.0);
        assert!(r.get("delta_over_omega").unwrap().pass);
        assert!(r.get("delta_over_sqrtn_g").unwrap().pass);
    }

    #[test]
    fn threshold_must_exceed_one() {
        let p = TwoLevelParams::new(1, 1.0, 10.0).unwrap();
        assert!(condition_report(p, 1.0).is_err());
        assert!(condition_report(p, f64::NAN).is_err());
    }

    #[test]
    fn decoupled_ratio_is_infinite() {
        let r = condition_report(TwoLevelParams::new(3, 0.0, 10.0).unwrap(), 10.0).unwrap();
        assert!(r.ratios[0].value.is_infinite() && r.collective_pass());
    }

    proptest! {
        #[test]
        fn discrepancy_witness(threshold in 1.5f64..20.0, extra in 0u32..50) {
            let n = (threshold * threshold).ceil() as u32 + extra;
            let p = TwoLevelParams::new(n, 1.0, threshold).unwrap();
            let r = condition_report(p, threshold).unwrap();
            prop_assert!(r.legacy_pass);
            prop_assert!(!r.collective_pass());
        }
    }
}
