use std::f64::consts::PI;

use crate::models::TwoLevelParams;
use crate::numerics::{ComplexMatrix, C64};

/// Dimensionless constants of the two-level closed form.
///
/// `theta` and `beta` carry the sign of Δ so that the closed form stays exact
/// for negative detuning; `beta² = theta²/(1 + theta²)` regardless.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelClosedForm {
    /// θ = 2√N·g/Δ
    pub theta: f64,
    /// α = √(1 + θ²) ≥ 1
    pub alpha: f64,
    /// β = θ/α, |β| < 1
    pub beta: f64,
    detuning: f64,
}

impl TwoLevelClosedForm {
    pub fn new(p: &TwoLevelParams) -> Self {
        let theta = p.theta();
        let alpha = (1.0 + theta * theta).sqrt();
        Self { theta, alpha, beta: theta / alpha, detuning: p.detuning }
    }

    /// Half the phase advance αΔt/2 of the fast oscillation.
    pub fn half_phase(&self, t: f64) -> f64 {
        0.5 * self.alpha * self.detuning * t
    }

    /// Period 2π/|αΔ| of `|U₂₁|²`'s parent oscillation.
    pub fn fast_period(&self) -> f64 {
        2.0 * PI / (self.alpha * self.detuning).abs()
    }

    /// `[[A⁻, B], [B, A⁺]]` with `A^± = cos x ± (i/α) sin x`, `B = −iβ sin x`.
    pub fn propagator(&self, t: f64) -> ComplexMatrix {
        let (s, c) = self.half_phase(t).sin_cos();
        let a_minus = C64::new(c, -s / self.alpha);
        let a_plus = C64::new(c, s / self.alpha);
        let b = C64::new(0.0, -self.beta * s);
        ComplexMatrix::from_rows(&[vec![a_minus, b], vec![b, a_plus]]).expect("2x2")
    }
}

/// Exact propagator on `(|+⟩, |−⟩)`, global phase from the identity part
/// dropped. Equals `exp(−it·two_level_collective_h)`.
pub fn two_level_u(p: &TwoLevelParams, t: f64) -> ComplexMatrix {
    TwoLevelClosedForm::new(p).propagator(t)
}

/// Peak `|+⟩ → |−⟩` transfer probability β² = θ²/(1 + θ²).
pub fn max_leakage_two_level(p: &TwoLevelParams) -> f64 {
    let theta = p.theta();
    let theta2 = theta * theta;
    theta2 / (1.0 + theta2)
}
