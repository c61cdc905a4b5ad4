use crate::models::LambdaParams;
use crate::numerics::{ComplexMatrix, C64};
use crate::{Error, Result};

/// Constants of the Λ closed form at two-photon resonance.
///
/// With `D = √(4Ng² + 4Ω² + Δ²)`: `α = D/Δ`, `β = 2√N g/D`, `γ = 2Ω/D`,
/// `η = √N g/Ω` (infinite when Ω = 0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaClosedForm {
    pub eta: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    detuning: f64,
    /// Weights of the bright-state propagator in U₂₂, U₃₃ and U₂₃; written
    /// without η so that Ω = 0 needs no special casing.
    w_cavity: f64,
    w_drive: f64,
    w_cross: f64,
}

impl LambdaClosedForm {
    pub fn new(p: &LambdaParams) -> Self {
        let c = p.collective_coupling();
        let w = p.omega;
        let d = p.detuning;
        let big_d = (4.0 * c * c + 4.0 * w * w + d * d).sqrt();
        let r2 = c * c + w * w;
        let (w_cavity, w_drive, w_cross) =
            if r2 > 0.0 { (c * c / r2, w * w / r2, c * w / r2) } else { (1.0, 0.0, 0.0) };
        Self {
            eta: if w > 0.0 { c / w } else { f64::INFINITY },
            alpha: big_d / d,
            beta: 2.0 * c / big_d,
            gamma: 2.0 * w / big_d,
            detuning: d,
            w_cavity,
            w_drive,
            w_cross,
        }
    }

    pub fn fast_period(&self) -> f64 {
        2.0 * std::f64::consts::PI / (self.alpha * self.detuning).abs()
    }

    /// `exp(−itH)·e^{+iΔt/2}` on `(|u₁⟩, |u₂⟩, |u₃⟩)`.
    ///
    /// The bright combination `√N g|u₂⟩ + Ω|u₃⟩` oscillates against `|u₁⟩`;
    /// the dark combination only picks up `e^{iΔt/2}`.
    pub fn propagator(&self, t: f64) -> ComplexMatrix {
        let x = 0.5 * self.alpha * self.detuning * t;
        let (s, c) = x.sin_cos();
        let a_minus = C64::new(c, -s / self.alpha);
        let a_plus = C64::new(c, s / self.alpha);
        let dark = C64::from_polar(1.0, 0.5 * self.detuning * t);
        let b_beta = C64::new(0.0, -self.beta * s);
        let b_gamma = C64::new(0.0, -self.gamma * s);
        let u22 = a_plus * self.w_cavity + dark * self.w_drive;
        let u33 = a_plus * self.w_drive + dark * self.w_cavity;
        let u23 = (a_plus - dark) * self.w_cross;
        ComplexMatrix::from_rows(&[
            vec![a_minus, b_beta, b_gamma],
            vec![b_beta, u22, u23],
            vec![b_gamma, u23, u33],
        ])
        .expect("3x3")
    }
}

/// Closed-form Λ propagator at two-photon resonance (δ = 0), up to the global
/// factor `e^{−iΔt/2}`.
pub fn lambda_resonant_u(p: &LambdaParams, t: f64) -> Result<ComplexMatrix> {
    if p.raman_detuning != 0.0 {
        return Err(Error::ExpectedResonance(p.raman_detuning));
    }
    Ok(LambdaClosedForm::new(p).propagator(t))
}

/// Peak `|u₂⟩ → |u₁⟩` population, `β² = 4Ng²/(4Ng² + 4Ω² + Δ²)`.
pub fn max_leakage_lambda_resonant(p: &LambdaParams) -> f64 {
    let beta = LambdaClosedForm::new(p).beta;
    beta * beta
}
