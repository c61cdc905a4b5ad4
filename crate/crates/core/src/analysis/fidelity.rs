use crate::models::TwoLevelParams;
use crate::numerics::{ComplexVector, C64};
use crate::propagators::two_level_u;
use crate::{Error, Result};

/// Exact state on `(|+⟩, |−⟩)` in the frame rotating with the bare energies
/// ±Δ/2.
pub fn interaction_state(p: &TwoLevelParams, psi0: &ComplexVector, t: f64) -> ComplexVector {
    let psi = two_level_u(p, t).matvec(psi0);
    let half = 0.5 * p.detuning * t;
    ComplexVector::new(vec![psi[0] * C64::from_polar(1.0, half), psi[1] * C64::from_polar(1.0, -half)])
}

/// State under the Stark shifts `diag(Ng²/Δ, −Ng²/Δ)` alone.
pub fn effective_state(p: &TwoLevelParams, psi0: &ComplexVector, t: f64) -> ComplexVector {
    let shift = p.n_atoms as f64 * p.g * p.g / p.detuning * t;
    ComplexVector::new(vec![psi0[0] * C64::from_polar(1.0, -shift), psi0[1] * C64::from_polar(1.0, shift)])
}

/// `|⟨ψ_exact(t)|ψ_eff(t)⟩|²` from a normalized initial state on `(|+⟩, |−⟩)`.
pub fn effective_fidelity_from(p: &TwoLevelParams, psi0: &ComplexVector, t: f64) -> Result<f64> {
    p.validate()?;
    if psi0.dim() != 2 || !psi0.is_normalized() {
        return Err(Error::NonPhysicalState("initial state must be a normalized 2-vector".into()));
    }
    let f = interaction_state(p, psi0, t).inner(&effective_state(p, psi0, t)).norm_sqr();
    Ok(f.clamp(0.0, 1.0))
}

/// Fidelity of the effective dynamics starting from `|+⟩`.
pub fn effective_fidelity(p: &TwoLevelParams, t: f64) -> f64 {
    effective_fidelity_from(p, &ComplexVector::basis(2, 0), t).expect("validated parameters")
}
