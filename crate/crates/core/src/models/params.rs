use serde::{Deserialize, Serialize};

use crate::{Error, Result};

fn check_atoms(n_atoms: u32) -> Result<()> {
    if n_atoms < 1 {
        return Err(Error::InvalidParameter { name: "n_atoms", reason: "N must be ≥ 1".into() });
    }
    Ok(())
}

fn check_finite(name: &'static str, x: f64) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::InvalidParameter { name, reason: format!("must be finite, got {x}") });
    }
    Ok(())
}

fn check_non_negative(name: &'static str, x: f64) -> Result<()> {
    check_finite(name, x)?;
    if x < 0.0 {
        return Err(Error::InvalidParameter { name, reason: format!("must be ≥ 0, got {x}") });
    }
    Ok(())
}

fn check_nonzero(name: &'static str, x: f64) -> Result<()> {
    check_finite(name, x)?;
    if x == 0.0 {
        return Err(Error::InvalidParameter { name, reason: "must be nonzero".into() });
    }
    Ok(())
}

/// N two-level atoms detuned by Δ from a cavity mode.
///
/// `g = 0` is accepted as the decoupled limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoLevelParams {
    pub n_atoms: u32,
    /// Single-atom coupling.
    pub g: f64,
    /// Atom–cavity detuning Δ.
    pub detuning: f64,
    /// Cavity field decay rate.
    pub kappa: f64,
    /// Atomic spontaneous emission rate.
    pub gamma: f64,
}

impl TwoLevelParams {
    pub fn new(n_atoms: u32, g: f64, detuning: f64) -> Result<Self> {
        let p = Self { n_atoms, g, detuning, kappa: 0.0, gamma: 0.0 };
        p.validate()?;
        Ok(p)
    }

    pub fn with_decay(mut self, kappa: f64, gamma: f64) -> Result<Self> {
        self.kappa = kappa;
        self.gamma = gamma;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        check_atoms(self.n_atoms)?;
        check_non_negative("g", self.g)?;
        check_nonzero("detuning", self.detuning)?;
        check_non_negative("kappa", self.kappa)?;
        check_non_negative("gamma", self.gamma)
    }

    /// √N·g, the only way N and g enter the collective dynamics.
    pub fn collective_coupling(&self) -> f64 {
        (self.n_atoms as f64).sqrt() * self.g
    }

    /// θ = 2√N·g/Δ.
    pub fn theta(&self) -> f64 {
        2.0 * self.collective_coupling() / self.detuning
    }
}

/// N Λ atoms: cavity on |g⟩↔|e⟩ (detuning Δ+δ), classical drive Ω on
/// |s⟩↔|e⟩ (detuning Δ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaParams {
    pub n_atoms: u32,
    pub g: f64,
    /// Classical Rabi frequency Ω.
    pub omega: f64,
    /// Classical-field detuning Δ.
    pub detuning: f64,
    /// Two-photon (Raman) detuning δ; zero means two-photon resonance.
    pub raman_detuning: f64,
}

impl LambdaParams {
    pub fn new(n_atoms: u32, g: f64, omega: f64, detuning: f64, raman_detuning: f64) -> Result<Self> {
        let p = Self { n_atoms, g, omega, detuning, raman_detuning };
        p.validate()?;
        Ok(p)
    }

    pub fn resonant(n_atoms: u32, g: f64, omega: f64, detuning: f64) -> Result<Self> {
        Self::new(n_atoms, g, omega, detuning, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        check_atoms(self.n_atoms)?;
        check_non_negative("g", self.g)?;
        check_non_negative("omega", self.omega)?;
        check_nonzero("detuning", self.detuning)?;
        check_finite("raman_detuning", self.raman_detuning)
    }

    pub fn collective_coupling(&self) -> f64 {
        (self.n_atoms as f64).sqrt() * self.g
    }

    /// Collective Raman Rabi frequency √N·g·Ω/Δ.
    pub fn raman_rabi(&self) -> f64 {
        self.collective_coupling() * self.omega / self.detuning
    }

    pub fn with_atoms(mut self, n_atoms: u32) -> Result<Self> {
        self.n_atoms = n_atoms;
        self.validate()?;
        Ok(self)
    }
}

/// Collective basis states, in matrix order within each family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasisLabel {
    /// |E⟩|0⟩
    Plus,
    /// |G⟩|1⟩
    Minus,
    /// |G⟩|0⟩, the absorbing state of the decay models.
    GroundVacuum,
    /// |E⟩|0⟩
    U1,
    /// |G⟩|1⟩
    U2,
    /// |S⟩|0⟩
    U3,
}

impl BasisLabel {
    pub const TWO_LEVEL: [BasisLabel; 3] = [Self::Plus, Self::Minus, Self::GroundVacuum];
    pub const LAMBDA: [BasisLabel; 3] = [Self::U1, Self::U2, Self::U3];

    /// Position within its family's matrices.
    pub fn index(self) -> usize {
        match self {
            Self::Plus | Self::U1 => 0,
            Self::Minus | Self::U2 => 1,
            Self::GroundVacuum | Self::U3 => 2,
        }
    }

    /// Column name used for population series.
    pub fn population_name(self) -> &'static str {
        match self {
            Self::Plus => "pop_plus",
            Self::Minus => "pop_minus",
            Self::GroundVacuum => "pop_ground",
            Self::U1 => "pop_u1",
            Self::U2 => "pop_u2",
            Self::U3 => "pop_u3",
        }
    }
}
