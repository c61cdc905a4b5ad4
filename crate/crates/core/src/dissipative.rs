//! Open-system dynamics of the two-level ensemble under cavity loss and
//! spontaneous emission.

use serde::{Deserialize, Serialize};

use crate::models::{
    two_level_collective_h, two_level_full_h, two_level_global_shift, with_global_shift, AtomLevels,
    FullSpace, TwoLevelParams, LEVEL_E, LEVEL_G, MAX_ORACLE_ATOMS,
};
use crate::numerics::{integrate_lindblad, ComplexMatrix, LindbladOptions, LindbladSolution, C64};
use crate::trajectory::Trajectory;
use crate::{Error, Result};

/// Rate multiplier `s` on the emission channel `|G0⟩⟨+|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaScaling {
    /// `s = 1`: the symmetric state decays at the single-atom rate.
    #[default]
    Single,
    /// `s = N`: superradiant rate.
    Collective,
}

impl GammaScaling {
    pub fn factor(self, n_atoms: u32) -> f64 {
        match self {
            GammaScaling::Single => 1.0,
            GammaScaling::Collective => n_atoms as f64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum DecayMode {
    Collective3,
    Full { fock_cutoff: usize },
}

/// Which master equation to integrate. The rates κ and γ live on
/// [`TwoLevelParams`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecayModel {
    #[serde(flatten)]
    pub mode: DecayMode,
    #[serde(default)]
    pub gamma_scaling: GammaScaling,
}

impl DecayModel {
    pub fn collective(gamma_scaling: GammaScaling) -> Self {
        Self { mode: DecayMode::Collective3, gamma_scaling }
    }

    pub fn full(fock_cutoff: usize) -> Self {
        Self { mode: DecayMode::Full { fock_cutoff }, gamma_scaling: GammaScaling::Single }
    }

    pub fn validate(&self, p: &TwoLevelParams) -> Result<()> {
        if let DecayMode::Full { fock_cutoff } = self.mode {
            if p.n_atoms > MAX_ORACLE_ATOMS {
                return Err(Error::DimensionCap {
                    dim: p.n_atoms as usize,
                    cap: MAX_ORACLE_ATOMS as usize,
                });
            }
            if fock_cutoff == 0 {
                return Err(Error::InvalidParameter {
                    name: "fock_cutoff",
                    reason: "must be at least 1".into(),
                });
            }
        }
        Ok(())
    }
}

impl Default for DecayModel {
    fn default() -> Self {
        Self::collective(GammaScaling::Single)
    }
}

const COLLECTIVE_SERIES: [(&str, usize); 3] = [("pop_plus", 0), ("pop_minus", 1), ("pop_ground", 2)];

fn projector(i: usize, dim: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim, dim);
    m[(i, i)] = C64::new(1.0, 0.0);
    m
}

fn transition(to: usize, from: usize, dim: usize, amp: f64) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim, dim);
    m[(to, from)] = C64::new(amp, 0.0);
    m
}

/// Density-matrix evolution on `(|+⟩, |−⟩, |G0⟩)` starting from `|+⟩`.
pub fn collective_decay_solution(
    p: &TwoLevelParams,
    gamma_scaling: GammaScaling,
    t_grid: &[f64],
    options: LindbladOptions,
) -> Result<LindbladSolution> {
    p.validate()?;
    let h2 = two_level_collective_h(p);
    let mut h = ComplexMatrix::zeros(3, 3);
    for i in 0..2 {
        for j in 0..2 {
            h[(i, j)] = h2[(i, j)];
        }
    }
    let gamma = gamma_scaling.factor(p.n_atoms) * p.gamma;
    let mut ops = Vec::new();
    if p.kappa > 0.0 {
        ops.push(transition(2, 1, 3, p.kappa.sqrt()));
    }
    if gamma > 0.0 {
        ops.push(transition(2, 0, 3, gamma.sqrt()));
    }
    integrate_lindblad(&projector(0, 3), &h, &ops, t_grid, options)
}

/// `P₊`, `P₋`, `P_G0` for the three-state collective model.
pub fn simulate_collective_decay(
    p: &TwoLevelParams,
    gamma_scaling: GammaScaling,
    t_grid: &[f64],
    options: LindbladOptions,
) -> Result<Trajectory> {
    let sol = collective_decay_solution(p, gamma_scaling, t_grid, options)?;
    let tr = sol
        .trajectory(&COLLECTIVE_SERIES)?
        .with_meta("model", "collective3")
        .with_meta("gamma_scaling", gamma_scaling.factor(p.n_atoms));
    tr.validate()?;
    Ok(tr)
}

/// Full-space evolution plus the `(|+⟩, |−⟩, |G0⟩)` embedding.
pub struct FullDecayRun {
    pub solution: LindbladSolution,
    pub basis: [ComplexMatrix; 3],
}

impl FullDecayRun {
    /// Population outside the collective three-state span.
    pub fn leakage(&self) -> Vec<f64> {
        let inside: Vec<Vec<f64>> = self.basis.iter().map(|p| self.solution.expectation(p)).collect();
        (0..self.solution.times.len())
            .map(|k| 1.0 - inside.iter().map(|v| v[k]).sum::<f64>())
            .collect()
    }
}

/// Full-space Lindblad evolution with `√κ a` and per-atom `√γ σ_j⁻`.
pub fn full_decay_solution(
    p: &TwoLevelParams,
    fock_cutoff: usize,
    t_grid: &[f64],
    options: LindbladOptions,
) -> Result<FullDecayRun> {
    p.validate()?;
    DecayModel::full(fock_cutoff).validate(p)?;
    let space = FullSpace::oracle(p.n_atoms, AtomLevels::Two, fock_cutoff)?;
    // remove the large common energy of the single-excitation block
    let h = with_global_shift(&two_level_full_h(p, fock_cutoff)?, -two_level_global_shift(p));

    let mut ops = Vec::new();
    if p.kappa > 0.0 {
        ops.push(space.annihilation().scale_real(p.kappa.sqrt()));
    }
    if p.gamma > 0.0 {
        let lower = space.transition(LEVEL_G, LEVEL_E);
        for j in 0..p.n_atoms as usize {
            ops.push(space.atom_op(j, &lower).scale_real(p.gamma.sqrt()));
        }
    }
    let basis = space.collective_basis()?;
    let rho0 = basis[0].projector();
    let solution = integrate_lindblad(&rho0, &h, &ops, t_grid, options)?;
    Ok(FullDecayRun { solution, basis: basis.map(|v| v.projector()) })
}

/// Full-space oracle reporting `P₊`, `P₋`, `P_G0` and the out-of-span
/// population `leak`. Requires N ≤ 3.
pub fn simulate_full_lindblad(
    p: &TwoLevelParams,
    fock_cutoff: usize,
    t_grid: &[f64],
    options: LindbladOptions,
) -> Result<Trajectory> {
    let run = full_decay_solution(p, fock_cutoff, t_grid, options)?;
    let mut tr = Trajectory::new(t_grid.to_vec());
    for ((name, _), proj) in COLLECTIVE_SERIES.iter().zip(&run.basis) {
        tr.push_series(*name, run.solution.expectation(proj))?;
    }
    let leak = run.leakage();
    let max_leak = leak.iter().copied().fold(0.0, f64::max);
    let span = t_grid.last().copied().unwrap_or(0.0) - t_grid.first().copied().unwrap_or(0.0);
    tr.push_series("leak", leak)?;
    let tr = tr
        .with_meta("model", "full")
        .with_meta("fock_cutoff", fock_cutoff)
        .with_meta("rk4_step", run.solution.step)
        .with_meta("max_trace_drift", run.solution.max_trace_drift())
        .with_meta("max_leakage", max_leak)
        .with_meta("leakage_exceeds_gamma_t", max_leak > p.gamma * span * 1.1 + 1e-10);
    tr.validate()?;
    Ok(tr)
}

/// Dispatches on [`DecayModel::mode`].
pub fn simulate_decay(
    p: &TwoLevelParams,
    model: &DecayModel,
    t_grid: &[f64],
    options: LindbladOptions,
) -> Result<Trajectory> {
    model.validate(p)?;
    match model.mode {
        DecayMode::Collective3 => simulate_collective_decay(p, model.gamma_scaling, t_grid, options),
        DecayMode::Full { fock_cutoff } => simulate_full_lindblad(p, fock_cutoff, t_grid, options),
    }
}
