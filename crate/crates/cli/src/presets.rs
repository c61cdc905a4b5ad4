//! Parameter bundles for the three reproduced figures.

use std::fmt;
use std::str::FromStr;

use detune_core::{LambdaParams, TwoLevelParams};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FigureId {
    /// Two-level ensemble with cavity and atomic decay, Δ = 10g.
    Fig2,
    /// Λ ensemble at two-photon resonance, Ω = g, Δ = 10g.
    Fig4,
    /// Λ ensemble off two-photon resonance, Ω = 10g, Δ = 100g, δ = 0.3g.
    Fig5,
}

impl FigureId {
    pub fn as_str(self) -> &'static str {
        match self {
            FigureId::Fig2 => "fig2",
            FigureId::Fig4 => "fig4",
            FigureId::Fig5 => "fig5",
        }
    }

    pub fn preset(self) -> Preset {
        match self {
            FigureId::Fig2 => Preset {
                figure: self,
                g: 1.0,
                detuning: 10.0,
                kappa: 0.1,
                gamma: 0.01,
                omega: 0.0,
                raman_detuning: 0.0,
                n_list: vec![1, 5, 25],
                t_max: 100.0,
                grid_points: 2001,
            },
            FigureId::Fig4 => Preset {
                figure: self,
                g: 1.0,
                detuning: 10.0,
                kappa: 0.0,
                gamma: 0.0,
                omega: 1.0,
                raman_detuning: 0.0,
                n_list: vec![1, 5, 25],
                t_max: 10.0,
                grid_points: 4001,
            },
            FigureId::Fig5 => Preset {
                figure: self,
                g: 1.0,
                detuning: 100.0,
                kappa: 0.0,
                gamma: 0.0,
                omega: 10.0,
                raman_detuning: 0.3,
                n_list: vec![1, 5, 25],
                t_max: 100.0,
                grid_points: 20001,
            },
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FigureId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "fig2" => Ok(FigureId::Fig2),
            "fig4" => Ok(FigureId::Fig4),
            "fig5" => Ok(FigureId::Fig5),
            other => Err(format!("unknown figure `{other}` (expected fig2, fig4 or fig5)")),
        }
    }
}

/// Caption parameters in units of g, plus the default time window.
#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub figure: FigureId,
    pub g: f64,
    pub detuning: f64,
    pub kappa: f64,
    pub gamma: f64,
    pub omega: f64,
    pub raman_detuning: f64,
    pub n_list: Vec<u32>,
    pub t_max: f64,
    pub grid_points: usize,
}

impl Preset {
    pub fn two_level(&self, n_atoms: u32) -> detune_core::Result<TwoLevelParams> {
        TwoLevelParams::new(n_atoms, self.g, self.detuning)?.with_decay(self.kappa, self.gamma)
    }

    pub fn lambda(&self, n_atoms: u32) -> detune_core::Result<LambdaParams> {
        LambdaParams::new(n_atoms, self.g, self.omega, self.detuning, self.raman_detuning)
    }
}
