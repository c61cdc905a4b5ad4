use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::fidelity::effective_fidelity;
use super::threshold::min_detuning;
use crate::dissipative::{simulate_collective_decay, GammaScaling};
use crate::models::{LambdaParams, TwoLevelParams};
use crate::numerics::{LindbladOptions, C64};
use crate::propagators::{lambda_nonresonant_exact, max_leakage_two_level};
use crate::trajectory::uniform_grid;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    /// Peak `|+⟩ → |−⟩` probability β².
    MaxLeakage,
    /// Minimum over the time grid of the effective-Hamiltonian fidelity.
    FidelityMin,
    /// Δ* at the point's `leak_tol`.
    MinDetuning,
    /// Peak `|u₃⟩` population from `|u₂⟩` in the Λ system.
    RamanMax,
    /// Time average of `P₊` under collective decay.
    AvgPopPlus,
}

impl Metric {
    pub const ALL: [Metric; 5] =
        [Metric::MaxLeakage, Metric::FidelityMin, Metric::MinDetuning, Metric::RamanMax, Metric::AvgPopPlus];

    pub fn as_str(self) -> &'static str {
        match self {
            Metric::MaxLeakage => "max_leakage",
            Metric::FidelityMin => "fidelity_min",
            Metric::MinDetuning => "min_detuning",
            Metric::RamanMax => "raman_max",
            Metric::AvgPopPlus => "avg_pop_plus",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Metric::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::UnknownMetric(s.to_string()))
    }
}

/// Parameters held fixed unless overridden by an axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepBase {
    pub n_atoms: u32,
    pub g: f64,
    pub detuning: f64,
    #[serde(default)]
    pub omega: f64,
    #[serde(default)]
    pub raman_detuning: f64,
    #[serde(default)]
    pub kappa: f64,
    #[serde(default)]
    pub gamma: f64,
    #[serde(default = "default_leak_tol")]
    pub leak_tol: f64,
}

fn default_leak_tol() -> f64 {
    0.01
}

impl Default for SweepBase {
    fn default() -> Self {
        Self {
            n_atoms: 1,
            g: 1.0,
            detuning: 10.0,
            omega: 0.0,
            raman_detuning: 0.0,
            kappa: 0.0,
            gamma: 0.0,
            leak_tol: default_leak_tol(),
        }
    }
}

impl SweepBase {
    const AXES: [&'static str; 8] =
        ["n_atoms", "g", "detuning", "omega", "raman_detuning", "kappa", "gamma", "leak_tol"];

    fn set(&mut self, name: &str, value: f64) -> Result<()> {
        match name {
            "n_atoms" => {
                if !(value >= 1.0 && value.fract() == 0.0 && value <= u32::MAX as f64) {
                    return Err(Error::InvalidParameter {
                        name: "n_atoms",
                        reason: format!("N must be a positive integer, got {value}"),
                    });
                }
                self.n_atoms = value as u32;
            }
            "g" => self.g = value,
            "detuning" => self.detuning = value,
            "omega" => self.omega = value,
            "raman_detuning" => self.raman_detuning = value,
            "kappa" => self.kappa = value,
            "gamma" => self.gamma = value,
            "leak_tol" => self.leak_tol = value,
            other => return Err(Error::InvalidArgument(format!("unknown sweep axis `{other}`"))),
        }
        Ok(())
    }

    fn two_level(&self) -> Result<TwoLevelParams> {
        TwoLevelParams::new(self.n_atoms, self.g, self.detuning)?.with_decay(self.kappa, self.gamma)
    }

    fn lambda(&self) -> Result<LambdaParams> {
        LambdaParams::new(self.n_atoms, self.g, self.omega, self.detuning, self.raman_detuning)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    pub name: String,
    pub values: Vec<f64>,
}

impl SweepAxis {
    pub fn new(name: impl Into<String>, values: Vec<f64>) -> Self {
        Self { name: name.into(), values }
    }
}

/// Cartesian grid of parameter points and the metrics to evaluate on it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    #[serde(default)]
    pub base: SweepBase,
    pub axes: Vec<SweepAxis>,
    pub metrics: Vec<Metric>,
    /// Time window for time-resolved metrics; `None` means 100/g.
    #[serde(default)]
    pub t_max: Option<f64>,
    #[serde(default = "default_grid_points")]
    pub grid_points: usize,
    #[serde(default)]
    pub gamma_scaling: GammaScaling,
}

fn default_grid_points() -> usize {
    2001
}

impl SweepSpec {
    pub fn new(base: SweepBase, axes: Vec<SweepAxis>, metrics: Vec<Metric>) -> Self {
        Self { base, axes, metrics, t_max: None, grid_points: default_grid_points(), gamma_scaling: GammaScaling::Single }
    }

    /// Metrics given by name; unknown names fail with `UnknownMetric`.
    pub fn with_metric_names<S: AsRef<str>>(base: SweepBase, axes: Vec<SweepAxis>, names: &[S]) -> Result<Self> {
        let metrics = names.iter().map(|s| s.as_ref().parse()).collect::<Result<Vec<_>>>()?;
        Ok(Self::new(base, axes, metrics))
    }

    /// Hex SHA-256 of the canonical JSON form.
    pub fn config_hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("sweep definition serializes");
        hex::encode(Sha256::digest(json))
    }

    pub fn validate(&self) -> Result<()> {
        if self.metrics.is_empty() {
            return Err(Error::InvalidArgument("sweep needs at least one metric".into()));
        }
        if self.grid_points < 2 {
            return Err(Error::InsufficientPoints { needed: 2, got: self.grid_points });
        }
        let mut seen = Vec::new();
        for axis in &self.axes {
            if !SweepBase::AXES.contains(&axis.name.as_str()) {
                return Err(Error::InvalidArgument(format!("unknown sweep axis `{}`", axis.name)));
            }
            if seen.contains(&axis.name.as_str()) {
                return Err(Error::InvalidArgument(format!("duplicate sweep axis `{}`", axis.name)));
            }
            if axis.values.is_empty() {
                return Err(Error::InvalidArgument(format!("sweep axis `{}` is empty", axis.name)));
            }
            seen.push(axis.name.as_str());
        }
        if let Some(t) = self.t_max {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::InvalidParameter { name: "t_max", reason: format!("must be positive, got {t}") });
            }
        }
        Ok(())
    }

    /// Points in lexicographic order, the first axis varying slowest.
    fn points(&self) -> Vec<Vec<f64>> {
        let mut points = vec![Vec::new()];
        for axis in &self.axes {
            points = points
                .into_iter()
                .flat_map(|p| {
                    axis.values.iter().map(move |&v| {
                        let mut q = p.clone();
                        q.push(v);
                        q
                    })
                })
                .collect();
        }
        points
    }

    fn times(&self, base: &SweepBase) -> Vec<f64> {
        let t_max = self.t_max.unwrap_or(if base.g > 0.0 { 100.0 / base.g } else { 100.0 });
        uniform_grid(0.0, t_max, self.grid_points)
    }

    fn evaluate(&self, base: &SweepBase, metric: Metric) -> Result<f64> {
        match metric {
            Metric::MaxLeakage => Ok(max_leakage_two_level(&base.two_level()?)),
            Metric::FidelityMin => {
                let p = base.two_level()?;
                Ok(self.times(base).into_iter().map(|t| effective_fidelity(&p, t)).fold(1.0, f64::min))
            }
            Metric::MinDetuning => min_detuning(base.n_atoms, base.g, base.leak_tol),
            Metric::RamanMax => {
                let times = self.times(base);
                let u2 = [C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
                let (_, sol) = lambda_nonresonant_exact(&base.lambda()?, u2, &[0.0])?;
                Ok(sol.max_population(2, &times))
            }
            Metric::AvgPopPlus => {
                let tr = simulate_collective_decay(
                    &base.two_level()?,
                    self.gamma_scaling,
                    &self.times(base),
                    LindbladOptions::default(),
                )?;
                Ok(tr.time_average("pop_plus").expect("series present"))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    /// One value per axis, in axis order.
    pub point: Vec<f64>,
    pub metric: Metric,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub axes: Vec<SweepAxis>,
    pub rows: Vec<SweepRow>,
    pub config_hash: String,
}

impl SweepResult {
    pub fn values(&self, metric: Metric) -> Vec<f64> {
        self.rows.iter().filter(|r| r.metric == metric).map(|r| r.value).collect()
    }
}

/// Evaluates every metric at every grid point. Points are processed in
/// parallel on the current rayon pool; row order does not depend on it.
pub fn sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let points = spec.points();
    let per_point: Vec<Vec<SweepRow>> = points
        .into_par_iter()
        .map(|point| {
            let mut base = spec.base;
            for (axis, &v) in spec.axes.iter().zip(&point) {
                base.set(&axis.name, v)?;
            }
            spec.metrics
                .iter()
                .map(|&metric| Ok(SweepRow { point: point.clone(), metric, value: spec.evaluate(&base, metric)? }))
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(SweepResult {
        axes: spec.axes.clone(),
        rows: per_point.into_iter().flatten().collect(),
        config_hash: spec.config_hash(),
    })
}
