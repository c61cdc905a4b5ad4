use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A named time series sampled on the owning trajectory's grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub name: String,
    pub values: Vec<f64>,
}

/// Time grid plus named population/expectation series.
///
/// Series order is insertion order and is what gets written to disk.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub series: Vec<Series>,
    pub metadata: BTreeMap<String, String>,
}

/// Slack allowed on populations for accumulated integration error.
pub const POPULATION_SLACK: f64 = 1e-8;

impl Trajectory {
    pub fn new(times: Vec<f64>) -> Self {
        Self { times, series: Vec::new(), metadata: BTreeMap::new() }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn push_series(&mut self, name: impl Into<String>, values: Vec<f64>) -> Result<()> {
        let name = name.into();
        if values.len() != self.times.len() {
            return Err(Error::DimensionMismatch(format!(
                "series `{name}` has {} samples, grid has {}",
                values.len(),
                self.times.len()
            )));
        }
        if self.series.iter().any(|s| s.name == name) {
            return Err(Error::InvalidArgument(format!("duplicate series `{name}`")));
        }
        self.series.push(Series { name, values });
        Ok(())
    }

    pub fn with_meta(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.metadata.insert(key.into(), value.to_string());
        self
    }

    pub fn get(&self, name: &str) -> Option<&[f64]> {
        self.series.iter().find(|s| s.name == name).map(|s| s.values.as_slice())
    }

    pub fn max_of(&self, name: &str) -> Option<f64> {
        self.get(name).map(|v| v.iter().copied().fold(f64::NEG_INFINITY, f64::max))
    }

    pub fn min_of(&self, name: &str) -> Option<f64> {
        self.get(name).map(|v| v.iter().copied().fold(f64::INFINITY, f64::min))
    }

    /// Trapezoidal time average of a series over the grid.
    pub fn time_average(&self, name: &str) -> Option<f64> {
        let v = self.get(name)?;
        let t = &self.times;
        if t.len() < 2 {
            return v.first().copied();
        }
        let span = t[t.len() - 1] - t[0];
        if span <= 0.0 {
            return v.first().copied();
        }
        let area: f64 = t
            .windows(2)
            .zip(v.windows(2))
            .map(|(tw, vw)| 0.5 * (tw[1] - tw[0]) * (vw[0] + vw[1]))
            .sum();
        Some(area / span)
    }

    /// Checks grid monotonicity, series lengths, and that series whose name
    /// starts with `pop_` stay within [0, 1] up to [`POPULATION_SLACK`].
    pub fn validate(&self) -> Result<()> {
        if self.times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidArgument("time grid must be strictly ascending".into()));
        }
        for s in &self.series {
            if s.values.len() != self.times.len() {
                return Err(Error::DimensionMismatch(format!("series `{}` length", s.name)));
            }
            if s.name.starts_with("pop_") {
                if let Some(bad) = s
                    .values
                    .iter()
                    .find(|&&p| !(-POPULATION_SLACK..=1.0 + POPULATION_SLACK).contains(&p))
                {
                    return Err(Error::NonPhysicalState(format!(
                        "population `{}` = {bad} outside [0, 1]",
                        s.name
                    )));
                }
            }
        }
        Ok(())
    }
}

/// `n` uniformly spaced points on `[t0, t1]`, both ends included.
pub fn uniform_grid(t0: f64, t1: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![t0],
        _ => {
            let dt = (t1 - t0) / (n - 1) as f64;
            (0..n).map(|k| if k == n - 1 { t1 } else { t0 + dt * k as f64 }).collect()
        }
    }
}
