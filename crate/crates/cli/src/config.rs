//! Run configuration: JSON schema, defaulting, validation and hashing.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use detune_core::analysis::{Metric, SweepAxis, DEFAULT_THRESHOLD};
use detune_core::dissipative::DecayModel;
use detune_core::{Error as CoreError, LambdaParams, TwoLevelParams};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;
use crate::presets::FigureId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Simulate,
    Sweep,
    Figure,
    Threshold,
    Validate,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Sweep => "sweep",
            Command::Figure => "figure",
            Command::Threshold => "threshold",
            Command::Validate => "validate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    #[default]
    TwoLevel,
    Lambda,
}

impl FromStr for Model {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "two_level" => Ok(Model::TwoLevel),
            "lambda" => Ok(Model::Lambda),
            other => Err(format!("unknown model `{other}` (expected two_level or lambda)")),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::TwoLevel => "two_level",
            Model::Lambda => "lambda",
        })
    }
}

/// Basis state the simulation starts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialState {
    Plus,
    Minus,
    U1,
    U2,
    U3,
}

impl InitialState {
    pub fn default_for(model: Model) -> Self {
        match model {
            Model::TwoLevel => InitialState::Plus,
            Model::Lambda => InitialState::U2,
        }
    }

    /// Index in the model's collective basis, if the state belongs to it.
    pub fn index(self, model: Model) -> Option<usize> {
        match (model, self) {
            (Model::TwoLevel, InitialState::Plus) => Some(0),
            (Model::TwoLevel, InitialState::Minus) => Some(1),
            (Model::Lambda, InitialState::U1) => Some(0),
            (Model::Lambda, InitialState::U2) => Some(1),
            (Model::Lambda, InitialState::U3) => Some(2),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Parameters {
    #[serde(default = "one_u32")]
    pub n_atoms: u32,
    #[serde(default = "one")]
    pub g: f64,
    #[serde(default = "ten")]
    pub detuning: f64,
    #[serde(default)]
    pub kappa: f64,
    #[serde(default)]
    pub gamma: f64,
    #[serde(default)]
    pub omega: f64,
    #[serde(default)]
    pub raman_detuning: f64,
}

fn one_u32() -> u32 {
    1
}
fn one() -> f64 {
    1.0
}
fn ten() -> f64 {
    10.0
}

impl Default for Parameters {
    fn default() -> Self {
        Self { n_atoms: 1, g: 1.0, detuning: 10.0, kappa: 0.0, gamma: 0.0, omega: 0.0, raman_detuning: 0.0 }
    }
}

impl Parameters {
    pub fn two_level(&self, n_atoms: u32) -> detune_core::Result<TwoLevelParams> {
        TwoLevelParams::new(n_atoms, self.g, self.detuning)?.with_decay(self.kappa, self.gamma)
    }

    pub fn lambda(&self, n_atoms: u32) -> detune_core::Result<LambdaParams> {
        LambdaParams::new(n_atoms, self.g, self.omega, self.detuning, self.raman_detuning)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdSection {
    /// Largest acceptable peak leakage.
    #[serde(default = "default_leak_tol")]
    pub leak_tol: f64,
    /// Factor that "≫" stands for in condition reports.
    #[serde(default = "default_ratio")]
    pub ratio: f64,
}

fn default_leak_tol() -> f64 {
    0.01
}
fn default_ratio() -> f64 {
    DEFAULT_THRESHOLD
}

impl Default for ThresholdSection {
    fn default() -> Self {
        Self { leak_tol: default_leak_tol(), ratio: default_ratio() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub axes: Vec<SweepAxis>,
    pub metrics: Vec<String>,
}

/// Everything a run needs. Optional fields are filled by [`RunConfig::resolve`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default)]
    pub model: Model,
    #[serde(default)]
    pub parameters: Parameters,
    /// End of the time window in units of 1/g.
    #[serde(default)]
    pub t_max: Option<f64>,
    #[serde(default)]
    pub grid_points: Option<usize>,
    /// Master-equation model; absent means closed-system evolution unless
    /// κ or γ is nonzero.
    #[serde(default)]
    pub decay: Option<DecayModel>,
    #[serde(default)]
    pub initial: Option<InitialState>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub figure: Option<FigureId>,
    /// Atom numbers for figure, threshold and multi-N simulate runs.
    #[serde(default)]
    pub n_list: Option<Vec<u32>>,
    #[serde(default)]
    pub threshold: ThresholdSection,
    #[serde(default)]
    pub sweep: Option<SweepSection>,
    /// Fixed RK4 step for master-equation runs.
    #[serde(default)]
    pub rk4_step: Option<f64>,
    #[serde(default = "default_svg")]
    pub svg: bool,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}
fn default_svg() -> bool {
    true
}

pub const DEFAULT_GRID_POINTS: usize = 2001;
/// Default window length in units of 1/g.
pub const DEFAULT_T_MAX_G: f64 = 100.0;

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            model: Model::default(),
            parameters: Parameters::default(),
            t_max: None,
            grid_points: None,
            decay: None,
            initial: None,
            output_dir: default_output_dir(),
            figure: None,
            n_list: None,
            threshold: ThresholdSection::default(),
            sweep: None,
            rk4_step: None,
            svg: true,
        }
    }

    /// Parses JSON text; unknown keys and type errors carry line and column.
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| {
            let msg = e.to_string();
            if let Some(key) = unknown_field(&msg) {
                CliError::Validation { key, message: strip_position(&msg) }
            } else {
                CliError::Parse { line: e.line(), column: e.column(), message: strip_position(&msg) }
            }
        })
    }

    /// Fills optional fields with their defaults. Figure commands take the
    /// model, window and atom numbers from the preset unless given.
    pub fn resolve(mut self) -> Self {
        if let (Command::Figure, Some(fig)) = (self.command, self.figure) {
            let preset = fig.preset();
            self.model = if fig == FigureId::Fig2 { Model::TwoLevel } else { Model::Lambda };
            self.t_max.get_or_insert(preset.t_max);
            self.grid_points.get_or_insert(preset.grid_points);
            self.n_list.get_or_insert(preset.n_list);
        } else if self.command != Command::Figure {
            let g = self.parameters.g;
            self.t_max.get_or_insert(if g > 0.0 { DEFAULT_T_MAX_G / g } else { DEFAULT_T_MAX_G });
            self.grid_points.get_or_insert(DEFAULT_GRID_POINTS);
        }
        self.initial.get_or_insert(InitialState::default_for(self.model));
        self
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let p = &self.parameters;
        let core = |e: CoreError| match e {
            CoreError::InvalidParameter { name, reason } => {
                CliError::Validation { key: format!("parameters.{name}"), message: reason }
            }
            other => CliError::Validation { key: "parameters".into(), message: other.to_string() },
        };
        match self.model {
            Model::TwoLevel => p.two_level(p.n_atoms).map(drop).map_err(core)?,
            Model::Lambda => p.lambda(p.n_atoms).map(drop).map_err(core)?,
        }
        if let Some(ns) = &self.n_list {
            if ns.is_empty() {
                return Err(invalid("n_list", "must not be empty"));
            }
            if ns.contains(&0) {
                return Err(invalid("n_list", "N must be ≥ 1"));
            }
        }
        if let Some(t) = self.t_max {
            if !(t > 0.0 && t.is_finite()) {
                return Err(invalid("t_max", "must be a positive number"));
            }
        }
        if let Some(n) = self.grid_points {
            if n < 2 {
                return Err(invalid("grid_points", "must be at least 2"));
            }
        }
        if let Some(h) = self.rk4_step {
            if !(h > 0.0 && h.is_finite()) {
                return Err(invalid("rk4_step", "must be a positive number"));
            }
        }
        if let Some(init) = self.initial {
            if init.index(self.model).is_none() {
                return Err(invalid("initial", &format!("{init:?} is not a {} basis state", self.model)));
            }
        }
        if let Some(decay) = &self.decay {
            if self.model != Model::TwoLevel {
                return Err(invalid("decay", "decay is only modelled for two_level"));
            }
            for n in self.atom_numbers() {
                let tp = p.two_level(n).map_err(core)?;
                decay.validate(&tp).map_err(|e| invalid("decay", &e.to_string()))?;
            }
        }
        if self.model == Model::Lambda && (p.kappa != 0.0 || p.gamma != 0.0) {
            return Err(invalid("parameters.kappa", "decay is only modelled for two_level"));
        }
        let t = &self.threshold;
        if !(t.leak_tol > 0.0 && t.leak_tol < 1.0) {
            return Err(invalid("threshold.leak_tol", "must lie in (0, 1)"));
        }
        if !(t.ratio > 1.0 && t.ratio.is_finite()) {
            return Err(invalid("threshold.ratio", "must be a finite number above 1"));
        }
        match self.command {
            Command::Figure if self.figure.is_none() => {
                return Err(invalid("figure", "required for the figure command (fig2, fig4 or fig5)"))
            }
            Command::Sweep => {
                let s = self.sweep.as_ref().ok_or_else(|| invalid("sweep", "required for the sweep command"))?;
                if s.metrics.is_empty() {
                    return Err(invalid("sweep.metrics", "must name at least one metric"));
                }
                for m in &s.metrics {
                    m.parse::<Metric>().map_err(|e| invalid("sweep.metrics", &e.to_string()))?;
                }
            }
            Command::Threshold if self.model != Model::TwoLevel => {
                return Err(invalid("model", "the threshold command supports two_level only"))
            }
            _ => {}
        }
        Ok(())
    }

    /// `n_list` if given, else the single `parameters.n_atoms`.
    pub fn atom_numbers(&self) -> Vec<u32> {
        self.n_list.clone().unwrap_or_else(|| vec![self.parameters.n_atoms])
    }

    /// SHA-256 of the resolved configuration. The output directory is left
    /// out so that identical runs into different places hash alike.
    pub fn hash(&self) -> String {
        let mut canonical = self.clone();
        canonical.output_dir = PathBuf::new();
        let json = serde_json::to_vec(&canonical).expect("config serializes");
        hex::encode(Sha256::digest(json))
    }

    pub fn to_pretty_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

fn invalid(key: &str, message: &str) -> CliError {
    CliError::Validation { key: key.to_string(), message: message.to_string() }
}

fn unknown_field(msg: &str) -> Option<String> {
    let rest = msg.strip_prefix("unknown field `")?;
    Some(rest[..rest.find('`')?].to_string())
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

/// Reads, parses, defaults and validates a configuration file.
pub fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.to_path_buf(), source: e })?;
    let cfg = RunConfig::from_json(&text)?.resolve();
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = RunConfig::from_json(r#"{"command":"simulate"}"#).unwrap().resolve();
        assert_eq!(cfg.t_max, Some(100.0));
        assert_eq!(cfg.grid_points, Some(2001));
        assert_eq!(cfg.initial, Some(InitialState::Plus));
        assert_eq!(cfg.model, Model::TwoLevel);
        cfg.validate().unwrap();
    }

    #[test]
    fn t_max_scales_with_coupling() {
        let cfg = RunConfig::from_json(r#"{"command":"simulate","parameters":{"g":2.0}}"#).unwrap().resolve();
        assert_eq!(cfg.t_max, Some(50.0));
    }

    #[test]
    fn zero_atoms_rejected_with_key() {
        let cfg = RunConfig::from_json(r#"{"command":"simulate","parameters":{"n_atoms":0}}"#).unwrap().resolve();
        match cfg.validate() {
            Err(CliError::Validation { key, message }) => {
                assert_eq!(key, "parameters.n_atoms");
                assert!(message.contains("N must be ≥ 1"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_key_is_named() {
        match RunConfig::from_json("{\"command\":\"simulate\",\n \"colour\": 3}") {
            Err(CliError::Validation { key, .. }) => assert_eq!(key, "colour"),
            other => panic!("{other:?}"),
        }
        match RunConfig::from_json(r#"{"command":"simulate","parameters":{"N":3}}"#) {
            Err(CliError::Validation { key, .. }) => assert_eq!(key, "N"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn syntax_error_has_position() {
        match RunConfig::from_json("{\n  \"command\": \"simulate\",\n  \"t_max\": ,\n}") {
            Err(CliError::Parse { line, column, .. }) => {
                assert_eq!(line, 3);
                assert!(column > 0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn command_requirements() {
        let fig = RunConfig::new(Command::Figure).resolve();
        assert!(matches!(fig.validate(), Err(CliError::Validation { key, .. }) if key == "figure"));
        let sw = RunConfig::new(Command::Sweep).resolve();
        assert!(matches!(sw.validate(), Err(CliError::Validation { key, .. }) if key == "sweep"));
        let mut th = RunConfig::new(Command::Threshold);
        th.model = Model::Lambda;
        assert!(th.resolve().validate().is_err());
        let mut bad_metric = RunConfig::new(Command::Sweep);
        bad_metric.sweep = Some(SweepSection { axes: vec![], metrics: vec!["speed".into()] });
        assert!(matches!(bad_metric.validate(), Err(CliError::Validation { key, .. }) if key == "sweep.metrics"));
    }

    #[test]
    fn full_decay_needs_small_ensembles() {
        let mut cfg = RunConfig::new(Command::Simulate);
        cfg.decay = Some(DecayModel::full(1));
        cfg.n_list = Some(vec![1, 4]);
        assert!(matches!(cfg.resolve().validate(), Err(CliError::Validation { key, .. }) if key == "decay"));
    }

    #[test]
    fn hash_ignores_output_dir_only() {
        let a = RunConfig::new(Command::Simulate).resolve();
        let mut b = a.clone();
        b.output_dir = PathBuf::from("/elsewhere");
        assert_eq!(a.hash(), b.hash());
        b.parameters.detuning = 11.0;
        assert_ne!(a.hash(), b.hash());
    }

    #[test]
    fn resolved_config_round_trips() {
        let mut cfg = RunConfig::new(Command::Figure);
        cfg.figure = Some(FigureId::Fig2);
        let cfg = cfg.resolve();
        let back = RunConfig::from_json(&cfg.to_pretty_json()).unwrap();
        assert_eq!(back, cfg);
    }
}
