//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use detune_core::dissipative::GammaScaling;

use crate::config::{Command, InitialState, Model, RunConfig};
use crate::error::CliError;
use crate::presets::FigureId;

#[derive(Debug, Parser)]
#[command(name = "detune-sim", version, about = "Collective cavity-QED dynamics: simulations, sweeps and figure data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Cmd,

    /// JSON configuration file; command-line values override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Worker threads for independent trajectories and sweep points.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,

    #[command(flatten)]
    pub overrides: Overrides,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Cmd {
    /// Population dynamics for one or more atom numbers.
    Simulate,
    /// Metrics over a Cartesian parameter grid (needs a config with `sweep`).
    Sweep,
    /// Data and plot for a preset figure.
    Figure {
        /// fig2, fig4 or fig5.
        id: FigureId,
    },
    /// Minimal detuning table and √N fit.
    Threshold,
    /// Self-checks of closed forms, oracles and integrator hygiene.
    Validate,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    #[arg(long, global = true)]
    pub model: Option<String>,
    /// Atom numbers, comma separated.
    #[arg(long = "N", global = true, value_delimiter = ',')]
    pub n: Option<Vec<u32>>,
    #[arg(long, global = true)]
    pub g: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub detuning: Option<f64>,
    #[arg(long, global = true)]
    pub omega: Option<f64>,
    #[arg(long = "raman-detuning", global = true, allow_hyphen_values = true)]
    pub raman_detuning: Option<f64>,
    #[arg(long, global = true)]
    pub kappa: Option<f64>,
    #[arg(long, global = true)]
    pub gamma: Option<f64>,
    #[arg(long = "t-max", global = true)]
    pub t_max: Option<f64>,
    #[arg(long = "grid-points", global = true)]
    pub grid_points: Option<usize>,
    #[arg(long = "leak-tol", global = true)]
    pub leak_tol: Option<f64>,
    /// Factor standing for "≫" in condition reports.
    #[arg(long, global = true)]
    pub ratio: Option<f64>,
    /// plus, minus, u1, u2 or u3.
    #[arg(long, global = true)]
    pub initial: Option<String>,
    /// single or collective.
    #[arg(long = "gamma-scaling", global = true)]
    pub gamma_scaling: Option<String>,
    #[arg(long = "rk4-step", global = true)]
    pub rk4_step: Option<f64>,
    #[arg(long = "no-svg", global = true)]
    pub no_svg: bool,
}

fn bad(key: &str, message: String) -> CliError {
    CliError::Validation { key: key.into(), message }
}

fn parse_json_enum<T: serde::de::DeserializeOwned>(key: &str, s: &str) -> Result<T, CliError> {
    serde_json::from_value(serde_json::Value::String(s.to_string()))
        .map_err(|_| bad(key, format!("unrecognised value `{s}`")))
}

impl Cli {
    /// Merges the config file (if any) with command-line values, then
    /// resolves defaults and validates.
    pub fn into_config(self) -> Result<RunConfig, CliError> {
        let (command, figure) = match &self.command {
            Cmd::Simulate => (Command::Simulate, None),
            Cmd::Sweep => (Command::Sweep, None),
            Cmd::Figure { id } => (Command::Figure, Some(*id)),
            Cmd::Threshold => (Command::Threshold, None),
            Cmd::Validate => (Command::Validate, None),
        };
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
                RunConfig::from_json(&text)?
            }
            None => RunConfig::new(command),
        };
        if cfg.command != command {
            log::warn!("config command `{}` replaced by `{}`", cfg.command.as_str(), command.as_str());
            cfg.command = command;
        }
        if figure.is_some() {
            cfg.figure = figure;
        }
        if let Some(out) = self.out {
            cfg.output_dir = out;
        }
        let o = self.overrides;
        if let Some(m) = o.model {
            cfg.model = m.parse::<Model>().map_err(|e| bad("model", e))?;
        }
        if let Some(ns) = o.n {
            if let [single] = ns[..] {
                cfg.parameters.n_atoms = single;
            }
            cfg.n_list = Some(ns);
        }
        let p = &mut cfg.parameters;
        if let Some(v) = o.g {
            p.g = v;
        }
        if let Some(v) = o.detuning {
            p.detuning = v;
        }
        if let Some(v) = o.omega {
            p.omega = v;
        }
        if let Some(v) = o.raman_detuning {
            p.raman_detuning = v;
        }
        if let Some(v) = o.kappa {
            p.kappa = v;
        }
        if let Some(v) = o.gamma {
            p.gamma = v;
        }
        if o.t_max.is_some() {
            cfg.t_max = o.t_max;
        }
        if o.grid_points.is_some() {
            cfg.grid_points = o.grid_points;
        }
        if let Some(v) = o.leak_tol {
            cfg.threshold.leak_tol = v;
        }
        if let Some(v) = o.ratio {
            cfg.threshold.ratio = v;
        }
        if let Some(s) = o.initial {
            cfg.initial = Some(parse_json_enum::<InitialState>("initial", &s)?);
        }
        if let Some(s) = o.gamma_scaling {
            let scaling = parse_json_enum::<GammaScaling>("gamma_scaling", &s)?;
            cfg.decay.get_or_insert_with(Default::default).gamma_scaling = scaling;
        }
        if o.rk4_step.is_some() {
            cfg.rk4_step = o.rk4_step;
        }
        if o.no_svg {
            cfg.svg = false;
        }
        let cfg = cfg.resolve();
        cfg.validate()?;
        Ok(cfg)
    }
}
