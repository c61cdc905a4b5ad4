//! Command dispatch and file output.

use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use detune_core::analysis::{
    condition_report, max_transfer_scan, min_detuning, min_detuning_bisection, scaling_exponent, scan_leakage,
    sweep, ModelParams, SweepBase, SweepSpec,
};
use detune_core::dissipative::{collective_decay_solution, simulate_decay, DecayMode};
use detune_core::models::{
    lambda_nonresonant_h, two_level_collective_h, two_level_full_h, AtomLevels, FullSpace,
};
use detune_core::numerics::{unitary_propagator, LindbladOptions};
use detune_core::propagators::{
    lambda_nonresonant_exact, lambda_resonant_u, max_leakage_lambda_resonant, max_leakage_two_level, two_level_u,
    SCAN_POINTS,
};
use detune_core::trajectory::uniform_grid;
use detune_core::{ComplexVector, LambdaParams, Trajectory, TwoLevelParams, C64};
use rayon::prelude::*;

use crate::config::{Command, Model, RunConfig};
use crate::error::CliError;
use crate::output::{svg_line_plot, write_atomic, write_csv, Cell, Manifest, PlotSeries, Table};
use crate::presets::FigureId;

pub const MANIFEST_NAME: &str = "manifest.txt";
pub const RESOLVED_CONFIG_NAME: &str = "config.resolved.json";

/// Files written by a successful (or check-failing) run.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub output_dir: PathBuf,
    pub files: Vec<String>,
}

/// In-memory products of a command, written out in one place.
#[derive(Default)]
struct Products {
    tables: Vec<(String, Table)>,
    svgs: Vec<(String, String)>,
    manifest: Manifest,
    failed_checks: usize,
    total_checks: usize,
}

impl Products {
    fn table(&mut self, name: String, table: Table) {
        self.tables.push((name, table));
    }
}

/// Runs a resolved, validated configuration. Validation failures in the
/// `validate` command still write their report before returning an error.
pub fn run(cfg: &RunConfig) -> Result<RunOutcome, CliError> {
    let started = Instant::now();
    cfg.validate()?;
    let mut products = match cfg.command {
        Command::Simulate => simulate(cfg)?,
        Command::Sweep => run_sweep(cfg)?,
        Command::Figure => figure(cfg)?,
        Command::Threshold => threshold(cfg)?,
        Command::Validate => validate(cfg)?,
    };

    let dir = &cfg.output_dir;
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut files = Vec::new();
    for (name, table) in &products.tables {
        write_csv(table, &dir.join(name))?;
        files.push(name.clone());
    }
    if cfg.svg {
        for (name, svg) in &products.svgs {
            write_atomic(&dir.join(name), svg.as_bytes())?;
            files.push(name.clone());
        }
    }
    write_atomic(&dir.join(RESOLVED_CONFIG_NAME), (cfg.to_pretty_json() + "\n").as_bytes())?;
    files.push(RESOLVED_CONFIG_NAME.into());

    let mut head = Manifest::default();
    head.push("tool", format!("detune-sim {}", env!("CARGO_PKG_VERSION")));
    head.push("command", cfg.command.as_str());
    head.push("config_hash", cfg.hash());
    head.push("units", "frequencies and rates in units of g0 = 1, times in units of 1/g0");
    head.entries.append(&mut products.manifest.entries);
    head.outputs = files.clone();
    head.notes = std::mem::take(&mut products.manifest.notes);
    let stamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let text = head.render(stamp, started.elapsed().as_secs_f64());
    write_atomic(&dir.join(MANIFEST_NAME), text.as_bytes())?;
    files.push(MANIFEST_NAME.into());

    if products.failed_checks > 0 {
        return Err(CliError::ChecksFailed { failed: products.failed_checks, total: products.total_checks });
    }
    Ok(RunOutcome { output_dir: dir.clone(), files })
}

fn grid(cfg: &RunConfig) -> Vec<f64> {
    uniform_grid(0.0, cfg.t_max.expect("resolved"), cfg.grid_points.expect("resolved"))
}

fn lindblad_options(cfg: &RunConfig) -> LindbladOptions {
    LindbladOptions { step: cfg.rk4_step }
}

fn basis_amplitudes(index: usize) -> [C64; 3] {
    let mut a = [C64::new(0.0, 0.0); 3];
    a[index] = C64::new(1.0, 0.0);
    a
}

/// Closed-system two-level populations from a basis state.
pub fn two_level_trajectory(p: &TwoLevelParams, from: usize, times: &[f64]) -> detune_core::Result<Trajectory> {
    let mut plus = Vec::with_capacity(times.len());
    let mut minus = Vec::with_capacity(times.len());
    for &t in times {
        let u = two_level_u(p, t);
        plus.push(u[(0, from)].norm_sqr());
        minus.push(u[(1, from)].norm_sqr());
    }
    let mut tr = Trajectory::new(times.to_vec());
    tr.push_series("pop_plus", plus)?;
    tr.push_series("pop_minus", minus)?;
    Ok(tr.with_meta("model", "two_level_closed_form"))
}

/// Λ populations from a basis state: closed form at two-photon resonance,
/// eigen-solution otherwise.
pub fn lambda_trajectory(p: &LambdaParams, from: usize, times: &[f64]) -> detune_core::Result<Trajectory> {
    if p.raman_detuning == 0.0 {
        let mut cols = [Vec::new(), Vec::new(), Vec::new()];
        for &t in times {
            let u = lambda_resonant_u(p, t)?;
            for (k, col) in cols.iter_mut().enumerate() {
                col.push(u[(k, from)].norm_sqr());
            }
        }
        let mut tr = Trajectory::new(times.to_vec());
        let [a, b, c] = cols;
        tr.push_series("pop_u1", a)?;
        tr.push_series("pop_u2", b)?;
        tr.push_series("pop_u3", c)?;
        Ok(tr.with_meta("solution", "resonant_closed_form"))
    } else {
        Ok(lambda_nonresonant_exact(p, basis_amplitudes(from), times)?.0)
    }
}

fn condition_note(params: ModelParams, n: u32, ratio: f64) -> Result<String, CliError> {
    let r = condition_report(params, ratio)?;
    let mut s = format!("conditions N={n} threshold={ratio}:");
    for c in &r.ratios {
        s.push_str(&format!(" {}={} ({})", c.name, c.value, if c.pass { "pass" } else { "fail" }));
    }
    s.push_str(&format!(" legacy_delta_over_g={} ({})", r.legacy_ratio, if r.legacy_pass { "pass" } else { "fail" }));
    Ok(s)
}

fn uses_decay(cfg: &RunConfig) -> bool {
    cfg.decay.is_some() || cfg.parameters.kappa > 0.0 || cfg.parameters.gamma > 0.0
}

fn simulate(cfg: &RunConfig) -> Result<Products, CliError> {
    let times = grid(cfg);
    let init = cfg.initial.expect("resolved").index(cfg.model).expect("validated");
    let ns = cfg.atom_numbers();
    let decay = uses_decay(cfg).then(|| cfg.decay.unwrap_or_default());
    if decay.is_some() && init != 0 {
        return Err(CliError::Validation {
            key: "initial".into(),
            message: "master-equation runs start from plus".into(),
        });
    }
    let trajectories: Vec<Trajectory> = ns
        .par_iter()
        .map(|&n| -> Result<Trajectory, CliError> {
            Ok(match cfg.model {
                Model::TwoLevel => {
                    let p = cfg.parameters.two_level(n)?;
                    match &decay {
                        Some(model) => simulate_decay(&p, model, &times, lindblad_options(cfg))?,
                        None => two_level_trajectory(&p, init, &times)?,
                    }
                }
                Model::Lambda => lambda_trajectory(&cfg.parameters.lambda(n)?, init, &times)?,
            })
        })
        .collect::<Result<_, _>>()?;

    let mut out = Products::default();
    out.manifest.push("model", cfg.model);
    if let Some(d) = &decay {
        out.manifest.push("decay", serde_json::to_string(d).expect("serializes"));
    }
    let mut plot = Vec::new();
    for (&n, tr) in ns.iter().zip(&trajectories) {
        out.table(format!("trajectory_N{n}.csv"), Table::from_trajectory(tr));
        let params: ModelParams = match cfg.model {
            Model::TwoLevel => cfg.parameters.two_level(n)?.into(),
            Model::Lambda => cfg.parameters.lambda(n)?.into(),
        };
        out.manifest.notes.push(condition_note(params, n, cfg.threshold.ratio)?);
        for s in &tr.series {
            if s.name.starts_with("pop_") {
                plot.push(PlotSeries { label: format!("{} N={n}", s.name), x: tr.times.clone(), y: s.values.clone() });
            }
        }
    }
    out.svgs.push(("trajectory.svg".into(), svg_line_plot("Populations", "t [1/g]", "population", &plot)));
    Ok(out)
}

fn run_sweep(cfg: &RunConfig) -> Result<Products, CliError> {
    let section = cfg.sweep.as_ref().expect("validated");
    let p = &cfg.parameters;
    let base = SweepBase {
        n_atoms: p.n_atoms,
        g: p.g,
        detuning: p.detuning,
        omega: p.omega,
        raman_detuning: p.raman_detuning,
        kappa: p.kappa,
        gamma: p.gamma,
        leak_tol: cfg.threshold.leak_tol,
    };
    let mut spec = SweepSpec::with_metric_names(base, section.axes.clone(), &section.metrics)?;
    spec.t_max = cfg.t_max;
    spec.grid_points = cfg.grid_points.expect("resolved");
    if let Some(d) = &cfg.decay {
        spec.gamma_scaling = d.gamma_scaling;
    }
    let result = sweep(&spec)?;
    let mut out = Products::default();
    out.manifest.push("sweep_hash", &result.config_hash);
    out.manifest.push("sweep_rows", result.rows.len());
    out.table("sweep.csv".into(), Table::from_sweep(&result));
    Ok(out)
}

fn figure(cfg: &RunConfig) -> Result<Products, CliError> {
    let id = cfg.figure.expect("validated");
    let preset = id.preset();
    let ns = cfg.atom_numbers();
    let times = grid(cfg);
    let mut out = Products::default();
    out.manifest.push("figure", id);
    out.manifest.push(
        "preset",
        format!(
            "g={} detuning={} kappa={} gamma={} omega={} raman_detuning={}",
            preset.g, preset.detuning, preset.kappa, preset.gamma, preset.omega, preset.raman_detuning
        ),
    );
    out.manifest.push("n_list", format!("{ns:?}"));
    out.manifest.notes.push("physical parameters come from the preset; the `parameters` section is not used".into());

    let trajectories: Vec<Trajectory> = match id {
        FigureId::Fig2 => {
            let model = cfg.decay.unwrap_or_default();
            if let DecayMode::Full { .. } = model.mode {
                return Err(CliError::Validation {
                    key: "decay".into(),
                    message: "fig2 uses the collective3 model".into(),
                });
            }
            out.manifest.push("gamma_scaling", serde_json::to_string(&model.gamma_scaling).expect("serializes").trim_matches('"'));
            ns.par_iter()
                .map(|&n| Ok(simulate_decay(&preset.two_level(n)?, &model, &times, lindblad_options(cfg))?))
                .collect::<Result<_, CliError>>()?
        }
        FigureId::Fig4 | FigureId::Fig5 => {
            let init = cfg.initial.expect("resolved").index(Model::Lambda).ok_or_else(|| CliError::Validation {
                key: "initial".into(),
                message: "Λ figures start from u1, u2 or u3".into(),
            })?;
            ns.par_iter()
                .map(|&n| Ok(lambda_trajectory(&preset.lambda(n)?, init, &times)?))
                .collect::<Result<_, CliError>>()?
        }
    };

    let (plotted, y_label) = match id {
        FigureId::Fig2 => ("pop_plus", "P+"),
        FigureId::Fig4 => ("pop_u1", "P(u1)"),
        FigureId::Fig5 => ("pop_u3", "P(u3)"),
    };
    let mut plot = Vec::new();
    for (&n, tr) in ns.iter().zip(&trajectories) {
        out.table(format!("{id}_N{n}.csv"), Table::from_trajectory(tr));
        plot.push(PlotSeries {
            label: format!("N={n}"),
            x: tr.times.clone(),
            y: tr.get(plotted).expect("series present").to_vec(),
        });
        match id {
            FigureId::Fig2 => out.manifest.notes.push(format!(
                "N={n}: min pop_plus={} mean pop_plus={}",
                tr.min_of("pop_plus").unwrap(),
                tr.time_average("pop_plus").unwrap()
            )),
            FigureId::Fig4 => out.manifest.notes.push(format!(
                "N={n}: max pop_u1={} closed-form peak={}",
                tr.max_of("pop_u1").unwrap(),
                max_leakage_lambda_resonant(&preset.lambda(n)?)
            )),
            FigureId::Fig5 => out.manifest.notes.push(format!(
                "N={n}: max pop_u3={} max pop_u1={}",
                tr.max_of("pop_u3").unwrap(),
                tr.max_of("pop_u1").unwrap()
            )),
        }
    }
    if id == FigureId::Fig2 && ns.len() > 1 {
        let mins: Vec<f64> = trajectories.iter().map(|t| t.min_of("pop_plus").unwrap()).collect();
        let means: Vec<f64> = trajectories.iter().map(|t| t.time_average("pop_plus").unwrap()).collect();
        let dec = |v: &[f64]| v.windows(2).all(|w| w[1] < w[0]);
        out.manifest.push("pop_plus_decreasing_in_listed_order", dec(&mins) && dec(&means));
    }
    out.svgs.push((format!("{id}.svg"), svg_line_plot(&format!("{id}: {plotted}"), "t [1/g]", y_label, &plot)));
    Ok(out)
}

/// Relative bisection width for the numeric cross-check column.
const BISECTION_REL_TOL: f64 = 1e-6;
const DEFAULT_THRESHOLD_N: [u32; 4] = [1, 4, 16, 64];

fn threshold(cfg: &RunConfig) -> Result<Products, CliError> {
    let g = cfg.parameters.g;
    let tol = cfg.threshold.leak_tol;
    let ns = cfg.n_list.clone().unwrap_or_else(|| DEFAULT_THRESHOLD_N.to_vec());
    let rows: Vec<Vec<Cell>> = ns
        .par_iter()
        .map(|&n| -> Result<Vec<Cell>, CliError> {
            let d = min_detuning(n, g, tol)?;
            let leak = if d > 0.0 { max_leakage_two_level(&TwoLevelParams::new(n, g, d)?) } else { 0.0 };
            let bis = min_detuning_bisection(n, g, tol, BISECTION_REL_TOL)?;
            Ok(vec![Cell::Int(n as u64), Cell::Float(d), Cell::Float(bis), Cell::Float(leak)])
        })
        .collect::<Result<_, _>>()?;
    let mut table = Table::new(&["n_atoms", "min_detuning", "min_detuning_bisection", "max_leakage_at_min"]);
    for r in rows {
        table.push(r);
    }
    let mut out = Products::default();
    out.manifest.push("leak_tol", tol);
    out.manifest.push("g", g);
    match scaling_exponent(g, tol, &ns) {
        Ok(s) => out.manifest.push("scaling_exponent", s),
        Err(e) => out.manifest.notes.push(format!("scaling exponent not fitted: {e}")),
    }
    out.table("threshold.csv".into(), table);
    Ok(out)
}

struct Check {
    name: &'static str,
    n_atoms: u32,
    value: f64,
    tolerance: f64,
}

impl Check {
    fn pass(&self) -> bool {
        self.value <= self.tolerance
    }
}

const VALIDATION_TIMES: usize = 50;

fn validate_two_level(cfg: &RunConfig, n: u32, checks: &mut Vec<Check>) -> Result<(), CliError> {
    let p = cfg.parameters.two_level(n)?;
    let h = two_level_collective_h(&p);
    let times = uniform_grid(0.0, cfg.t_max.expect("resolved"), VALIDATION_TIMES);
    let mut diff: f64 = 0.0;
    let mut unit: f64 = 0.0;
    for &t in &times {
        let u = two_level_u(&p, t);
        diff = diff.max(u.max_abs_diff(&unitary_propagator(&h, t)?));
        unit = unit.max(u.unitarity_error());
    }
    checks.push(Check { name: "closed_form_vs_numeric", n_atoms: n, value: diff, tolerance: 1e-9 });
    checks.push(Check { name: "unitarity", n_atoms: n, value: unit, tolerance: 1e-12 });
    let scan = scan_leakage(&p, SCAN_POINTS)?;
    checks.push(Check {
        name: "leakage_scan_vs_closed_form",
        n_atoms: n,
        value: (scan - max_leakage_two_level(&p)).abs(),
        tolerance: 1e-6,
    });
    let d = min_detuning(n, cfg.parameters.g, cfg.threshold.leak_tol)?;
    if d > 0.0 {
        let back = max_leakage_two_level(&TwoLevelParams::new(n, cfg.parameters.g, d)?);
        checks.push(Check {
            name: "min_detuning_round_trip",
            n_atoms: n,
            value: (back - cfg.threshold.leak_tol).abs(),
            tolerance: 1e-10,
        });
    }
    if uses_decay(cfg) {
        let model = cfg.decay.unwrap_or_default();
        let sol = collective_decay_solution(&p, model.gamma_scaling, &grid(cfg), lindblad_options(cfg))?;
        checks.push(Check { name: "lindblad_trace_drift", n_atoms: n, value: sol.max_trace_drift(), tolerance: 1e-8 });
        checks.push(Check {
            name: "lindblad_negativity",
            n_atoms: n,
            value: (-sol.min_eigenvalue()?).max(0.0),
            tolerance: 1e-8,
        });
    }
    if n <= detune_core::models::MAX_ORACLE_ATOMS {
        let space = FullSpace::oracle(n, AtomLevels::Two, 1)?;
        let hf = two_level_full_h(&p, 1)?;
        let [plus, minus, _] = space.collective_basis()?;
        let mut leak: f64 = 0.0;
        for &t in &times {
            let psi = unitary_propagator(&hf, t)?.matvec(&plus);
            leak = leak.max((1.0 - plus.inner(&psi).norm_sqr() - minus.inner(&psi).norm_sqr()).abs());
        }
        checks.push(Check { name: "oracle_subspace_leakage", n_atoms: n, value: leak, tolerance: 1e-10 });
    }
    Ok(())
}

fn validate_lambda(cfg: &RunConfig, n: u32, checks: &mut Vec<Check>) -> Result<(), CliError> {
    let p = cfg.parameters.lambda(n)?;
    let h = lambda_nonresonant_h(&p);
    let times = uniform_grid(0.0, cfg.t_max.expect("resolved"), VALIDATION_TIMES);
    let mut diff: f64 = 0.0;
    let mut unit: f64 = 0.0;
    if p.raman_detuning == 0.0 {
        for &t in &times {
            let u = lambda_resonant_u(&p, t)?;
            let numeric = unitary_propagator(&h, t)?.scale(C64::from_polar(1.0, 0.5 * p.detuning * t));
            diff = diff.max(u.max_abs_diff(&numeric));
            unit = unit.max(u.unitarity_error());
        }
        let scan = max_transfer_scan(&h, 1, 0, &uniform_grid(0.0, cfg.t_max.expect("resolved"), 20001))?;
        checks.push(Check {
            name: "u1_peak_scan_vs_closed_form",
            n_atoms: n,
            value: (scan.max - max_leakage_lambda_resonant(&p)).abs(),
            tolerance: 1e-3,
        });
    } else {
        let (_, sol) = lambda_nonresonant_exact(&p, basis_amplitudes(1), &[0.0])?;
        for &t in &times {
            let psi = unitary_propagator(&h, t)?.matvec(&ComplexVector::basis(3, 1));
            let amp = sol.amplitudes_at(t);
            let d = (0..3).map(|k| (psi[k] - amp[k]).norm()).fold(0.0, f64::max);
            diff = diff.max(d);
            unit = unit.max((amp.iter().map(|z| z.norm_sqr()).sum::<f64>() - 1.0).abs());
        }
    }
    checks.push(Check { name: "closed_form_vs_numeric", n_atoms: n, value: diff, tolerance: 1e-9 });
    checks.push(Check { name: "unitarity", n_atoms: n, value: unit, tolerance: 1e-12 });
    Ok(())
}

fn validate(cfg: &RunConfig) -> Result<Products, CliError> {
    let ns = cfg.atom_numbers();
    let per_n: Vec<Vec<Check>> = ns
        .par_iter()
        .map(|&n| {
            let mut checks = Vec::new();
            match cfg.model {
                Model::TwoLevel => validate_two_level(cfg, n, &mut checks)?,
                Model::Lambda => validate_lambda(cfg, n, &mut checks)?,
            }
            Ok(checks)
        })
        .collect::<Result<_, CliError>>()?;
    let checks: Vec<Check> = per_n.into_iter().flatten().collect();
    let mut table = Table::new(&["check", "n_atoms", "value", "tolerance", "pass"]);
    let mut out = Products::default();
    for c in &checks {
        table.push(vec![
            Cell::Text(c.name.into()),
            Cell::Int(c.n_atoms as u64),
            Cell::Float(c.value),
            Cell::Float(c.tolerance),
            Cell::Text(c.pass().to_string()),
        ]);
        if !c.pass() {
            log::error!("check {} failed for N={}: {:e} > {:e}", c.name, c.n_atoms, c.value, c.tolerance);
            out.failed_checks += 1;
        }
    }
    out.total_checks = checks.len();
    out.manifest.push("checks_passed", format!("{}/{}", checks.len() - out.failed_checks, checks.len()));
    out.table("validation.csv".into(), table);
    Ok(out)
}

/// Reads a CSV written by this tool back into header and numeric columns;
/// non-numeric cells become NaN.
pub fn read_numeric_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>), CliError> {
    let mut r = csv::Reader::from_path(path)?;
    let headers: Vec<String> = r.headers()?.iter().map(String::from).collect();
    let mut cols = vec![Vec::new(); headers.len()];
    for rec in r.records() {
        for (col, field) in cols.iter_mut().zip(rec?.iter()) {
            col.push(field.parse().unwrap_or(f64::NAN));
        }
    }
    Ok((headers, cols))
}
