use super::eig::hermitian_eig;
use super::matrix::{ComplexMatrix, C64};
use crate::trajectory::Trajectory;
use crate::{Error, Result};

/// Tolerances on the initial density matrix.
const STATE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LindbladOptions {
    /// Fixed RK4 step. `None` selects `min(0.01 / ‖H‖_∞, (t_end − t_0) / 2000)`.
    pub step: Option<f64>,
}

impl LindbladOptions {
    pub fn with_step(step: f64) -> Self {
        Self { step: Some(step) }
    }
}

/// Density matrices sampled on the requested grid.
#[derive(Debug, Clone)]
pub struct LindbladSolution {
    pub times: Vec<f64>,
    pub states: Vec<ComplexMatrix>,
    /// The RK4 step actually used (before per-interval rounding).
    pub step: f64,
}

impl LindbladSolution {
    /// `⟨k|ρ(t)|k⟩` on every grid point.
    pub fn population(&self, k: usize) -> Vec<f64> {
        self.states.iter().map(|rho| rho[(k, k)].re).collect()
    }

    /// `Tr(P ρ(t))` on every grid point.
    pub fn expectation(&self, op: &ComplexMatrix) -> Vec<f64> {
        self.states.iter().map(|rho| op.matmul(rho).trace().re).collect()
    }

    pub fn max_trace_drift(&self) -> f64 {
        self.states.iter().map(|rho| (rho.trace() - C64::new(1.0, 0.0)).norm()).fold(0.0, f64::max)
    }

    /// Smallest eigenvalue of ρ across the grid.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        let mut worst = f64::INFINITY;
        for rho in &self.states {
            let e = hermitian_eig(rho)?;
            worst = worst.min(e.eigenvalues[0]);
        }
        Ok(worst)
    }

    pub fn purity(&self) -> Vec<f64> {
        self.states.iter().map(|rho| rho.matmul(rho).trace().re).collect()
    }

    /// Trajectory with one `(name, basis index)` population series each.
    pub fn trajectory(&self, populations: &[(&str, usize)]) -> Result<Trajectory> {
        let mut tr = Trajectory::new(self.times.clone());
        for &(name, k) in populations {
            tr.push_series(name, self.population(k))?;
        }
        Ok(tr.with_meta("rk4_step", self.step).with_meta("max_trace_drift", self.max_trace_drift()))
    }
}

/// Right-hand side `dρ/dt = Kρ + ρK† + Σ LρL†` with `K = −iH − ½ΣL†L`.
struct Generator {
    k: ComplexMatrix,
    jumps: Vec<(ComplexMatrix, ComplexMatrix)>,
    scratch: ComplexMatrix,
    scratch2: ComplexMatrix,
}

impl Generator {
    fn new(h: &ComplexMatrix, collapse_ops: &[ComplexMatrix]) -> Self {
        let n = h.rows();
        let mut k = h.scale(C64::new(0.0, -1.0));
        let mut jumps = Vec::with_capacity(collapse_ops.len());
        for l in collapse_ops {
            let ld = l.adjoint();
            k.axpy(C64::new(-0.5, 0.0), &ld.matmul(l));
            jumps.push((l.clone(), ld));
        }
        Self { k, jumps, scratch: ComplexMatrix::zeros(n, n), scratch2: ComplexMatrix::zeros(n, n) }
    }

    fn eval(&mut self, rho: &ComplexMatrix, out: &mut ComplexMatrix) {
        let n = rho.rows();
        self.k.matmul_into(rho, &mut self.scratch);
        // Kρ + (Kρ)†, using ρ = ρ†
        {
            let kr = self.scratch.as_slice();
            let o = out.data_mut();
            for i in 0..n {
                for j in 0..n {
                    o[i * n + j] = kr[i * n + j] + kr[j * n + i].conj();
                }
            }
        }
        for (l, ld) in &self.jumps {
            l.matmul_into(rho, &mut self.scratch);
            self.scratch.matmul_into(ld, &mut self.scratch2);
            out.axpy(C64::new(1.0, 0.0), &self.scratch2);
        }
    }
}

/// Integrates the Lindblad master equation with fixed-step classical RK4.
///
/// Every interval `[t_k, t_{k+1}]` of the grid is covered by
/// `ceil((t_{k+1} − t_k) / h)` equal sub-steps, so the requested times are hit
/// exactly.
pub fn integrate_lindblad(
    rho0: &ComplexMatrix,
    h: &ComplexMatrix,
    collapse_ops: &[ComplexMatrix],
    t_grid: &[f64],
    options: LindbladOptions,
) -> Result<LindbladSolution> {
    let n = h.rows();
    if !h.is_square() || rho0.rows() != n || rho0.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "H is {}x{}, rho0 is {}x{}",
            h.rows(),
            h.cols(),
            rho0.rows(),
            rho0.cols()
        )));
    }
    if let Some(l) = collapse_ops.iter().find(|l| l.rows() != n || l.cols() != n) {
        return Err(Error::DimensionMismatch(format!(
            "collapse operator is {}x{}, expected {n}x{n}",
            l.rows(),
            l.cols()
        )));
    }
    if !h.is_hermitian(STATE_TOL) {
        return Err(Error::NonHermitian {
            max_violation: h.hermiticity_violation(),
            tolerance: STATE_TOL * h.max_abs(),
        });
    }
    check_density_matrix(rho0)?;
    if t_grid.is_empty() {
        return Err(Error::InvalidArgument("empty time grid".into()));
    }
    if t_grid.windows(2).any(|w| !(w[1] > w[0])) || t_grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidArgument("time grid must be finite and strictly ascending".into()));
    }

    let span = t_grid[t_grid.len() - 1] - t_grid[0];
    let step = match options.step {
        Some(s) if s > 0.0 && s.is_finite() => s,
        Some(s) => return Err(Error::InvalidArgument(format!("RK4 step must be positive, got {s}"))),
        None => default_step(h, span),
    };

    let mut gen = Generator::new(h, collapse_ops);
    let mut rho = rho0.clone();
    let mut states = Vec::with_capacity(t_grid.len());
    states.push(rho.clone());

    let mut k1 = ComplexMatrix::zeros(n, n);
    let mut k2 = ComplexMatrix::zeros(n, n);
    let mut k3 = ComplexMatrix::zeros(n, n);
    let mut k4 = ComplexMatrix::zeros(n, n);
    let mut stage = ComplexMatrix::zeros(n, n);

    for w in t_grid.windows(2) {
        let interval = w[1] - w[0];
        let substeps = (interval / step).ceil().max(1.0) as usize;
        let dt = interval / substeps as f64;
        let half = C64::new(0.5 * dt, 0.0);
        let full = C64::new(dt, 0.0);
        for _ in 0..substeps {
            gen.eval(&rho, &mut k1);
            stage.clone_from(&rho);
            stage.axpy(half, &k1);
            gen.eval(&stage, &mut k2);
            stage.clone_from(&rho);
            stage.axpy(half, &k2);
            gen.eval(&stage, &mut k3);
            stage.clone_from(&rho);
            stage.axpy(full, &k3);
            gen.eval(&stage, &mut k4);
            rho.axpy(C64::new(dt / 6.0, 0.0), &k1);
            rho.axpy(C64::new(dt / 3.0, 0.0), &k2);
            rho.axpy(C64::new(dt / 3.0, 0.0), &k3);
            rho.axpy(C64::new(dt / 6.0, 0.0), &k4);
        }
        states.push(rho.clone());
    }

    Ok(LindbladSolution { times: t_grid.to_vec(), states, step })
}

fn default_step(h: &ComplexMatrix, span: f64) -> f64 {
    let by_span = span / 2000.0;
    let norm = h.max_row_sum();
    let by_norm = if norm > 0.0 { 0.01 / norm } else { f64::INFINITY };
    let s = by_norm.min(by_span);
    if s > 0.0 && s.is_finite() {
        s
    } else {
        // single-point grid with a zero generator: nothing to integrate
        1.0
    }
}

fn check_density_matrix(rho: &ComplexMatrix) -> Result<()> {
    let violation = rho.hermiticity_violation();
    if violation > STATE_TOL * rho.max_abs().max(1.0) {
        return Err(Error::NonPhysicalState(format!("rho0 not Hermitian (violation {violation:e})")));
    }
    let tr = rho.trace();
    if (tr - C64::new(1.0, 0.0)).norm() > STATE_TOL {
        return Err(Error::NonPhysicalState(format!("rho0 has trace {tr}")));
    }
    let min_eig = hermitian_eig(rho)?.eigenvalues[0];
    if min_eig < -STATE_TOL {
        return Err(Error::NonPhysicalState(format!("rho0 has negative eigenvalue {min_eig:e}")));
    }
    Ok(())
}
