use crate::models::{two_level_collective_h, TwoLevelParams};
use crate::numerics::hermitian_eig;
use crate::propagators::SCAN_POINTS;
use crate::trajectory::uniform_grid;
use crate::{Error, Result};

fn check_tol(leak_tol: f64) -> Result<()> {
    if !(leak_tol > 0.0 && leak_tol < 1.0) {
        return Err(Error::Domain(format!("leak_tol must lie in (0, 1), got {leak_tol}")));
    }
    Ok(())
}

/// Smallest Δ with peak leakage at most `leak_tol`:
/// `Δ* = 2√N g √((1 − tol)/tol)`.
pub fn min_detuning(n_atoms: u32, g: f64, leak_tol: f64) -> Result<f64> {
    check_tol(leak_tol)?;
    if n_atoms == 0 {
        return Err(Error::InvalidParameter { name: "n_atoms", reason: "N must be ≥ 1".into() });
    }
    if !(g >= 0.0) {
        return Err(Error::InvalidParameter { name: "g", reason: format!("must be ≥ 0, got {g}") });
    }
    Ok(2.0 * (n_atoms as f64).sqrt() * g * ((1.0 - leak_tol) / leak_tol).sqrt())
}

/// Peak `|+⟩ → |−⟩` probability from a dense scan of the numerically
/// exponentiated generator over one fast period.
pub fn scan_leakage(p: &TwoLevelParams, points: usize) -> Result<f64> {
    let eig = hermitian_eig(&two_level_collective_h(p))?;
    let split = eig.eigenvalues[1] - eig.eigenvalues[0];
    if split == 0.0 {
        return Ok(0.0);
    }
    let period = 2.0 * std::f64::consts::PI / split;
    let v = &eig.eigenvectors;
    let w = [v[(1, 0)] * v[(0, 0)].conj(), v[(1, 1)] * v[(0, 1)].conj()];
    Ok(uniform_grid(0.0, period, points)
        .into_iter()
        .map(|t| {
            (w[0] * crate::C64::from_polar(1.0, -eig.eigenvalues[0] * t)
                + w[1] * crate::C64::from_polar(1.0, -eig.eigenvalues[1] * t))
            .norm_sqr()
        })
        .fold(0.0, f64::max))
}

/// Δ* found by bisection on [`scan_leakage`], to relative width `rel_tol`.
/// Independent of the analytic inversion in [`min_detuning`].
pub fn min_detuning_bisection(n_atoms: u32, g: f64, leak_tol: f64, rel_tol: f64) -> Result<f64> {
    check_tol(leak_tol)?;
    let leak = |d: f64| -> Result<f64> {
        scan_leakage(&TwoLevelParams::new(n_atoms, g, d)?, SCAN_POINTS)
    };
    if g == 0.0 {
        return Ok(0.0);
    }
    let scale = (n_atoms as f64).sqrt() * g;
    let mut lo = scale * 1e-6;
    let mut hi = scale;
    while leak(hi)? > leak_tol {
        lo = hi;
        hi *= 2.0;
    }
    while hi - lo > rel_tol * hi {
        let mid = 0.5 * (lo + hi);
        if leak(mid)? > leak_tol {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// Least-squares slope of `log Δ*(N)` against `log N` with Δ* from
/// [`min_detuning`].
pub fn scaling_exponent(g: f64, leak_tol: f64, n_list: &[u32]) -> Result<f64> {
    scaling_exponent_with(n_list, |n| min_detuning(n, g, leak_tol))
}

/// Log-log slope with Δ*(N) supplied by `f`.
pub fn scaling_exponent_with(n_list: &[u32], f: impl Fn(u32) -> Result<f64>) -> Result<f64> {
    let mut ns: Vec<u32> = n_list.to_vec();
    ns.sort_unstable();
    ns.dedup();
    if ns.len() < 3 {
        return Err(Error::InsufficientPoints { needed: 3, got: ns.len() });
    }
    if ns[0] == 0 {
        return Err(Error::InvalidParameter { name: "n_atoms", reason: "N must be ≥ 1".into() });
    }
    let mut xs = Vec::with_capacity(ns.len());
    let mut ys = Vec::with_capacity(ns.len());
    for n in ns {
        let d = f(n)?;
        if !(d > 0.0) {
            return Err(Error::Domain(format!("Δ*({n}) = {d} has no logarithm")));
        }
        xs.push((n as f64).ln());
        ys.push(d.ln());
    }
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(sxy / sxx)
}
