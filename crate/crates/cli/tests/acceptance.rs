//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero on any unexpected result.
//!
//! Oracles here are written independently of the library paths they check:
//! Taylor-series matrix exponentials, golden-section refinement of scanned
//! maxima, and null-vector eigenvectors built from the cubic's roots.

use std::process::ExitCode;
use std::time::Instant;

use detune_core::analysis::{
    condition_report, min_detuning, min_detuning_bisection, scaling_exponent, scaling_exponent_with,
};
use detune_core::dissipative::{
    collective_decay_solution, full_decay_solution, simulate_collective_decay, GammaScaling,
};
use detune_core::models::{
    lambda_nonresonant_h, lambda_resonant_h, two_level_collective_h, two_level_full_h, AtomLevels, FullSpace,
};
use detune_core::numerics::{cubic_roots, unitary_propagator, LindbladOptions};
use detune_core::propagators::{
    lambda_nonresonant_exact, lambda_nonresonant_perturbative, lambda_resonant_u, max_leakage_two_level,
    reduce_variables, two_level_u,
};
use detune_core::trajectory::uniform_grid;
use detune_core::{ComplexMatrix, ComplexVector, LambdaParams, Trajectory, TwoLevelParams, C64};
use detune_sim::output::{csv_bytes, write_csv, Table};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

// Tolerances, pinned.
const TOL_CLOSED_FORM: f64 = 1e-9;
const TOL_LEAKAGE: f64 = 1e-6;
const TOL_SLOPE: f64 = 1e-3;
const TOL_DSTAR: f64 = 1e-6;
const TOL_LAMBDA_PEAK: f64 = 1e-6;
const FIG5_ALPHA_BOUND: f64 = 0.02;
const TOL_ORACLE_LEAK: f64 = 1e-10;
const TOL_ORACLE_POP: f64 = 1e-8;
const TOL_UNITARITY: f64 = 1e-12;
const TOL_TRACE: f64 = 1e-8;
const TOL_POSITIVITY: f64 = -1e-8;
const MIN_RK4_FACTOR: f64 = 12.0;

const LIMIT_C1_S: f64 = 5.0;
const LIMIT_C5_S: f64 = 10.0;
const LIMIT_C8_S: f64 = 5.0;

/// Criteria whose failure has been analysed and is expected.
const EXPECTED_FAILURES: &[u32] = &[7];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// `exp(−iHt)` by scaling and squaring of a truncated Taylor series.
fn expm_taylor(h: &ComplexMatrix, t: f64) -> ComplexMatrix {
    let a = h.scale(C64::new(0.0, -t));
    let norm = a.max_row_sum();
    let s = if norm > 0.25 { (norm / 0.25).log2().ceil() as i32 } else { 0 };
    let a = a.scale_real(0.5f64.powi(s));
    let n = h.rows();
    let mut sum = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..=24 {
        term = term.matmul(&a).scale_real(1.0 / k as f64);
        sum = &sum + &term;
    }
    for _ in 0..s {
        sum = sum.matmul(&sum);
    }
    sum
}

/// Maximum of `f` on `[t0, t1]`: dense scan, then golden-section refinement
/// of the best bracket.
fn refined_max(t0: f64, t1: f64, points: usize, f: impl Fn(f64) -> f64) -> f64 {
    let grid = uniform_grid(t0, t1, points);
    let (k, _) = grid
        .iter()
        .enumerate()
        .map(|(i, &t)| (i, f(t)))
        .fold((0, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best });
    let mut a = grid[k.saturating_sub(1)];
    let mut b = grid[(k + 1).min(points - 1)];
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..80 {
        let c = b - phi * (b - a);
        let d = a + phi * (b - a);
        if f(c) > f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    f(0.5 * (a + b)).max(f(grid[k]))
}

fn c1_closed_forms() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let n = rng.gen_range(1..=100);
        let g = rng.gen_range(0.05..2.0);
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let d = sign * rng.gen_range(1.0..50.0);
        let omega = rng.gen_range(0.0..5.0);
        let tp = TwoLevelParams::new(n, g, d).unwrap();
        let lp = LambdaParams::resonant(n, g, omega, d.abs()).unwrap();
        let h2 = two_level_collective_h(&tp);
        let h3 = lambda_resonant_h(&lp).unwrap();
        for t in uniform_grid(0.0, rng.gen_range(1.0..20.0), 50) {
            worst = worst.max(two_level_u(&tp, t).max_abs_diff(&expm_taylor(&h2, t)));
            let frame = re(1.0) * C64::from_polar(1.0, 0.5 * lp.detuning * t);
            worst = worst.max(lambda_resonant_u(&lp, t).unwrap().max_abs_diff(&expm_taylor(&h3, t).scale(frame)));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst <= TOL_CLOSED_FORM && secs < LIMIT_C1_S,
        format!("max elementwise diff {worst:.2e} (tol {TOL_CLOSED_FORM:e}), {secs:.2} s (limit {LIMIT_C1_S} s)"),
    )
}

fn scanned_two_level_leakage(p: &TwoLevelParams) -> f64 {
    let h = two_level_collective_h(p);
    let period = 2.0 * std::f64::consts::PI / (p.detuning * p.detuning + 4.0 * p.collective_coupling().powi(2)).sqrt();
    refined_max(0.0, 2.0 * period, 2001, |t| expm_taylor(&h, t)[(1, 0)].norm_sqr())
}

fn c2_leakage_values() -> Outcome {
    let expected = [(1u32, 1.0 / 26.0), (5, 1.0 / 6.0), (25, 0.5)];
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for (n, want) in expected {
        let p = TwoLevelParams::new(n, 1.0, 10.0).unwrap();
        let closed = max_leakage_two_level(&p);
        let scanned = scanned_two_level_leakage(&p);
        worst = worst.max((closed - scanned).abs()).max((closed - want).abs());
        parts.push(format!("N={n}: {closed:.6}"));
    }
    outcome(worst <= TOL_LEAKAGE, format!("{}; max deviation {worst:.2e} (tol {TOL_LEAKAGE:e})", parts.join(", ")))
}

fn c3_scaling_law() -> Outcome {
    let ns = [1, 4, 16, 64];
    let slope = scaling_exponent(1.0, 0.01, &ns).unwrap();
    let numeric = scaling_exponent_with(&ns, |n| min_detuning_bisection(n, 1.0, 0.01, 1e-8)).unwrap();
    let d1 = min_detuning(1, 1.0, 0.01).unwrap();
    let oracle_d1 = 2.0 * 99f64.sqrt();
    let pass = (slope - 0.5).abs() <= TOL_SLOPE
        && (numeric - 0.5).abs() <= TOL_SLOPE
        && (d1 - oracle_d1).abs() <= TOL_DSTAR
        && (d1 - 19.8997).abs() <= 1e-4;
    outcome(pass, format!("slope {slope:.12} (bisection {numeric:.6}), Δ*(1) = {d1:.7} vs 2√99 = {oracle_d1:.7}"))
}

fn c4_discrepancy() -> Outcome {
    let p = TwoLevelParams::new(25, 1.0, 10.0).unwrap();
    let r = condition_report(p, 10.0).unwrap();
    let leak = scanned_two_level_leakage(&p);
    let pass = r.legacy_pass && !r.collective_pass() && (leak - 0.5).abs() <= TOL_LEAKAGE;
    outcome(
        pass,
        format!(
            "legacy Δ/g = {} ({}), Δ/(√N g) = {} ({}), scanned leakage {leak:.8}",
            r.legacy_ratio,
            if r.legacy_pass { "pass" } else { "fail" },
            r.ratios[0].value,
            if r.collective_pass() { "pass" } else { "fail" }
        ),
    )
}

fn c5_fig2() -> Outcome {
    let start = Instant::now();
    let grid = uniform_grid(0.0, 100.0, 2001);
    let mut ok = true;
    let mut parts = Vec::new();
    for scaling in [GammaScaling::Single, GammaScaling::Collective] {
        let stats: Vec<(f64, f64)> = [1, 5, 25]
            .iter()
            .map(|&n| {
                let p = TwoLevelParams::new(n, 1.0, 10.0).unwrap().with_decay(0.1, 0.01).unwrap();
                let tr = simulate_collective_decay(&p, scaling, &grid, LindbladOptions::default()).unwrap();
                (tr.min_of("pop_plus").unwrap(), tr.time_average("pop_plus").unwrap())
            })
            .collect();
        ok &= stats.windows(2).all(|w| w[1].0 < w[0].0 && w[1].1 < w[0].1);
        parts.push(format!(
            "{scaling:?}: min {:.3}/{:.3}/{:.3}, mean {:.3}/{:.3}/{:.3}",
            stats[0].0, stats[1].0, stats[2].0, stats[0].1, stats[1].1, stats[2].1
        ));
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(ok && secs < LIMIT_C5_S, format!("{}; {secs:.2} s (limit {LIMIT_C5_S} s)", parts.join("; ")))
}

fn c6_lambda_resonant() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for n in [1u32, 5, 25] {
        let p = LambdaParams::resonant(n, 1.0, 1.0, 10.0).unwrap();
        let (ng, om, d) = (n as f64, 1.0, 10.0);
        let formula = 4.0 * ng / (4.0 * ng + 4.0 * om * om + d * d);
        let h = lambda_resonant_h(&p).unwrap();
        let period = 2.0 * std::f64::consts::PI / (4.0 * ng + 4.0 + d * d).sqrt();
        let scanned = refined_max(0.0, 2.0 * period, 2001, |t| expm_taylor(&h, t)[(0, 1)].norm_sqr());
        worst = worst.max((scanned - formula).abs());
        parts.push(format!("N={n}: {scanned:.7} vs {formula:.7}"));
    }
    outcome(worst <= TOL_LAMBDA_PEAK, format!("{}; max deviation {worst:.2e}", parts.join(", ")))
}

/// Null vector of the real symmetric 3×3 `m` from the cross product of its
/// two most independent rows.
fn null_vector(m: [[f64; 3]; 3]) -> [f64; 3] {
    let cross = |a: [f64; 3], b: [f64; 3]| [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
    let mut best = [0.0; 3];
    let mut best_norm = 0.0;
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let c = cross(m[i], m[j]);
        let nn = c.iter().map(|x| x * x).sum::<f64>();
        if nn > best_norm {
            best_norm = nn;
            best = c;
        }
    }
    let norm = best_norm.sqrt();
    best.map(|x| x / norm)
}

fn c7_expansion() -> Outcome {
    let p = LambdaParams::new(1, 1.0, 10.0, 100.0, 0.3).unwrap();
    let rv = reduce_variables(&p).unwrap();
    let eps = rv.epsilon;
    let (c2, c1, c0) = rv.cubic_coefficients();
    let roots: Vec<f64> = cubic_roots(c2, c1, c0).iter().map(|z| z.re).collect();
    let pert = lambda_nonresonant_perturbative(&p, [re(0.0), re(1.0), re(0.0)]).unwrap();

    // oracle eigenvectors of H/Δ at each root; branch = dominant component
    let h = lambda_nonresonant_h(&p);
    let mut branches: [Option<(f64, [f64; 3])>; 3] = [None; 3];
    for &r in &roots {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = h[(i, j)].re / p.detuning - if i == j { r } else { 0.0 };
            }
        }
        let v = null_vector(m);
        let dominant = (0..3).max_by(|&a, &b| v[a].abs().total_cmp(&v[b].abs())).unwrap();
        // coefficient triple from initial |u₂⟩: v (v·e₂)
        branches[dominant] = Some((r, v.map(|x| x * v[1])));
    }
    let Some(exact) = branches.iter().copied().collect::<Option<Vec<_>>>() else {
        return outcome(false, "branch identification by dominant component is not one-to-one".into());
    };

    let mut root_dev: f64 = 0.0;
    let mut coef_dev: f64 = 0.0;
    for j in 0..3 {
        root_dev = root_dev.max((exact[j].0 - pert.branches[j].root).abs());
        for k in 0..3 {
            coef_dev = coef_dev.max((re(exact[j].1[k]) - pert.branches[j].amplitudes[k]).norm());
        }
    }
    let roots_ok = root_dev <= 2.0 * eps * eps;
    let coefs_ok = coef_dev <= 3.0 * eps * eps;
    let gamma_exact: Vec<String> = exact.iter().map(|b| format!("{:+.4}", b.1[2])).collect();
    let gamma_pert: Vec<String> = pert.coefficients(2).iter().map(|z| format!("{:+.4}", z.re)).collect();
    outcome(
        roots_ok && coefs_ok,
        format!(
            "roots max dev {root_dev:.4} vs 2ε² = {:.2} ({}); coefficients max dev {coef_dev:.4} vs 3ε² = {:.2} ({}); γ_j exact [{}] vs expansion [{}]",
            2.0 * eps * eps,
            if roots_ok { "ok" } else { "exceeded" },
            3.0 * eps * eps,
            if coefs_ok { "ok" } else { "exceeded" },
            gamma_exact.join(", "),
            gamma_pert.join(", ")
        ),
    )
}

fn c8_fig5() -> Outcome {
    let start = Instant::now();
    let times = uniform_grid(0.0, 100.0, 20001);
    let u2 = [re(0.0), re(1.0), re(0.0)];
    let mut gammas = Vec::new();
    let mut alphas = Vec::new();
    let mut spot: f64 = 0.0;
    for n in [1u32, 5, 25] {
        let p = LambdaParams::new(n, 1.0, 10.0, 100.0, 0.3).unwrap();
        let (tr, sol): (Trajectory, _) = lambda_nonresonant_exact(&p, u2, &times).unwrap();
        gammas.push(tr.max_of("pop_u3").unwrap());
        alphas.push(tr.max_of("pop_u1").unwrap());
        // spot-check the eigen-solution against an independent exponential
        let h = lambda_nonresonant_h(&p);
        for t in [3.7, 41.0, 99.9] {
            let psi = expm_taylor(&h, t).matvec(&ComplexVector::basis(3, 1));
            let amp = sol.amplitudes_at(t);
            for k in 0..3 {
                spot = spot.max((psi[k] - amp[k]).norm());
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = gammas[0] < gammas[1]
        && gammas[1] < gammas[2]
        && alphas.iter().all(|&a| a < FIG5_ALPHA_BOUND)
        && spot <= TOL_CLOSED_FORM
        && secs < LIMIT_C8_S;
    outcome(
        pass,
        format!(
            "max|γ|² {:.4}/{:.4}/{:.4}, max|α|² {:.5}/{:.5}/{:.5} (< {FIG5_ALPHA_BOUND}), spot check {spot:.1e}, {secs:.2} s",
            gammas[0], gammas[1], gammas[2], alphas[0], alphas[1], alphas[2]
        ),
    )
}

fn c9_oracle() -> Outcome {
    let mut leak: f64 = 0.0;
    let mut pop: f64 = 0.0;
    for n in 1..=3u32 {
        let p = TwoLevelParams::new(n, 1.0, 10.0).unwrap();
        let space = FullSpace::oracle(n, AtomLevels::Two, 2).unwrap();
        let h = two_level_full_h(&p, 2).unwrap();
        let [plus, minus, _] = space.collective_basis().unwrap();
        let alpha = (1.0 + p.theta().powi(2)).sqrt();
        for t in uniform_grid(0.0, 10.0, 201) {
            let psi = expm_taylor(&h, t).matvec(&plus);
            let pp = plus.inner(&psi).norm_sqr();
            let pm = minus.inner(&psi).norm_sqr();
            leak = leak.max((1.0 - pp - pm).abs());
            let beta2 = p.theta().powi(2) / alpha.powi(2);
            let closed = 1.0 - beta2 * (0.5 * alpha * p.detuning * t).sin().powi(2);
            pop = pop.max((pp - closed).abs());
        }
        // same check through the master-equation path with zero rates
        let run = full_decay_solution(&p, 1, &uniform_grid(0.0, 5.0, 51), LindbladOptions::default()).unwrap();
        for (k, &t) in run.solution.times.iter().enumerate() {
            let pp = run.solution.expectation(&run.basis[0])[k];
            pop = pop.max((pp - two_level_u(&p, t)[(0, 0)].norm_sqr()).abs());
        }
        leak = leak.max(run.leakage().iter().copied().fold(0.0, f64::max));
    }
    outcome(
        leak <= TOL_ORACLE_LEAK && pop <= TOL_ORACLE_POP,
        format!("projector leakage {leak:.1e} (tol {TOL_ORACLE_LEAK:e}), P+ deviation {pop:.1e} (tol {TOL_ORACLE_POP:e})"),
    )
}

fn rk4_factor() -> f64 {
    let p = TwoLevelParams::new(5, 1.0, 10.0).unwrap().with_decay(0.1, 0.01).unwrap();
    let grid = uniform_grid(0.0, 10.0, 11);
    let run = |h: f64| {
        collective_decay_solution(&p, GammaScaling::Single, &grid, LindbladOptions::with_step(h))
            .unwrap()
            .population(0)
    };
    let h = 0.04;
    let (coarse, fine, reference) = (run(h), run(h / 2.0), run(h / 4.0));
    let err = |a: &[f64]| a.iter().zip(&reference).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    err(&coarse) / err(&fine)
}

fn c10_hygiene() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0010);
    let mut unitarity: f64 = 0.0;
    for dim in [2usize, 3, 8, 16] {
        for _ in 0..5 {
            let mut h = ComplexMatrix::zeros(dim, dim);
            for i in 0..dim {
                h[(i, i)] = re(rng.gen_range(-10.0..10.0));
                for j in 0..i {
                    let z = C64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
                    h[(i, j)] = z;
                    h[(j, i)] = z.conj();
                }
            }
            unitarity = unitarity.max(unitary_propagator(&h, rng.gen_range(0.0..20.0)).unwrap().unitarity_error());
        }
    }
    for n in [1u32, 5, 25] {
        let p = TwoLevelParams::new(n, 1.0, 10.0).unwrap();
        let lp = LambdaParams::resonant(n, 1.0, 1.0, 10.0).unwrap();
        for t in uniform_grid(0.0, 50.0, 101) {
            unitarity = unitarity.max(two_level_u(&p, t).unitarity_error());
            unitarity = unitarity.max(lambda_resonant_u(&lp, t).unwrap().unitarity_error());
        }
    }

    let mut drift: f64 = 0.0;
    let mut min_eig = f64::INFINITY;
    let grid = uniform_grid(0.0, 100.0, 201);
    for scaling in [GammaScaling::Single, GammaScaling::Collective] {
        let p = TwoLevelParams::new(25, 1.0, 10.0).unwrap().with_decay(0.1, 0.01).unwrap();
        let sol = collective_decay_solution(&p, scaling, &grid, LindbladOptions::default()).unwrap();
        drift = drift.max(sol.max_trace_drift());
        min_eig = min_eig.min(sol.min_eigenvalue().unwrap());
    }
    let p2 = TwoLevelParams::new(2, 1.0, 10.0).unwrap().with_decay(0.1, 0.05).unwrap();
    let full = full_decay_solution(&p2, 1, &uniform_grid(0.0, 20.0, 41), LindbladOptions::default()).unwrap();
    drift = drift.max(full.solution.max_trace_drift());
    min_eig = min_eig.min(full.solution.min_eigenvalue().unwrap());

    let factor = rk4_factor();

    let p = TwoLevelParams::new(5, 1.0, 10.0).unwrap().with_decay(0.1, 0.01).unwrap();
    let tr = simulate_collective_decay(&p, GammaScaling::Single, &uniform_grid(0.0, 20.0, 401), LindbladOptions::default())
        .unwrap();
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    write_csv(&Table::from_trajectory(&tr), &a).unwrap();
    write_csv(&Table::from_trajectory(&tr), &b).unwrap();
    let digest = |path: &std::path::Path| hex::encode(Sha256::digest(std::fs::read(path).unwrap()));
    let in_memory = hex::encode(Sha256::digest(csv_bytes(&Table::from_trajectory(&tr)).unwrap()));
    let deterministic = digest(&a) == digest(&b) && digest(&a) == in_memory;

    let pass = unitarity <= TOL_UNITARITY
        && drift <= TOL_TRACE
        && min_eig >= TOL_POSITIVITY
        && factor >= MIN_RK4_FACTOR
        && deterministic;
    outcome(
        pass,
        format!(
            "unitarity {unitarity:.1e}, trace drift {drift:.1e}, min eigenvalue {min_eig:.1e}, RK4 factor {factor:.2} (≥ {MIN_RK4_FACTOR}), CSV determinism {deterministic}"
        ),
    )
}

fn main() -> ExitCode {
    // `cargo test` passes harness flags; listing mode must not run the suite
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return ExitCode::SUCCESS;
    }
    let criteria: [(u32, &str, fn() -> Outcome); 10] = [
        (1, "closed-form/numeric equivalence", c1_closed_forms),
        (2, "leakage values", c2_leakage_values),
        (3, "square-root scaling law", c3_scaling_law),
        (4, "condition discrepancy witness", c4_discrepancy),
        (5, "Fig. 2 property suite", c5_fig2),
        (6, "Λ-resonant subspace peak", c6_lambda_resonant),
        (7, "nonresonant expansion", c7_expansion),
        (8, "Fig. 5 property suite", c8_fig5),
        (9, "oracle equivalence", c9_oracle),
        (10, "numerical hygiene", c10_hygiene),
    ];
    let mut unexpected = Vec::new();
    let mut passed = 0;
    for (id, name, f) in criteria {
        let o = f();
        let expected_fail = EXPECTED_FAILURES.contains(&id);
        let tag = match (o.pass, expected_fail) {
            (true, false) => "PASS",
            (false, true) => "FAIL (expected)",
            (false, false) => "FAIL",
            (true, true) => "PASS (unexpected)",
        };
        println!("criterion {id:>2} [{name}]: {tag}: {}", o.detail);
        if o.pass {
            passed += 1;
        }
        if o.pass == expected_fail {
            unexpected.push(id);
        }
    }
    println!("acceptance: {passed}/10 criteria pass");
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected results for criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}
