use crate::models::{lambda_nonresonant_h, LambdaParams};
use crate::numerics::{hermitian_eig, ComplexVector, C64};
use crate::trajectory::Trajectory;
use crate::{Error, Result};

/// Above this ε the first-order expansion is flagged as unreliable.
pub const LARGE_EPSILON: f64 = 0.2;

/// Flagged when the differential Stark shift `|λ_l² − λ_c²|ε²` reaches this
/// fraction of the Raman detuning `|λ|ε`.
const STARK_RATIO_LIMIT: f64 = 0.5;

/// Dimensionless rescaling of (δ, √N g, Ω) by Δ·ε.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedVariables {
    pub epsilon: f64,
    /// λ = δ/(Δε)
    pub lambda: f64,
    /// λ_c = √N g/(Δε)
    pub lambda_c: f64,
    /// λ_l = Ω/(Δε)
    pub lambda_l: f64,
}

impl ReducedVariables {
    /// `(c2, c1, c0)` of the characteristic cubic `p³ + c2 p² + c1 p + c0` of
    /// the Λ generator divided by Δ.
    pub fn cubic_coefficients(&self) -> (f64, f64, f64) {
        let e = self.epsilon;
        let l = self.lambda;
        let lc = self.lambda_c;
        let ll = self.lambda_l;
        let c2 = -(2.0 * l * e + 1.0);
        let c1 = -(lc * lc * e * e + ll * ll * e * e - l * l * e * e - l * e);
        let c0 = l * lc * lc * e * e * e;
        (c2, c1, c0)
    }

    /// `(δ/Δ, √N g/Δ, Ω/Δ)` rebuilt from the reduced variables.
    pub fn physical_ratios(&self) -> (f64, f64, f64) {
        (self.lambda * self.epsilon, self.lambda_c * self.epsilon, self.lambda_l * self.epsilon)
    }
}

/// ε is the largest of |δ|/|Δ|, √N g/|Δ|, Ω/|Δ|, so that |λ|, |λ_c|, |λ_l| ≤ 1
/// with at least one of them equal to 1 in magnitude.
pub fn reduce_variables(p: &LambdaParams) -> Result<ReducedVariables> {
    if p.detuning == 0.0 {
        return Err(Error::DegenerateScale("Δ = 0".into()));
    }
    let d = p.detuning;
    let ratios = [p.raman_detuning / d, p.collective_coupling() / d, p.omega / d];
    let epsilon = ratios.iter().map(|r| r.abs()).fold(0.0, f64::max);
    if epsilon == 0.0 {
        return Err(Error::DegenerateScale("δ, √N g and Ω are all zero".into()));
    }
    let scale = d * epsilon;
    Ok(ReducedVariables {
        epsilon,
        lambda: p.raman_detuning / scale,
        lambda_c: p.collective_coupling() / scale,
        lambda_l: p.omega / scale,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolutionKind {
    Exact,
    Perturbative,
}

/// Conditions under which the first-order expansion should not be trusted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExpansionWarning {
    /// ε ≥ [`LARGE_EPSILON`].
    LargeEpsilon(f64),
    /// |λ|ε ≤ |λ_c λ_l|ε²: the 1/λ coefficients are no longer small.
    RamanTermsUnbounded,
    /// The differential Stark shift is comparable to the Raman detuning; the
    /// roots p₂, p₃ and the |u₃⟩ amplitudes are then off by O(1) factors.
    StarkShiftComparable { ratio: f64 },
}

/// One Fourier component: frequency `Δ·root` and amplitudes `(α_j, β_j, γ_j)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Branch {
    pub root: f64,
    pub amplitudes: [C64; 3],
}

/// `x(t) = Σ_j x_j e^{−itΔp_j}` for `x ∈ {α, β, γ}`.
///
/// Branches are ordered j = 1, 2, 3: the branch continuing from |u₁⟩
/// (p ≈ 1), from |u₂⟩ (p ≈ 0) and from |u₃⟩ (p ≈ λε).
#[derive(Debug, Clone, PartialEq)]
pub struct NonresonantSolution {
    pub kind: SolutionKind,
    pub detuning: f64,
    pub branches: [Branch; 3],
    pub warnings: Vec<ExpansionWarning>,
}

impl NonresonantSolution {
    pub fn roots(&self) -> [f64; 3] {
        [self.branches[0].root, self.branches[1].root, self.branches[2].root]
    }

    /// Coefficients of basis state `k` (0 = α, 1 = β, 2 = γ) on each branch.
    pub fn coefficients(&self, k: usize) -> [C64; 3] {
        [
            self.branches[0].amplitudes[k],
            self.branches[1].amplitudes[k],
            self.branches[2].amplitudes[k],
        ]
    }

    pub fn amplitudes_at(&self, t: f64) -> [C64; 3] {
        let mut out = [C64::new(0.0, 0.0); 3];
        for b in &self.branches {
            let phase = C64::from_polar(1.0, -t * self.detuning * b.root);
            for k in 0..3 {
                out[k] += b.amplitudes[k] * phase;
            }
        }
        out
    }

    pub fn populations_at(&self, t: f64) -> [f64; 3] {
        self.amplitudes_at(t).map(|z| z.norm_sqr())
    }

    /// Populations of |u₁⟩, |u₂⟩, |u₃⟩ on `times`.
    pub fn trajectory(&self, times: &[f64]) -> Result<Trajectory> {
        let mut cols = [Vec::new(), Vec::new(), Vec::new()];
        for &t in times {
            for (col, p) in cols.iter_mut().zip(self.populations_at(t)) {
                col.push(p);
            }
        }
        let mut tr = Trajectory::new(times.to_vec());
        let [a, b, c] = cols;
        tr.push_series("pop_u1", a)?;
        tr.push_series("pop_u2", b)?;
        tr.push_series("pop_u3", c)?;
        Ok(tr.with_meta(
            "solution",
            match self.kind {
                SolutionKind::Exact => "exact",
                SolutionKind::Perturbative => "perturbative",
            },
        ))
    }

    /// `max_t |x(t)|²` for basis state `k` over `times`.
    pub fn max_population(&self, k: usize, times: &[f64]) -> f64 {
        times.iter().map(|&t| self.populations_at(t)[k]).fold(0.0, f64::max)
    }
}

fn check_initial(initial: &[C64; 3]) -> Result<()> {
    let norm: f64 = initial.iter().map(|z| z.norm_sqr()).sum();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidArgument(format!("initial state has norm² {norm}")));
    }
    Ok(())
}

/// Exact solution by diagonalising the Λ generator.
///
/// Eigenvectors are matched to branches by maximising the total weight each
/// places on its parent basis state over all six assignments.
pub fn lambda_nonresonant_exact(
    p: &LambdaParams,
    initial: [C64; 3],
    times: &[f64],
) -> Result<(Trajectory, NonresonantSolution)> {
    check_initial(&initial)?;
    let eig = hermitian_eig(&lambda_nonresonant_h(p))?;
    let v = &eig.eigenvectors;

    const PERMS: [[usize; 3]; 6] =
        [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut scored: Vec<(f64, [usize; 3])> = PERMS
        .iter()
        .map(|perm| ((0..3).map(|k| v[(k, perm[k])].norm_sqr()).sum::<f64>(), *perm))
        .collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0));
    if scored[0].0 - scored[1].0 < 1e-12 {
        return Err(Error::AmbiguousBranch(format!(
            "assignments {:?} and {:?} tie",
            scored[0].1, scored[1].1
        )));
    }
    let perm = scored[0].1;

    let psi0 = ComplexVector::new(initial.to_vec());
    let branches = perm.map(|col| {
        let vec = v.column(col);
        let weight = vec.inner(&psi0);
        Branch {
            root: eig.eigenvalues[col] / p.detuning,
            amplitudes: [vec[0] * weight, vec[1] * weight, vec[2] * weight],
        }
    });
    let sol = NonresonantSolution {
        kind: SolutionKind::Exact,
        detuning: p.detuning,
        branches,
        warnings: Vec::new(),
    };
    let tr = sol.trajectory(times)?;
    Ok((tr, sol))
}

/// First-order ε-expansion of roots and branch amplitudes.
///
/// Fails at exact two-photon resonance (λ = 0), where the expansion has
/// 1/λ poles; the resonant closed form covers that case.
pub fn lambda_nonresonant_perturbative(
    p: &LambdaParams,
    initial: [C64; 3],
) -> Result<NonresonantSolution> {
    check_initial(&initial)?;
    let rv = reduce_variables(p)?;
    let e = rv.epsilon;
    let l = rv.lambda;
    let lc = rv.lambda_c;
    let ll = rv.lambda_l;
    if l == 0.0 {
        return Err(Error::Domain(
            "ε-expansion is singular at two-photon resonance (λ = 0)".into(),
        ));
    }

    let mut warnings = Vec::new();
    if e >= LARGE_EPSILON {
        log::warn!("ε = {e} is not small; first-order expansion unreliable");
        warnings.push(ExpansionWarning::LargeEpsilon(e));
    }
    if (l * e).abs() <= (lc * ll).abs() * e * e {
        warnings.push(ExpansionWarning::RamanTermsUnbounded);
    }
    let stark = (ll * ll - lc * lc).abs() * e * e / (l * e).abs();
    if stark >= STARK_RATIO_LIMIT {
        warnings.push(ExpansionWarning::StarkShiftComparable { ratio: stark });
    }

    let [a0, b0, g0] = initial;
    let alpha = [a0 + (b0 * lc + g0 * ll) * e, -b0 * lc * e, -g0 * ll * e];
    let beta = [
        a0 * lc * e,
        b0 + (g0 * ll - a0 * l) * (lc * e / l),
        -g0 * (lc * ll * e / l),
    ];
    let gamma = [
        a0 * ll * e,
        b0 * (lc * ll * e / l),
        g0 - (a0 * l + b0 * lc) * (ll * e / l),
    ];
    let roots = [1.0 + l * e, 0.0, l * e];
    let branches = [0, 1, 2].map(|j| Branch {
        root: roots[j],
        amplitudes: [alpha[j], beta[j], gamma[j]],
    });
    Ok(NonresonantSolution {
        kind: SolutionKind::Perturbative,
        detuning: p.detuning,
        branches,
        warnings,
    })
}
