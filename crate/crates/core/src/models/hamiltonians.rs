use super::params::{LambdaParams, TwoLevelParams};
use super::space::{AtomLevels, FullSpace, LEVEL_E, LEVEL_G, LEVEL_S};
use crate::numerics::{ComplexMatrix, C64};
use crate::{Error, Result};

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Two-level collective generator on `(|+⟩, |−⟩)`:
/// `[[Δ/2, √N g], [√N g, −Δ/2]]`. The identity part is dropped; see
/// [`two_level_global_shift`].
pub fn two_level_collective_h(p: &TwoLevelParams) -> ComplexMatrix {
    let half = 0.5 * p.detuning;
    let c = p.collective_coupling();
    ComplexMatrix::from_real_rows(&[&[half, c], &[c, -half]]).expect("2x2")
}

/// The identity coefficient −(N−1)Δ/2 dropped from [`two_level_collective_h`].
pub fn two_level_global_shift(p: &TwoLevelParams) -> f64 {
    -0.5 * (p.n_atoms as f64 - 1.0) * p.detuning
}

/// `h + shift·I`, for phase-sensitive comparisons with full-space operators.
pub fn with_global_shift(h: &ComplexMatrix, shift: f64) -> ComplexMatrix {
    let mut out = h.clone();
    out.shift_diagonal(re(shift));
    out
}

/// `H_R = Σ_j [Δσ_j^z/2 + g(σ_j^− a† + σ_j^+ a)]` on the full space.
pub fn two_level_full_h(p: &TwoLevelParams, fock_cutoff: usize) -> Result<ComplexMatrix> {
    let space = FullSpace::oracle(p.n_atoms, AtomLevels::Two, fock_cutoff)?;
    let dim = space.dim();
    let a = space.annihilation();
    let ad = a.adjoint();
    let sz_local = ComplexMatrix::from_real_diag(&[-1.0, 1.0]);
    let lower = space.transition(LEVEL_G, LEVEL_E);

    let mut h = ComplexMatrix::zeros(dim, dim);
    for j in 0..p.n_atoms as usize {
        h.axpy(re(0.5 * p.detuning), &space.atom_op(j, &sz_local));
        let sm = space.atom_op(j, &lower);
        let sp = sm.adjoint();
        h.axpy(re(p.g), &sm.matmul(&ad));
        h.axpy(re(p.g), &sp.matmul(&a));
    }
    Ok(h)
}

/// Dispersive effective Hamiltonian with λ = g²/Δ:
///
/// `λ Σ_j (|e_j⟩⟨e_j| a a† − |g_j⟩⟨g_j| a† a) + λ Σ_{j≠k} σ_j^+ σ_k^−`.
///
/// `a a†` is formed from truncated matrices, so it vanishes on the top Fock
/// level.
pub fn two_level_effective_h(p: &TwoLevelParams, fock_cutoff: usize) -> Result<ComplexMatrix> {
    let space = FullSpace::oracle(p.n_atoms, AtomLevels::Two, fock_cutoff)?;
    let dim = space.dim();
    let lambda = p.g * p.g / p.detuning;
    let a = space.annihilation();
    let ad = a.adjoint();
    let aad = a.matmul(&ad);
    let ada = ad.matmul(&a);
    let pe = space.transition(LEVEL_E, LEVEL_E);
    let pg = space.transition(LEVEL_G, LEVEL_G);
    let lower = space.transition(LEVEL_G, LEVEL_E);

    let n = p.n_atoms as usize;
    let lowering: Vec<ComplexMatrix> = (0..n).map(|j| space.atom_op(j, &lower)).collect();
    let mut h = ComplexMatrix::zeros(dim, dim);
    for j in 0..n {
        h.axpy(re(lambda), &space.atom_op(j, &pe).matmul(&aad));
        h.axpy(re(-lambda), &space.atom_op(j, &pg).matmul(&ada));
        for k in 0..n {
            if j != k {
                h.axpy(re(lambda), &lowering[j].adjoint().matmul(&lowering[k]));
            }
        }
    }
    Ok(h)
}

/// Λ generator at two-photon resonance on `(|u₁⟩, |u₂⟩, |u₃⟩)`:
/// `[[Δ, √N g, Ω], [√N g, 0, 0], [Ω, 0, 0]]`.
pub fn lambda_resonant_h(p: &LambdaParams) -> Result<ComplexMatrix> {
    if p.raman_detuning != 0.0 {
        return Err(Error::ExpectedResonance(p.raman_detuning));
    }
    let c = p.collective_coupling();
    let w = p.omega;
    Ok(ComplexMatrix::from_real_rows(&[&[p.detuning, c, w], &[c, 0.0, 0.0], &[w, 0.0, 0.0]])
        .expect("3x3"))
}

/// Λ generator with Raman detuning δ on `(|u₁⟩, |u₂⟩, |u₃⟩)`:
/// `[[δ+Δ, √N g, Ω], [√N g, 0, 0], [Ω, 0, δ]]`. The identity part is
/// dropped; see [`lambda_global_shift`].
pub fn lambda_nonresonant_h(p: &LambdaParams) -> ComplexMatrix {
    let c = p.collective_coupling();
    let w = p.omega;
    let d = p.raman_detuning;
    ComplexMatrix::from_real_rows(&[&[d + p.detuning, c, w], &[c, 0.0, 0.0], &[w, 0.0, d]])
        .expect("3x3")
}

/// The identity coefficient −N(δ+Δ) dropped from [`lambda_nonresonant_h`].
pub fn lambda_global_shift(p: &LambdaParams) -> f64 {
    -(p.n_atoms as f64) * (p.raman_detuning + p.detuning)
}

/// Rotating-frame Λ Hamiltonian on the full space:
///
/// `Σ_j [−(δ+Δ)|g_j⟩⟨g_j| − Δ|s_j⟩⟨s_j| + (g|e_j⟩⟨g_j| a + Ω|e_j⟩⟨s_j| + h.c.)]`.
pub fn lambda_full_h(p: &LambdaParams, fock_cutoff: usize) -> Result<ComplexMatrix> {
    let space = FullSpace::oracle(p.n_atoms, AtomLevels::Three, fock_cutoff)?;
    let dim = space.dim();
    let a = space.annihilation();
    let pg = space.transition(LEVEL_G, LEVEL_G);
    let ps = space.transition(LEVEL_S, LEVEL_S);
    let eg = space.transition(LEVEL_E, LEVEL_G);
    let es = space.transition(LEVEL_E, LEVEL_S);

    let mut h = ComplexMatrix::zeros(dim, dim);
    for j in 0..p.n_atoms as usize {
        h.axpy(re(-(p.raman_detuning + p.detuning)), &space.atom_op(j, &pg));
        h.axpy(re(-p.detuning), &space.atom_op(j, &ps));
        let cav = space.atom_op(j, &eg).matmul(&a);
        let drive = space.atom_op(j, &es);
        h.axpy(re(p.g), &cav);
        h.axpy(re(p.g), &cav.adjoint());
        h.axpy(re(p.omega), &drive);
        h.axpy(re(p.omega), &drive.adjoint());
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::space::CollectiveKind;
    use crate::numerics::ComplexVector;

    fn assert_close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) {
        let d = a.max_abs_diff(b);
        assert!(d <= tol, "max diff {d:e} > {tol:e}\n{a:?}\n{b:?}");
    }

    /// Norm of the component of `H v` outside span(basis).
    fn leakage(h: &ComplexMatrix, v: &ComplexVector, basis: &[ComplexVector]) -> f64 {
        let hv = h.matvec(v);
        let mut residual = hv.as_slice().to_vec();
        for b in basis {
            let c = b.inner(&hv);
            for (r, bk) in residual.iter_mut().zip(b.as_slice()) {
                *r -= c * bk;
            }
        }
        residual.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    #[test]
    fn collective_two_level_entries() {
        let h = two_level_collective_h(&TwoLevelParams::new(1, 1.0, 10.0).unwrap());
        let want = ComplexMatrix::from_real_rows(&[&[5.0, 1.0], &[1.0, -5.0]]).unwrap();
        assert_eq!(h, want);
        let decoupled = two_level_collective_h(&TwoLevelParams::new(3, 0.0, 10.0).unwrap());
        assert_eq!(decoupled, ComplexMatrix::from_real_diag(&[5.0, -5.0]));
    }

    #[test]
    fn collective_matrices_depend_on_root_n_g_only() {
        let a = TwoLevelParams::new(4, 1.0, 10.0).unwrap();
        let b = TwoLevelParams::new(1, 2.0, 10.0).unwrap();
        assert_eq!(two_level_collective_h(&a), two_level_collective_h(&b));
        let la = LambdaParams::new(4, 1.0, 3.0, 50.0, 0.2).unwrap();
        let lb = LambdaParams::new(1, 2.0, 3.0, 50.0, 0.2).unwrap();
        assert_eq!(lambda_nonresonant_h(&la), lambda_nonresonant_h(&lb));
    }

    #[test]
    fn lambda_resonant_entries() {
        let h = lambda_resonant_h(&LambdaParams::resonant(1, 1.0, 1.0, 10.0).unwrap()).unwrap();
        let want =
            ComplexMatrix::from_real_rows(&[&[10.0, 1.0, 1.0], &[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0]])
                .unwrap();
        assert_eq!(h, want);
        let big = lambda_resonant_h(&LambdaParams::resonant(25, 1.0, 1.0, 10.0).unwrap()).unwrap();
        assert_eq!(big[(0, 1)], re(5.0));
        let dark = lambda_resonant_h(&LambdaParams::resonant(2, 1.0, 0.0, 10.0).unwrap()).unwrap();
        assert_eq!(dark[(0, 2)], re(0.0));
        assert!(matches!(
            lambda_resonant_h(&LambdaParams::new(1, 1.0, 1.0, 10.0, 0.1).unwrap()),
            Err(Error::ExpectedResonance(_))
        ));
    }

    #[test]
    fn lambda_nonresonant_entries() {
        let p = LambdaParams::new(1, 1.0, 10.0, 100.0, 0.3).unwrap();
        let h = lambda_nonresonant_h(&p);
        let want = ComplexMatrix::from_real_rows(&[
            &[100.3, 1.0, 10.0],
            &[1.0, 0.0, 0.0],
            &[10.0, 0.0, 0.3],
        ])
        .unwrap();
        assert_close(&h, &want, 1e-13);
        let res = LambdaParams::resonant(3, 1.0, 2.0, 20.0).unwrap();
        assert_eq!(lambda_nonresonant_h(&res), lambda_resonant_h(&res).unwrap());
    }

    #[test]
    fn full_two_level_jaynes_cummings_element() {
        let p = TwoLevelParams::new(1, 0.7, 10.0).unwrap();
        let h = two_level_full_h(&p, 1).unwrap();
        let space = FullSpace::new(1, AtomLevels::Two, 1).unwrap();
        let e0 = space.index(&[LEVEL_E], 0);
        let g1 = space.index(&[LEVEL_G], 1);
        assert_eq!(h[(e0, g1)], re(0.7));
        assert!(h.is_hermitian(1e-12));
    }

    #[test]
    fn full_two_level_restricts_to_collective_block() {
        for n in 1..=3 {
            let p = TwoLevelParams::new(n, 1.0, 10.0).unwrap();
            let h = two_level_full_h(&p, 2).unwrap();
            assert!(h.hermiticity_violation() <= 1e-12);
            let space = FullSpace::oracle(n, AtomLevels::Two, 2).unwrap();
            let [plus, minus, _] = space.collective_basis().unwrap();
            let block = h.project_onto(&[plus.clone(), minus.clone()]);
            let want = with_global_shift(&two_level_collective_h(&p), two_level_global_shift(&p));
            assert_close(&block, &want, 1e-12);
            let span = [plus.clone(), minus.clone()];
            assert!(leakage(&h, &plus, &span) <= 1e-12);
            assert!(leakage(&h, &minus, &span) <= 1e-12);
            let nexc = space.excitation_number();
            assert!(h.commutator(&nexc).max_abs() <= 1e-12);
        }
    }

    #[test]
    fn collective_coupling_element_for_two_atoms() {
        let p = TwoLevelParams::new(2, 1.0, 10.0).unwrap();
        let h = two_level_full_h(&p, 2).unwrap();
        let space = FullSpace::oracle(2, AtomLevels::Two, 2).unwrap();
        let plus = space.collective_state(CollectiveKind::E, 0).unwrap();
        let minus = space.collective_state(CollectiveKind::G, 1).unwrap();
        let el = h.expectation(&plus, &minus);
        assert!((el - re(2f64.sqrt())).norm() <= 1e-12);
    }

    #[test]
    fn effective_hamiltonian_stark_shifts() {
        for n in 1..=3 {
            let p = TwoLevelParams::new(n, 1.0, 10.0).unwrap();
            let h = two_level_effective_h(&p, 2).unwrap();
            assert!(h.hermiticity_violation() <= 1e-12);
            let space = FullSpace::oracle(n, AtomLevels::Two, 2).unwrap();
            let [plus, minus, g0] = space.collective_basis().unwrap();
            let block = h.project_onto(&[plus, minus]);
            let stark = n as f64 * 0.1;
            assert_close(&block, &ComplexMatrix::from_real_diag(&[stark, -stark]), 1e-14);
            assert_eq!(block[(0, 1)], re(0.0));
            assert_eq!(h.expectation(&g0, &g0), re(0.0));
            assert!(h.commutator(&space.photon_number()).max_abs() <= 1e-12);
        }
    }

    #[test]
    fn full_lambda_restricts_to_nonresonant_block() {
        for n in 1..=3 {
            let p = LambdaParams::new(n, 0.8, 1.7, 12.0, 0.4).unwrap();
            let h = lambda_full_h(&p, 2).unwrap();
            assert!(h.hermiticity_violation() <= 1e-12);
            let space = FullSpace::oracle(n, AtomLevels::Three, 2).unwrap();
            let basis = space.collective_basis().unwrap();
            let block = h.project_onto(&basis);
            let want = with_global_shift(&lambda_nonresonant_h(&p), lambda_global_shift(&p));
            assert_close(&block, &want, 1e-12);
            for v in &basis {
                assert!(leakage(&h, v, &basis) <= 1e-12);
            }
            assert!(h.commutator(&space.excitation_number()).max_abs() <= 1e-12);
        }
        let p2 = LambdaParams::new(2, 1.0, 1.0, 10.0, 0.0).unwrap();
        let space = FullSpace::oracle(2, AtomLevels::Three, 2).unwrap();
        let [u1, u2, _] = space.collective_basis().unwrap();
        let el = lambda_full_h(&p2, 2).unwrap().expectation(&u1, &u2);
        assert!((el - re(2f64.sqrt())).norm() <= 1e-12);
    }

    #[test]
    fn uncoupled_lambda_is_diagonal() {
        let p = LambdaParams::new(2, 0.0, 0.0, 10.0, 0.5).unwrap();
        let h = lambda_full_h(&p, 1).unwrap();
        let diag = ComplexMatrix::from_diag(&h.diag());
        assert_eq!(h, diag);
    }

    #[test]
    fn oracle_builders_refuse_large_n() {
        let p = TwoLevelParams::new(4, 1.0, 10.0).unwrap();
        assert!(matches!(two_level_full_h(&p, 2), Err(Error::DimensionCap { .. })));
        assert!(matches!(two_level_effective_h(&p, 2), Err(Error::DimensionCap { .. })));
        let l = LambdaParams::new(4, 1.0, 1.0, 10.0, 0.0).unwrap();
        assert!(matches!(lambda_full_h(&l, 2), Err(Error::DimensionCap { .. })));
    }
}
