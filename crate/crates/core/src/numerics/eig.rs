use super::matrix::{ComplexMatrix, C64};
use super::HERMITIAN_TOL;
use crate::{Error, Result};

const MAX_SWEEPS: usize = 64;

/// Spectral decomposition `M = V diag(λ) V†` of a Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EigDecomposition {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector for `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl EigDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `V f(diag(λ)) V†` for a scalar function of the eigenvalues.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let n = self.dim();
        let v = &self.eigenvectors;
        let fv: Vec<C64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = (0..n).map(|k| v[(i, k)] * fv[k] * v[(j, k)].conj()).sum();
            }
        }
        out
    }

    /// `‖M V − V diag(λ)‖_max`.
    pub fn residual(&self, m: &ComplexMatrix) -> f64 {
        let mv = m.matmul(&self.eigenvectors);
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for k in 0..n {
                let r = mv[(i, k)] - self.eigenvectors[(i, k)] * self.eigenvalues[k];
                worst = worst.max(r.norm());
            }
        }
        worst
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Rejects inputs whose Hermiticity violation exceeds `1e-10 * max|M|`. The
/// strictly lower triangle is treated as the conjugate of the upper one after
/// symmetrisation, so tiny asymmetries within tolerance are averaged out.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<EigDecomposition> {
    if !m.is_square() || m.rows() == 0 {
        return Err(Error::DimensionMismatch(format!(
            "eigendecomposition needs a non-empty square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let scale = m.max_abs();
    let violation = m.hermiticity_violation();
    let tolerance = HERMITIAN_TOL * scale;
    if violation > tolerance {
        return Err(Error::NonHermitian { max_violation: violation, tolerance });
    }

    let n = m.rows();
    let mut a = m.clone();
    for i in 0..n {
        a[(i, i)] = C64::new(a[(i, i)].re, 0.0);
        for j in i + 1..n {
            let avg = 0.5 * (a[(i, j)] + a[(j, i)].conj());
            a[(i, j)] = avg;
            a[(j, i)] = avg.conj();
        }
    }
    let mut v = ComplexMatrix::identity(n);

    let frob: f64 = a.as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let stop = f64::EPSILON * f64::EPSILON * frob * frob;

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum();
        if off <= stop || frob == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&x, &y| diag[x].total_cmp(&diag[y]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| diag[k]).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for i in 0..n {
            eigenvectors[(i, new_col)] = v[(i, old_col)];
        }
    }
    Ok(EigDecomposition { eigenvalues, eigenvectors })
}

/// One Jacobi rotation annihilating `a[p][q]`; accumulates into `v`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let phase = apq / mag;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // J = diag-phase ∘ real rotation, restricted to the (p, q) plane.
    let jpp = C64::new(c, 0.0);
    let jpq = C64::new(s, 0.0);
    let jqp = -phase.conj() * s;
    let jqq = phase.conj() * c;

    let n = a.rows();
    // A <- A J
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * jpp + akq * jqp;
        a[(k, q)] = akp * jpq + akq * jqq;
    }
    // A <- J† A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
        a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
    // V <- V J
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
}

/// `exp(−i t H)` for Hermitian `H`, assembled from its eigendecomposition.
pub fn unitary_propagator(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    if !t.is_finite() {
        return Err(Error::Domain(format!("propagation time must be finite, got {t}")));
    }
    let eig = hermitian_eig(h)?;
    Ok(eig.map_spectrum(|l| C64::from_polar(1.0, -l * t)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn pauli_z_eigenvalues() {
        let z = ComplexMatrix::from_real_diag(&[1.0, -1.0]);
        let e = hermitian_eig(&z).unwrap();
        assert_eq!(e.eigenvalues, vec![-1.0, 1.0]);
    }

    #[test]
    fn pauli_x_eigenvectors() {
        let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let e = hermitian_eig(&x).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-15);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        // (1, -1)/√2 up to a global phase
        let v0 = e.eigenvectors.column(0);
        let overlap = v0.inner(&crate::ComplexVector::from_real(&[s, -s])).norm();
        assert!((overlap - 1.0).abs() < 1e-14);
        let v1 = e.eigenvectors.column(1);
        let overlap = v1.inner(&crate::ComplexVector::from_real(&[s, s])).norm();
        assert!((overlap - 1.0).abs() < 1e-14);
    }

    #[test]
    fn two_level_block_eigenvalues() {
        // ±sqrt(Δ²/4 + N g²) with Δ = 10, √N g = 1
        let h = ComplexMatrix::from_real_rows(&[&[5.0, 1.0], &[1.0, -5.0]]).unwrap();
        let e = hermitian_eig(&h).unwrap();
        let closed = (25.0f64 + 1.0).sqrt();
        assert!((e.eigenvalues[0] + closed).abs() < 1e-13);
        assert!((e.eigenvalues[1] - closed).abs() < 1e-13);
        assert!((closed - 5.09902).abs() < 1e-5);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        match hermitian_eig(&m) {
            Err(Error::NonHermitian { max_violation, .. }) => assert_eq!(max_violation, 1.0),
            other => panic!("expected NonHermitian, got {other:?}"),
        }
        assert!(unitary_propagator(&m, 1.0).is_err());
    }

    #[test]
    fn zero_generator_gives_identity() {
        let u = unitary_propagator(&ComplexMatrix::zeros(3, 3), 2.5).unwrap();
        assert!(u.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-15);
    }

    #[test]
    fn diagonal_exponential() {
        let h = ComplexMatrix::from_real_diag(&[5.0, -5.0]);
        let u = unitary_propagator(&h, 0.1).unwrap();
        assert!((u[(0, 0)] - C64::from_polar(1.0, -0.5)).norm() < 1e-15);
        assert!((u[(1, 1)] - C64::from_polar(1.0, 0.5)).norm() < 1e-15);
        assert_eq!(u[(0, 1)], c(0.0, 0.0));
    }

    fn hermitian_strategy(n: usize) -> impl Strategy<Value = ComplexMatrix> {
        proptest::collection::vec((-5.0f64..5.0, -5.0f64..5.0), n * n).prop_map(move |raw| {
            let mut m = ComplexMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    let (re, im) = raw[i * n + j];
                    if i == j {
                        m[(i, i)] = c(re, 0.0);
                    } else if i < j {
                        m[(i, j)] = c(re, im);
                        m[(j, i)] = c(re, -im);
                    }
                }
            }
            m
        })
    }

    proptest! {
        #[test]
        fn decomposition_contract(m in (1usize..9).prop_flat_map(hermitian_strategy)) {
            let e = hermitian_eig(&m).unwrap();
            let scale = m.max_abs().max(f64::MIN_POSITIVE);
            prop_assert!(e.residual(&m) <= 1e-10 * scale);
            prop_assert!(e.eigenvectors.unitarity_error() <= 1e-10);
            prop_assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        }

        #[test]
        fn propagator_unitary_and_group_law(
            m in (1usize..7).prop_flat_map(hermitian_strategy),
            t1 in -3.0f64..3.0,
            t2 in -3.0f64..3.0,
        ) {
            let u1 = unitary_propagator(&m, t1).unwrap();
            let u2 = unitary_propagator(&m, t2).unwrap();
            let u12 = unitary_propagator(&m, t1 + t2).unwrap();
            prop_assert!(u1.unitarity_error() <= 1e-12);
            prop_assert!(u12.max_abs_diff(&u1.matmul(&u2)) <= 1e-10);
        }
    }
}
