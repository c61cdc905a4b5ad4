//! Fixtures shared by the kernel benchmarks.

use detune_core::{C64, ComplexMatrix, LambdaParams, TwoLevelParams};

/// Fig. 2 parameters with collective decay at `n` atoms.
pub fn fig2_params(n: u32) -> TwoLevelParams {
    TwoLevelParams::new(n, 1.0, 10.0)
        .and_then(|p| p.with_decay(0.1, 0.01))
        .expect("valid preset")
}

/// Fig. 5 parameters at `n` atoms.
pub fn fig5_params(n: u32) -> LambdaParams {
    LambdaParams::new(n, 1.0, 10.0, 100.0, 0.3).expect("valid preset")
}

/// Deterministic dense Hermitian matrix of size `dim`.
pub fn hermitian(dim: usize) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        h[(i, i)] = C64::new((i as f64 * 1.7).sin() * 5.0, 0.0);
        for j in 0..i {
            let z = C64::new(((i * 7 + j) as f64).cos(), ((i + 3 * j) as f64).sin());
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    h
}
