use crate::numerics::{hermitian_eig, ComplexMatrix, C64};
use crate::Result;

/// Result of a dense time scan of a transition probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferScan {
    pub max: f64,
    pub argmax: f64,
}

/// `max_t |⟨to| exp(−itH) |from⟩|²` over `times`, from one eigendecomposition
/// of `h`.
pub fn max_transfer_scan(h: &ComplexMatrix, from: usize, to: usize, times: &[f64]) -> Result<TransferScan> {
    let eig = hermitian_eig(h)?;
    let v = &eig.eigenvectors;
    let n = h.rows();
    // weights w_k = ⟨to|v_k⟩⟨v_k|from⟩
    let w: Vec<C64> = (0..n).map(|k| v[(to, k)] * v[(from, k)].conj()).collect();
    let mut best = TransferScan { max: f64::NEG_INFINITY, argmax: f64::NAN };
    for &t in times {
        let amp: C64 = w
            .iter()
            .zip(&eig.eigenvalues)
            .map(|(wk, lam)| wk * C64::from_polar(1.0, -lam * t))
            .sum();
        let p = amp.norm_sqr();
        if p > best.max {
            best = TransferScan { max: p, argmax: t };
        }
    }
    Ok(best)
}
