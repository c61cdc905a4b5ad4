//! Dense complex linear algebra and integration kernels.

mod eig;
mod lindblad;
mod matrix;
mod poly;

pub use eig::{hermitian_eig, unitary_propagator, EigDecomposition};
pub use lindblad::{integrate_lindblad, LindbladOptions, LindbladSolution};
pub use matrix::{ComplexMatrix, ComplexVector, C64};
pub use poly::{cubic_roots, hessenberg_eigenvalues};

/// Relative Hermiticity tolerance accepted by the eigensolver.
pub const HERMITIAN_TOL: f64 = 1e-10;
