//! Dense complex linear algebra: arithmetic, Hermitian eigendecomposition,
//! singular values and the shared JSON matrix format.

mod eigen;
mod io;
mod matrix;
pub mod random;

pub use eigen::{eigenvalues, expm1_hermitian, expm_hermitian, hermitian_eig, singular_values, EigenDecomposition, Spectrum};
pub use io::MatrixFile;
pub use matrix::{pauli, re_part, ComplexMatrix, HermitianMatrix};
pub use num_complex::Complex64;
