//! Random matrix ensembles shared by tests, the verifier and the search.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::eigen::hermitian_eig;
use super::matrix::{ComplexMatrix, HermitianMatrix};
use crate::tolerance::Tolerances;

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// `G` with i.i.d. standard complex Gaussian entries.
pub fn random_complex<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let data = (0..n * n).map(|_| gaussian(rng)).collect();
    ComplexMatrix::from_vec(n, data).expect("finite gaussian samples")
}

/// `(G + G*) / 2`, optionally rescaled so the spectral norm is at most `max_norm`.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize, max_norm: Option<f64>) -> HermitianMatrix {
    let m = HermitianMatrix::symmetrize(&random_complex(rng, n));
    match max_norm {
        Some(bound) => rescale_to_norm(&m, bound),
        None => m,
    }
}

/// Scales `m` down (never up) so that `max |λ| <= bound`.
pub fn rescale_to_norm(m: &HermitianMatrix, bound: f64) -> HermitianMatrix {
    let spec = hermitian_eig(m, &Tolerances::default()).expect("eigensolver on gaussian sample");
    let norm = spec.spectrum.values().iter().fold(0.0_f64, |acc, l| acc.max(l.abs()));
    if norm > bound {
        m.scale(bound / norm)
    } else {
        m.clone()
    }
}

/// Random unitary from the eigenvectors of a random Hermitian matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let m = random_hermitian(rng, n, None);
    hermitian_eig(&m, &Tolerances::default()).expect("eigensolver").vectors
}

/// A Hermitian pair sharing an eigenbasis, so `[A, B] = 0`.
pub fn commuting_pair<R: Rng + ?Sized>(rng: &mut R, n: usize) -> (HermitianMatrix, HermitianMatrix) {
    let u = random_unitary(rng, n);
    let da: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
    let db: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
    let a = HermitianMatrix::from_real_diag(&da).conjugate_by(&u).unwrap();
    let b = HermitianMatrix::from_real_diag(&db).conjugate_by(&u).unwrap();
    (a, b)
}
