//! Cyclic Jacobi eigensolver for complex Hermitian matrices, plus the
//! spectral quantities built on it (singular values, matrix functions).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::{ComplexMatrix, HermitianMatrix, ZERO};
use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

/// Real values sorted nonincreasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    /// Sorts `values` nonincreasing (stable, so exact ties keep their order).
    pub fn from_unsorted(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        Self { values }
    }

    /// Wraps values that must already be sorted nonincreasing.
    pub fn from_sorted(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.windows(2).position(|w| w[0] < w[1]) {
            return Err(Error::Unsorted(i));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn max_abs_diff(&self, other: &Spectrum) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub spectrum: Spectrum,
    /// Columns are orthonormal eigenvectors, in the same order as `spectrum`.
    pub vectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// `V diag(f(λ)) V*`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        let fl: Vec<f64> = self.spectrum.values().iter().map(|&l| f(l)).collect();
        self.with_values(&fl)
    }

    /// `V diag(values) V*`, keeping the eigenvectors and replacing the spectrum.
    pub fn with_values(&self, fl: &[f64]) -> HermitianMatrix {
        let n = self.vectors.dim();
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut s = ZERO;
                for (k, &w) in fl.iter().enumerate() {
                    s += self.vectors[(i, k)] * self.vectors[(j, k)].conj() * w;
                }
                out[(i, j)] = s;
                out[(j, i)] = s.conj();
            }
        }
        HermitianMatrix::symmetrize(&out)
    }

    /// Orthogonal projection onto the span of the first `r` eigenvector columns.
    pub fn leading_projector(&self, r: usize) -> HermitianMatrix {
        let n = self.vectors.dim();
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut s = ZERO;
                for k in 0..r {
                    s += self.vectors[(i, k)] * self.vectors[(j, k)].conj();
                }
                out[(i, j)] = s;
                out[(j, i)] = s.conj();
            }
        }
        HermitianMatrix::symmetrize(&out)
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Eigendecomposition by cyclic complex Jacobi rotations.
///
/// Converges when the off-diagonal Frobenius norm drops to
/// `tol.eig_offdiag * ||M||_F`; otherwise fails after `tol.max_sweeps` sweeps.
pub fn hermitian_eig(m: &HermitianMatrix, tol: &Tolerances) -> Result<EigenDecomposition> {
    let n = m.dim();
    let mut a = m.as_matrix().clone();
    let mut v = ComplexMatrix::identity(n);
    let threshold = tol.eig_offdiag * m.frobenius_norm();

    let mut off = off_diagonal_norm(&a);
    let mut sweeps = 0;
    while off > threshold {
        if sweeps == tol.max_sweeps {
            return Err(Error::NoConvergence { sweeps, off_norm: off });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
        off = off_diagonal_norm(&a);
    }

    let mut order: Vec<usize> = (0..n).collect();
    // stable: ties keep column order
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        for row in 0..n {
            vectors[(row, dst)] = v[(row, src)];
        }
    }
    Ok(EigenDecomposition {
        spectrum: Spectrum { values },
        vectors,
    })
}

/// Annihilates `a[(p, q)]` with the unitary `J = [[c, s e^{iφ}], [-s e^{-iφ}, c]]`
/// acting on coordinates `p, q`: `a <- J* a J`, `v <- v J`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let phase = apq / mag;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let n = a.dim();

    let sp = phase * s; // s e^{iφ}
    let spc = sp.conj(); // s e^{-iφ}

    // columns: a <- a J
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c - akq * spc;
        a[(k, q)] = akp * sp + akq * c;
    }
    // rows: a <- J* a
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c - aqk * sp;
        a[(q, k)] = apk * spc + aqk * c;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * spc;
        v[(k, q)] = vkp * sp + vkq * c;
    }
}

/// Singular values as square roots of the eigenvalues of `Y* Y`, clamped at zero.
pub fn singular_values(y: &ComplexMatrix, tol: &Tolerances) -> Result<Spectrum> {
    let gram = HermitianMatrix::symmetrize(&(&y.adjoint() * y));
    let eig = hermitian_eig(&gram, tol)?;
    let values = eig.spectrum.values().iter().map(|&l| l.max(0.0).sqrt()).collect();
    Ok(Spectrum { values })
}

/// Eigenvalues only.
pub fn eigenvalues(m: &HermitianMatrix, tol: &Tolerances) -> Result<Spectrum> {
    Ok(hermitian_eig(m, tol)?.spectrum)
}

/// `e^M` for Hermitian `M`, through its eigendecomposition.
pub fn expm_hermitian(m: &HermitianMatrix, tol: &Tolerances) -> Result<HermitianMatrix> {
    Ok(hermitian_eig(m, tol)?.apply(f64::exp))
}

/// `e^M - I`, accurate to roundoff relative to `||e^M - I||` when `M` is small.
pub fn expm1_hermitian(m: &HermitianMatrix, tol: &Tolerances) -> Result<HermitianMatrix> {
    Ok(hermitian_eig(m, tol)?.apply(f64::exp_m1))
}
