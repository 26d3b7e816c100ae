//! Numerical tolerances shared across the crate.

use serde::{Deserialize, Serialize};

/// Every threshold used by the numeric stack, collected in one place.
///
/// Call sites take a `&Tolerances` so individual values can be overridden
/// without touching global state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative bound on `||M - M*||_F / (1 + ||M||_F)` accepted at construction.
    pub hermitian: f64,
    /// Jacobi stops once the off-diagonal Frobenius norm is below `eig_offdiag * ||M||_F`.
    pub eig_offdiag: f64,
    pub max_sweeps: usize,
    /// Idempotency / trace slack for spectral projections and the Ky Fan maximizer check.
    pub projection: f64,
    /// Absolute slack on majorization prefix sums.
    pub comparator: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermitian: 1e-12,
            eig_offdiag: 1e-13,
            max_sweeps: 60,
            projection: 1e-9,
            comparator: 1e-9,
        }
    }
}

impl Tolerances {
    /// Same settings with the Jacobi stopping threshold divided by `factor`.
    pub fn tightened(&self, factor: f64) -> Self {
        Self {
            eig_offdiag: self.eig_offdiag / factor,
            ..*self
        }
    }
}
