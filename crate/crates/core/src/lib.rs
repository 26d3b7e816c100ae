//! Spectral weak-majorization between the Taylor coefficients of
//! `e^{(A+B)t}` and `e^{At}e^{Bt}` for Hermitian `A`, `B`.
//!
//! With `H = A + B` and `Q_k = Σ_p C(k,p) A^p B^{k-p}`, the crate checks
//! `λ(H^k) ≺_w λ(Re Q_k) ≺_w σ(Q_k)` numerically, proves the commutator
//! identities behind `k = 3, 4` (and the expansion at `k = 5`) exactly in the
//! free algebra, and searches for violations at higher `k`.

pub mod cli;
pub mod error;
pub mod linalg;
pub mod search;
pub mod spectral;
pub mod symbolic;
pub mod taylor;
pub mod tolerance;

pub use error::{Error, Result};
pub use tolerance::Tolerances;
