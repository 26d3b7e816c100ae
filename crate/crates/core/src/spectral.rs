//! Majorization comparators, Ky Fan sums, top-eigenspace projections and
//! the double-commutator trace form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, expm_hermitian, hermitian_eig, HermitianMatrix, Spectrum};
use crate::taylor::commutator;
use crate::tolerance::Tolerances;

/// Entries below this are treated as zero under a log relation.
pub const LOG_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `x ≺_w y`: every prefix sum of `x` is at most that of `y`.
    Weak,
    /// `x ≺ y`: weak plus equal totals.
    Strong,
    WeakLog,
    Log,
}

impl Relation {
    fn is_log(self) -> bool {
        matches!(self, Relation::WeakLog | Relation::Log)
    }

    fn needs_total_equality(self) -> bool {
        matches!(self, Relation::Strong | Relation::Log)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MajorizationVerdict {
    pub relation: Relation,
    pub holds: bool,
    /// 1-based prefix length where `margin` is attained.
    pub worst_r: usize,
    /// `min_r (prefix_y(r) - prefix_x(r))`, in sums or sums of logs. For the
    /// strong relations the total gap enters as `-|gap_n|`.
    pub margin: f64,
}

/// Prefix-sum comparison of two sorted spectra.
pub fn check_majorization(x: &Spectrum, y: &Spectrum, relation: Relation, tol: f64) -> Result<MajorizationVerdict> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    let n = x.len();
    if relation.is_log() {
        if let Some(&neg) = x.values().iter().chain(y.values()).find(|v| **v < 0.0) {
            return Err(Error::NegativeEntry(neg));
        }
        // a vanishing entry would turn the log sums into -inf; report failure instead
        if let Some(i) = x.values().iter().zip(y.values()).position(|(a, b)| *a < LOG_FLOOR || *b < LOG_FLOOR) {
            return Ok(MajorizationVerdict {
                relation,
                holds: false,
                worst_r: i + 1,
                margin: f64::NEG_INFINITY,
            });
        }
    }
    let transform = |v: f64| if relation.is_log() { v.ln() } else { v };

    let mut px = 0.0;
    let mut py = 0.0;
    let mut margin = f64::INFINITY;
    let mut worst_r = 1;
    for r in 0..n {
        px += transform(x.values()[r]);
        py += transform(y.values()[r]);
        let gap = py - px;
        if gap < margin {
            margin = gap;
            worst_r = r + 1;
        }
    }
    if n == 0 {
        margin = 0.0;
    } else if relation.needs_total_equality() {
        let total = -(py - px).abs();
        if total < margin {
            margin = total;
            worst_r = n;
        }
    }
    Ok(MajorizationVerdict {
        relation,
        holds: margin >= -tol,
        worst_r,
        margin,
    })
}

/// Sum of the `r` largest entries.
pub fn ky_fan_sum(x: &Spectrum, r: usize) -> Result<f64> {
    if r == 0 || r > x.len() {
        return Err(Error::RankOutOfRange { rank: r, dim: x.len() });
    }
    Ok(x.values()[..r].iter().sum())
}

/// All prefix differences `ky_fan_sum(y, r) - ky_fan_sum(x, r)` for `r = 1..=n`.
pub fn prefix_margins(x: &Spectrum, y: &Spectrum) -> Vec<f64> {
    let mut px = 0.0;
    let mut py = 0.0;
    x.values()
        .iter()
        .zip(y.values())
        .map(|(a, b)| {
            px += a;
            py += b;
            py - px
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct SpectralProjection {
    pub matrix: HermitianMatrix,
    pub rank: usize,
}

impl SpectralProjection {
    /// `||E^2 - E||_F` and `|Tr E - r|`.
    pub fn defects(&self) -> (f64, f64) {
        let e = self.matrix.as_matrix();
        let idem = (e * e - e.clone()).frobenius_norm();
        let tr = (self.matrix.trace_re() - self.rank as f64).abs();
        (idem, tr)
    }

    pub fn is_valid(&self, tol: &Tolerances) -> bool {
        let (idem, tr) = self.defects();
        idem <= tol.projection && tr <= tol.projection
    }
}

/// Projection onto the eigenvectors of the `r` largest eigenvalues of `m`.
///
/// At a degenerate boundary the first `r` columns after the stable sort are used.
pub fn top_projection(m: &HermitianMatrix, r: usize, tol: &Tolerances) -> Result<SpectralProjection> {
    if r == 0 || r > m.dim() {
        return Err(Error::RankOutOfRange { rank: r, dim: m.dim() });
    }
    let eig = hermitian_eig(m, tol)?;
    Ok(SpectralProjection {
        matrix: eig.leading_projector(r),
        rank: r,
    })
}

/// All top projections `r = 1..=n` from a single eigendecomposition.
pub fn top_projections(m: &HermitianMatrix, tol: &Tolerances) -> Result<Vec<SpectralProjection>> {
    let eig = hermitian_eig(m, tol)?;
    Ok((1..=m.dim())
        .map(|r| SpectralProjection {
            matrix: eig.leading_projector(r),
            rank: r,
        })
        .collect())
}

/// `Tr(E [X, [X, F]])` by direct matrix arithmetic.
///
/// `e` must be a top-`r` spectral projection of `f`; this is checked through
/// `Tr(E F) = ky_fan_sum(λ(F), r)` up to `tol.projection * (1 + ||F||_F)`.
pub fn double_comm_trace(
    e: &SpectralProjection,
    x: &HermitianMatrix,
    f: &HermitianMatrix,
    tol: &Tolerances,
) -> Result<f64> {
    let lam = eigenvalues(f, tol)?;
    let expected = ky_fan_sum(&lam, e.rank)?;
    let trace = (e.matrix.as_matrix() * f.as_matrix()).trace().re;
    if (trace - expected).abs() > tol.projection * (1.0 + f.frobenius_norm()) {
        return Err(Error::NotKyFanMaximizer {
            rank: e.rank,
            trace,
            expected,
        });
    }
    Ok(double_comm_trace_unchecked(e.matrix.as_matrix(), x, f))
}

pub(crate) fn double_comm_trace_unchecked(
    e: &crate::linalg::ComplexMatrix,
    x: &HermitianMatrix,
    f: &HermitianMatrix,
) -> f64 {
    let inner = commutator(x.as_matrix(), f.as_matrix());
    let outer = commutator(x.as_matrix(), &inner);
    (e * &outer).trace().re
}

/// Thompson log-majorization baseline: `λ(e^{A+B}) ≺_log λ(e^{B/2} e^A e^{B/2})`.
pub fn golden_thompson_check(a: &HermitianMatrix, b: &HermitianMatrix, tol: &Tolerances) -> Result<MajorizationVerdict> {
    let sum = a.checked_add(b)?;
    let lhs = eigenvalues(&expm_hermitian(&sum, tol)?, tol)?;
    let half_b = expm_hermitian(&b.scale(0.5), tol)?;
    let ea = expm_hermitian(a, tol)?;
    let sandwich = HermitianMatrix::symmetrize(&(&(half_b.as_matrix() * ea.as_matrix()) * half_b.as_matrix()));
    let rhs = eigenvalues(&sandwich, tol)?;
    check_majorization(&lhs, &rhs, Relation::Log, tol.comparator)
}

/// `Tr e^{A+B}` and `Tr(e^A e^B)`.
pub fn golden_thompson_traces(a: &HermitianMatrix, b: &HermitianMatrix, tol: &Tolerances) -> Result<(f64, f64)> {
    let lhs = expm_hermitian(&a.checked_add(b)?, tol)?.trace_re();
    let rhs = (expm_hermitian(a, tol)?.as_matrix() * expm_hermitian(b, tol)?.as_matrix()).trace().re;
    Ok((lhs, rhs))
}
