//! Numeric Taylor coefficients of `e^{(A+B)t}` and `e^{At}e^{Bt}`, the
//! commutator identities for their difference, and the Lie–Trotter product.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, expm1_hermitian, re_part, singular_values, ComplexMatrix, HermitianMatrix, Spectrum};
use crate::spectral::{check_majorization, prefix_margins, top_projections, MajorizationVerdict, Relation};
use crate::tolerance::Tolerances;

/// Largest order for which the binomial weights are accepted.
pub const MAX_ORDER: usize = 60;

pub fn commutator(x: &ComplexMatrix, y: &ComplexMatrix) -> ComplexMatrix {
    x * y - y * x
}

pub fn anticommutator(x: &ComplexMatrix, y: &ComplexMatrix) -> ComplexMatrix {
    x * y + y * x
}

/// `ad_x^m(y)`; `m = 0` returns `y`.
pub fn ad_power(x: &ComplexMatrix, y: &ComplexMatrix, m: usize) -> ComplexMatrix {
    (0..m).fold(y.clone(), |acc, _| commutator(x, &acc))
}

/// `H = A + B`, `X = A - B`.
#[derive(Debug, Clone)]
pub struct PairHX {
    pub h: HermitianMatrix,
    pub x: HermitianMatrix,
}

impl PairHX {
    pub fn new(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<Self> {
        Ok(Self {
            h: a.checked_add(b)?,
            x: a.checked_sub(b)?,
        })
    }

    /// `(A, B) = ((H + X)/2, (H - X)/2)`.
    pub fn split(&self) -> (HermitianMatrix, HermitianMatrix) {
        let a = self.h.checked_add(&self.x).unwrap().scale(0.5);
        let b = self.h.checked_sub(&self.x).unwrap().scale(0.5);
        (a, b)
    }
}

fn binomial(k: usize, p: usize) -> u64 {
    // exact for k <= MAX_ORDER
    let p = p.min(k - p) as u64;
    let mut acc: u64 = 1;
    for i in 0..p {
        acc = acc * (k as u64 - i) / (i + 1);
    }
    acc
}

fn check_order(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::UnsupportedOrder { k, reason: "order must be at least 1" });
    }
    if k > MAX_ORDER {
        return Err(Error::UnsupportedOrder {
            k,
            reason: "binomial weights overflow beyond order 60",
        });
    }
    Ok(())
}

/// `Q_k = Σ_p C(k, p) A^p B^{k-p}`, the k-th derivative of `e^{At}e^{Bt}` at 0.
pub fn compute_qk(a: &HermitianMatrix, b: &HermitianMatrix, k: usize) -> Result<ComplexMatrix> {
    check_order(k)?;
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let n = a.dim();
    let mut a_pows = Vec::with_capacity(k + 1);
    let mut b_pows = Vec::with_capacity(k + 1);
    a_pows.push(ComplexMatrix::identity(n));
    b_pows.push(ComplexMatrix::identity(n));
    for i in 1..=k {
        a_pows.push(&a_pows[i - 1] * a.as_matrix());
        b_pows.push(&b_pows[i - 1] * b.as_matrix());
    }
    let mut q = ComplexMatrix::zeros(n);
    for p in 0..=k {
        let term = (&a_pows[p] * &b_pows[k - p]).scale(binomial(k, p) as f64);
        q = q + term;
    }
    Ok(q)
}

/// `H^k` by iterated multiplication, symmetrized.
pub fn hermitian_power(h: &HermitianMatrix, k: usize) -> HermitianMatrix {
    HermitianMatrix::symmetrize(&h.pow(k))
}

/// `Q_k`, `R_k = Re Q_k`, `H^k` and `D_k = R_k - H^k` for one pair.
#[derive(Debug, Clone)]
pub struct CoeffBundle {
    pub k: usize,
    pub q: ComplexMatrix,
    pub r: HermitianMatrix,
    pub hk: HermitianMatrix,
    pub d: HermitianMatrix,
}

impl CoeffBundle {
    pub fn compute(a: &HermitianMatrix, b: &HermitianMatrix, k: usize) -> Result<Self> {
        let q = compute_qk(a, b, k)?;
        let r = re_part(&q);
        let hk = hermitian_power(&a.checked_add(b)?, k);
        let d = r.checked_sub(&hk)?;
        Ok(Self { k, q, r, hk, d })
    }
}

fn relative_residual(lhs: &ComplexMatrix, rhs: &ComplexMatrix, h: &HermitianMatrix, k: usize) -> f64 {
    (lhs - rhs).frobenius_norm() / (1.0 + h.frobenius_norm().powi(k as i32))
}

/// `¼[X, [X, H]]`.
pub fn d3_rhs(hx: &PairHX) -> ComplexMatrix {
    ad_power(&hx.x, &hx.h, 2).scale(0.25)
}

/// `½[X, [X, H²]] - ¼[X, H]²`.
pub fn d4_rhs(hx: &PairHX) -> ComplexMatrix {
    let h2 = hx.h.pow(2);
    let k = commutator(&hx.x, &hx.h);
    ad_power(&hx.x, &h2, 2).scale(0.5) - (&k * &k).scale(0.25)
}

/// Five-term expansion of `D_5` in `H` and `ad_X`.
pub fn d5_rhs(hx: &PairHX) -> ComplexMatrix {
    let (h, x) = (hx.h.as_matrix(), hx.x.as_matrix());
    let h2 = h.pow(2);
    let h3 = h.pow(3);
    let ad2_h = ad_power(x, h, 2);
    ad_power(x, h, 4).scale(1.0 / 16.0)
        + ad_power(x, &h3, 2).scale(7.0 / 16.0)
        + anticommutator(h, &ad_power(x, &h2, 2)).scale(9.0 / 32.0)
        - anticommutator(&h2, &ad2_h).scale(1.0 / 32.0)
        + (&(h * &ad2_h) * h).scale(1.0 / 8.0)
}

fn identity_residual(a: &HermitianMatrix, b: &HermitianMatrix, k: usize, rhs: fn(&PairHX) -> ComplexMatrix) -> Result<f64> {
    let bundle = CoeffBundle::compute(a, b, k)?;
    let hx = PairHX::new(a, b)?;
    Ok(relative_residual(bundle.d.as_matrix(), &rhs(&hx), &hx.h, k))
}

/// `||(R_3 - H^3) - ¼[X,[X,H]]||_F / (1 + ||H||_F^3)`.
pub fn d3_identity_residual(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<f64> {
    identity_residual(a, b, 3, d3_rhs)
}

pub fn d4_identity_residual(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<f64> {
    identity_residual(a, b, 4, d4_rhs)
}

pub fn d5_identity_residual(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<f64> {
    identity_residual(a, b, 5, d5_rhs)
}

/// Spectrum of `-[X, H]^2 = K*K` for the skew-Hermitian `K = [X, H]`.
pub fn skew_square_psd(x: &HermitianMatrix, h: &HermitianMatrix, tol: &Tolerances) -> Result<Spectrum> {
    let k = commutator(x.as_matrix(), h.as_matrix());
    let neg_sq = HermitianMatrix::symmetrize(&(-&(&k * &k)));
    eigenvalues(&neg_sq, tol)
}

/// Per-`r` evidence for `λ(H^k) ≺_w λ(R_k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremMargins {
    pub k: usize,
    /// `ky_fan_sum(λ(R_k), r) - ky_fan_sum(λ(H^k), r)` for `r = 1..=n`.
    pub margins: Vec<f64>,
    /// `Tr(E_{k,r} D_k)` with `E_{k,r}` a top-`r` projection of `H` (odd k) or `H²` (even k).
    pub certificates: Vec<f64>,
    /// `|Tr H^k - Tr R_k|`, reported for odd `k`.
    pub trace_residual: Option<f64>,
}

impl TheoremMargins {
    pub fn min_margin(&self) -> f64 {
        self.margins.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn min_certificate(&self) -> f64 {
        self.certificates.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// The operator whose top projections are also top projections of `H^k`:
/// `H` for odd `k`, `H²` for even `k`.
pub fn projection_source(h: &HermitianMatrix, k: usize) -> HermitianMatrix {
    if k % 2 == 1 {
        h.clone()
    } else {
        hermitian_power(h, 2)
    }
}

/// `Tr(E_{k,r} D_k)` for every `r`.
pub fn certificate_margins(bundle: &CoeffBundle, h: &HermitianMatrix, tol: &Tolerances) -> Result<Vec<f64>> {
    let source = projection_source(h, bundle.k);
    Ok(top_projections(&source, tol)?
        .iter()
        .map(|e| (e.matrix.as_matrix() * bundle.d.as_matrix()).trace().re)
        .collect())
}

/// Margins and certificates for any order `k`.
pub fn order_margins(a: &HermitianMatrix, b: &HermitianMatrix, k: usize, tol: &Tolerances) -> Result<TheoremMargins> {
    let bundle = CoeffBundle::compute(a, b, k)?;
    let h = a.checked_add(b)?;
    let lam_r = eigenvalues(&bundle.r, tol)?;
    let lam_hk = eigenvalues(&bundle.hk, tol)?;
    let margins = prefix_margins(&lam_hk, &lam_r);
    let certificates = certificate_margins(&bundle, &h, tol)?;
    let trace_residual = (k % 2 == 1).then(|| (bundle.hk.trace_re() - bundle.r.trace_re()).abs());
    Ok(TheoremMargins {
        k,
        margins,
        certificates,
        trace_residual,
    })
}

/// Margins behind the proven cases `k = 3` (majorization) and `k = 4` (weak majorization).
pub fn theorem_margins(a: &HermitianMatrix, b: &HermitianMatrix, k: usize, tol: &Tolerances) -> Result<TheoremMargins> {
    if k != 3 && k != 4 {
        return Err(Error::UnsupportedOrder {
            k,
            reason: "theorem margins are defined for k = 3 and k = 4",
        });
    }
    order_margins(a, b, k, tol)
}

/// Verdict of `λ(H^k) ≺_w σ(Q_k)`.
pub fn sigma_comparison(a: &HermitianMatrix, b: &HermitianMatrix, k: usize, tol: &Tolerances) -> Result<MajorizationVerdict> {
    let bundle = CoeffBundle::compute(a, b, k)?;
    let lam = eigenvalues(&bundle.hk, tol)?;
    let sigma = singular_values(&bundle.q, tol)?;
    check_majorization(&lam, &sigma, Relation::Weak, tol.comparator)
}

/// `(I + X)(I + Y) - I`.
fn compose_shifted(x: &ComplexMatrix, y: &ComplexMatrix) -> ComplexMatrix {
    &(x + y) + &(x * y)
}

/// `||(e^{tA/n} e^{tB/n})^n - e^{t(A+B)}||_F`.
///
/// Every factor is carried as `I + N` with `N` built from `expm1`, so the
/// result stays accurate relative to the error itself rather than to `n` ulps
/// of the exponential.
pub fn trotter_error(a: &HermitianMatrix, b: &HermitianMatrix, t: f64, n: usize, tol: &Tolerances) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidConfig("trotter step count must be at least 1".into()));
    }
    let s = t / n as f64;
    let pa = expm1_hermitian(&a.scale(s), tol)?;
    let pb = expm1_hermitian(&b.scale(s), tol)?;
    let mut base = compose_shifted(pa.as_matrix(), pb.as_matrix());
    let mut acc = ComplexMatrix::zeros(a.dim());
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc = compose_shifted(&acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = compose_shifted(&base, &base);
        }
    }
    let exact = expm1_hermitian(&a.checked_add(b)?.scale(t), tol)?;
    Ok((acc - exact.into_matrix()).frobenius_norm())
}

/// Frobenius residual of `D - Σ c_j [X,[X,F_j]] - Σ W_q* W_q`.
pub fn decomposition_check(
    d: &HermitianMatrix,
    x: &HermitianMatrix,
    terms: &[(f64, HermitianMatrix)],
    ws: &[ComplexMatrix],
) -> Result<f64> {
    if let Some((index, (value, _))) = terms.iter().enumerate().find(|(_, (c, _))| *c < 0.0 || c.is_nan()) {
        return Err(Error::NegativeCoefficient { index, value: *value });
    }
    let mut acc = d.as_matrix().clone();
    for (c, f) in terms {
        acc = acc.checked_sub(&ad_power(x.as_matrix(), f.as_matrix(), 2).scale(*c))?;
    }
    for w in ws {
        acc = acc.checked_sub(&(&w.adjoint() * w))?;
    }
    Ok(acc.frobenius_norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random::{commuting_pair, random_hermitian};
    use crate::linalg::{pauli, Complex64};
    use crate::spectral::{double_comm_trace, ky_fan_sum};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn close(a: &ComplexMatrix, b: &ComplexMatrix, eps: f64) -> bool {
        (a - b).frobenius_norm() <= eps
    }

    #[test]
    fn low_orders() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_hermitian(&mut rng, 4, None);
        let b = random_hermitian(&mut rng, 4, None);
        let q1 = compute_qk(&a, &b, 1).unwrap();
        assert!(close(&q1, a.checked_add(&b).unwrap().as_matrix(), 1e-14));
        let q2 = compute_qk(&a, &b, 2).unwrap();
        let (am, bm) = (a.as_matrix(), b.as_matrix());
        let want = am * am + (am * bm).scale(2.0) + bm * bm;
        assert!(close(&q2, &want, 1e-12));
        // Re Q_2 = H^2
        let h = a.checked_add(&b).unwrap();
        assert!(close(re_part(&q2).as_matrix(), &h.pow(2), 1e-12));
        // second-derivative discrepancy is the commutator
        let sym = am * am + am * bm + bm * am + bm * bm;
        assert!(close(&(q2 - sym), &commutator(am, bm), 1e-12));
    }

    #[test]
    fn q3_matches_word_enumeration() {
        // third derivative of e^{At}e^{Bt}: sum over ordered splits of 3 derivatives,
        // enumerated as the 8 words in {A,B}^3 pushed into A-before-B order
        let (a, b) = (pauli::z(), pauli::x());
        let mut want = ComplexMatrix::zeros(2);
        for mask in 0u32..8 {
            let na = mask.count_ones() as usize;
            want = want + &a.pow(na) * &b.pow(3 - na);
        }
        assert!(close(&compute_qk(&a, &b, 3).unwrap(), &want, 1e-14));
    }

    #[test]
    fn order_bounds() {
        let a = pauli::z();
        assert!(compute_qk(&a, &a, 0).is_err());
        assert!(compute_qk(&a, &a, 61).is_err());
        assert!(compute_qk(&a, &a, 60).is_ok());
        assert_eq!(binomial(60, 30), 118_264_581_564_861_424);
    }

    #[test]
    fn commutator_examples() {
        let m = pauli::y();
        assert_eq!(commutator(&m, &m), ComplexMatrix::zeros(2));
        let c = commutator(pauli::z().as_matrix(), pauli::x().as_matrix());
        assert_eq!(c, ComplexMatrix::from_real_rows(&[&[0.0, 2.0], &[-2.0, 0.0]]).unwrap());
        assert_eq!(c, pauli::y().as_matrix().scale_complex(Complex64::new(0.0, 2.0)));
        assert_eq!(ad_power(pauli::x().as_matrix(), pauli::z().as_matrix(), 0), *pauli::z().as_matrix());

        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = random_hermitian(&mut rng, 3, None);
        let b = random_hermitian(&mut rng, 3, None);
        let hx = PairHX::new(&a, &b).unwrap();
        let lhs = ad_power(&hx.x, &hx.h, 1);
        assert!(close(&lhs, &commutator(&a, &b).scale(2.0), 1e-12));
        let (a2, b2) = hx.split();
        assert!(close(&a2, &a, 1e-15) && close(&b2, &b, 1e-15));
    }

    #[test]
    fn identity_residuals_pauli_and_commuting() {
        let (a, b) = (pauli::z(), pauli::x());
        assert!(d3_identity_residual(&a, &b).unwrap() <= 1e-12);
        assert!(d4_identity_residual(&a, &b).unwrap() <= 1e-12);
        assert!(d5_identity_residual(&a, &b).unwrap() <= 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (a, b) = commuting_pair(&mut rng, 4);
        for k in 3..=5 {
            let bundle = CoeffBundle::compute(&a, &b, k).unwrap();
            assert!(bundle.d.frobenius_norm() < 1e-10);
        }
        assert!(d5_identity_residual(&a, &b).unwrap() <= 1e-12);
    }

    #[test]
    fn identity_residuals_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for n in 2..=8 {
            for _ in 0..20 {
                let a = random_hermitian(&mut rng, n, None);
                let b = random_hermitian(&mut rng, n, None);
                assert!(d3_identity_residual(&a, &b).unwrap() <= 1e-10);
                assert!(d4_identity_residual(&a, &b).unwrap() <= 1e-10);
                assert!(d5_identity_residual(&a, &b).unwrap() <= 1e-10);
            }
        }
    }

    #[test]
    fn skew_square_examples() {
        let s = skew_square_psd(&HermitianMatrix::from_real_diag(&[1.0, 2.0]), &HermitianMatrix::from_real_diag(&[3.0, 0.0]), &tol()).unwrap();
        assert_eq!(s.values(), &[0.0, 0.0]);

        let hx = PairHX::new(&pauli::z(), &pauli::x()).unwrap();
        let s = skew_square_psd(&hx.x, &hx.h, &tol()).unwrap();
        assert!(s.values().iter().all(|v| (v - 16.0).abs() < 1e-12));

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 2..=6 {
            let x = random_hermitian(&mut rng, n, None);
            let h = random_hermitian(&mut rng, n, None);
            assert!(skew_square_psd(&x, &h, &tol()).unwrap().values()[n - 1] >= -1e-10);
        }
    }

    #[test]
    fn theorem_margin_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let (a, b) = commuting_pair(&mut rng, 3);
        for k in [3, 4] {
            let tm = theorem_margins(&a, &b, k, &tol()).unwrap();
            assert!(tm.margins.iter().all(|m| m.abs() < 1e-9));
        }

        let tm = theorem_margins(&pauli::z(), &pauli::x(), 3, &tol()).unwrap();
        assert!(tm.min_margin() >= -1e-12);
        assert!(tm.trace_residual.unwrap() <= 1e-12);

        for n in 2..=8 {
            let a = random_hermitian(&mut rng, n, None);
            let b = random_hermitian(&mut rng, n, None);
            let tm = theorem_margins(&a, &b, 4, &tol()).unwrap();
            assert!(tm.min_margin() >= -1e-9);
            assert!(tm.min_certificate() >= -1e-9);
            assert!(tm.trace_residual.is_none());
        }
        assert!(theorem_margins(&pauli::z(), &pauli::x(), 5, &tol()).is_err());
    }

    #[test]
    fn projection_source_attains_ky_fan() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 2..=6 {
            let h = random_hermitian(&mut rng, n, None);
            for k in [3, 4] {
                let hk = hermitian_power(&h, k);
                let lam = eigenvalues(&hk, &tol()).unwrap();
                for e in top_projections(&projection_source(&h, k), &tol()).unwrap() {
                    let got = (e.matrix.as_matrix() * hk.as_matrix()).trace().re;
                    assert!((got - ky_fan_sum(&lam, e.rank).unwrap()).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn certificates_match_double_comm_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a = random_hermitian(&mut rng, 5, None);
        let b = random_hermitian(&mut rng, 5, None);
        let hx = PairHX::new(&a, &b).unwrap();
        let bundle = CoeffBundle::compute(&a, &b, 3).unwrap();
        let certs = certificate_margins(&bundle, &hx.h, &tol()).unwrap();
        for (e, cert) in top_projections(&hx.h, &tol()).unwrap().iter().zip(&certs) {
            let dc = double_comm_trace(e, &hx.x, &hx.h, &tol()).unwrap();
            assert!((0.25 * dc - cert).abs() < 1e-9);
        }
    }

    #[test]
    fn sigma_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for k in 1..=4 {
            for n in 2..=6 {
                let a = random_hermitian(&mut rng, n, None);
                let b = random_hermitian(&mut rng, n, None);
                assert!(sigma_comparison(&a, &b, k, &tol()).unwrap().holds, "k={k} n={n}");
            }
        }
    }

    #[test]
    fn trotter_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let (a, b) = commuting_pair(&mut rng, 3);
        for n in [1, 4, 32] {
            assert!(trotter_error(&a, &b, 1.0, n, &tol()).unwrap() < 1e-12);
        }
        let a = random_hermitian(&mut rng, 3, Some(2.0));
        let b = random_hermitian(&mut rng, 3, Some(2.0));
        assert!(trotter_error(&a, &b, 0.0, 5, &tol()).unwrap() < 1e-14);
        let mut prev = trotter_error(&a, &b, 1.0, 8, &tol()).unwrap();
        for n in [16, 32, 64, 128, 256] {
            let e = trotter_error(&a, &b, 1.0, n, &tol()).unwrap();
            assert!(e <= 0.6 * prev, "n={n}: {e} vs {prev}");
            prev = e;
        }
        assert!(trotter_error(&a, &b, 1.0, 0, &tol()).is_err());
    }

    #[test]
    fn decomposition_candidates() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = random_hermitian(&mut rng, 4, None);
        let b = random_hermitian(&mut rng, 4, None);
        let hx = PairHX::new(&a, &b).unwrap();
        let d3 = CoeffBundle::compute(&a, &b, 3).unwrap().d;
        assert!(decomposition_check(&d3, &hx.x, &[(0.25, hx.h.clone())], &[]).unwrap() <= 1e-10);

        let d4 = CoeffBundle::compute(&a, &b, 4).unwrap().d;
        let w = commutator(&hx.x, &hx.h).scale(0.5);
        let residual = decomposition_check(&d4, &hx.x, &[(0.5, hermitian_power(&hx.h, 2))], &[w]).unwrap();
        assert!(residual <= 1e-10);

        assert_eq!(decomposition_check(&d4, &hx.x, &[], &[]).unwrap(), d4.frobenius_norm());
        assert!(matches!(
            decomposition_check(&d4, &hx.x, &[(-1.0, hx.h.clone())], &[]),
            Err(Error::NegativeCoefficient { index: 0, .. })
        ));
    }

    #[test]
    fn discrepancy_has_order_parity() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let a = random_hermitian(&mut rng, 4, Some(2.0));
        let b = random_hermitian(&mut rng, 4, Some(2.0));
        for k in 2..=7 {
            let d = CoeffBundle::compute(&a, &b, k).unwrap().d;
            let neg = CoeffBundle::compute(&a.scale(-1.0), &b.scale(-1.0), k).unwrap().d;
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            assert!((neg.as_matrix() - d.scale(sign).as_matrix()).frobenius_norm() <= 1e-10 * (1.0 + d.frobenius_norm()));
        }
    }

    #[test]
    fn trace_of_d3_vanishes() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for n in 2..=8 {
            let a = random_hermitian(&mut rng, n, None);
            let b = random_hermitian(&mut rng, n, None);
            let bundle = CoeffBundle::compute(&a, &b, 3).unwrap();
            let h = a.checked_add(&b).unwrap();
            assert!(bundle.d.trace_re().abs() <= 1e-9 * (1.0 + h.frobenius_norm().powi(3)));
        }
    }
}
