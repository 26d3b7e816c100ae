//! Independent reference computations. Nothing here calls the eigensolver
//! or the coefficient builders under test.
#![allow(dead_code)]

use majlab::linalg::{Complex64, ComplexMatrix, HermitianMatrix};

/// Characteristic polynomial coefficients `c[0] + c[1] x + ... + x^n`
/// by Faddeev–LeVerrier.
pub fn char_poly(m: &ComplexMatrix) -> Vec<f64> {
    let n = m.dim();
    let mut c = vec![0.0; n + 1];
    c[n] = 1.0;
    let mut mk = ComplexMatrix::zeros(n);
    for k in 1..=n {
        let shifted = &mk + &ComplexMatrix::identity(n).scale(c[n - k + 1]);
        mk = m * &shifted;
        c[n - k] = -mk.trace().re / k as f64;
    }
    c
}

fn horner(c: &[f64], x: f64) -> (f64, f64) {
    let mut p = 0.0;
    let mut dp = 0.0;
    for &ci in c.iter().rev() {
        dp = dp * x + p;
        p = p * x + ci;
    }
    (p, dp)
}

/// `Tr((xI - M)^{-1})` via Gauss–Jordan with partial pivoting; that is `p'(x)/p(x)`.
fn resolvent_trace(m: &ComplexMatrix, x: f64) -> Option<f64> {
    let n = m.dim();
    let mut a: Vec<Vec<Complex64>> = (0..n)
        .map(|i| {
            (0..2 * n)
                .map(|j| {
                    if j < n {
                        let v = -m[(i, j)];
                        if i == j { v + x } else { v }
                    } else if j - n == i {
                        Complex64::new(1.0, 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))?;
        if a[piv][col].norm() == 0.0 {
            return None;
        }
        a.swap(col, piv);
        let p = a[col][col];
        for v in a[col].iter_mut() {
            *v /= p;
        }
        for row in 0..n {
            if row != col {
                let f = a[row][col];
                if f != Complex64::new(0.0, 0.0) {
                    let pivot_row = a[col].clone();
                    for (v, pv) in a[row].iter_mut().zip(pivot_row) {
                        *v -= f * pv;
                    }
                }
            }
        }
    }
    Some((0..n).map(|i| a[i][n + i].re).sum())
}

/// Eigenvalues (nonincreasing) as roots of the characteristic polynomial.
/// Newton from above the Cauchy bound finds each largest root in turn
/// (monotone for real-rooted polynomials), followed by deflation; each root
/// is then polished with the resolvent-trace Newton step on `det(xI - M)`.
pub fn char_poly_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    let n = m.dim();
    let mut c = char_poly(m);
    let mut roots = Vec::with_capacity(n);
    for _ in 0..n {
        let deg = c.len() - 1;
        let bound = 1.0 + c[..deg].iter().map(|v| v.abs()).fold(0.0, f64::max);
        let mut x = bound;
        for _ in 0..500 {
            let (p, dp) = horner(&c, x);
            if dp == 0.0 {
                break;
            }
            let next = x - p / dp;
            if next.is_nan() || next >= x {
                break;
            }
            x = next;
        }
        roots.push(x);
        // synthetic division by (t - x)
        let mut q = vec![0.0; deg];
        let mut carry = 0.0;
        for i in (0..deg).rev() {
            carry = c[i + 1] + carry * x;
            q[i] = carry;
        }
        c = q;
    }
    for r in roots.iter_mut() {
        for _ in 0..4 {
            match resolvent_trace(m, *r) {
                Some(t) if t.is_finite() && t != 0.0 => {
                    let step = 1.0 / t;
                    if step.abs() > 1e-6 {
                        break;
                    }
                    *r -= step;
                }
                _ => break,
            }
        }
    }
    roots.sort_by(|a, b| b.total_cmp(a));
    roots
}

/// Real symmetric `2n × 2n` embedding `[[P, -Q], [Q, P]]` of `M = P + iQ`;
/// each eigenvalue of `M` appears twice.
fn real_embedding(m: &ComplexMatrix) -> Vec<Vec<f64>> {
    let n = m.dim();
    let mut s = vec![vec![0.0; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            let z = m[(i, j)];
            s[i][j] = z.re;
            s[i + n][j + n] = z.re;
            s[i][j + n] = -z.im;
            s[i + n][j] = z.im;
        }
    }
    s
}

/// Householder reduction of a real symmetric matrix to tridiagonal `(diag, offdiag)`.
fn tridiagonalize(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<f64>) {
    let n = a.len();
    for k in 0..n.saturating_sub(2) {
        let alpha_norm: f64 = (k + 1..n).map(|i| a[i][k] * a[i][k]).sum::<f64>().sqrt();
        if alpha_norm == 0.0 {
            continue;
        }
        let alpha = if a[k + 1][k] > 0.0 { -alpha_norm } else { alpha_norm };
        let mut v = vec![0.0; n];
        v[k + 1] = a[k + 1][k] - alpha;
        for i in k + 2..n {
            v[i] = a[i][k];
        }
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        // A <- (I - 2vv^T/|v|^2) A (I - 2vv^T/|v|^2)
        let p: Vec<f64> = (0..n).map(|i| (0..n).map(|j| a[i][j] * v[j]).sum::<f64>() * 2.0 / vnorm2).collect();
        let kappa: f64 = (0..n).map(|i| v[i] * p[i]).sum::<f64>() / vnorm2;
        let q: Vec<f64> = (0..n).map(|i| p[i] - kappa * v[i]).collect();
        for i in 0..n {
            for j in 0..n {
                a[i][j] -= v[i] * q[j] + q[i] * v[j];
            }
        }
    }
    let d = (0..n).map(|i| a[i][i]).collect();
    let e = (0..n.saturating_sub(1)).map(|i| a[i + 1][i]).collect();
    (d, e)
}

/// Number of eigenvalues of the tridiagonal matrix strictly below `x`.
fn sturm_count(d: &[f64], e: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..d.len() {
        let off = if i == 0 { 0.0 } else { e[i - 1] * e[i - 1] };
        q = d[i] - x - if i == 0 { 0.0 } else { off / q };
        if q == 0.0 {
            q = -f64::EPSILON * (d[i].abs() + x.abs() + 1.0);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Reference Hermitian eigenvalues: real embedding, Householder
/// tridiagonalization, Sturm-sequence bisection. Nonincreasing.
pub fn reference_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    let n = m.dim();
    let (d, e) = tridiagonalize(real_embedding(m));
    let radius = (0..d.len())
        .map(|i| {
            d[i].abs() + if i > 0 { e[i - 1].abs() } else { 0.0 } + if i < e.len() { e[i].abs() } else { 0.0 }
        })
        .fold(0.0, f64::max)
        + 1.0;
    let mut all: Vec<f64> = (0..2 * n)
        .map(|idx| {
            // idx-th smallest eigenvalue
            let (mut lo, mut hi) = (-radius, radius);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if sturm_count(&d, &e, mid) > idx {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect();
    all.sort_by(|a, b| b.total_cmp(a));
    all.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect()
}

/// `2 Σ_{i ≤ r < j} (f_i - f_j) |x_ij|²` with `x_ij` taken in an orthonormal
/// eigenbasis `V` of `F` (columns sorted by decreasing eigenvalue).
pub fn double_comm_basis_formula(f_vals: &[f64], v: &ComplexMatrix, x: &HermitianMatrix, r: usize) -> f64 {
    let xb = &(&v.adjoint() * x.as_matrix()) * v;
    let n = f_vals.len();
    let mut s = 0.0;
    for i in 0..r {
        for j in r..n {
            s += (f_vals[i] - f_vals[j]) * xb[(i, j)].norm_sqr();
        }
    }
    2.0 * s
}

/// `Q_k` as the k-th derivative of `e^{At}e^{Bt}` at 0, by enumerating every
/// way of distributing `k` derivatives between the two factors.
pub fn qk_by_enumeration(a: &ComplexMatrix, b: &ComplexMatrix, k: usize) -> ComplexMatrix {
    let n = a.dim();
    let mut total = ComplexMatrix::zeros(n);
    for mask in 0u32..(1 << k) {
        let na = mask.count_ones() as usize;
        let mut prod = ComplexMatrix::identity(n);
        for _ in 0..na {
            prod = &prod * a;
        }
        for _ in 0..(k - na) {
            prod = &prod * b;
        }
        total = &total + &prod;
    }
    total
}

/// Orthogonal projection onto the span of `r` random Gaussian vectors
/// (Gram–Schmidt in the standard inner product).
pub fn random_projection<R: rand::Rng>(rng: &mut R, n: usize, r: usize) -> ComplexMatrix {
    use rand_distr::StandardNormal;
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    while basis.len() < r {
        let mut v: Vec<Complex64> = (0..n).map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
        for u in &basis {
            let dot: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= dot * ui;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            basis.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    let mut e = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            e[(i, j)] = basis.iter().map(|u| u[i] * u[j].conj()).sum();
        }
    }
    e
}
