//! Randomized descent hunting for pairs `(A, B)` that violate
//! `λ(H^k) ≺_w λ(R_k)`, plus self-verifying reports of the outcome.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::random::{random_complex, random_hermitian};
use crate::linalg::{eigenvalues, hermitian_eig, singular_values, ComplexMatrix, HermitianMatrix, MatrixFile};
use crate::spectral::prefix_margins;
use crate::taylor::{order_margins, CoeffBundle};
use crate::tolerance::Tolerances;

pub const SCHEMA: &str = "vr-1";
/// Margins with magnitude below this are never called a violation.
pub const INCONCLUSIVE_BAND: f64 = 1e-8;
/// Margins below this are reported as counterexamples.
pub const COUNTEREXAMPLE_THRESHOLD: f64 = -1e-6;
pub const MIN_STEP: f64 = 1e-8;
const FD_STEP: f64 = 1e-6;
const NEAR_COMMUTING_NOISE: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[clap(rename_all = "snake_case")]
pub enum Ensemble {
    Gaussian,
    /// Trailing half of each spectrum set to zero.
    RankDeficient,
    /// `B = p(A) + ε G` for a random quadratic `p`.
    NearCommuting,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub k: usize,
    pub dim: usize,
    pub num_restarts: usize,
    pub steps_per_restart: usize,
    pub step_size: f64,
    pub rng_seed: u64,
    pub ensemble: Ensemble,
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.to_string()));
        if self.k < 3 || self.k > crate::taylor::MAX_ORDER {
            return bad("k must lie in 3..=60 (3 and 4 serve as controls)");
        }
        if self.dim == 0 {
            return bad("dim must be positive");
        }
        if self.num_restarts == 0 || self.steps_per_restart == 0 {
            return bad("restart and step counts must be positive");
        }
        if !(self.step_size > 0.0 && self.step_size.is_finite()) {
            return bad("step_size must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    /// `best_margin < -1e-6`.
    Counterexample,
    /// Negative beyond the noise band but above the counterexample threshold.
    Suspect,
    /// `|best_margin| < 1e-8`.
    Inconclusive,
    NoViolation,
}

impl SearchStatus {
    pub fn classify(margin: f64) -> Self {
        if margin.abs() < INCONCLUSIVE_BAND {
            SearchStatus::Inconclusive
        } else if margin < COUNTEREXAMPLE_THRESHOLD {
            SearchStatus::Counterexample
        } else if margin < 0.0 {
            SearchStatus::Suspect
        } else {
            SearchStatus::NoViolation
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RngProvenance {
    pub algorithm: String,
    pub seed: u64,
    /// Each restart draws from stream `restart index` of the seeded generator.
    pub stream: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationReport {
    pub schema: String,
    pub config: SearchConfig,
    pub status: SearchStatus,
    pub best_margin: f64,
    pub best_restart: usize,
    pub a: MatrixFile,
    pub b: MatrixFile,
    /// `ky_fan_sum(λ(R_k), r) - ky_fan_sum(λ(H^k), r)` at the argmin.
    pub margins: Vec<f64>,
    /// `Tr(E_{k,r} D_k)` at the argmin.
    pub certificates: Vec<f64>,
    /// `ky_fan_sum(σ(Q_k), r) - ky_fan_sum(λ(H^k), r)` at the argmin.
    pub sigma_margins: Vec<f64>,
    /// Best margin reached by each restart, in restart order.
    pub restart_margins: Vec<f64>,
    pub wall_clock_secs: f64,
    pub rng: RngProvenance,
}

impl ViolationReport {
    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let report: Self = serde_json::from_str(text).map_err(|e| Error::MalformedReport(e.to_string()))?;
        if report.schema != SCHEMA {
            return Err(Error::MalformedReport(format!("unknown schema {:?}", report.schema)));
        }
        Ok(report)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }
}

/// `min_r [ky_fan_sum(λ(R_k), r) - ky_fan_sum(λ(H^k), r)]`; negative means a violation.
pub fn margin_objective(a: &HermitianMatrix, b: &HermitianMatrix, k: usize, tol: &Tolerances) -> Result<f64> {
    let bundle = CoeffBundle::compute(a, b, k)?;
    let margins = prefix_margins(&eigenvalues(&bundle.hk, tol)?, &eigenvalues(&bundle.r, tol)?);
    Ok(margins.into_iter().fold(f64::INFINITY, f64::min))
}

/// Real coordinates of a Hermitian matrix: the diagonal, then `(re, im)` of
/// each upper-triangle entry in row order. `n²` numbers in total.
pub fn hermitian_to_params(m: &HermitianMatrix, out: &mut Vec<f64>) {
    let n = m.dim();
    for i in 0..n {
        out.push(m[(i, i)].re);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            out.push(m[(i, j)].re);
            out.push(m[(i, j)].im);
        }
    }
}

pub fn params_to_hermitian(n: usize, p: &[f64]) -> HermitianMatrix {
    debug_assert_eq!(p.len(), n * n);
    let mut m = ComplexMatrix::zeros(n);
    for i in 0..n {
        m[(i, i)] = Complex64::new(p[i], 0.0);
    }
    let mut idx = n;
    for i in 0..n {
        for j in (i + 1)..n {
            let z = Complex64::new(p[idx], p[idx + 1]);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
            idx += 2;
        }
    }
    HermitianMatrix::symmetrize(&m)
}

/// Pairs are searched on the sphere `||A||_F² + ||B||_F² = 2n`; the margin is
/// homogeneous of degree `k`, so without this the descent would just shrink the pair.
fn normalized_pair(n: usize, p: &[f64]) -> (HermitianMatrix, HermitianMatrix) {
    let a = params_to_hermitian(n, &p[..n * n]);
    let b = params_to_hermitian(n, &p[n * n..]);
    let norm2 = a.frobenius_norm().powi(2) + b.frobenius_norm().powi(2);
    if norm2 == 0.0 {
        return (a, b);
    }
    let s = (2.0 * n as f64 / norm2).sqrt();
    (a.scale(s), b.scale(s))
}

fn sample_pair(rng: &mut ChaCha8Rng, n: usize, ensemble: Ensemble, tol: &Tolerances) -> (HermitianMatrix, HermitianMatrix) {
    match ensemble {
        Ensemble::Gaussian => (random_hermitian(rng, n, None), random_hermitian(rng, n, None)),
        Ensemble::RankDeficient => {
            let zero_trailing = |m: HermitianMatrix| {
                let eig = hermitian_eig(&m, tol).expect("eigensolver on gaussian sample");
                let keep = n - n / 2;
                let values: Vec<f64> = eig
                    .spectrum
                    .values()
                    .iter()
                    .enumerate()
                    .map(|(i, &l)| if i < keep { l } else { 0.0 })
                    .collect();
                eig.with_values(&values)
            };
            let a = random_hermitian(rng, n, None);
            let b = random_hermitian(rng, n, None);
            (zero_trailing(a), zero_trailing(b))
        }
        Ensemble::NearCommuting => {
            let a = random_hermitian(rng, n, None);
            let c: [f64; 3] = [rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal)];
            let am = a.as_matrix();
            let poly = ComplexMatrix::identity(n).scale(c[0]) + am.scale(c[1]) + (am * am).scale(c[2]);
            let noise = HermitianMatrix::symmetrize(&random_complex(rng, n)).scale(NEAR_COMMUTING_NOISE);
            let b = HermitianMatrix::symmetrize(&poly).checked_add(&noise).unwrap();
            (a, b)
        }
    }
}

struct Objective<'a> {
    n: usize,
    k: usize,
    tol: &'a Tolerances,
}

impl Objective<'_> {
    fn eval(&self, p: &[f64]) -> f64 {
        let (a, b) = normalized_pair(self.n, p);
        margin_objective(&a, &b, self.k, self.tol).unwrap_or(f64::INFINITY)
    }

    /// Central differences, one coordinate at a time.
    fn gradient(&self, p: &[f64]) -> Vec<f64> {
        let mut work = p.to_vec();
        (0..p.len())
            .map(|i| {
                let orig = work[i];
                work[i] = orig + FD_STEP;
                let up = self.eval(&work);
                work[i] = orig - FD_STEP;
                let down = self.eval(&work);
                work[i] = orig;
                (up - down) / (2.0 * FD_STEP)
            })
            .collect()
    }
}

/// Best point and margin history of one restart.
#[derive(Debug, Clone)]
pub struct RestartTrace {
    pub restart: usize,
    pub best_margin: f64,
    pub params: Vec<f64>,
    /// Objective after each accepted step, starting with the initial point.
    pub margins: Vec<f64>,
}

fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    rng
}

fn run_restart(config: &SearchConfig, restart: usize, tol: &Tolerances) -> RestartTrace {
    let n = config.dim;
    let mut rng = restart_rng(config.rng_seed, restart);
    let (a0, b0) = sample_pair(&mut rng, n, config.ensemble, tol);
    let mut p = Vec::with_capacity(2 * n * n);
    hermitian_to_params(&a0, &mut p);
    hermitian_to_params(&b0, &mut p);
    // start on the search sphere
    let (a0, b0) = normalized_pair(n, &p);
    p.clear();
    hermitian_to_params(&a0, &mut p);
    hermitian_to_params(&b0, &mut p);

    let obj = Objective { n, k: config.k, tol };
    let mut f = obj.eval(&p);
    let mut margins = vec![f];
    'descent: for _ in 0..config.steps_per_restart {
        let g = obj.gradient(&p);
        let gnorm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        if gnorm == 0.0 || !gnorm.is_finite() {
            break;
        }
        let mut step = config.step_size;
        loop {
            let cand: Vec<f64> = p.iter().zip(&g).map(|(x, gi)| x - step * gi / gnorm).collect();
            let fc = obj.eval(&cand);
            if fc < f {
                p = cand;
                f = fc;
                margins.push(f);
                break;
            }
            step *= 0.5;
            if step < MIN_STEP {
                break 'descent;
            }
        }
    }
    RestartTrace {
        restart,
        best_margin: f,
        params: p,
        margins,
    }
}

/// Multi-restart search. Restarts run on the current rayon pool; the result
/// does not depend on the schedule.
pub fn hunt(config: &SearchConfig) -> Result<ViolationReport> {
    Ok(hunt_traced(config)?.0)
}

pub fn hunt_traced(config: &SearchConfig) -> Result<(ViolationReport, Vec<RestartTrace>)> {
    config.validate()?;
    let tol = Tolerances::default();
    let start = Instant::now();
    let traces: Vec<RestartTrace> = (0..config.num_restarts)
        .into_par_iter()
        .map(|r| run_restart(config, r, &tol))
        .collect();

    // first restart wins ties
    let best = traces
        .iter()
        .fold(&traces[0], |acc, t| if t.best_margin < acc.best_margin { t } else { acc });
    let n = config.dim;
    let (a, b) = normalized_pair(n, &best.params);
    // serialize first so every recorded number is recomputable from the stored pair
    let (a_file, b_file) = (MatrixFile::from(a.as_matrix()), MatrixFile::from(b.as_matrix()));
    let (a, b) = (a_file.to_hermitian(&tol)?, b_file.to_hermitian(&tol)?);
    let tm = order_margins(&a, &b, config.k, &tol)?;
    let best_margin = tm.min_margin();
    let sigma_margins = sigma_margins(&a, &b, config.k, &tol)?;

    let report = ViolationReport {
        schema: SCHEMA.to_string(),
        config: config.clone(),
        status: SearchStatus::classify(best_margin),
        best_margin,
        best_restart: best.restart,
        a: a_file,
        b: b_file,
        margins: tm.margins,
        certificates: tm.certificates,
        sigma_margins,
        restart_margins: traces.iter().map(|t| t.best_margin).collect(),
        wall_clock_secs: start.elapsed().as_secs_f64(),
        rng: RngProvenance {
            algorithm: "ChaCha8Rng".to_string(),
            seed: config.rng_seed,
            stream: "restart index".to_string(),
        },
    };
    Ok((report, traces))
}

fn sigma_margins(a: &HermitianMatrix, b: &HermitianMatrix, k: usize, tol: &Tolerances) -> Result<Vec<f64>> {
    let bundle = CoeffBundle::compute(a, b, k)?;
    Ok(prefix_margins(&eigenvalues(&bundle.hk, tol)?, &singular_values(&bundle.q, tol)?))
}

/// `restart,step,margin` rows for every accepted step.
pub fn write_trace_csv(traces: &[RestartTrace], out: &mut impl Write) -> std::io::Result<()> {
    writeln!(out, "restart,step,margin")?;
    for t in traces {
        for (step, m) in t.margins.iter().enumerate() {
            writeln!(out, "{},{},{:e}", t.restart, step, m)?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reverification {
    pub verified: bool,
    /// The stored margin lies inside the noise band; no sign claim is made.
    pub inconclusive: bool,
    pub recomputed_margin: f64,
    pub tightened_margin: f64,
    /// Largest `|stored - recomputed|` over the per-`r` margins.
    pub margin_drift: f64,
    pub reason: Option<String>,
}

impl Reverification {
    fn rejected(reason: String) -> Self {
        Self {
            verified: false,
            inconclusive: false,
            recomputed_margin: f64::NAN,
            tightened_margin: f64::NAN,
            margin_drift: f64::NAN,
            reason: Some(reason),
        }
    }
}

const REVERIFY_ABS_TOL: f64 = 1e-9;

/// Recomputes every margin from the stored pair, once with the default
/// eigensolver threshold and once with it tightened 100×.
pub fn reverify(report: &ViolationReport) -> Result<Reverification> {
    if report.schema != SCHEMA {
        return Err(Error::MalformedReport(format!("unknown schema {:?}", report.schema)));
    }
    let tol = Tolerances::default();
    let pair = report.a.to_hermitian(&tol).and_then(|a| Ok((a, report.b.to_hermitian(&tol)?)));
    let (a, b) = match pair {
        Ok(p) => p,
        Err(e) => return Ok(Reverification::rejected(format!("stored matrices rejected: {e}"))),
    };
    if a.dim() != report.config.dim || b.dim() != report.config.dim {
        return Ok(Reverification::rejected("matrix dimension disagrees with config".into()));
    }
    let k = report.config.k;
    let base = order_margins(&a, &b, k, &tol)?;
    let tight = order_margins(&a, &b, k, &tol.tightened(100.0))?;
    let recomputed = base.min_margin();
    let tightened = tight.min_margin();

    if base.margins.len() != report.margins.len() {
        return Ok(Reverification::rejected("margin vector length disagrees with dimension".into()));
    }
    let drift = base
        .margins
        .iter()
        .zip(&report.margins)
        .chain(base.certificates.iter().zip(&report.certificates))
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);

    let best = report.best_margin;
    let mut out = Reverification {
        verified: false,
        inconclusive: best.abs() < INCONCLUSIVE_BAND,
        recomputed_margin: recomputed,
        tightened_margin: tightened,
        margin_drift: drift,
        reason: None,
    };
    let within = |x: f64| x.partial_cmp(&REVERIFY_ABS_TOL).is_some_and(|o| o.is_le());
    // NaN drift must reject
    if !within(drift) || !within((recomputed - best).abs()) {
        out.reason = Some(format!("stored margins do not match recomputation (drift {drift:e})"));
        return Ok(out);
    }
    if out.inconclusive {
        out.verified = recomputed.abs() < INCONCLUSIVE_BAND && tightened.abs() < INCONCLUSIVE_BAND;
        if !out.verified {
            out.reason = Some("margin left the noise band on recomputation".into());
        }
        return Ok(out);
    }
    let persists = |m: f64| m.signum() == best.signum() && (m - best).abs() <= 0.1 * best.abs();
    out.verified = persists(recomputed) && persists(tightened);
    if !out.verified {
        out.reason = Some("sign or magnitude of the margin changed under tightened eigensolver".into());
    }
    Ok(out)
}
