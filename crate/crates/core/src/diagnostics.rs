//! Adequacy checks for extracted innovations.
//!
//! A well-specified model leaves i.i.d. innovations behind. Ljung-Box probes
//! the levels for serial correlation, ARCH-LM probes the squares for
//! remaining conditional heteroskedasticity.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::stats::chi2_sf;

pub const DEFAULT_LAGS: usize = 10;
pub const DEFAULT_SIGNIFICANCE: f64 = 0.05;

/// Relative ridge added to the normal equations of the ARCH-LM regression.
pub const RIDGE_FACTOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestName {
    LjungBox,
    ArchLm,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub name: TestName,
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
    pub lags: usize,
}

fn to_f64<T: Scalar>(x: &[T]) -> Vec<f64> {
    x.iter().map(|v| v.as_f64()).collect()
}

fn demeaned(x: &[f64]) -> Vec<f64> {
    let m = x.iter().sum::<f64>() / x.len() as f64;
    x.iter().map(|v| v - m).collect()
}

/// Sample autocorrelations `ρ̂_1..ρ̂_lags` (mean-subtracted, biased denominator).
pub fn autocorrelations<T: Scalar>(x: &[T], lags: usize) -> Result<Vec<f64>> {
    let x = to_f64(x);
    if x.windows(2).all(|w| w[0] == w[1]) {
        return Err(Error::ZeroVariance);
    }
    let d = demeaned(&x);
    let denom: f64 = d.iter().map(|v| v * v).sum();
    if denom <= 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok((1..=lags).map(|k| d[k..].iter().zip(&d).map(|(a, b)| a * b).sum::<f64>() / denom).collect())
}

/// Ljung-Box `Q = n(n+2) Σ_{k=1}^{h} ρ̂_k² / (n-k)`, chi-square(h) under the null.
pub fn ljung_box<T: Scalar>(x: &[T], lags: usize) -> Result<TestResult> {
    if lags == 0 {
        return Err(Error::ConstraintViolation("Ljung-Box needs at least one lag".into()));
    }
    let n = x.len();
    if n <= lags {
        return Err(Error::InsufficientLength { needed: lags, got: n });
    }
    let rho = autocorrelations(x, lags)?;
    let nf = n as f64;
    let q = nf * (nf + 2.0) * rho.iter().enumerate().map(|(i, r)| r * r / (nf - (i + 1) as f64)).sum::<f64>();
    Ok(TestResult { name: TestName::LjungBox, statistic: q, df: lags, p_value: chi2_sf(q, lags), lags })
}

/// Engle's ARCH-LM test: `n_eff·R²` from regressing `e_t²` on a constant and
/// `e_{t-1}², …, e_{t-h}²`, where `e` is the demeaned input.
///
/// A constant input is `ZeroVariance`; a constant regressand (squares all
/// equal) gives statistic 0 and p-value 1.
pub fn arch_lm<T: Scalar>(x: &[T], lags: usize) -> Result<TestResult> {
    if lags == 0 {
        return Err(Error::ConstraintViolation("ARCH-LM needs at least one lag".into()));
    }
    let n = x.len();
    if n <= 2 * lags + 1 {
        return Err(Error::InsufficientLength { needed: 2 * lags + 1, got: n });
    }
    let x = to_f64(x);
    if x.windows(2).all(|w| w[0] == w[1]) {
        return Err(Error::ZeroVariance);
    }
    let sq: Vec<f64> = demeaned(&x).iter().map(|e| e * e).collect();
    let n_eff = n - lags;
    let r2 = centered_r_squared(&sq, lags);
    let statistic = n_eff as f64 * r2;
    Ok(TestResult { name: TestName::ArchLm, statistic, df: lags, p_value: chi2_sf(statistic, lags), lags })
}

/// R² of `y_t` on its own `lags` lags plus intercept. The intercept is
/// absorbed by centering; the normal equations carry a ridge of
/// `RIDGE_FACTOR·trace`.
fn centered_r_squared(y: &[f64], lags: usize) -> f64 {
    let rows = y.len() - lags;
    let target: Vec<f64> = y[lags..].to_vec();
    let design = DMatrix::from_fn(rows, lags, |t, j| y[lags + t - (j + 1)]);

    let tmean = target.iter().sum::<f64>() / rows as f64;
    let yc = DVector::from_iterator(rows, target.iter().map(|v| v - tmean));
    let sst = yc.norm_squared();
    if !(sst > 0.0) {
        return 0.0;
    }
    let mut xc = design;
    for mut col in xc.column_iter_mut() {
        let m = col.mean();
        col.add_scalar_mut(-m);
    }
    let mut xtx = xc.transpose() * &xc;
    let trace = xtx.trace();
    if !(trace > 0.0) {
        return 0.0;
    }
    for i in 0..lags {
        xtx[(i, i)] += RIDGE_FACTOR * trace;
    }
    let xty = xc.transpose() * &yc;
    let Some(chol) = xtx.cholesky() else {
        return 0.0;
    };
    let beta = chol.solve(&xty);
    let ssr = (&yc - &xc * beta).norm_squared();
    (1.0 - ssr / sst).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Warn,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorInfo {
    pub kind: String,
    pub message: String,
}

impl From<&Error> for ErrorInfo {
    fn from(e: &Error) -> Self {
        Self { kind: e.kind().to_string(), message: e.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TestOutcome {
    Completed(TestResult),
    NotComputed { name: TestName, error: ErrorInfo },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    pub tests: Vec<TestOutcome>,
    pub significance: f64,
    pub verdict: Verdict,
}

/// Runs both tests. `Fail` if any p-value is below `significance`, `Warn` if
/// a test could not be computed, `Pass` otherwise.
pub fn diagnose<T: Scalar>(innovations: &[T], lags: usize, significance: f64) -> DiagnosticsReport {
    let outcome = |name, r: Result<TestResult>| match r {
        Ok(t) => TestOutcome::Completed(t),
        Err(e) => TestOutcome::NotComputed { name, error: ErrorInfo::from(&e) },
    };
    let tests = vec![
        outcome(TestName::LjungBox, ljung_box(innovations, lags)),
        outcome(TestName::ArchLm, arch_lm(innovations, lags)),
    ];
    let rejected = tests.iter().any(|t| matches!(t, TestOutcome::Completed(r) if r.p_value < significance));
    let missing = tests.iter().any(|t| matches!(t, TestOutcome::NotComputed { .. }));
    let verdict = if rejected {
        Verdict::Fail
    } else if missing {
        Verdict::Warn
    } else {
        Verdict::Pass
    };
    DiagnosticsReport { tests, significance, verdict }
}
