//! VaR and stressed VaR from scenario sets, and the Kupiec coverage backtest.
//!
//! VaR is reported as a positive loss: the negated lower empirical quantile
//! of scenario P&L at level `1 - confidence`.

use std::io::Write;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::innovations::{extract, simulate_stressed, ScenarioMode, ScenarioSet};
use crate::scalar::Scalar;
use crate::stats::chi2_sf;
use crate::timeseries::PriceSeries;
use crate::volatility::{InitRule, LocalVolSpec, ModelSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum QuantileRule {
    /// Order statistic `⌈(1 - c)·n⌉` of the ascending sample (1-indexed).
    #[default]
    LowerOrderStatistic,
    /// Linear interpolation between order statistics at `(n - 1)·(1 - c)`.
    Interpolated,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VaRReport<T> {
    pub confidence: f64,
    #[serde(rename = "var")]
    pub var_value: T,
    pub n_scenarios: usize,
    pub mode: ScenarioMode,
    pub quantile_rule: QuantileRule,
    pub model_echo: Option<ModelSpec<T>>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BacktestReport {
    pub n: usize,
    pub exceptions: usize,
    pub confidence: f64,
    pub lr_pof: f64,
    pub p_value: f64,
}

/// Scenario P&L `S~_k - S_0`.
pub fn pnl<T: Scalar>(scen: &ScenarioSet<T>) -> Vec<T> {
    scen.scenarios.iter().map(|s| *s - scen.base.s0).collect()
}

fn check_confidence(confidence: f64) -> Result<()> {
    if confidence > 0.5 && confidence < 1.0 {
        Ok(())
    } else {
        Err(Error::ConstraintViolation(format!("confidence must lie in (0.5, 1), got {confidence}")))
    }
}

/// `⌈p·n⌉` clamped to `1..=n`, treating `p·n` within rounding noise of an
/// integer as that integer.
fn order_index(p: f64, n: usize) -> usize {
    let x = p * n as f64;
    let nearest = x.round();
    let k = if (x - nearest).abs() <= 1e-9 * x.abs().max(1.0) { nearest } else { x.ceil() };
    (k as usize).clamp(1, n)
}

/// Empirical quantile of `sample` at level `p` under `rule`.
pub fn empirical_quantile<T: Scalar>(sample: &[T], p: f64, rule: QuantileRule) -> Result<T> {
    if sample.is_empty() {
        return Err(Error::EmptyScenarios);
    }
    let mut sorted = sample.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite P&L"));
    let n = sorted.len();
    Ok(match rule {
        QuantileRule::LowerOrderStatistic => sorted[order_index(p, n) - 1],
        QuantileRule::Interpolated => {
            let h = (n - 1) as f64 * p;
            let lo = h.floor() as usize;
            let hi = (lo + 1).min(n - 1);
            let frac = T::lit(h - lo as f64);
            sorted[lo] + frac * (sorted[hi] - sorted[lo])
        }
    })
}

pub fn var<T: Scalar>(scen: &ScenarioSet<T>, confidence: f64) -> Result<VaRReport<T>> {
    var_with_rule(scen, confidence, QuantileRule::LowerOrderStatistic)
}

pub fn var_with_rule<T: Scalar>(scen: &ScenarioSet<T>, confidence: f64, rule: QuantileRule) -> Result<VaRReport<T>> {
    check_confidence(confidence)?;
    let sample = pnl(scen);
    let q = empirical_quantile(&sample, 1.0 - confidence, rule)?;
    let n = sample.len();
    let mut warnings = Vec::new();
    let needed = (1.0 / (1.0 - confidence) - 1e-9).ceil() as usize;
    if n < needed {
        warnings.push(format!("{n} scenarios cannot resolve the {confidence} quantile (need at least {needed})"));
    }
    Ok(VaRReport {
        confidence,
        var_value: -q,
        n_scenarios: n,
        mode: scen.mode,
        quantile_rule: rule,
        model_echo: scen.model,
        warnings,
    })
}

/// Stressed VaR over the inclusive date window: restrict, replay without the
/// stochastic volatility ratio, take the quantile.
pub fn stressed_var<T: Scalar>(
    series: &PriceSeries<T>,
    lv: &LocalVolSpec<T>,
    window: (NaiveDate, NaiveDate),
    base_s0: T,
    confidence: f64,
) -> Result<VaRReport<T>> {
    check_confidence(confidence)?;
    let sub = series.window(window.0, window.1)?;
    let (innov, _) = extract(&sub, &ModelSpec::local(*lv), InitRule::Default)?;
    let scen = simulate_stressed(&innov, &sub, lv, base_s0)?;
    var(&scen, confidence)
}

/// Writes the ascending P&L sample as `rank,pnl`.
pub fn write_sorted_pnl_csv<T: Scalar, W: Write>(scen: &ScenarioSet<T>, mut w: W) -> Result<()> {
    let mut sample = pnl(scen);
    sample.sort_by(|a, b| a.partial_cmp(b).expect("finite P&L"));
    writeln!(w, "rank,pnl")?;
    for (i, x) in sample.iter().enumerate() {
        writeln!(w, "{},{}", i + 1, x)?;
    }
    Ok(())
}

/// Number of realized losses strictly exceeding the matching VaR.
pub fn count_exceptions<T: Scalar>(realized_pnl: &[T], var_values: &[T]) -> usize {
    realized_pnl.iter().zip(var_values).filter(|(p, v)| -**p > **v).count()
}

/// `x·ln(y)` with the convention `0·ln(0) = 0`.
fn xlogy(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * y.ln()
    }
}

/// Kupiec proportion-of-failures likelihood ratio test.
pub fn kupiec_backtest(exceptions: usize, n: usize, confidence: f64) -> Result<BacktestReport> {
    if n == 0 {
        return Err(Error::InsufficientLength { needed: 0, got: 0 });
    }
    if exceptions > n {
        return Err(Error::ConstraintViolation(format!("{exceptions} exceptions in {n} observations")));
    }
    check_confidence(confidence)?;
    let p = 1.0 - confidence;
    let x = exceptions as f64;
    let nf = n as f64;
    let rate = x / nf;
    let lr_pof = if (rate - p).abs() <= 1e-12 * p {
        0.0
    } else {
        let null = xlogy(nf - x, 1.0 - p) + xlogy(x, p);
        let alt = xlogy(nf - x, 1.0 - rate) + xlogy(x, rate);
        (-2.0 * (null - alt)).max(0.0)
    };
    Ok(BacktestReport { n, exceptions, confidence, lr_pof, p_value: chi2_sf(lr_pof, 1) })
}
