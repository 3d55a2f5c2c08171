//! Innovation extraction and one-step scenario generation.
//!
//! Under `ΔS_k = v_{k-1}·γ(S_{k-1})·ΔW_k` the realized increments of the
//! driving noise are recovered by dividing each price move by its model
//! volatility. Replaying them from the base state `(S_0, v_0)` gives
//!
//! ```text
//! S~_k = S_0 + v_0·γ(S_0) / (v_{k-1}·γ(S_{k-1})) · (S_k - S_{k-1})
//! ```
//!
//! Constant `γ` reproduces absolute shifts, proportional `γ` relative shifts,
//! proportional `γ` with a GARCH/EWMA filter filtered historical simulation.

use std::io::Write;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::timeseries::{check_denominators, PriceSeries};
use crate::volatility::{eval_gamma, filter_vol, InitRule, LocalVolSpec, ModelSpec, VolPath};

/// Extracted increments `ΔW_1..ΔW_N`, dated at the later day of each step.
#[derive(Debug, Clone, PartialEq)]
pub struct InnovationSeries<T> {
    pub dates: Vec<NaiveDate>,
    pub values: Vec<T>,
    pub model: ModelSpec<T>,
    pub source_label: String,
}

impl<T: Scalar> InnovationSeries<T> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Writes `k,date,innovation` rows, `k = 1..N`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "k,date,innovation")?;
        for (i, (d, x)) in self.dates.iter().zip(&self.values).enumerate() {
            writeln!(w, "{},{},{}", i + 1, d.format("%Y-%m-%d"), x)?;
        }
        Ok(())
    }
}

/// Writes `k,date,v` rows for `k = 0..N`.
pub fn write_volpath_csv<T: Scalar, W: Write>(mut w: W, series: &PriceSeries<T>, path: &VolPath<T>) -> Result<()> {
    if path.len() != series.len() {
        return Err(Error::Misaligned(format!(
            "volatility path has {} values for {} observations",
            path.len(),
            series.len()
        )));
    }
    writeln!(w, "k,date,v")?;
    for (k, (d, v)) in series.dates().iter().zip(&path.values).enumerate() {
        writeln!(w, "{},{},{}", k, d.format("%Y-%m-%d"), v)?;
    }
    Ok(())
}

/// Valuation state the scenarios start from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Base<T> {
    pub s0: T,
    /// Current stochastic volatility; absent for stressed scenarios.
    pub v0: Option<T>,
}

impl<T: Scalar> Base<T> {
    pub fn new(s0: T, v0: T) -> Self {
        Self { s0, v0: Some(v0) }
    }

    /// Last observation and last filtered volatility.
    pub fn from_history(series: &PriceSeries<T>, path: &VolPath<T>) -> Self {
        Self::new(series.last(), path.last())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioMode {
    Standard,
    Stressed,
}

/// Simulated one-step states `S~_k`, one per historical increment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioSet<T> {
    pub base: Base<T>,
    pub dates: Vec<NaiveDate>,
    pub scenarios: Vec<T>,
    pub mode: ScenarioMode,
    /// `None` for hybrid-shift scenarios built from an interpolation function.
    pub model: Option<ModelSpec<T>>,
}

impl<T: Scalar> ScenarioSet<T> {
    pub fn len(&self) -> usize {
        self.scenarios.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scenarios.is_empty()
    }

    /// Writes `k,date,s_tilde` rows.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "k,date,s_tilde")?;
        for (i, (d, s)) in self.dates.iter().zip(&self.scenarios).enumerate() {
            writeln!(w, "{},{},{}", i + 1, d.format("%Y-%m-%d"), s)?;
        }
        Ok(())
    }
}

/// Local volatilities `γ(S_{k-1})` for every step, with positivity checks.
fn step_gammas<T: Scalar>(series: &PriceSeries<T>, lv: &LocalVolSpec<T>) -> Result<Vec<T>> {
    let values = series.values();
    values[..values.len() - 1]
        .iter()
        .enumerate()
        .map(|(k, &x)| eval_gamma(lv, x).map_err(|_| Error::NonpositiveVolatility { x: x.as_f64(), index: Some(k) }))
        .collect()
}

/// Extracts innovations with the default positivity threshold for
/// proportional models.
pub fn extract<T: Scalar>(
    series: &PriceSeries<T>,
    model: &ModelSpec<T>,
    init: InitRule<T>,
) -> Result<(InnovationSeries<T>, VolPath<T>)> {
    extract_with_threshold(series, model, init, series.default_eps())
}

/// Extracts `ΔW_k = (S_k - S_{k-1}) / (v_{k-1}·γ(S_{k-1}))` and the volatility
/// path it used.
///
/// For a proportional model every denominator must exceed `eps`, the same
/// contract as relative shifts.
pub fn extract_with_threshold<T: Scalar>(
    series: &PriceSeries<T>,
    model: &ModelSpec<T>,
    init: InitRule<T>,
    eps: T,
) -> Result<(InnovationSeries<T>, VolPath<T>)> {
    model.validate()?;
    if let LocalVolSpec::Proportional { .. } = model.localvol {
        check_denominators(series.values(), eps)?;
    }
    let gammas = step_gammas(series, &model.localvol)?;
    let returns: Vec<T> = series.values().windows(2).zip(&gammas).map(|(w, g)| (w[1] - w[0]) / *g).collect();
    let path = filter_vol(&model.stochvol, &returns, init)?;
    let values: Vec<T> = returns.iter().zip(&path.values).map(|(r, v)| *r / *v).collect();
    if let Some(k) = values.iter().position(|x| !x.is_finite()) {
        return Err(Error::NumericalFailure {
            message: format!("non-finite innovation at step {}", k + 1),
            params: vec![path.values[k].as_f64(), gammas[k].as_f64()],
        });
    }
    let innov = InnovationSeries {
        dates: series.dates()[1..].to_vec(),
        values,
        model: *model,
        source_label: series.label().to_string(),
    };
    Ok((innov, path))
}

fn check_aligned<T: Scalar>(innov: &InnovationSeries<T>, series: &PriceSeries<T>) -> Result<()> {
    if innov.len() + 1 != series.len() {
        return Err(Error::Misaligned(format!("{} innovations for {} observations", innov.len(), series.len())));
    }
    Ok(())
}

/// Scenarios `S~_k = S_0 + v_0·γ(S_0)/(v_{k-1}·γ(S_{k-1}))·(S_k - S_{k-1})`.
pub fn simulate<T: Scalar>(
    innov: &InnovationSeries<T>,
    volpath: &VolPath<T>,
    series: &PriceSeries<T>,
    base: Base<T>,
) -> Result<ScenarioSet<T>> {
    check_aligned(innov, series)?;
    if volpath.len() != series.len() {
        return Err(Error::Misaligned(format!(
            "volatility path has {} values for {} observations",
            volpath.len(),
            series.len()
        )));
    }
    let lv = innov.model.localvol;
    let v0 = base.v0.ok_or_else(|| Error::InvalidConfig("standard scenarios need a base volatility".into()))?;
    if !(v0 > T::zero() && v0.is_finite()) {
        return Err(Error::ConstraintViolation(format!("base volatility must be positive, got {v0}")));
    }
    let g0 = eval_gamma(&lv, base.s0)?;
    let gammas = step_gammas(series, &lv)?;
    let scale0 = v0 * g0;
    let scenarios = series
        .values()
        .windows(2)
        .zip(gammas.iter().zip(&volpath.values))
        .map(|(w, (g, v))| base.s0 + scale0 / (*v * *g) * (w[1] - w[0]))
        .collect();
    Ok(ScenarioSet {
        base,
        dates: innov.dates.clone(),
        scenarios,
        mode: ScenarioMode::Standard,
        model: Some(innov.model),
    })
}

/// Stressed scenarios `S_0 + γ(S_0)/γ(S_{k-1})·(S_k - S_{k-1})`.
///
/// The stochastic volatility ratio is deliberately absent so the historical
/// volatility level of the sample is preserved.
pub fn simulate_stressed<T: Scalar>(
    innov: &InnovationSeries<T>,
    series: &PriceSeries<T>,
    lv: &LocalVolSpec<T>,
    base_s0: T,
) -> Result<ScenarioSet<T>> {
    check_aligned(innov, series)?;
    lv.validate()?;
    let g0 = eval_gamma(lv, base_s0)?;
    let gammas = step_gammas(series, lv)?;
    let scenarios = series.values().windows(2).zip(&gammas).map(|(w, g)| base_s0 + g0 / *g * (w[1] - w[0])).collect();
    Ok(ScenarioSet {
        base: Base { s0: base_s0, v0: None },
        dates: innov.dates.clone(),
        scenarios,
        mode: ScenarioMode::Stressed,
        model: Some(ModelSpec::new(*lv, innov.model.stochvol)),
    })
}

/// Hybrid absolute/relative shift
/// `S_0 + α(S_{k-1})·S_0·r_rel + (1 - α(S_{k-1}))·r_abs`.
pub fn hybrid_shift<T: Scalar>(
    series: &PriceSeries<T>,
    base_s0: T,
    mut alpha_fn: impl FnMut(T) -> T,
) -> Result<ScenarioSet<T>> {
    check_denominators(series.values(), series.default_eps())?;
    let scenarios = series
        .values()
        .windows(2)
        .map(|w| {
            let a = alpha_fn(w[0]);
            let rel = w[1] / w[0] - T::one();
            let abs = w[1] - w[0];
            base_s0 + a * base_s0 * rel + (T::one() - a) * abs
        })
        .collect();
    Ok(ScenarioSet {
        base: Base { s0: base_s0, v0: None },
        dates: series.dates()[1..].to_vec(),
        scenarios,
        mode: ScenarioMode::Standard,
        model: None,
    })
}

/// Rebuilds `S_1..S_N` from `S_0` via `S_k = S_{k-1} + v_{k-1}·γ(S_{k-1})·ΔW_k`.
pub fn reconstruct<T: Scalar>(start: T, innov: &InnovationSeries<T>, volpath: &VolPath<T>) -> Result<Vec<T>> {
    let mut out = Vec::with_capacity(innov.len() + 1);
    let mut s = start;
    out.push(s);
    for (dw, v) in innov.values.iter().zip(&volpath.values) {
        s = s + *v * eval_gamma(&innov.model.localvol, s)? * *dw;
        out.push(s);
    }
    Ok(out)
}
