//! Local volatility functions `γ(x; θ)` and stochastic volatility filters.
//!
//! The local part scales price increments by the level of the risk factor,
//! the stochastic part by a filtered conditional volatility path `v_k`. Both
//! are plain values; every function here is pure.
//!
//! Filter indexing: `returns[j]` is the filtered return of step `j + 1`
//! (`ΔS_{j+1} / γ(S_j)`) and the path holds `v_0..=v_N`, with
//!
//! ```text
//! v_{j+1}^2 = a0 + a1 * returns[j]^2 + b1 * v_j^2      (GARCH(1,1))
//! v_{j+1}^2 = (1 - λ) * returns[j]^2 + λ * v_j^2        (EWMA)
//! ```
//!
//! so `v_j` is the conditional volatility of `returns[j]` and `v_N` is the
//! volatility at the valuation date.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Local volatility function `γ(x; θ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum LocalVolSpec<T> {
    /// `γ(x) = σ`: arithmetic dynamics, absolute shifts.
    Constant { sigma: T },
    /// `γ(x) = σ·x`: geometric dynamics, relative shifts.
    Proportional { sigma: T },
    /// `γ(x) = ((1 - |α|)·x + α·β)·σ`: displaced mixture.
    Displaced { alpha: T, beta: T, sigma: T },
}

impl<T: Scalar> LocalVolSpec<T> {
    pub fn constant(sigma: T) -> Self {
        Self::Constant { sigma }
    }

    pub fn proportional(sigma: T) -> Self {
        Self::Proportional { sigma }
    }

    pub fn displaced(alpha: T, beta: T, sigma: T) -> Self {
        Self::Displaced { alpha, beta, sigma }
    }

    pub fn sigma(&self) -> T {
        match *self {
            Self::Constant { sigma } | Self::Proportional { sigma } | Self::Displaced { sigma, .. } => sigma,
        }
    }

    pub fn with_sigma(self, sigma: T) -> Self {
        match self {
            Self::Constant { .. } => Self::Constant { sigma },
            Self::Proportional { .. } => Self::Proportional { sigma },
            Self::Displaced { alpha, beta, .. } => Self::Displaced { alpha, beta, sigma },
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Self::Constant { .. } => "constant",
            Self::Proportional { .. } => "proportional",
            Self::Displaced { .. } => "displaced",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let sigma = self.sigma();
        if !(sigma.is_finite() && sigma > T::zero()) {
            return Err(Error::ConstraintViolation(format!("sigma must be positive, got {sigma}")));
        }
        if let Self::Displaced { alpha, beta, .. } = *self {
            if !(alpha >= -T::one() && alpha <= T::one()) {
                return Err(Error::ConstraintViolation(format!("alpha must lie in [-1, 1], got {alpha}")));
            }
            if !beta.is_finite() {
                return Err(Error::ConstraintViolation(format!("beta must be finite, got {beta}")));
            }
        }
        Ok(())
    }

    /// Unchecked `γ(x)`; may be non-positive.
    pub(crate) fn raw(&self, x: T) -> T {
        match *self {
            Self::Constant { sigma } => sigma,
            Self::Proportional { sigma } => sigma * x,
            Self::Displaced { alpha, beta, sigma } => ((T::one() - alpha.abs()) * x + alpha * beta) * sigma,
        }
    }

    /// Partial derivatives of `γ(x)` with respect to `(σ, α, β)`.
    ///
    /// At `α = 0` the derivative in `α` uses the right-hand limit.
    pub(crate) fn partials(&self, x: T) -> [T; 3] {
        let zero = T::zero();
        match *self {
            Self::Constant { .. } => [T::one(), zero, zero],
            Self::Proportional { .. } => [x, zero, zero],
            Self::Displaced { alpha, beta, sigma } => {
                let sign = if alpha < zero { -T::one() } else { T::one() };
                [(T::one() - alpha.abs()) * x + alpha * beta, (beta - sign * x) * sigma, alpha * sigma]
            }
        }
    }
}

/// Evaluates `γ(x; θ)`, failing when the model is ill-posed at `x`.
pub fn eval_gamma<T: Scalar>(spec: &LocalVolSpec<T>, x: T) -> Result<T> {
    let g = spec.raw(x);
    if g > T::zero() && g.is_finite() {
        Ok(g)
    } else {
        Err(Error::NonpositiveVolatility { x: x.as_f64(), index: None })
    }
}

/// State-dependent interpolation weight `x / (x + a)` with `a = α/(1 - |α|)·β`.
///
/// `α` is restricted to `[0, 1]`. At `α = 1` the displaced model has constant
/// volatility `β·σ` and the weight is the limit value `0` (pure absolute
/// shift); `β = 0` is then degenerate and rejected.
pub fn alpha_interp<T: Scalar>(x: T, alpha: T, beta: T) -> Result<T> {
    if !(alpha >= T::zero() && alpha <= T::one()) {
        return Err(Error::ConstraintViolation(format!("interpolation alpha must lie in [0, 1], got {alpha}")));
    }
    if alpha == T::one() {
        return if beta == T::zero() {
            Err(Error::ConstraintViolation("alpha = 1 with beta = 0 gives zero volatility".into()))
        } else {
            Ok(T::zero())
        };
    }
    let a = alpha / (T::one() - alpha.abs()) * beta;
    let denom = x + a;
    if denom == T::zero() {
        return Err(Error::DivisionByZero(x.as_f64()));
    }
    Ok(x / denom)
}

/// Interpolation weight that makes the hybrid absolute/relative shift from
/// `s_prev` reproduce the volatility-scaled move to base `s0`:
///
/// `α = s_prev / (s0 - s_prev) · (γ(s0)/γ(s_prev) - 1)`.
pub fn alpha_from_vol_ratio<T: Scalar>(s0: T, s_prev: T, spec: &LocalVolSpec<T>) -> Result<T> {
    if s0 == s_prev {
        return Err(Error::DegenerateBase);
    }
    let ratio = eval_gamma(spec, s0)? / eval_gamma(spec, s_prev)?;
    Ok(s_prev / (s0 - s_prev) * (ratio - T::one()))
}

/// Stochastic volatility filter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StochVolSpec<T> {
    None,
    Ewma { lambda: T },
    Garch { a0: T, a1: T, b1: T },
}

impl<T: Scalar> StochVolSpec<T> {
    pub fn ewma(lambda: T) -> Self {
        Self::Ewma { lambda }
    }

    pub fn garch(a0: T, a1: T, b1: T) -> Self {
        Self::Garch { a0, a1, b1 }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Self::None => "none",
            Self::Ewma { .. } => "ewma",
            Self::Garch { .. } => "garch",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::None => Ok(()),
            Self::Ewma { lambda } => {
                if lambda > T::zero() && lambda < T::one() {
                    Ok(())
                } else {
                    Err(Error::ConstraintViolation(format!("lambda must lie in (0, 1), got {lambda}")))
                }
            }
            Self::Garch { a0, a1, b1 } => {
                if !(a0.is_finite() && a0 > T::zero()) {
                    return Err(Error::ConstraintViolation(format!("a0 must be positive, got {a0}")));
                }
                if !(a1 >= T::zero() && b1 >= T::zero()) {
                    return Err(Error::ConstraintViolation(format!(
                        "a1 and b1 must be non-negative, got a1 = {a1}, b1 = {b1}"
                    )));
                }
                if !(a1 + b1 < T::one()) {
                    return Err(Error::ConstraintViolation(format!("a1 + b1 must be below 1, got {}", a1 + b1)));
                }
                Ok(())
            }
        }
    }

    /// Unconditional variance `a0 / (1 - a1 - b1)` of a GARCH filter.
    pub fn unconditional_variance(&self) -> Option<T> {
        match *self {
            Self::Garch { a0, a1, b1 } => Some(a0 / (T::one() - a1 - b1)),
            _ => None,
        }
    }
}

/// Rule fixing the starting volatility `v_0` of a filter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum InitRule<T> {
    /// Unconditional variance for GARCH, `SampleVariance { window: 20 }` for EWMA.
    Default,
    /// `a0 / (1 - a1 - b1)`; GARCH only.
    Unconditional,
    /// Mean of the first `min(window, N)` squared filtered returns.
    SampleVariance { window: usize },
    /// A given starting volatility (not variance).
    FixedVol { v0: T },
}

pub const DEFAULT_INIT_WINDOW: usize = 20;

impl<T: Scalar> InitRule<T> {
    /// Resolves the rule against a filter, never returning `Default`.
    pub fn resolve(self, spec: &StochVolSpec<T>) -> Self {
        match (self, spec) {
            (Self::Default, StochVolSpec::Garch { .. }) => Self::Unconditional,
            (Self::Default, _) => Self::SampleVariance { window: DEFAULT_INIT_WINDOW },
            (rule, _) => rule,
        }
    }

    /// Starting variance `v_0^2` for the given filter and filtered returns.
    pub fn initial_variance(self, spec: &StochVolSpec<T>, returns: &[T]) -> Result<T> {
        let h0 = match self.resolve(spec) {
            Self::Unconditional => spec.unconditional_variance().ok_or_else(|| {
                Error::InvalidConfig(format!(
                    "unconditional initialization needs a GARCH filter, got {}",
                    spec.kind_name()
                ))
            })?,
            Self::SampleVariance { window } => {
                let m = window.min(returns.len());
                if m == 0 {
                    return Err(Error::InsufficientLength { needed: 0, got: 0 });
                }
                returns[..m].iter().map(|r| *r * *r).sum::<T>() / T::from_usize_lossy(m)
            }
            Self::FixedVol { v0 } => {
                if !(v0 > T::zero() && v0.is_finite()) {
                    return Err(Error::ConstraintViolation(format!("initial volatility must be positive, got {v0}")));
                }
                v0 * v0
            }
            Self::Default => unreachable!("resolved above"),
        };
        if h0 > T::zero() && h0.is_finite() {
            Ok(h0)
        } else {
            Err(Error::ZeroVariance)
        }
    }
}

/// Conditional volatility trajectory `v_0..=v_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct VolPath<T> {
    pub values: Vec<T>,
    pub spec: StochVolSpec<T>,
}

impl<T: Scalar> VolPath<T> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Volatility at the valuation date.
    pub fn last(&self) -> T {
        *self.values.last().expect("volatility path is never empty")
    }

    /// Same path with every volatility multiplied by `c`.
    pub fn scaled(&self, c: T) -> Self {
        Self { values: self.values.iter().map(|v| *v * c).collect(), spec: self.spec }
    }
}

/// Runs the filter over `returns`, producing `returns.len() + 1` volatilities.
///
/// With `StochVolSpec::None` the path is identically one.
pub fn filter_vol<T: Scalar>(spec: &StochVolSpec<T>, returns: &[T], init: InitRule<T>) -> Result<VolPath<T>> {
    spec.validate()?;
    if returns.is_empty() {
        return Err(Error::InsufficientLength { needed: 0, got: 0 });
    }
    let values = match *spec {
        StochVolSpec::None => vec![T::one(); returns.len() + 1],
        StochVolSpec::Ewma { lambda } => {
            let h0 = init.initial_variance(spec, returns)?;
            variance_recursion(h0, returns, |h, r| (T::one() - lambda) * r * r + lambda * h)
        }
        StochVolSpec::Garch { a0, a1, b1 } => {
            let h0 = init.initial_variance(spec, returns)?;
            variance_recursion(h0, returns, |h, r| a0 + a1 * r * r + b1 * h)
        }
    };
    Ok(VolPath { values, spec: *spec })
}

fn variance_recursion<T: Scalar>(h0: T, returns: &[T], step: impl Fn(T, T) -> T) -> Vec<T> {
    let mut out = Vec::with_capacity(returns.len() + 1);
    let mut h = h0;
    out.push(h.sqrt());
    for &r in returns {
        h = step(h, r);
        out.push(h.sqrt());
    }
    out
}

/// Local and stochastic volatility pair describing one model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec<T> {
    pub localvol: LocalVolSpec<T>,
    pub stochvol: StochVolSpec<T>,
}

impl<T: Scalar> ModelSpec<T> {
    pub fn new(localvol: LocalVolSpec<T>, stochvol: StochVolSpec<T>) -> Self {
        Self { localvol, stochvol }
    }

    pub fn local(localvol: LocalVolSpec<T>) -> Self {
        Self::new(localvol, StochVolSpec::None)
    }

    pub fn validate(&self) -> Result<()> {
        self.localvol.validate()?;
        self.stochvol.validate()
    }

    /// Key-value config block (`localvol.kind`, `localvol.sigma`, ...,
    /// `stochvol.kind`, `stochvol.lambda`, `stochvol.a0`, ...).
    pub fn to_config_string(&self) -> String {
        toml::to_string(self).expect("model spec serializes to TOML")
    }

    /// Parses a config block. Accepts both dotted keys and `[localvol]` tables.
    pub fn from_config_str(s: &str) -> Result<Self> {
        let spec: Self = toml::from_str(s).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn gamma_examples() {
        assert_eq!(eval_gamma(&LocalVolSpec::constant(2.0), -7.0).unwrap(), 2.0);
        assert_eq!(eval_gamma(&LocalVolSpec::proportional(0.3), 100.0).unwrap(), 0.3 * 100.0);
        assert_eq!(eval_gamma(&LocalVolSpec::displaced(0.0, 5.0, 2.0), 10.0).unwrap(), 20.0);
    }

    #[test]
    fn gamma_rejects_nonpositive() {
        assert!(matches!(eval_gamma(&LocalVolSpec::proportional(1.0), -1.0), Err(Error::NonpositiveVolatility { .. })));
        assert!(matches!(eval_gamma(&LocalVolSpec::proportional(1.0), 0.0), Err(Error::NonpositiveVolatility { .. })));
        // (1 - 0.5)·x + 0.5·(-4) = 0 at x = 4
        assert!(eval_gamma(&LocalVolSpec::displaced(0.5, -4.0, 1.0), 4.0).is_err());
        assert!(eval_gamma(&LocalVolSpec::displaced(0.5, -4.0, 1.0), 4.5).is_ok());
        // negative alpha branch
        let g: f64 = eval_gamma(&LocalVolSpec::displaced(-0.5, 2.0, 1.0), 10.0).unwrap();
        assert!((g - 4.0).abs() < 1e-15);
    }

    #[test]
    fn spec_validation() {
        assert!(LocalVolSpec::constant(0.0).validate().is_err());
        assert!(LocalVolSpec::displaced(1.5, 0.0, 1.0).validate().is_err());
        assert!(StochVolSpec::ewma(1.0).validate().is_err());
        assert!(StochVolSpec::ewma(0.0).validate().is_err());
        assert!(StochVolSpec::garch(1.0, 0.5, 0.5).validate().is_err());
        assert!(StochVolSpec::garch(0.0, 0.1, 0.5).validate().is_err());
        assert!(StochVolSpec::garch(1.0, -0.1, 0.5).validate().is_err());
        assert!(StochVolSpec::garch(1.0, 0.1, 0.8).validate().is_ok());
    }

    #[test]
    fn alpha_interp_examples() {
        assert_eq!(alpha_interp(7.0, 0.0, 123.0).unwrap(), 1.0);
        assert_eq!(alpha_interp(2.0, 0.5, 2.0).unwrap(), 0.5);
        // a = (0.9 / 0.1)·1 = 9 by hand
        let got: f64 = alpha_interp(10.0, 0.9, 1.0).unwrap();
        assert!((got - 10.0 / 19.0).abs() < 1e-14, "{got}");
        assert_eq!(alpha_interp(3.0, 1.0, 2.0).unwrap(), 0.0);
        assert!(alpha_interp(3.0, 1.0, 0.0).is_err());
        assert!(alpha_interp(3.0, -0.2, 1.0).is_err());
        assert!(matches!(alpha_interp(-2.0, 0.5, 2.0), Err(Error::DivisionByZero(_))));
    }

    #[test]
    fn alpha_from_ratio_examples() {
        let prop = LocalVolSpec::proportional(0.7f64);
        assert!((alpha_from_vol_ratio(10.0, 5.0, &prop).unwrap() - 1.0).abs() < 1e-15);
        let cons = LocalVolSpec::constant(0.7);
        assert_eq!(alpha_from_vol_ratio(10.0, 5.0, &cons).unwrap(), 0.0);
        assert_eq!(alpha_from_vol_ratio(5.0, 5.0, &cons), Err(Error::DegenerateBase));

        // displaced: hybrid shift with the implied weight equals the scaled move
        let disp = LocalVolSpec::displaced(0.5f64, 2.0, 1.0);
        let (s0, prev, next) = (10.0, 5.0, 5.5);
        let w = alpha_from_vol_ratio(s0, prev, &disp).unwrap();
        assert!(w > 0.0 && w < 1.0);
        let hybrid = s0 + w * s0 * (next / prev - 1.0) + (1.0 - w) * (next - prev);
        let scaled = s0 + (0.5 * s0 + 1.0) / (0.5 * prev + 1.0) * (next - prev);
        assert!((hybrid - scaled).abs() < 1e-12);
        // agrees with the state-dependent interpolation function
        assert!((w - alpha_interp(prev, 0.5, 2.0).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn garch_constant_path() {
        let p = filter_vol(&StochVolSpec::garch(4.0, 0.0, 0.0), &[0.3, -1.0, 7.0], InitRule::Default).unwrap();
        assert_eq!(p.values, vec![2.0; 4]);
    }

    #[test]
    fn ewma_tiny_lambda_tracks_last_square() {
        let p = filter_vol(&StochVolSpec::ewma(1e-9f64), &[3.0, 0.5], InitRule::Default).unwrap();
        assert!((p.values[1] * p.values[1] - 9.0).abs() < 1e-6);
        assert_eq!(p.len(), 3);
    }

    #[test]
    fn none_is_all_ones() {
        let p = filter_vol(&StochVolSpec::None, &[1.0, 2.0], InitRule::Default).unwrap();
        assert_eq!(p.values, vec![1.0; 3]);
    }

    #[test]
    fn init_rules() {
        let r = [1.0, 3.0];
        let ewma = StochVolSpec::ewma(0.5);
        assert_eq!(InitRule::Default.initial_variance(&ewma, &r).unwrap(), 5.0);
        assert_eq!(InitRule::SampleVariance { window: 1 }.initial_variance(&ewma, &r).unwrap(), 1.0);
        assert_eq!(InitRule::FixedVol { v0: 2.0 }.initial_variance(&ewma, &r).unwrap(), 4.0);
        assert!(matches!(InitRule::Unconditional.initial_variance(&ewma, &r), Err(Error::InvalidConfig(_))));
        let g = StochVolSpec::garch(0.1f64, 0.2, 0.3);
        assert!((InitRule::Default.initial_variance(&g, &r).unwrap() - 0.2).abs() < 1e-15);
        assert_eq!(InitRule::Default.initial_variance(&ewma, &[0.0, 0.0]), Err(Error::ZeroVariance));
    }

    #[test]
    fn flat_returns_decay_geometrically() {
        let p = filter_vol(&StochVolSpec::ewma(0.81), &[0.0; 3], InitRule::FixedVol { v0: 1.0 }).unwrap();
        for (k, v) in p.values.iter().enumerate() {
            assert!((v - 0.9f64.powi(k as i32)).abs() < 1e-15);
        }
    }

    #[test]
    fn config_round_trip_and_dotted_keys() {
        let spec = ModelSpec::new(LocalVolSpec::displaced(0.3, 2.0, 0.5), StochVolSpec::garch(1e-6, 0.08, 0.9));
        let text = spec.to_config_string();
        assert_eq!(ModelSpec::<f64>::from_config_str(&text).unwrap(), spec);

        let dotted =
            "localvol.kind = \"proportional\"\nlocalvol.sigma = 2\nstochvol.kind = \"ewma\"\nstochvol.lambda = 0.94\n";
        let parsed = ModelSpec::<f64>::from_config_str(dotted).unwrap();
        assert_eq!(parsed, ModelSpec::new(LocalVolSpec::proportional(2.0), StochVolSpec::ewma(0.94)));

        let bad = "localvol.kind = \"constant\"\nlocalvol.sigma = -1\nstochvol.kind = \"none\"\n";
        assert!(ModelSpec::<f64>::from_config_str(bad).is_err());
    }

    /// Truncated geometric sum plus the decayed starting variance.
    fn ewma_closed_form(lambda: f64, h0: f64, r: &[f64], k: usize) -> f64 {
        let tail: f64 = (1..=k).map(|i| lambda.powi(i as i32 - 1) * r[k - i] * r[k - i]).sum();
        (1.0 - lambda) * tail + lambda.powi(k as i32) * h0
    }

    #[test]
    fn ewma_matches_closed_form() {
        let r: Vec<f64> = (0..50).map(|i| ((i * 37 % 11) as f64 - 5.0) * 0.01).collect();
        let p = filter_vol(&StochVolSpec::ewma(0.94), &r, InitRule::Default).unwrap();
        let h0 = p.values[0] * p.values[0];
        for k in 0..=r.len() {
            let want = ewma_closed_form(0.94, h0, &r, k);
            let got = p.values[k] * p.values[k];
            assert!(((got - want) / want).abs() < 1e-10, "k={k}");
        }
    }

    proptest! {
        #[test]
        fn sigma_cancels_in_gamma_ratio(sigma in 1e-3f64..10.0, c in 1e-3f64..1e3, x in 0.1f64..100.0, y in 0.1f64..100.0) {
            for spec in [LocalVolSpec::constant(sigma), LocalVolSpec::proportional(sigma), LocalVolSpec::displaced(0.4, 3.0, sigma)] {
                let base = eval_gamma(&spec, x).unwrap() / eval_gamma(&spec, y).unwrap();
                let scaled_spec = spec.with_sigma(sigma * c);
                let scaled = eval_gamma(&scaled_spec, x).unwrap() / eval_gamma(&scaled_spec, y).unwrap();
                prop_assert!((base - scaled).abs() <= 1e-12 * base.abs());
            }
        }

        #[test]
        fn displaced_boundaries(beta in -5.0f64..5.0, sigma in 0.1f64..3.0, x in 0.1f64..100.0, y in 0.1f64..100.0) {
            // alpha = 0 behaves like the proportional model
            let d = LocalVolSpec::displaced(0.0, beta, sigma);
            let p = LocalVolSpec::proportional(sigma);
            let rd = eval_gamma(&d, x).unwrap() / eval_gamma(&d, y).unwrap();
            let rp = eval_gamma(&p, x).unwrap() / eval_gamma(&p, y).unwrap();
            prop_assert!((rd - rp).abs() <= 1e-12 * rp);
            // alpha = 1 with positive beta has a constant volatility
            let d1 = LocalVolSpec::displaced(1.0, beta.abs() + 0.1, sigma);
            prop_assert_eq!(eval_gamma(&d1, x).unwrap() / eval_gamma(&d1, y).unwrap(), 1.0);
        }

        #[test]
        fn garch_variance_stays_bounded(
            a0 in 1e-4f64..1.0, a1 in 0.0f64..0.5, b1 in 0.0f64..0.49,
            r in prop::collection::vec(-5.0f64..5.0, 1..200)
        ) {
            let spec = StochVolSpec::garch(a0, a1, b1);
            let path = filter_vol(&spec, &r, InitRule::Default).unwrap();
            let max_r2 = r.iter().fold(0.0f64, |m, x| m.max(x * x));
            let upper = a0 / (1.0 - a1 - b1) + a1 * max_r2 / (1.0 - b1);
            for v in &path.values {
                let h = v * v;
                prop_assert!(h >= a0 * (1.0 - 1e-12));
                prop_assert!(h <= upper * (1.0 + 1e-12));
            }
        }
    }
}
