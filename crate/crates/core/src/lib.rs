//! Volatility-scaled historical simulation.
//!
//! Historical price moves are turned into innovation increments under an
//! explicit model `ΔS_k = v_{k-1}·γ(S_{k-1})·ΔW_k`, replayed from today's
//! state to build one-step scenarios, and reduced to VaR and stressed VaR.
//! The choice of local volatility `γ` recovers the classic shift rules:
//! constant `γ` gives absolute shifts, proportional `γ` relative shifts, a
//! displaced `γ` the hybrid rule, and a GARCH/EWMA filter on top of
//! proportional `γ` filtered historical simulation. The extracted
//! innovations can be tested for serial dependence and heteroskedasticity
//! to check whether the model is adequate.
//!
//! All numerics are generic over [`Scalar`] (`f32`, `f64`); the aliases
//! below fix the common `f64` instantiation.
//!
//! ```
//! use hsvar::{extract, simulate, var, Base, InitRule, LocalVolSpec, ModelSpec, PriceSeries, StochVolSpec};
//!
//! let csv = "date,value\n2024-01-02,100\n2024-01-03,101\n2024-01-04,99.5\n2024-01-05,100.2\n";
//! let series: PriceSeries = hsvar::ingest_csv(csv.as_bytes(), "spot").unwrap();
//! let model = ModelSpec::new(LocalVolSpec::proportional(1.0), StochVolSpec::ewma(0.94));
//! let (innov, path) = extract(&series, &model, InitRule::Default).unwrap();
//! let scen = simulate(&innov, &path, &series, Base::from_history(&series, &path)).unwrap();
//! let report = var(&scen, 0.9).unwrap();
//! assert!(report.var_value > 0.0);
//! ```

// `!(x > 0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diagnostics;
pub mod error;
pub mod estimation;
pub mod innovations;
pub mod optim;
pub mod risk;
pub mod scalar;
pub mod stats;
pub mod timeseries;
pub mod volatility;

pub use diagnostics::{arch_lm, diagnose, ljung_box, DiagnosticsReport, TestName, TestResult, Verdict};
pub use error::{Error, Result};
pub use estimation::{fit_qmle, qmle_gradient, qmle_objective, Conditioning, OptimOptions, Param, ParamMask};
pub use innovations::{extract, hybrid_shift, simulate, simulate_stressed, Base, ScenarioMode};
pub use risk::{kupiec_backtest, pnl, stressed_var, var, BacktestReport, QuantileRule};
pub use scalar::Scalar;
pub use timeseries::{absolute_shifts, ingest_csv, relative_shifts, ShiftKind};
pub use volatility::{alpha_from_vol_ratio, alpha_interp, eval_gamma, filter_vol, InitRule};

pub type PriceSeries<T = f64> = timeseries::PriceSeries<T>;
pub type ShiftSeries<T = f64> = timeseries::ShiftSeries<T>;
pub type LocalVolSpec<T = f64> = volatility::LocalVolSpec<T>;
pub type StochVolSpec<T = f64> = volatility::StochVolSpec<T>;
pub type ModelSpec<T = f64> = volatility::ModelSpec<T>;
pub type VolPath<T = f64> = volatility::VolPath<T>;
pub type InnovationSeries<T = f64> = innovations::InnovationSeries<T>;
pub type ScenarioSet<T = f64> = innovations::ScenarioSet<T>;
pub type VaRReport<T = f64> = risk::VaRReport<T>;
pub type QmleFit<T = f64> = estimation::QmleFit<T>;

pub type PriceSeries32 = timeseries::PriceSeries<f32>;
pub type ModelSpec32 = volatility::ModelSpec<f32>;
