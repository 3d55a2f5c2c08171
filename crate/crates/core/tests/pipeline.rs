mod common;

use common::sim::{self, Filter};
use hsvar::{
    absolute_shifts, extract, fit_qmle, ingest_csv, simulate, stressed_var, var, Base, InitRule, LocalVolSpec,
    ModelSpec, OptimOptions, Param, ParamMask, PriceSeries, StochVolSpec,
};
use proptest::prelude::*;

fn series(values: &[f64]) -> PriceSeries {
    PriceSeries::new("test", sim::dates(values.len()).into_iter().zip(values.iter().copied()).collect()).unwrap()
}

#[test]
fn csv_to_var_pipeline() {
    let path = sim::simulate(5, 499, 100.0, |x| x, Filter::Garch { a0: 2e-6, a1: 0.1, b1: 0.85 });
    let s: PriceSeries = ingest_csv(sim::to_csv(&path.prices).as_bytes(), "fixture").unwrap();
    assert_eq!(s.len(), 500);
    let model = ModelSpec::new(LocalVolSpec::proportional(1.0), StochVolSpec::garch(2e-6, 0.1, 0.85));
    let (w, p) = extract(&s, &model, InitRule::Default).unwrap();
    assert_eq!(w.len(), 499);
    assert_eq!(p.len(), 500);
    let sc = simulate(&w, &p, &s, Base::from_history(&s, &p)).unwrap();
    let report = var(&sc, 0.99).unwrap();
    assert!(report.var_value > 0.0);
    assert_eq!(report.n_scenarios, 499);
}

#[test]
fn ewma_lambda_recovery() {
    let lambda = 0.94;
    let template = ModelSpec::new(LocalVolSpec::proportional(1.0), StochVolSpec::ewma(0.8));
    let mut hits = 0;
    for seed in 0..10 {
        let path = sim::simulate(3000 + seed, 4999, 100.0, |x| x, Filter::Ewma { lambda, h0: 1e-4 });
        let s = series(&path.prices);
        let fit = fit_qmle(&s, &template, ParamMask::of(&[Param::Lambda]), InitRule::Default, &OptimOptions::default())
            .unwrap();
        assert!(fit.converged, "seed {seed}: {:?}", fit.message);
        if (Param::Lambda.get(&fit.params).unwrap() - lambda).abs() <= 0.03 {
            hits += 1;
        }
    }
    assert!(hits >= 9, "{hits}/10");
}

#[test]
fn stressed_var_orders_windows_by_volatility() {
    // calm first half, turbulent second half
    let z = sim::normals(8, 500);
    let mut prices = vec![100.0];
    for (i, zi) in z.iter().enumerate() {
        let vol = if i < 250 { 0.005 } else { 0.03 };
        prices.push(prices.last().unwrap() * (1.0 + vol * zi));
    }
    let s = series(&prices);
    let d = s.dates().to_vec();
    let lv = LocalVolSpec::proportional(1.0);
    let calm = stressed_var(&s, &lv, (d[0], d[250]), 100.0, 0.99).unwrap();
    let wild = stressed_var(&s, &lv, (d[250], d[500]), 100.0, 0.99).unwrap();
    assert!(wild.var_value > 3.0 * calm.var_value);
}

#[test]
fn stressed_var_full_window_matches_absolute_shift_var() {
    let s = series(&sim::positive_path(9, 300));
    let d = s.dates();
    let got = stressed_var(&s, &LocalVolSpec::constant(2.0), (d[0], d[d.len() - 1]), s.last(), 0.95).unwrap();
    let mut pnl: Vec<f64> = absolute_shifts(&s).values;
    pnl.sort_by(f64::total_cmp);
    // ⌈0.05·299⌉ = 15th smallest
    assert!((got.var_value + pnl[14]).abs() < 1e-12);
}

#[test]
fn single_precision_pipeline() {
    let prices: Vec<f32> = sim::positive_path(12, 200).into_iter().map(|x| x as f32).collect();
    let s: hsvar::PriceSeries32 =
        PriceSeries::new("f32", sim::dates(prices.len()).into_iter().zip(prices).collect()).unwrap();
    let model: hsvar::ModelSpec32 = ModelSpec::new(LocalVolSpec::proportional(1.0), StochVolSpec::ewma(0.94));
    let (w, p) = extract(&s, &model, InitRule::Default).unwrap();
    let sc = simulate(&w, &p, &s, Base::from_history(&s, &p)).unwrap();
    let v = var(&sc, 0.99).unwrap().var_value;
    assert!(v.is_finite() && v > 0.0);
}

#[test]
fn window_outside_history_is_rejected() {
    let s = series(&sim::positive_path(1, 50));
    let d = s.dates();
    let err = stressed_var(&s, &LocalVolSpec::constant(1.0), (d[49], d[49]), 1.0, 0.99).unwrap_err();
    assert_eq!(err.kind(), "WindowTooShort");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn csv_round_trip_preserves_series(seed in 0u64..10_000, len in 2usize..80) {
        let s = series(&sim::positive_path(seed, len));
        let back: PriceSeries = ingest_csv(s.to_csv_string().as_bytes(), "test").unwrap();
        prop_assert_eq!(back.values(), s.values());
        prop_assert_eq!(back.dates(), s.dates());
    }

    #[test]
    fn price_scale_leaves_relative_var_proportional(seed in 0u64..10_000, c in 0.1f64..50.0) {
        let s = series(&sim::positive_path(seed, 120));
        let scaled = series(&s.values().iter().map(|x| c * x).collect::<Vec<_>>());
        let model = ModelSpec::new(LocalVolSpec::proportional(1.0), StochVolSpec::ewma(0.9));
        let run = |s: &PriceSeries| {
            let (w, p) = extract(s, &model, InitRule::Default).unwrap();
            var(&simulate(&w, &p, s, Base::from_history(s, &p)).unwrap(), 0.95).unwrap().var_value
        };
        let (a, b) = (run(&s), run(&scaled));
        prop_assert!((b - c * a).abs() <= 1e-10 * (c * a).abs());
    }
}
