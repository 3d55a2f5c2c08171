//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the test fails if any criterion fails.

mod common;

use std::io::Write;

use common::sim::{self, Filter};
use hsvar::estimation::qmle_gradient;
use hsvar::innovations::reconstruct;
use hsvar::risk::empirical_quantile;
use hsvar::{
    absolute_shifts, alpha_from_vol_ratio, arch_lm, extract, filter_vol, fit_qmle, hybrid_shift, kupiec_backtest,
    ljung_box, qmle_objective, relative_shifts, simulate, simulate_stressed, var, Base, Conditioning, InitRule,
    LocalVolSpec, ModelSpec, OptimOptions, Param, ParamMask, PriceSeries, QuantileRule, ScenarioMode, ScenarioSet,
    StochVolSpec,
};
use statrs::distribution::{Binomial, DiscreteCDF};

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn series(values: &[f64]) -> PriceSeries {
    PriceSeries::new("acceptance", sim::dates(values.len()).into_iter().zip(values.iter().copied()).collect()).unwrap()
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Largest relative deviation between two equally long sequences.
fn max_rel(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| rel_err(*x, *y)).fold(0.0, f64::max)
}

fn standard(series: &PriceSeries, model: ModelSpec) -> ScenarioSet {
    let (w, p) = extract(series, &model, InitRule::Default).unwrap();
    simulate(&w, &p, series, Base::from_history(series, &p)).unwrap()
}

/// Exact two-sided 99% acceptance band for a Binomial(n, p) count.
fn binomial_band(n: u64, p: f64) -> (u64, u64) {
    let dist = Binomial::new(p, n).unwrap();
    let lo = (0..=n).find(|&k| dist.cdf(k) > 0.005).unwrap();
    let hi = (0..=n).find(|&k| 1.0 - dist.cdf(k) <= 0.005).unwrap();
    (lo, hi)
}

fn c1_shift_rules() -> Outcome {
    let mut worst: f64 = 0.0;
    for seed in 0..100 {
        let s = series(&sim::positive_path(seed, 250));
        let s0 = s.last();
        let abs = absolute_shifts(&s);
        let rel = relative_shifts(&s, s.default_eps()).unwrap();
        let want_abs: Vec<f64> = abs.values.iter().map(|r| s0 + r).collect();
        let want_rel: Vec<f64> = rel.values.iter().map(|r| s0 * (1.0 + r)).collect();
        let sigma = 0.1 + seed as f64 * 0.05;
        let got_abs = standard(&s, ModelSpec::local(LocalVolSpec::constant(sigma)));
        let got_rel = standard(&s, ModelSpec::local(LocalVolSpec::proportional(sigma)));
        worst = worst.max(max_rel(&got_abs.scenarios, &want_abs));
        worst = worst.max(max_rel(&got_rel.scenarios, &want_rel));
    }
    outcome(worst <= 1e-12, format!("max relative deviation {worst:.3e} (tol 1e-12)"))
}

fn spec_grid() -> Vec<ModelSpec> {
    let locals = [
        LocalVolSpec::constant(0.7),
        LocalVolSpec::proportional(0.2),
        LocalVolSpec::displaced(0.0, 80.0, 0.3),
        LocalVolSpec::displaced(0.3, 80.0, 0.3),
        LocalVolSpec::displaced(0.7, 80.0, 0.3),
        LocalVolSpec::displaced(1.0, 80.0, 0.3),
    ];
    let mut out = Vec::new();
    for lv in locals {
        out.push(ModelSpec::local(lv));
        out.push(ModelSpec::new(lv, StochVolSpec::garch(1e-5, 0.08, 0.9)));
    }
    out
}

fn c2_historical_consistency() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut checks = 0;
    for seed in 0..4 {
        let s = series(&sim::positive_path(100 + seed, 120));
        for model in spec_grid() {
            let (w, p) = extract(&s, &model, InitRule::Default).unwrap();
            for k in 1..s.len() {
                let base = Base::new(s.values()[k - 1], p.values[k - 1]);
                let sc = simulate(&w, &p, &s, base).unwrap();
                worst = worst.max(rel_err(sc.scenarios[k - 1], s.values()[k]));
                checks += 1;
            }
        }
    }
    outcome(worst <= 1e-12, format!("{checks} one-step replays, max relative deviation {worst:.3e} (tol 1e-12)"))
}

fn c3_displaced_identity() -> Outcome {
    let mut worst: f64 = 0.0;
    for seed in 0..50 {
        let s = series(&sim::positive_path(200 + seed, 250));
        let s0 = s.last() * 1.013;
        let alpha = 0.05 + 0.9 * (seed as f64 / 50.0);
        let beta = 10.0 + 3.0 * seed as f64;
        let lv = LocalVolSpec::displaced(alpha, beta, 0.25);
        let hybrid = hybrid_shift(&s, s0, |x| alpha_from_vol_ratio(s0, x, &lv).unwrap()).unwrap();
        let (w, p) = extract(&s, &ModelSpec::local(lv), InitRule::Default).unwrap();
        let scaled = simulate(&w, &p, &s, Base::new(s0, 1.0)).unwrap();
        worst = worst.max(max_rel(&hybrid.scenarios, &scaled.scenarios));
    }
    outcome(worst <= 1e-12, format!("max relative deviation {worst:.3e} (tol 1e-12)"))
}

fn c4_fhs() -> Outcome {
    let (a0, a1, b1) = (2e-6, 0.09, 0.89);
    let mut worst: f64 = 0.0;
    for seed in 0..20 {
        let s = series(&sim::positive_path(300 + seed, 250));
        let sc = standard(&s, ModelSpec::new(LocalVolSpec::proportional(1.0), StochVolSpec::garch(a0, a1, b1)));
        // independent filter on relative returns
        let rel: Vec<f64> = s.values().windows(2).map(|w| w[1] / w[0] - 1.0).collect();
        let mut h = a0 / (1.0 - a1 - b1);
        let mut vols = vec![h.sqrt()];
        for r in &rel {
            h = a0 + a1 * r * r + b1 * h;
            vols.push(h.sqrt());
        }
        let v0 = *vols.last().unwrap();
        let s0 = s.last();
        let want: Vec<f64> = rel.iter().zip(&vols).map(|(r, v)| s0 + s0 * (v0 / v) * r).collect();
        worst = worst.max(max_rel(&sc.scenarios, &want));
    }
    outcome(worst <= 1e-12, format!("max relative deviation {worst:.3e} (tol 1e-12)"))
}

fn c5_stressed_reduction() -> Outcome {
    let mut identical = true;
    let mut count = 0;
    for seed in 0..10 {
        let s = series(&sim::positive_path(400 + seed, 200));
        let s0 = s.last() * 0.97;
        for model in spec_grid() {
            let (w, _) = extract(&s, &model, InitRule::Default).unwrap();
            let stressed = simulate_stressed(&w, &s, &model.localvol, s0).unwrap();
            let (w0, p0) = extract(&s, &ModelSpec::local(model.localvol), InitRule::Default).unwrap();
            let plain = simulate(&w0, &p0, &s, Base::new(s0, 1.0)).unwrap();
            identical &= stressed.scenarios == plain.scenarios && stressed.mode == ScenarioMode::Stressed;
            count += 1;
        }
    }
    outcome(identical, format!("{count} model/path pairs compared for exact equality"))
}

fn c6_scale_invariance() -> Outcome {
    let mut worst: f64 = 0.0;
    for seed in 0..20 {
        let s = series(&sim::positive_path(500 + seed, 250));
        for (lv, lv10) in [
            (LocalVolSpec::constant(0.5), LocalVolSpec::constant(5.0)),
            (LocalVolSpec::proportional(0.5), LocalVolSpec::proportional(5.0)),
            (LocalVolSpec::displaced(0.4, 60.0, 0.5), LocalVolSpec::displaced(0.4, 60.0, 5.0)),
        ] {
            let sv = StochVolSpec::garch(3e-6, 0.1, 0.85);
            let (w, p) = extract(&s, &ModelSpec::new(lv, sv), InitRule::Default).unwrap();
            let base = simulate(&w, &p, &s, Base::from_history(&s, &p)).unwrap();
            let (w10, _) = extract(&s, &ModelSpec::new(lv10, sv), InitRule::Default).unwrap();
            let p3 = p.scaled(3.0);
            let scaled = simulate(&w10, &p3, &s, Base::new(s.last(), 3.0 * p.last())).unwrap();
            worst = worst.max(max_rel(&scaled.scenarios, &base.scenarios));
            // without a filter the σ change alone must cancel after re-extraction
            let a = standard(&s, ModelSpec::local(lv));
            let b = standard(&s, ModelSpec::local(lv10));
            worst = worst.max(max_rel(&a.scenarios, &b.scenarios));
        }
    }
    outcome(worst <= 1e-12, format!("max relative deviation {worst:.3e} (tol 1e-12)"))
}

fn c7_ewma_closed_form() -> Outcome {
    let lambda: f64 = 0.94;
    let r = sim::normals(77, 1000).iter().map(|z| 0.01 * z).collect::<Vec<_>>();
    let path = filter_vol(&StochVolSpec::ewma(lambda), &r, InitRule::Default).unwrap();
    let h0 = path.values[0] * path.values[0];
    let mut worst: f64 = 0.0;
    for k in 0..=r.len() {
        let tail: f64 = (1..=k).map(|i| lambda.powi(i as i32 - 1) * r[k - i] * r[k - i]).sum();
        let closed = (1.0 - lambda) * tail + lambda.powi(k as i32) * h0;
        let rec = path.values[k] * path.values[k];
        worst = worst.max(rel_err(rec, closed));
    }
    outcome(worst <= 1e-10, format!("1000 steps, max relative deviation {worst:.3e} (tol 1e-10)"))
}

fn c8_qmle_recovery() -> Outcome {
    let (a0, a1, b1) = (1e-6, 0.08, 0.90);
    let template = ModelSpec::new(LocalVolSpec::proportional(1.0), StochVolSpec::garch(a0, a1, b1));
    let mask = ParamMask::of(&[Param::A0, Param::A1, Param::B1]);
    let mut hits = 0;
    let mut worst = (0.0f64, 0.0f64);
    for seed in 0..20 {
        let path = sim::simulate(1000 + seed, 4999, 100.0, |x| x, Filter::Garch { a0, a1, b1 });
        let s = series(&path.prices);
        let fit = fit_qmle(&s, &template, mask, InitRule::Default, &OptimOptions::default()).unwrap();
        let (ha1, hb1) = (Param::A1.get(&fit.params).unwrap(), Param::B1.get(&fit.params).unwrap());
        let (ea1, eb1) = ((ha1 - a1).abs(), (hb1 - b1).abs());
        worst = (worst.0.max(ea1), worst.1.max(eb1));
        if ea1 <= 0.04 && eb1 <= 0.04 {
            hits += 1;
        }
    }

    let path = sim::simulate(2024, 999, 100.0, |_| 1.0, Filter::None);
    let s = series(&path.prices);
    let mean_sq = s.values().windows(2).map(|w| (w[1] - w[0]).powi(2)).sum::<f64>() / (s.len() - 1) as f64;
    let t = ModelSpec::new(LocalVolSpec::constant(0.3), StochVolSpec::garch(1.0, 0.0, 0.0));
    let fit = fit_qmle(&s, &t, ParamMask::of(&[Param::Sigma]), InitRule::Default, &OptimOptions::default()).unwrap();
    let closed = rel_err(fit.params.localvol.sigma().powi(2), mean_sq);

    outcome(
        hits >= 18 && closed <= 1e-6,
        format!(
            "{hits}/20 seeds within ±0.04 (worst |Δa1| {:.4}, |Δb1| {:.4}); closed-form sigma^2 rel err {closed:.2e} (tol 1e-6)",
            worst.0, worst.1
        ),
    )
}

fn c9_gradient() -> Outcome {
    let path = sim::simulate(31, 999, 100.0, |x| 0.01 * x, Filter::Garch { a0: 0.5, a1: 0.1, b1: 0.8 });
    let s = series(&path.prices);
    let mut rng_vals = sim::normals(99, 80).into_iter().map(|z| 0.5 + 0.5 * (z / 3.0).tanh());
    let mut u = move || rng_vals.next().unwrap();
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let a1 = 0.02 + 0.25 * u();
        let b1 = (0.3 + 0.6 * u()).min(0.97 - a1);
        let m = ModelSpec::new(
            LocalVolSpec::displaced(0.1 + 0.8 * u(), 20.0 + 80.0 * u(), 0.005 + 0.02 * u()),
            StochVolSpec::garch(0.05 + 2.0 * u(), a1, b1),
        );
        let (_, g) = qmle_gradient(&s, &m, InitRule::Default, Conditioning::UseInitial).unwrap();
        for p in Param::ALL.into_iter().filter(|p| p.applies_to(&m)) {
            let x = p.get(&m).unwrap();
            let h = 1e-6 * x.abs();
            let f = |v| qmle_objective(&s, &p.set(&m, v), InitRule::Default, Conditioning::UseInitial).unwrap();
            let fd = (f(x + h) - f(x - h)) / (2.0 * h);
            let gi = g[p.index()];
            worst = worst.max((fd - gi).abs() / gi.abs().max(1.0));
        }
    }
    outcome(worst <= 1e-5, format!("10 points x 6 parameters, max relative deviation {worst:.3e} (tol 1e-5)"))
}

fn c10_diagnostics() -> Outcome {
    let (lo500, hi500) = binomial_band(500, 0.05);
    let lb_rejections = (0..500u64)
        .filter(|seed| ljung_box(&sim::normals(10_000 + seed, 1000), 10).unwrap().p_value < 0.05)
        .count() as u64;
    let lb_ok = (lo500..=hi500).contains(&lb_rejections);

    let (a0, a1, b1) = (1e-5, 0.3, 0.6);
    let model = ModelSpec::new(LocalVolSpec::proportional(1.0), StochVolSpec::garch(a0, a1, b1));
    let (mut raw_rej, mut inn_rej) = (0u64, 0u64);
    for seed in 0..200u64 {
        let path = sim::simulate(20_000 + seed, 2000, 100.0, |x| x, Filter::Garch { a0, a1, b1 });
        let s = series(&path.prices);
        let raw = relative_shifts(&s, s.default_eps()).unwrap().values;
        if arch_lm(&raw, 10).unwrap().p_value < 0.05 {
            raw_rej += 1;
        }
        let (w, _) = extract(&s, &model, InitRule::Default).unwrap();
        if arch_lm(&w.values, 10).unwrap().p_value < 0.05 {
            inn_rej += 1;
        }
    }
    let (lo200, hi200) = binomial_band(200, 0.05);
    let power_ok = raw_rej * 100 >= 95 * 200;
    let size_ok = (lo200..=hi200).contains(&inn_rej);
    outcome(
        lb_ok && power_ok && size_ok,
        format!(
            "Ljung-Box size {lb_rejections}/500 (band {lo500}..={hi500}); ARCH-LM raw {raw_rej}/200 (need >= 190), innovations {inn_rej}/200 (band {lo200}..={hi200})"
        ),
    )
}

fn c11_var_sanity() -> Outcome {
    let draws = sim::normals(11, 1000);
    let d = sim::dates(1000);
    let set = ScenarioSet {
        base: Base::new(0.0, 1.0),
        dates: d,
        scenarios: draws.clone(),
        mode: ScenarioMode::Standard,
        model: None,
    };
    let v = var(&set, 0.99).unwrap().var_value;
    let q = -empirical_quantile(&draws, 0.01, QuantileRule::LowerOrderStatistic).unwrap();
    let k = kupiec_backtest(10, 1000, 0.99).unwrap();
    let k2 = kupiec_backtest(5, 250, 0.98).unwrap();
    let pass = (v - 2.326).abs() <= 0.15 && v == q && k.lr_pof == 0.0 && k2.lr_pof == 0.0;
    outcome(pass, format!("99% VaR {v:.4} (target 2.326 ± 0.15); Kupiec LR at x/n = p: {} and {}", k.lr_pof, k2.lr_pof))
}

#[test]
fn acceptance_criteria() {
    let criteria: Vec<Criterion> = vec![
        ("1 shift-rule equivalence", c1_shift_rules),
        ("2 historical consistency", c2_historical_consistency),
        ("3 displaced-HS identity", c3_displaced_identity),
        ("4 FHS equivalence", c4_fhs),
        ("5 stressed reduction", c5_stressed_reduction),
        ("6 scale invariance", c6_scale_invariance),
        ("7 EWMA closed form", c7_ewma_closed_form),
        ("8 QMLE recovery", c8_qmle_recovery),
        ("9 gradient check", c9_gradient),
        ("10 diagnostics calibration/power", c10_diagnostics),
        ("11 VaR sanity", c11_var_sanity),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        let o = run();
        // written to the raw handle so the lines survive libtest's output capture
        let line = format!("[{}] {name}: {}\n", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        std::io::stderr().write_all(line.as_bytes()).unwrap();
        if !o.pass {
            failed.push(name);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
fn innovations_recover_generator_draws() {
    // GBM-GARCH path: extraction under the generating model returns the draws
    let (a0, a1, b1) = (1e-6, 0.08, 0.90);
    let model = ModelSpec::new(LocalVolSpec::proportional(1.0), StochVolSpec::garch(a0, a1, b1));
    let mut passes = 0;
    for seed in 0..50 {
        let path = sim::simulate(7000 + seed, 999, 100.0, |x| x, Filter::Garch { a0, a1, b1 });
        let s = series(&path.prices);
        let (w, p) = extract(&s, &model, InitRule::Default).unwrap();
        let err = w.values.iter().zip(&path.draws).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-10, "seed {seed}: {err:e}");
        let back = reconstruct(s.first(), &w, &p).unwrap();
        assert!(max_rel(&back, s.values()) <= 1e-12);
        if ljung_box(&w.values, 10).unwrap().p_value >= 0.05 {
            passes += 1;
        }
    }
    assert!(passes >= 45, "{passes}/50 passed Ljung-Box");
}
