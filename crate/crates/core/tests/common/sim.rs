//! Seeded generator for the model `ΔS_k = v_{k-1}·γ(S_{k-1})·z_k`.
//!
//! Written independently of the library: its own variance recursion and its
//! own local volatility closures. Tests use the returned draws as ground truth.

#![allow(dead_code)]

use chrono::NaiveDate;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

#[derive(Debug, Clone, Copy)]
pub enum Filter {
    None,
    Garch { a0: f64, a1: f64, b1: f64 },
    Ewma { lambda: f64, h0: f64 },
}

#[derive(Debug, Clone)]
pub struct Path {
    pub prices: Vec<f64>,
    /// Innovation draws `z_1..z_N`.
    pub draws: Vec<f64>,
    /// Volatilities `v_0..v_N`.
    pub vols: Vec<f64>,
    /// Filtered returns `v_{k-1}·z_k`.
    pub returns: Vec<f64>,
}

pub fn simulate(seed: u64, n_steps: usize, s0: f64, gamma: impl Fn(f64) -> f64, filter: Filter) -> Path {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut h = match filter {
        Filter::None => 1.0,
        Filter::Garch { a0, a1, b1 } => a0 / (1.0 - a1 - b1),
        Filter::Ewma { h0, .. } => h0,
    };
    let mut s = s0;
    let mut out = Path {
        prices: vec![s0],
        draws: Vec::with_capacity(n_steps),
        vols: vec![h.sqrt()],
        returns: Vec::with_capacity(n_steps),
    };
    for _ in 0..n_steps {
        let z: f64 = StandardNormal.sample(&mut rng);
        let r = h.sqrt() * z;
        s += gamma(s) * r;
        h = match filter {
            Filter::None => 1.0,
            Filter::Garch { a0, a1, b1 } => a0 + a1 * r * r + b1 * h,
            Filter::Ewma { lambda, .. } => (1.0 - lambda) * r * r + lambda * h,
        };
        out.prices.push(s);
        out.draws.push(z);
        out.vols.push(h.sqrt());
        out.returns.push(r);
    }
    out
}

pub fn dates(n: usize) -> Vec<NaiveDate> {
    let d0 = NaiveDate::from_ymd_opt(2000, 1, 3).unwrap();
    (0..n).map(|i| d0 + chrono::Days::new(i as u64)).collect()
}

pub fn to_csv(prices: &[f64]) -> String {
    let mut s = String::from("date,value\n");
    for (d, p) in dates(prices.len()).iter().zip(prices) {
        s.push_str(&format!("{},{}\n", d.format("%Y-%m-%d"), p));
    }
    s
}

pub fn normals(seed: u64, n: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
}

/// Seeded positive random-walk price path of `len` observations.
pub fn positive_path(seed: u64, len: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut s = 50.0 + 100.0 * rand::Rng::random::<f64>(&mut rng);
    let mut out = vec![s];
    for _ in 1..len {
        let z: f64 = StandardNormal.sample(&mut rng);
        s *= (0.02 * z).exp();
        out.push(s);
    }
    out
}
