use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Upper tail `P(X > x)` of a chi-square distribution with `df` degrees of freedom.
pub fn chi2_sf(x: f64, df: usize) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    let dist = ChiSquared::new(df as f64).expect("positive degrees of freedom");
    dist.sf(x).clamp(0.0, 1.0)
}
