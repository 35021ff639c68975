use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

/// Upper tail of the chi-square distribution, `Q(df / 2, x / 2)`.
pub fn chi_square_sf(x: f64, df: u32) -> f64 {
    assert!(df > 0, "chi-square needs positive degrees of freedom");
    if x <= 0.0 {
        return 1.0;
    }
    ChiSquared::new(df as f64)
        .expect("positive degrees of freedom")
        .sf(x)
        .clamp(0.0, 1.0)
}

/// Upper tail of the standard normal, `1 - Phi(z)`.
pub fn normal_sf(z: f64) -> f64 {
    Normal::standard().sf(z).clamp(0.0, 1.0)
}
