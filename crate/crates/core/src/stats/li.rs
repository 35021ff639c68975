use std::fmt;

use serde::Serialize;

use super::dist::normal_sf;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LiComparison {
    pub algorithm: usize,
    pub name: String,
    /// `(R_i - R_control) / SE`.
    pub z: f64,
    /// Two-sided normal p-value.
    pub p: f64,
    /// Level this hypothesis is tested at.
    pub threshold: f64,
    pub rejected: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LiResult {
    pub control: usize,
    pub alpha: f64,
    pub standard_error: f64,
    /// `alpha (1 - p_max) / (1 - alpha)`, the level for all but the largest p-value.
    pub threshold: f64,
    /// Sorted by ascending p-value.
    pub comparisons: Vec<LiComparison>,
}

/// Li's procedure comparing every algorithm against `control` from Friedman average ranks.
///
/// If the largest p-value is at most `alpha`, every hypothesis is rejected. Otherwise the
/// largest is retained and the rest are rejected when `p <= alpha (1 - p_max) / (1 - alpha)`.
pub fn li_posthoc(
    average_ranks: &[f64],
    names: &[String],
    n: usize,
    control: usize,
    alpha: f64,
) -> Result<LiResult> {
    let k = average_ranks.len();
    if k < 2 {
        return Err(Error::Scores("need at least 2 algorithms".into()));
    }
    if control >= k {
        return Err(Error::Scores(format!("control index {control} out of range")));
    }
    if !(0.0..1.0).contains(&alpha) || n == 0 {
        return Err(Error::Scores("alpha must be in [0, 1) and N positive".into()));
    }
    let kf = k as f64;
    let se = (kf * (kf + 1.0) / (6.0 * n as f64)).sqrt();
    let r0 = average_ranks[control];
    let mut comparisons: Vec<LiComparison> = (0..k)
        .filter(|&i| i != control)
        .map(|i| {
            let z = (average_ranks[i] - r0) / se;
            LiComparison {
                algorithm: i,
                name: names.get(i).cloned().unwrap_or_else(|| format!("A{}", i + 1)),
                z,
                p: (2.0 * normal_sf(z.abs())).min(1.0),
                threshold: alpha,
                rejected: false,
            }
        })
        .collect();
    comparisons.sort_by(|a, b| a.p.total_cmp(&b.p).then(a.algorithm.cmp(&b.algorithm)));

    let p_max = comparisons.last().map(|c| c.p).unwrap_or(0.0);
    let threshold = li_threshold(alpha, p_max);
    let last = comparisons.len() - 1;
    for (i, c) in comparisons.iter_mut().enumerate() {
        if p_max <= alpha {
            c.rejected = true;
        } else if i < last {
            c.threshold = threshold;
            c.rejected = c.p <= threshold;
        }
    }
    Ok(LiResult {
        control,
        alpha,
        standard_error: se,
        threshold,
        comparisons,
    })
}

pub(crate) fn li_threshold(alpha: f64, p_max: f64) -> f64 {
    alpha * (1.0 - p_max) / (1.0 - alpha)
}

impl fmt::Display for LiResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "Li post-hoc, alpha = {}, SE = {:.6}, threshold = {:.6}",
            self.alpha, self.standard_error, self.threshold
        )?;
        writeln!(f, "{:<16} {:>10} {:>10} {:>10}  rejected", "algorithm", "z", "p", "level")?;
        for c in self.comparisons.iter().rev() {
            writeln!(
                f,
                "{:<16} {:>10.6} {:>10.6} {:>10.6}  {}",
                c.name, c.z, c.p, c.threshold, c.rejected
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn two_algorithms_large_n() {
        let r = li_posthoc(&[1.0, 2.0], &[], 100, 0, 0.05).unwrap();
        assert_abs_diff_eq!(r.comparisons[0].z, 10.0, epsilon = 1e-12);
        assert!(r.comparisons[0].p < 1e-20);
        assert!(r.comparisons[0].rejected);
    }

    #[test]
    fn threshold_limits() {
        assert_abs_diff_eq!(li_threshold(0.05, 0.05), 0.05, epsilon = 1e-15);
        assert_abs_diff_eq!(li_threshold(0.05, 0.0), 0.05 / 0.95, epsilon = 1e-15);
        assert!(li_threshold(0.05, 1.0 - 1e-12) < 1e-12);
    }

    #[test]
    fn largest_p_is_tested_at_alpha() {
        let r = li_posthoc(&[1.2, 2.0, 1.25], &[], 10, 0, 0.05).unwrap();
        let last = r.comparisons.last().unwrap();
        assert_eq!(last.threshold, 0.05);
        assert!(!last.rejected);
    }

    #[test]
    fn bad_control_rejected() {
        assert!(li_posthoc(&[1.0, 2.0], &[], 5, 2, 0.05).is_err());
    }
}
