use std::fmt;

use serde::Serialize;

use super::dist::chi_square_sf;
use super::scores::{ScoreMatrix, ScoreMissingPolicy};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FriedmanResult {
    pub algorithms: Vec<String>,
    pub average_ranks: Vec<f64>,
    pub statistic: f64,
    pub p_value: f64,
    /// Number of datasets.
    pub n: usize,
    /// Number of algorithms.
    pub k: usize,
}

/// Ranks within one dataset: 1 for the highest score, ties share the mean of their positions.
pub fn rank_row(scores: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    let mut ranks = vec![0.0; scores.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        let shared = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = shared;
        }
        i = j + 1;
    }
    ranks
}

/// Friedman test on a score matrix (higher is better).
pub fn friedman(matrix: &ScoreMatrix, policy: ScoreMissingPolicy) -> Result<FriedmanResult> {
    let rows = matrix.complete_rows(policy)?;
    let k = matrix.algorithms.len();
    let n = rows.len();
    if n < 2 {
        return Err(Error::Scores(format!("need at least 2 datasets, have {n}")));
    }
    let mut sums = vec![0.0; k];
    for row in &rows {
        for (s, r) in sums.iter_mut().zip(rank_row(row)) {
            *s += r;
        }
    }
    let average: Vec<f64> = sums.iter().map(|s| s / n as f64).collect();
    let mut result = friedman_from_ranks(&average, n)?;
    result.algorithms = matrix.algorithms.clone();
    Ok(result)
}

/// Friedman statistic `12N / (k(k+1)) * (sum R_j^2 - k(k+1)^2 / 4)` from average ranks,
/// with its chi-square (`k - 1` df) p-value.
pub fn friedman_from_ranks(average_ranks: &[f64], n: usize) -> Result<FriedmanResult> {
    let k = average_ranks.len();
    if k < 2 {
        return Err(Error::Scores("need at least 2 algorithms".into()));
    }
    if n == 0 {
        return Err(Error::Scores("need at least one dataset".into()));
    }
    let kf = k as f64;
    let sum_sq: f64 = average_ranks.iter().map(|r| r * r).sum();
    let statistic = (12.0 * n as f64 / (kf * (kf + 1.0)) * (sum_sq - kf * (kf + 1.0).powi(2) / 4.0)).max(0.0);
    Ok(FriedmanResult {
        algorithms: (1..=k).map(|i| format!("A{i}")).collect(),
        average_ranks: average_ranks.to_vec(),
        statistic,
        p_value: chi_square_sf(statistic, (k - 1) as u32),
        n,
        k,
    })
}

/// Snap rounded average ranks back onto the lattice they must lie on.
///
/// A per-dataset rank is a multiple of 1/2 (ties average two or more integer positions
/// whose sum is an integer), so an average over `n` datasets is a multiple of `1 / (2n)`.
/// Ranks rounded to four decimals are recovered exactly for `n < 5000`.
pub fn snap_average_ranks(ranks: &[f64], n: usize) -> Vec<f64> {
    let step = 2.0 * n as f64;
    ranks.iter().map(|r| (r * step).round() / step).collect()
}

impl fmt::Display for FriedmanResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Friedman test: N = {}, k = {}", self.n, self.k)?;
        writeln!(f, "{:<16} {:>10}", "algorithm", "avg rank")?;
        for (a, r) in self.algorithms.iter().zip(&self.average_ranks) {
            writeln!(f, "{a:<16} {r:>10.4}")?;
        }
        writeln!(
            f,
            "statistic = {:.6} (chi-square, {} df), p = {:.6}",
            self.statistic,
            self.k - 1,
            self.p_value
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn rank_row_handles_ties() {
        assert_eq!(rank_row(&[0.9, 0.5, 0.7]), vec![1.0, 3.0, 2.0]);
        assert_eq!(rank_row(&[0.5, 0.9, 0.5, 0.1]), vec![2.5, 1.0, 2.5, 4.0]);
        assert_eq!(rank_row(&[1.0, 1.0, 1.0]), vec![2.0, 2.0, 2.0]);
    }

    #[test]
    fn two_algorithms_one_always_better() {
        let m = ScoreMatrix::new(
            vec!["d1".into(), "d2".into(), "d3".into(), "d4".into()],
            vec!["a".into(), "b".into()],
            vec![vec![Some(0.9), Some(0.1)]; 4],
        )
        .unwrap();
        let r = friedman(&m, ScoreMissingPolicy::Error).unwrap();
        assert_eq!(r.average_ranks, vec![1.0, 2.0]);
        assert_abs_diff_eq!(r.statistic, 4.0, epsilon = 1e-12);
    }

    #[test]
    fn all_equal_scores() {
        let m = ScoreMatrix::new(
            vec!["d1".into(), "d2".into()],
            vec!["a".into(), "b".into(), "c".into()],
            vec![vec![Some(0.5); 3]; 2],
        )
        .unwrap();
        let r = friedman(&m, ScoreMissingPolicy::Error).unwrap();
        assert_eq!(r.average_ranks, vec![2.0; 3]);
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn four_decimal_ranks_snap_to_lattice() {
        let snapped = snap_average_ranks(&[2.7727, 3.1818, 3.4091, 3.5000, 2.1364], 22);
        let expected = [61.0 / 22.0, 70.0 / 22.0, 75.0 / 22.0, 77.0 / 22.0, 47.0 / 22.0];
        for (s, e) in snapped.iter().zip(expected) {
            assert_abs_diff_eq!(*s, e, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(snapped.iter().sum::<f64>(), 15.0, epsilon = 1e-12);
    }

    fn matrix(rows: Vec<Vec<f64>>) -> ScoreMatrix {
        let k = rows[0].len();
        ScoreMatrix::new(
            (0..rows.len()).map(|i| format!("d{i}")).collect(),
            (0..k).map(|i| format!("a{i}")).collect(),
            rows.into_iter().map(|r| r.into_iter().map(Some).collect()).collect(),
        )
        .unwrap()
    }

    proptest! {
        #[test]
        fn rank_sums_are_conserved(row in proptest::collection::vec(0u8..5, 2..8)) {
            let row: Vec<f64> = row.into_iter().map(f64::from).collect();
            let k = row.len() as f64;
            prop_assert_eq!(rank_row(&row).iter().sum::<f64>(), k * (k + 1.0) / 2.0);
        }

        #[test]
        fn monotone_rescaling_leaves_result_unchanged(
            rows in proptest::collection::vec(proptest::collection::vec(0u8..6, 4), 2..10)
        ) {
            let base: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|&v| f64::from(v)).collect()).collect();
            let scaled: Vec<Vec<f64>> = base.iter().map(|r| r.iter().map(|v| (v * 0.3).exp() * 7.0 - 2.0).collect()).collect();
            let a = friedman(&matrix(base), ScoreMissingPolicy::Error).unwrap();
            let b = friedman(&matrix(scaled), ScoreMissingPolicy::Error).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn average_ranks_sum_to_k_k1_over_2(
            rows in proptest::collection::vec(proptest::collection::vec(0u8..4, 5), 2..12)
        ) {
            let base: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|&v| f64::from(v)).collect()).collect();
            let r = friedman(&matrix(base), ScoreMissingPolicy::Error).unwrap();
            prop_assert!((r.average_ranks.iter().sum::<f64>() - 15.0).abs() < 1e-9);
            prop_assert!(r.average_ranks.iter().all(|&x| (1.0..=5.0).contains(&x)));
        }
    }
}
