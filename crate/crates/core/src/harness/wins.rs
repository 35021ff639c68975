use serde::Serialize;

use crate::fitness::fitness_level;
use crate::stats::ScoreMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WinCount {
    pub algorithm: String,
    pub wins: usize,
}

/// One win per dataset for every algorithm sharing the highest score there; missing cells
/// do not compete. Sorted by wins descending, then by column order.
pub fn wins_from_matrix(matrix: &ScoreMatrix) -> Vec<WinCount> {
    let mut wins = vec![0; matrix.algorithms.len()];
    for row in &matrix.scores {
        let best = row.iter().flatten().map(|&v| fitness_level(v)).max();
        if let Some(best) = best {
            for (w, v) in wins.iter_mut().zip(row) {
                if v.is_some_and(|v| fitness_level(v) == best) {
                    *w += 1;
                }
            }
        }
    }
    let mut out: Vec<WinCount> = matrix
        .algorithms
        .iter()
        .zip(wins)
        .map(|(a, wins)| WinCount {
            algorithm: a.clone(),
            wins,
        })
        .collect();
    out.sort_by(|a, b| b.wins.cmp(&a.wins));
    out
}
