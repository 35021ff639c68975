//! Nonparametric comparison of several algorithms over several datasets: Friedman average
//! ranks and statistic, then Li's two-step post-hoc procedure against a control.

mod dist;
mod friedman;
mod li;
mod scores;

pub use dist::{chi_square_sf, normal_sf};
pub use friedman::{friedman, friedman_from_ranks, rank_row, snap_average_ranks, FriedmanResult};
pub use li::{li_posthoc, LiComparison, LiResult};
pub use scores::{ScoreMatrix, ScoreMissingPolicy};
