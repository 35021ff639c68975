//! The result record shared by every search algorithm.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::fitness::Frog;
use crate::mask::FeatureMask;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    MaxShuffles,
    Stalled,
    NoImprovement,
    AllFeaturesSelected,
    Generations,
    Iterations,
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("stop reason serializes");
        f.write_str(s.as_str().unwrap_or("unknown"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub fitness: f64,
    pub cardinality: usize,
}

impl From<&Frog> for TracePoint {
    fn from(f: &Frog) -> Self {
        TracePoint {
            fitness: f.fitness,
            cardinality: f.cardinality,
        }
    }
}

/// Distinct best subsets found by one run, plus provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductReport {
    pub algorithm: String,
    pub reducts: Vec<FeatureMask>,
    pub best_fitness: f64,
    pub best_cardinality: usize,
    pub feature_frequency: Vec<usize>,
    pub trace: Vec<TracePoint>,
    pub evaluations: u64,
    pub wall_time_ms: f64,
    pub stop_reason: StopReason,
    pub config_echo: serde_json::Value,
}

impl ReductReport {
    /// Assemble a report from the candidates tied with `best`, deduplicated and sorted.
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn from_candidates<'a>(
        algorithm: &str,
        feature_count: usize,
        best: &Frog,
        candidates: impl IntoIterator<Item = &'a Frog>,
        trace: Vec<TracePoint>,
        evaluations: u64,
        wall_time_ms: f64,
        stop_reason: StopReason,
        config_echo: serde_json::Value,
    ) -> Self {
        let mut reducts: Vec<FeatureMask> = candidates
            .into_iter()
            .filter(|f| f.ties_with(best))
            .map(|f| f.mask.clone())
            .collect();
        reducts.sort();
        reducts.dedup();
        let feature_frequency = frequencies(feature_count, &reducts);
        ReductReport {
            algorithm: algorithm.to_string(),
            reducts,
            best_fitness: best.fitness,
            best_cardinality: best.cardinality,
            feature_frequency,
            trace,
            evaluations,
            wall_time_ms,
            stop_reason,
            config_echo,
        }
    }

    /// JSON with the timing field removed, for reproducibility comparisons.
    pub fn to_json_without_timing(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Some(obj) = v.as_object_mut() {
            obj.remove("wall_time_ms");
        }
        serde_json::to_string(&v).expect("report serializes")
    }
}

pub(crate) fn frequencies(feature_count: usize, reducts: &[FeatureMask]) -> Vec<usize> {
    let mut freq = vec![0; feature_count];
    for r in reducts {
        for i in r.ones() {
            freq[i] += 1;
        }
    }
    freq
}
