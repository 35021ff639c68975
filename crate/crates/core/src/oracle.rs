//! Exhaustive enumeration of every non-empty subset, for ground truth on small tables.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::datatable::DecisionTable;
use crate::error::{Error, Result};
use crate::fitness::{fitness_level, FrddEvaluator, SubsetEvaluator};
use crate::mask::FeatureMask;

pub const ORACLE_MAX_FEATURES: usize = 20;
/// Masks listed per frontier point; `count` still reports the full number.
pub const ORACLE_MASK_LIMIT: usize = 256;

/// Best dependency degree reachable with exactly `cardinality` features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontierPoint {
    pub cardinality: usize,
    pub fitness: f64,
    pub count: usize,
    pub masks: Vec<FeatureMask>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub feature_count: usize,
    pub best_fitness: f64,
    pub best_cardinality: usize,
    /// Minimal subsets reaching `best_fitness`.
    pub optimal: Vec<FeatureMask>,
    /// Points where the best fitness strictly improves on every smaller cardinality.
    pub frontier: Vec<FrontierPoint>,
    /// Best point for every cardinality 1..=L.
    pub by_cardinality: Vec<FrontierPoint>,
    pub evaluated: u64,
}

impl OracleResult {
    /// Whether `(fitness, cardinality)` equals the optimum on the fitness grid.
    pub fn is_optimal(&self, fitness: f64, cardinality: usize) -> bool {
        fitness_level(fitness) == fitness_level(self.best_fitness) && cardinality == self.best_cardinality
    }
}

pub fn exhaustive(table: &DecisionTable) -> Result<OracleResult> {
    exhaustive_with(&FrddEvaluator::new(table))
}

pub fn exhaustive_with<E: SubsetEvaluator + ?Sized>(evaluator: &E) -> Result<OracleResult> {
    let l = evaluator.feature_count();
    if l == 0 || l > ORACLE_MAX_FEATURES {
        return Err(Error::Config(format!(
            "exhaustive enumeration supports 1..={ORACLE_MAX_FEATURES} features, table has {l}"
        )));
    }
    let to_mask = |bits: u32| FeatureMask::from_bools(&(0..l).map(|i| bits >> i & 1 == 1).collect::<Vec<_>>());
    let scored: Vec<(u32, f64)> = (1u32..1 << l)
        .into_par_iter()
        .map(|bits| (bits, evaluator.fitness(&to_mask(bits))))
        .collect();

    let mut by_cardinality: Vec<Option<(i64, f64, Vec<u32>)>> = vec![None; l + 1];
    for &(bits, fitness) in &scored {
        let slot = &mut by_cardinality[bits.count_ones() as usize];
        let level = fitness_level(fitness);
        match slot {
            Some((best, _, masks)) if *best == level => masks.push(bits),
            Some((best, _, _)) if *best > level => {}
            _ => *slot = Some((level, fitness, vec![bits])),
        }
    }
    let points: Vec<FrontierPoint> = by_cardinality
        .into_iter()
        .enumerate()
        .skip(1)
        .map(|(cardinality, slot)| {
            let (_, fitness, bits) = slot.expect("every cardinality has subsets");
            let mut masks: Vec<FeatureMask> = bits.into_iter().map(to_mask).collect();
            masks.sort();
            let count = masks.len();
            masks.truncate(ORACLE_MASK_LIMIT);
            FrontierPoint {
                cardinality,
                fitness,
                count,
                masks,
            }
        })
        .collect();

    let mut frontier: Vec<FrontierPoint> = Vec::new();
    for p in &points {
        if frontier
            .last()
            .is_none_or(|last| fitness_level(p.fitness) > fitness_level(last.fitness))
        {
            frontier.push(p.clone());
        }
    }
    let best = frontier.last().expect("at least one subset");
    Ok(OracleResult {
        feature_count: l,
        best_fitness: best.fitness,
        best_cardinality: best.cardinality,
        optimal: best.masks.clone(),
        frontier: frontier.clone(),
        by_cardinality: points,
        evaluated: scored.len() as u64,
    })
}
