//! Subset evaluation shared by every search algorithm, and the ranking order over candidates.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::RwLock;

use serde::Serialize;

use crate::datatable::DecisionTable;
use crate::fuzzy_rough::{mean, positive_region, Similarities};
use crate::mask::FeatureMask;

/// Dependency degrees closer than this are treated as equal when ranking.
pub const FITNESS_TOLERANCE: f64 = 1e-12;

/// Default memory budget for precomputed per-feature similarity matrices (2 GiB).
pub const DEFAULT_SIMILARITY_BUDGET: u64 = 2 << 30;

/// Fitness snapped to the tolerance grid, so that ranking is a total order.
#[inline]
pub fn fitness_level(fitness: f64) -> i64 {
    (fitness / FITNESS_TOLERANCE).round() as i64
}

/// A scored candidate subset.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Frog {
    pub mask: FeatureMask,
    pub fitness: f64,
    pub cardinality: usize,
}

impl Frog {
    pub fn new(mask: FeatureMask, fitness: f64) -> Self {
        let cardinality = mask.count_ones();
        Frog {
            mask,
            fitness,
            cardinality,
        }
    }

    pub fn evaluate<E: SubsetEvaluator + ?Sized>(mask: FeatureMask, evaluator: &E) -> Self {
        let fitness = evaluator.fitness(&mask);
        Frog::new(mask, fitness)
    }

    /// Ranking order: higher fitness first, then fewer features, then lexicographic mask.
    /// `Less` means `self` ranks better.
    pub fn rank_cmp(&self, other: &Frog) -> Ordering {
        fitness_level(other.fitness)
            .cmp(&fitness_level(self.fitness))
            .then(self.cardinality.cmp(&other.cardinality))
            .then_with(|| self.mask.cmp(&other.mask))
    }

    /// Strictly better on (fitness, cardinality); the mask tie-break does not count.
    pub fn improves_on(&self, other: &Frog) -> bool {
        self.objective_cmp(other) == Ordering::Less
    }

    /// Same (fitness, cardinality) pair.
    pub fn ties_with(&self, other: &Frog) -> bool {
        self.objective_cmp(other) == Ordering::Equal
    }

    fn objective_cmp(&self, other: &Frog) -> Ordering {
        fitness_level(other.fitness)
            .cmp(&fitness_level(self.fitness))
            .then(self.cardinality.cmp(&other.cardinality))
    }
}

/// Sort best-first under [`Frog::rank_cmp`].
pub fn rank(frogs: &mut [Frog]) {
    frogs.sort_by(Frog::rank_cmp);
}

/// A fitness function over feature subsets. Implementations must be pure: the same mask
/// always yields the same value regardless of call order or thread.
pub trait SubsetEvaluator: Sync {
    fn feature_count(&self) -> usize;

    fn fitness(&self, mask: &FeatureMask) -> f64;

    /// Number of `fitness` calls so far, cache hits included.
    fn evaluations(&self) -> u64;
}

/// Memoized fuzzy-rough dependency degree over one table.
pub struct FrddEvaluator<'t> {
    table: &'t DecisionTable,
    sims: Similarities<'t>,
    cache: RwLock<HashMap<FeatureMask, f64>>,
    calls: AtomicU64,
}

impl<'t> FrddEvaluator<'t> {
    pub fn new(table: &'t DecisionTable) -> Self {
        Self::with_budget(table, DEFAULT_SIMILARITY_BUDGET)
    }

    /// Precompute per-feature similarity matrices only if they fit in `budget_bytes`.
    pub fn with_budget(table: &'t DecisionTable, budget_bytes: u64) -> Self {
        FrddEvaluator {
            table,
            sims: Similarities::new(table, budget_bytes),
            cache: RwLock::new(HashMap::new()),
            calls: AtomicU64::new(0),
        }
    }

    pub fn table(&self) -> &'t DecisionTable {
        self.table
    }

    pub fn is_precomputed(&self) -> bool {
        self.sims.is_precomputed()
    }

    pub fn cache_len(&self) -> usize {
        self.cache.read().expect("fitness cache poisoned").len()
    }

    /// Uncached evaluation.
    pub fn compute(&self, mask: &FeatureMask) -> f64 {
        assert_eq!(mask.len(), self.table.feature_count(), "mask length mismatch");
        if mask.is_empty() {
            return 0.0;
        }
        mean(&positive_region(self.table, &self.sims, mask))
    }
}

impl SubsetEvaluator for FrddEvaluator<'_> {
    fn feature_count(&self) -> usize {
        self.table.feature_count()
    }

    fn fitness(&self, mask: &FeatureMask) -> f64 {
        self.calls.fetch_add(1, AtomicOrdering::Relaxed);
        if let Some(&v) = self.cache.read().expect("fitness cache poisoned").get(mask) {
            return v;
        }
        let v = self.compute(mask);
        self.cache
            .write()
            .expect("fitness cache poisoned")
            .insert(mask.clone(), v);
        v
    }

    fn evaluations(&self) -> u64 {
        self.calls.load(AtomicOrdering::Relaxed)
    }
}
