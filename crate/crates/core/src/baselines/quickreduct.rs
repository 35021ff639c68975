use std::time::Instant;

use serde_json::json;

use crate::datatable::DecisionTable;
use crate::fitness::{fitness_level, Frog, FrddEvaluator, SubsetEvaluator};
use crate::mask::FeatureMask;
use crate::report::{ReductReport, StopReason, TracePoint};

/// Minimum gain in dependency degree for greedy selection to keep going.
pub const QUICKREDUCT_TOLERANCE: f64 = 1e-10;

pub fn quickreduct(table: &DecisionTable) -> ReductReport {
    quickreduct_with(&FrddEvaluator::new(table))
}

/// Greedy forward selection: start from the empty subset and repeatedly add the feature
/// with the largest dependency degree (lowest index on ties) while it strictly increases.
pub fn quickreduct_with<E: SubsetEvaluator + ?Sized>(evaluator: &E) -> ReductReport {
    let started = Instant::now();
    let calls_before = evaluator.evaluations();
    let l = evaluator.feature_count();
    let mut current = Frog::new(FeatureMask::empty(l), 0.0);
    let mut trace = vec![TracePoint::from(&current)];

    let stop_reason = loop {
        if current.cardinality == l {
            break StopReason::AllFeaturesSelected;
        }
        let mut best: Option<Frog> = None;
        for f in (0..l).filter(|&f| !current.mask.get(f)) {
            let mut mask = current.mask.clone();
            mask.set(f, true);
            let cand = Frog::evaluate(mask, evaluator);
            let better = match &best {
                None => true,
                Some(b) => fitness_level(cand.fitness) > fitness_level(b.fitness),
            };
            if better {
                best = Some(cand);
            }
        }
        let best = best.expect("at least one unselected feature");
        if best.fitness > current.fitness + QUICKREDUCT_TOLERANCE {
            current = best;
            trace.push(TracePoint::from(&current));
        } else {
            break StopReason::NoImprovement;
        }
    };

    let reducts: Vec<&Frog> = if current.mask.is_empty() {
        Vec::new()
    } else {
        vec![&current]
    };
    ReductReport::from_candidates(
        "quickreduct",
        l,
        &current,
        reducts,
        trace,
        evaluator.evaluations() - calls_before,
        started.elapsed().as_secs_f64() * 1e3,
        stop_reason,
        json!({ "tolerance": QUICKREDUCT_TOLERANCE, "tie_break": "lowest_index" }),
    )
}
