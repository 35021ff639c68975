//! Binary shuffled frog leaping search over feature subsets.
//!
//! A population of `m * n` random subsets is ranked, dealt into `m` memeplexes, and each
//! memeplex runs `N` rounds of local improvement: a rank-weighted submemeplex of `q` frogs is
//! drawn, its worst frog leaps toward the submemeplex best, then toward the global best,
//! and is replaced by a random frog if neither leap improves it. Memeplexes are then
//! shuffled back together and re-ranked until the best subset stops changing.
//!
//! Ranking prefers higher dependency degree and, among equals, fewer features, so the
//! final population usually holds several distinct minimal reducts.

mod config;
mod ops;

use std::time::Instant;

use rayon::prelude::*;
use serde_json::json;

pub use config::{
    auto_params, DistanceMode, SearchConfig, DEFAULT_MAX_SHUFFLES, DEFAULT_STALL_SHUFFLES,
    SMALL_TABLE_CELLS,
};
pub use ops::{
    frog_distance, leap, leap_with_draws, partition, sample_submemeplex, step_size, step_size_from,
    submemeplex_weights, Memeplex,
};

pub use crate::fitness::{rank, Frog};

use crate::datatable::DecisionTable;
use crate::error::Result;
use crate::fitness::{FrddEvaluator, SubsetEvaluator};
use crate::mask::FeatureMask;
use crate::report::{ReductReport, StopReason, TracePoint};
use crate::rng::{derive_rng, SearchRng, RNG_ALGORITHM};

pub const ALGORITHM: &str = "bsfla";

/// Which stage of a round produced the replacement for the worst frog.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeapOutcome {
    TowardLocalBest,
    TowardGlobalBest,
    Censored,
}

/// Attempt to improve `worst` by leaping toward `target`; `None` if infeasible or not better.
fn try_leap<E: SubsetEvaluator + ?Sized>(
    worst: &Frog,
    target: &FeatureMask,
    config: &SearchConfig,
    evaluator: &E,
    rng: &mut SearchRng,
) -> Option<Frog> {
    let dist = frog_distance(config.distance_mode, target, &worst.mask);
    let s = step_size(dist, config.max_step, rng);
    let moved = leap(&worst.mask, target, s, rng)?;
    let candidate = Frog::evaluate(moved, evaluator);
    candidate.improves_on(worst).then_some(candidate)
}

/// One improvement round on a sorted memeplex; returns which stage replaced the worst frog.
pub fn evolve_round<E: SubsetEvaluator + ?Sized>(
    memeplex: &mut Memeplex,
    global_best: &FeatureMask,
    config: &SearchConfig,
    evaluator: &E,
    rng: &mut SearchRng,
) -> LeapOutcome {
    let n = memeplex.len();
    let z = sample_submemeplex(n, config.submemeplex.min(n), rng);
    let best_slot = z[0];
    let worst_slot = *z.last().expect("submemeplex is non-empty");
    let worst = memeplex.frogs[worst_slot].clone();
    let local_best = memeplex.frogs[best_slot].mask.clone();

    let (replacement, outcome) =
        if let Some(f) = try_leap(&worst, &local_best, config, evaluator, rng) {
            (f, LeapOutcome::TowardLocalBest)
        } else if let Some(f) = try_leap(&worst, global_best, config, evaluator, rng) {
            (f, LeapOutcome::TowardGlobalBest)
        } else {
            let mask = FeatureMask::random_feasible(evaluator.feature_count(), rng);
            (Frog::evaluate(mask, evaluator), LeapOutcome::Censored)
        };
    memeplex.frogs[worst_slot] = replacement;
    memeplex.sort();
    outcome
}

/// `N` improvement rounds on one memeplex.
pub fn evolve_memeplex<E: SubsetEvaluator + ?Sized>(
    memeplex: &mut Memeplex,
    global_best: &FeatureMask,
    config: &SearchConfig,
    evaluator: &E,
    rng: &mut SearchRng,
) {
    for _ in 0..config.evolution_steps {
        evolve_round(memeplex, global_best, config, evaluator, rng);
    }
}

/// Observer hooks for inspecting the population between shuffles.
pub trait SearchObserver {
    fn population(&mut self, _shuffle: usize, _ranked: &[Frog]) {}
}

impl SearchObserver for () {}

/// Run the search with a fresh memoized FRDD evaluator over `table`.
pub fn search(table: &DecisionTable, config: &SearchConfig) -> Result<ReductReport> {
    let evaluator = FrddEvaluator::new(table);
    let mut report = search_with(&evaluator, config, &mut ())?;
    if let Some(echo) = report.config_echo.as_object_mut() {
        echo.insert("sigma_mode".into(), json!(table.sigma_mode()));
        echo.insert("normalized".into(), json!(table.normalized()));
    }
    Ok(report)
}

/// Run the search against any subset evaluator.
///
/// Memeplexes evolve in parallel; each draws from its own stream derived from
/// `(seed, shuffle, memeplex)`, so results do not depend on scheduling.
pub fn search_with<E: SubsetEvaluator + ?Sized, O: SearchObserver>(
    evaluator: &E,
    config: &SearchConfig,
    observer: &mut O,
) -> Result<ReductReport> {
    let started = Instant::now();
    let l = evaluator.feature_count();
    config.validate(l)?;
    let calls_before = evaluator.evaluations();
    let (m, n) = (config.memeplexes, config.frogs_per_memeplex);

    let mut init_rng = derive_rng(config.rng_seed, u64::MAX, 0);
    let masks: Vec<FeatureMask> = (0..config.population())
        .map(|_| FeatureMask::random_feasible(l, &mut init_rng))
        .collect();
    let mut population: Vec<Frog> = masks
        .into_par_iter()
        .map(|mask| Frog::evaluate(mask, evaluator))
        .collect();
    rank(&mut population);
    observer.population(0, &population);

    let mut best = population[0].clone();
    let mut trace = vec![TracePoint::from(&best)];
    let mut stalled = 0;
    let mut stop_reason = StopReason::MaxShuffles;

    for shuffle in 0..config.max_shuffles {
        let global_best = population[0].mask.clone();
        let mut memeplexes = partition(&population, m, n)?;
        memeplexes.par_iter_mut().enumerate().for_each(|(k, plex)| {
            let mut rng = derive_rng(config.rng_seed, shuffle as u64, k as u64);
            evolve_memeplex(plex, &global_best, config, evaluator, &mut rng);
        });
        population = memeplexes.into_iter().flat_map(|p| p.frogs).collect();
        rank(&mut population);
        observer.population(shuffle + 1, &population);

        let current = &population[0];
        trace.push(TracePoint::from(current));
        if current.improves_on(&best) {
            best = current.clone();
            stalled = 0;
        } else {
            stalled += 1;
            if stalled >= config.stall_shuffles {
                stop_reason = StopReason::Stalled;
                break;
            }
        }
    }

    let best = population[0].clone();
    let config_echo = json!({
        "m": config.memeplexes,
        "n": config.frogs_per_memeplex,
        "N": config.evolution_steps,
        "q": config.submemeplex,
        "s_max": config.max_step,
        "distance_mode": config.distance_mode,
        "max_shuffles": config.max_shuffles,
        "stall_shuffles": config.stall_shuffles,
        "rng_seed": config.rng_seed,
        "rng": RNG_ALGORITHM,
    });
    Ok(ReductReport::from_candidates(
        ALGORITHM,
        l,
        &best,
        &population,
        trace,
        evaluator.evaluations() - calls_before,
        started.elapsed().as_secs_f64() * 1e3,
        stop_reason,
        config_echo,
    ))
}
