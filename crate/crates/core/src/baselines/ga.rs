use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::datatable::DecisionTable;
use crate::error::{Error, Result};
use crate::fitness::{rank, Frog, FrddEvaluator, SubsetEvaluator};
use crate::mask::FeatureMask;
use crate::report::{ReductReport, StopReason, TracePoint};
use crate::rng::{seeded, SearchRng, RNG_ALGORITHM};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaConfig {
    pub population: usize,
    pub generations: usize,
    pub p_crossover: f64,
    pub p_mutation: f64,
    pub rng_seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population: 900,
            generations: 5,
            p_crossover: 0.600,
            p_mutation: 0.033,
            rng_seed: 0,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population < 2 {
            return Err(Error::Config("GA population must be at least 2".into()));
        }
        for (name, p) in [("crossover", self.p_crossover), ("mutation", self.p_mutation)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Config(format!("{name} probability {p} outside [0, 1]")));
            }
        }
        Ok(())
    }
}

pub fn ga_search(table: &DecisionTable, config: &GaConfig) -> Result<ReductReport> {
    ga_search_with(&FrddEvaluator::new(table), config)
}

fn tournament<'a>(pop: &'a [Frog], rng: &mut SearchRng) -> &'a Frog {
    let a = &pop[rng.random_range(0..pop.len())];
    let b = &pop[rng.random_range(0..pop.len())];
    if b.rank_cmp(a).is_lt() {
        b
    } else {
        a
    }
}

fn mutate(mask: &mut FeatureMask, p: f64, rng: &mut SearchRng) {
    for i in 0..mask.len() {
        if rng.random::<f64>() < p {
            mask.set(i, !mask.get(i));
        }
    }
}

/// Generational GA: size-2 tournaments, one-point crossover, per-bit mutation and one elite.
/// Offspring with no selected feature are replaced by random feasible genomes.
pub fn ga_search_with<E: SubsetEvaluator + ?Sized>(evaluator: &E, config: &GaConfig) -> Result<ReductReport> {
    config.validate()?;
    let started = Instant::now();
    let calls_before = evaluator.evaluations();
    let l = evaluator.feature_count();
    let mut rng = seeded(config.rng_seed);

    let initial: Vec<FeatureMask> = (0..config.population)
        .map(|_| FeatureMask::random_feasible(l, &mut rng))
        .collect();
    let mut pop = evaluate_all(initial, evaluator);
    rank(&mut pop);
    let mut trace = vec![TracePoint::from(&pop[0])];

    for _ in 0..config.generations {
        let mut children: Vec<FeatureMask> = Vec::with_capacity(config.population);
        while children.len() + 1 < config.population {
            let mut a = tournament(&pop, &mut rng).mask.clone();
            let mut b = tournament(&pop, &mut rng).mask.clone();
            if l > 1 && rng.random::<f64>() < config.p_crossover {
                let cut = rng.random_range(1..l);
                for i in cut..l {
                    let (x, y) = (a.get(i), b.get(i));
                    a.set(i, y);
                    b.set(i, x);
                }
            }
            for child in [&mut a, &mut b] {
                mutate(child, config.p_mutation, &mut rng);
                if child.is_empty() {
                    *child = FeatureMask::random_feasible(l, &mut rng);
                }
            }
            children.push(a);
            if children.len() + 1 < config.population {
                children.push(b);
            }
        }
        let elite = pop[0].clone();
        let mut next = evaluate_all(children, evaluator);
        next.push(elite);
        rank(&mut next);
        pop = next;
        trace.push(TracePoint::from(&pop[0]));
    }

    let best = pop[0].clone();
    Ok(ReductReport::from_candidates(
        "ga",
        l,
        &best,
        &pop,
        trace,
        evaluator.evaluations() - calls_before,
        started.elapsed().as_secs_f64() * 1e3,
        StopReason::Generations,
        json!({
            "population": config.population,
            "generations": config.generations,
            "p_crossover": config.p_crossover,
            "p_mutation": config.p_mutation,
            "selection": "tournament-2",
            "crossover": "one-point",
            "elitism": 1,
            "rng_seed": config.rng_seed,
            "rng": RNG_ALGORITHM,
        }),
    ))
}

fn evaluate_all<E: SubsetEvaluator + ?Sized>(masks: Vec<FeatureMask>, evaluator: &E) -> Vec<Frog> {
    masks
        .into_par_iter()
        .map(|m| Frog::evaluate(m, evaluator))
        .collect()
}
