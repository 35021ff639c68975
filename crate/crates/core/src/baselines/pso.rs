use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::datatable::DecisionTable;
use crate::error::{Error, Result};
use crate::fitness::{Frog, FrddEvaluator, SubsetEvaluator};
use crate::mask::FeatureMask;
use crate::report::{ReductReport, StopReason, TracePoint};
use crate::rng::{seeded, RNG_ALGORITHM};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsoConfig {
    pub particles: usize,
    pub iterations: usize,
    pub c1: f64,
    pub c2: f64,
    pub v_max: f64,
    pub inertia: f64,
    pub rng_seed: u64,
}

impl Default for PsoConfig {
    fn default() -> Self {
        PsoConfig {
            particles: 900,
            iterations: 5,
            c1: 2.0,
            c2: 2.0,
            v_max: 4.0,
            inertia: 1.0,
            rng_seed: 0,
        }
    }
}

impl PsoConfig {
    pub fn validate(&self) -> Result<()> {
        if self.particles == 0 {
            return Err(Error::Config("PSO needs at least one particle".into()));
        }
        if !(self.v_max > 0.0) {
            return Err(Error::Config(format!("v_max must be positive, got {}", self.v_max)));
        }
        Ok(())
    }
}

#[inline]
fn sigmoid(v: f64) -> f64 {
    1.0 / (1.0 + (-v).exp())
}

/// Binary swarm state: per-bit real velocities, current positions and personal bests.
#[derive(Debug, Clone)]
pub struct Swarm {
    pub positions: Vec<FeatureMask>,
    pub velocities: Vec<Vec<f64>>,
    pub personal_best: Vec<Frog>,
}

impl Swarm {
    pub fn random<R: Rng + ?Sized, E: SubsetEvaluator + ?Sized>(
        particles: usize,
        v_max: f64,
        evaluator: &E,
        rng: &mut R,
    ) -> Self {
        let l = evaluator.feature_count();
        let positions: Vec<FeatureMask> = (0..particles)
            .map(|_| FeatureMask::random_feasible(l, rng))
            .collect();
        let velocities = (0..particles)
            .map(|_| (0..l).map(|_| rng.random_range(-v_max..=v_max)).collect())
            .collect();
        Self::with_state(positions, velocities, evaluator)
    }

    pub fn with_state<E: SubsetEvaluator + ?Sized>(
        positions: Vec<FeatureMask>,
        velocities: Vec<Vec<f64>>,
        evaluator: &E,
    ) -> Self {
        let personal_best = positions
            .par_iter()
            .map(|m| Frog::evaluate(m.clone(), evaluator))
            .collect();
        Swarm {
            positions,
            velocities,
            personal_best,
        }
    }

    /// Best personal best under the ranking order.
    pub fn global_best(&self) -> &Frog {
        self.personal_best
            .iter()
            .min_by(|a, b| a.rank_cmp(b))
            .expect("swarm is non-empty")
    }

    /// One velocity/position update followed by evaluation and personal-best refresh.
    pub fn step<R: Rng + ?Sized, E: SubsetEvaluator + ?Sized>(
        &mut self,
        config: &PsoConfig,
        evaluator: &E,
        rng: &mut R,
    ) {
        let gbest = self.global_best().mask.clone();
        let l = gbest.len();
        for p in 0..self.positions.len() {
            let pbest = &self.personal_best[p].mask;
            let x = &mut self.positions[p];
            let v = &mut self.velocities[p];
            for i in 0..l {
                let xi = x.get(i) as u8 as f64;
                let r1: f64 = rng.random();
                let r2: f64 = rng.random();
                let vi = config.inertia * v[i]
                    + config.c1 * r1 * (pbest.get(i) as u8 as f64 - xi)
                    + config.c2 * r2 * (gbest.get(i) as u8 as f64 - xi);
                v[i] = vi.clamp(-config.v_max, config.v_max);
                let u: f64 = rng.random();
                x.set(i, u < sigmoid(v[i]));
            }
            if x.is_empty() {
                *x = FeatureMask::random_feasible(l, rng);
            }
        }
        let scored: Vec<Frog> = self
            .positions
            .par_iter()
            .map(|m| Frog::evaluate(m.clone(), evaluator))
            .collect();
        for (pb, cand) in self.personal_best.iter_mut().zip(scored) {
            if cand.improves_on(pb) {
                *pb = cand;
            }
        }
    }
}

pub fn pso_search(table: &DecisionTable, config: &PsoConfig) -> Result<ReductReport> {
    pso_search_with(&FrddEvaluator::new(table), config)
}

/// Sigmoid-transfer binary PSO; personal and global bests follow the ranking order.
pub fn pso_search_with<E: SubsetEvaluator + ?Sized>(evaluator: &E, config: &PsoConfig) -> Result<ReductReport> {
    config.validate()?;
    let started = Instant::now();
    let calls_before = evaluator.evaluations();
    let mut rng = seeded(config.rng_seed);
    let mut swarm = Swarm::random(config.particles, config.v_max, evaluator, &mut rng);
    let mut trace = vec![TracePoint::from(swarm.global_best())];
    for _ in 0..config.iterations {
        swarm.step(config, evaluator, &mut rng);
        trace.push(TracePoint::from(swarm.global_best()));
    }
    let best = swarm.global_best().clone();
    Ok(ReductReport::from_candidates(
        "pso",
        evaluator.feature_count(),
        &best,
        &swarm.personal_best,
        trace,
        evaluator.evaluations() - calls_before,
        started.elapsed().as_secs_f64() * 1e3,
        StopReason::Iterations,
        json!({
            "particles": config.particles,
            "iterations": config.iterations,
            "c1": config.c1,
            "c2": config.c2,
            "v_max": config.v_max,
            "inertia": config.inertia,
            "transfer": "sigmoid",
            "rng_seed": config.rng_seed,
            "rng": RNG_ALGORITHM,
        }),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    struct FirstTwo(usize);

    impl SubsetEvaluator for FirstTwo {
        fn feature_count(&self) -> usize {
            self.0
        }
        fn fitness(&self, mask: &FeatureMask) -> f64 {
            (mask.get(0) as u8 + mask.get(1) as u8) as f64 / 2.0
        }
        fn evaluations(&self) -> u64 {
            0
        }
    }

    /// Yields all-zero words, so every uniform draw is 0.
    struct Zeros;

    impl RngCore for Zeros {
        fn next_u32(&mut self) -> u32 {
            0
        }
        fn next_u64(&mut self) -> u64 {
            0
        }
        fn fill_bytes(&mut self, dst: &mut [u8]) {
            dst.fill(0);
        }
    }

    #[test]
    fn forced_transfer_keeps_state_fixed() {
        let e = FirstTwo(4);
        let full = FeatureMask::full(4);
        let mut swarm = Swarm::with_state(vec![full.clone(); 3], vec![vec![0.0; 4]; 3], &e);
        let cfg = PsoConfig::default();
        for _ in 0..3 {
            swarm.step(&cfg, &e, &mut Zeros);
            assert!(swarm.positions.iter().all(|p| *p == full));
            assert!(swarm.velocities.iter().flatten().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn velocities_are_clamped() {
        let e = FirstTwo(5);
        let mut rng = seeded(8);
        let cfg = PsoConfig {
            particles: 10,
            v_max: 0.5,
            ..Default::default()
        };
        let mut swarm = Swarm::random(cfg.particles, cfg.v_max, &e, &mut rng);
        for _ in 0..4 {
            swarm.step(&cfg, &e, &mut rng);
        }
        assert!(swarm.velocities.iter().flatten().all(|v| v.abs() <= 0.5));
        assert!(swarm.positions.iter().all(|p| !p.is_empty()));
    }

    #[test]
    fn finds_optimum_on_toy_objective() {
        let r = pso_search_with(&FirstTwo(6), &PsoConfig { rng_seed: 5, ..Default::default() }).unwrap();
        assert_eq!(r.best_fitness, 1.0);
        assert_eq!(r.best_cardinality, 2);
    }

    #[test]
    fn rejects_non_positive_vmax() {
        let cfg = PsoConfig {
            v_max: 0.0,
            ..Default::default()
        };
        assert!(pso_search_with(&FirstTwo(3), &cfg).is_err());
    }
}
