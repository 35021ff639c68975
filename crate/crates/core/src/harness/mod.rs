//! Experiment plumbing: algorithm dispatch, benchmark grids, proxy accuracy, exports.

mod config;
mod export;
mod knn;
mod run;
mod wins;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::json;

pub use config::{apply_ini, load_config, parse_seeds};
pub use export::export_reduced;
pub use knn::{fold_assignment, knn_cv_accuracy, DEFAULT_FOLDS};
pub use run::{run, wins_table, BenchmarkReport, CellResult, CellTiming, Metric};
pub use wins::{wins_from_matrix, WinCount};

use crate::baselines::{ga_search, pso_search, quickreduct, GaConfig, PsoConfig};
use crate::bsfla::{self, DistanceMode, SearchConfig};
use crate::datatable::{ColumnRef, DecisionTable, LoadOptions, SigmaMode};
use crate::error::{Error, Result};
use crate::report::ReductReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Bsfla,
    QuickReduct,
    Ga,
    Pso,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::Bsfla, Algorithm::QuickReduct, Algorithm::Ga, Algorithm::Pso];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Bsfla => "bsfla",
            Algorithm::QuickReduct => "quickreduct",
            Algorithm::Ga => "ga",
            Algorithm::Pso => "pso",
        }
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bsfla" | "b-sfla" => Ok(Algorithm::Bsfla),
            "quickreduct" | "qr" | "l-frfs" => Ok(Algorithm::QuickReduct),
            "ga" => Ok(Algorithm::Ga),
            "pso" => Ok(Algorithm::Pso),
            other => Err(Error::Config(format!(
                "unknown algorithm `{other}` (expected bsfla, quickreduct, ga or pso)"
            ))),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Base parameter set for the frog search before individual overrides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BsflaPreset {
    /// Feature-proportional for small tables, fixed for large ones.
    #[default]
    Auto,
    /// The fixed large-table set on every table.
    Fixed,
}

impl FromStr for BsflaPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "auto" => Ok(BsflaPreset::Auto),
            "fixed" => Ok(BsflaPreset::Fixed),
            other => Err(Error::Config(format!("unknown preset `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BsflaSettings {
    pub preset: BsflaPreset,
    pub memeplexes: Option<usize>,
    pub frogs_per_memeplex: Option<usize>,
    pub evolution_steps: Option<usize>,
    pub submemeplex: Option<usize>,
    pub max_step: Option<usize>,
    pub max_shuffles: Option<usize>,
    pub stall_shuffles: Option<usize>,
    pub distance: DistanceMode,
}

impl BsflaSettings {
    /// Effective configuration for a table of `objects` x `features`.
    pub fn resolve(&self, objects: usize, features: usize, seed: u64) -> SearchConfig {
        let mut c = match self.preset {
            BsflaPreset::Auto => SearchConfig::auto(objects, features),
            BsflaPreset::Fixed => SearchConfig::fixed(features),
        };
        let set = |slot: &mut usize, v: Option<usize>| {
            if let Some(v) = v {
                *slot = v;
            }
        };
        set(&mut c.memeplexes, self.memeplexes);
        set(&mut c.frogs_per_memeplex, self.frogs_per_memeplex);
        set(&mut c.evolution_steps, self.evolution_steps);
        set(&mut c.submemeplex, self.submemeplex);
        set(&mut c.max_step, self.max_step);
        set(&mut c.max_shuffles, self.max_shuffles);
        set(&mut c.stall_shuffles, self.stall_shuffles);
        c.distance_mode = self.distance;
        c.with_seed(seed)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmSettings {
    pub bsfla: BsflaSettings,
    pub ga: GaConfig,
    pub pso: PsoConfig,
}

impl AlgorithmSettings {
    pub fn validate(&self) -> Result<()> {
        self.ga.validate()?;
        self.pso.validate()
    }
}

/// Run one algorithm on a loaded table with `seed`.
pub fn run_algorithm(
    table: &DecisionTable,
    algorithm: Algorithm,
    settings: &AlgorithmSettings,
    seed: u64,
) -> Result<ReductReport> {
    match algorithm {
        Algorithm::Bsfla => {
            let config = settings.bsfla.resolve(table.objects(), table.feature_count(), seed);
            bsfla::search(table, &config)
        }
        Algorithm::QuickReduct => Ok(quickreduct(table)),
        Algorithm::Ga => ga_search(
            table,
            &GaConfig {
                rng_seed: seed,
                ..settings.ga.clone()
            },
        ),
        Algorithm::Pso => pso_search(
            table,
            &PsoConfig {
                rng_seed: seed,
                ..settings.pso.clone()
            },
        ),
    }
}

/// A benchmark grid: every dataset x algorithm x seed.
#[derive(Debug, Clone)]
pub struct RunSpec {
    pub datasets: Vec<PathBuf>,
    pub algorithms: Vec<Algorithm>,
    pub seeds: Vec<u64>,
    pub output: Option<PathBuf>,
    pub class: Option<String>,
    pub sigma: SigmaMode,
    pub normalize: bool,
    pub settings: AlgorithmSettings,
    /// Folds for the 1-NN proxy accuracy; `None` skips it.
    pub proxy_folds: Option<usize>,
    pub jobs: usize,
}

impl Default for RunSpec {
    fn default() -> Self {
        RunSpec {
            datasets: Vec::new(),
            algorithms: vec![Algorithm::Bsfla],
            seeds: vec![0],
            output: None,
            class: None,
            sigma: SigmaMode::Variance,
            normalize: true,
            settings: AlgorithmSettings::default(),
            proxy_folds: None,
            jobs: 1,
        }
    }
}

impl RunSpec {
    pub fn validate(&self) -> Result<()> {
        if self.datasets.is_empty() {
            return Err(Error::Config("no datasets given".into()));
        }
        if self.algorithms.is_empty() {
            return Err(Error::Config("no algorithms given".into()));
        }
        if self.seeds.is_empty() {
            return Err(Error::Config("no seeds given".into()));
        }
        if self.jobs == 0 {
            return Err(Error::Config("jobs must be at least 1".into()));
        }
        if self.proxy_folds.is_some_and(|f| f < 2) {
            return Err(Error::Config("proxy accuracy needs at least 2 folds".into()));
        }
        self.settings.validate()
    }

    pub fn load_options(&self) -> LoadOptions {
        LoadOptions {
            class: self.class.as_deref().map(|c| c.parse::<ColumnRef>().expect("infallible")),
            sigma: self.sigma,
            normalize: self.normalize,
            ..LoadOptions::default()
        }
    }

    /// Every effective setting, for the report header.
    pub fn echo(&self) -> serde_json::Value {
        json!({
            "datasets": self.datasets,
            "algorithms": self.algorithms,
            "seeds": self.seeds,
            "class": self.class,
            "sigma": self.sigma,
            "normalize": self.normalize,
            "settings": self.settings,
            "proxy_folds": self.proxy_folds,
            "jobs": self.jobs,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("simulated-annealing".parse::<Algorithm>().is_err());
    }

    #[test]
    fn overrides_apply_on_top_of_preset() {
        let s = BsflaSettings {
            memeplexes: Some(4),
            max_shuffles: Some(3),
            ..BsflaSettings::default()
        };
        let c = s.resolve(178, 13, 9);
        assert_eq!((c.memeplexes, c.frogs_per_memeplex, c.max_shuffles, c.rng_seed), (4, 10, 3, 9));
        let fixed = BsflaSettings {
            preset: BsflaPreset::Fixed,
            ..BsflaSettings::default()
        };
        assert_eq!(fixed.resolve(178, 13, 0).memeplexes, 30);
    }

    #[test]
    fn empty_spec_rejected() {
        assert!(RunSpec::default().validate().is_err());
        let spec = RunSpec {
            datasets: vec!["x.csv".into()],
            seeds: vec![],
            ..RunSpec::default()
        };
        assert!(spec.validate().is_err());
    }
}
