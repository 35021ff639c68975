use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use log::{info, warn};
use rayon::prelude::*;
use serde::Serialize;

use super::knn::knn_cv_accuracy;
use super::wins::{wins_from_matrix, WinCount};
use super::{run_algorithm, Algorithm, RunSpec};
use crate::datatable::{load_table, DecisionTable, TableFormat};
use crate::error::{Error, Result};
use crate::report::StopReason;
use crate::stats::ScoreMatrix;

/// Outcome of one (dataset, algorithm, seed) cell, without timing.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellResult {
    pub dataset: String,
    pub algorithm: Algorithm,
    pub seed: u64,
    pub error: Option<String>,
    pub best_fitness: Option<f64>,
    pub best_cardinality: Option<usize>,
    pub reduct_count: usize,
    pub evaluations: u64,
    pub stop_reason: Option<StopReason>,
    /// 1-NN cross-validated accuracy on the first reduct.
    pub proxy_accuracy: Option<f64>,
    /// The full report with its timing field removed.
    pub report: Option<serde_json::Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellTiming {
    pub dataset: String,
    pub algorithm: Algorithm,
    pub seed: u64,
    pub wall_time_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchmarkReport {
    pub config_echo: serde_json::Value,
    pub cells: Vec<CellResult>,
    pub timings: Vec<CellTiming>,
}

/// What a win is counted on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    ProxyAccuracy,
    Fitness,
    /// Fewer selected features is better.
    Cardinality,
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "accuracy" | "proxy_accuracy" => Ok(Metric::ProxyAccuracy),
            "fitness" => Ok(Metric::Fitness),
            "features" | "cardinality" => Ok(Metric::Cardinality),
            other => Err(Error::Config(format!("unknown metric `{other}`"))),
        }
    }
}

impl CellResult {
    pub fn failed(&self) -> bool {
        self.error.is_some()
    }

    fn metric(&self, metric: Metric) -> Option<f64> {
        match metric {
            Metric::ProxyAccuracy => self.proxy_accuracy,
            Metric::Fitness => self.best_fitness,
            Metric::Cardinality => self.best_cardinality.map(|c| -(c as f64)),
        }
    }
}

fn failed_cell(dataset: &str, algorithm: Algorithm, seed: u64, error: String) -> CellResult {
    CellResult {
        dataset: dataset.to_string(),
        algorithm,
        seed,
        error: Some(error),
        best_fitness: None,
        best_cardinality: None,
        reduct_count: 0,
        evaluations: 0,
        stop_reason: None,
        proxy_accuracy: None,
        report: None,
    }
}

fn run_cell(
    dataset: &str,
    table: &std::result::Result<DecisionTable, String>,
    algorithm: Algorithm,
    seed: u64,
    spec: &RunSpec,
) -> (CellResult, f64) {
    let table = match table {
        Ok(t) => t,
        Err(e) => return (failed_cell(dataset, algorithm, seed, e.clone()), 0.0),
    };
    let started = Instant::now();
    let outcome = run_algorithm(table, algorithm, &spec.settings, seed).and_then(|report| {
        let proxy = match (spec.proxy_folds, report.reducts.first()) {
            (Some(folds), Some(mask)) => Some(knn_cv_accuracy(table, mask, folds, seed)?),
            _ => None,
        };
        Ok((report, proxy))
    });
    let wall = started.elapsed().as_secs_f64() * 1e3;
    let cell = match outcome {
        Ok((report, proxy_accuracy)) => CellResult {
            dataset: dataset.to_string(),
            algorithm,
            seed,
            error: None,
            best_fitness: Some(report.best_fitness),
            best_cardinality: Some(report.best_cardinality),
            reduct_count: report.reducts.len(),
            evaluations: report.evaluations,
            stop_reason: Some(report.stop_reason),
            proxy_accuracy,
            report: Some(serde_json::from_str(&report.to_json_without_timing()).expect("valid JSON")),
        },
        Err(e) => failed_cell(dataset, algorithm, seed, e.to_string()),
    };
    (cell, wall)
}

/// Execute every cell of the grid on a pool of `spec.jobs` workers.
///
/// Cell failures, including unloadable datasets, are recorded and the run continues.
/// Cells come back in dataset, algorithm, seed order whatever the scheduling.
pub fn run(spec: &RunSpec) -> Result<BenchmarkReport> {
    spec.validate()?;
    let options = spec.load_options();
    let tables: Vec<(String, std::result::Result<DecisionTable, String>)> = spec
        .datasets
        .iter()
        .map(|path| {
            let name = path.file_stem().map_or_else(
                || path.display().to_string(),
                |s| s.to_string_lossy().into_owned(),
            );
            let table = load_table(path, TableFormat::from_path(path), &options).map_err(|e| e.to_string());
            if let Err(e) = &table {
                warn!("cannot load {}: {e}", path.display());
            }
            (name, table)
        })
        .collect();

    let grid: Vec<(usize, Algorithm, u64)> = (0..tables.len())
        .flat_map(|d| {
            spec.algorithms
                .iter()
                .flat_map(move |&a| spec.seeds.iter().map(move |&s| (d, a, s)))
        })
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.jobs)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    let results: Vec<(CellResult, f64)> = pool.install(|| {
        grid.par_iter()
            .map(|&(d, algorithm, seed)| {
                let (name, table) = &tables[d];
                let out = run_cell(name, table, algorithm, seed, spec);
                info!("{name} {algorithm} seed {seed}: {:.1} ms", out.1);
                out
            })
            .collect()
    });

    let timings = results
        .iter()
        .map(|(c, wall)| CellTiming {
            dataset: c.dataset.clone(),
            algorithm: c.algorithm,
            seed: c.seed,
            wall_time_ms: *wall,
        })
        .collect();
    Ok(BenchmarkReport {
        config_echo: spec.echo(),
        cells: results.into_iter().map(|(c, _)| c).collect(),
        timings,
    })
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

impl BenchmarkReport {
    pub fn failures(&self) -> usize {
        self.cells.iter().filter(|c| c.failed()).count()
    }

    /// One row per cell.
    pub fn aggregate_csv(&self) -> String {
        let mut out = String::from(
            "dataset,algorithm,seed,status,best_fitness,best_cardinality,reducts,evaluations,stop_reason,proxy_accuracy\n",
        );
        for c in &self.cells {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                c.dataset,
                c.algorithm,
                c.seed,
                if c.failed() { "failed" } else { "ok" },
                opt(c.best_fitness),
                opt(c.best_cardinality),
                c.reduct_count,
                c.evaluations,
                opt(c.stop_reason),
                opt(c.proxy_accuracy),
            );
        }
        out
    }

    /// Mean selected-feature count per dataset (rows) and algorithm (columns); `-` where
    /// every seed failed.
    pub fn feature_table_csv(&self) -> String {
        let mut algorithms: Vec<Algorithm> = Vec::new();
        let mut sums: BTreeMap<(&str, Algorithm), (usize, usize)> = BTreeMap::new();
        let mut datasets: Vec<&str> = Vec::new();
        for c in &self.cells {
            if !algorithms.contains(&c.algorithm) {
                algorithms.push(c.algorithm);
            }
            if !datasets.contains(&c.dataset.as_str()) {
                datasets.push(&c.dataset);
            }
            if let Some(k) = c.best_cardinality {
                let e = sums.entry((&c.dataset, c.algorithm)).or_default();
                e.0 += k;
                e.1 += 1;
            }
        }
        let mut out = String::from("dataset");
        for a in &algorithms {
            let _ = write!(out, ",{a}");
        }
        out.push('\n');
        for d in datasets {
            out.push_str(d);
            for &a in &algorithms {
                match sums.get(&(d, a)) {
                    Some(&(total, n)) => {
                        let _ = write!(out, ",{:.2}", total as f64 / n as f64);
                    }
                    None => out.push_str(",-"),
                }
            }
            out.push('\n');
        }
        out
    }

    /// Mean of `metric` over seeds, per dataset and algorithm, as a score matrix.
    pub fn score_matrix(&self, metric: Metric) -> Result<ScoreMatrix> {
        let mut algorithms: Vec<Algorithm> = Vec::new();
        let mut datasets: Vec<String> = Vec::new();
        for c in &self.cells {
            if !algorithms.contains(&c.algorithm) {
                algorithms.push(c.algorithm);
            }
            if !datasets.contains(&c.dataset) {
                datasets.push(c.dataset.clone());
            }
        }
        let scores = datasets
            .iter()
            .map(|d| {
                algorithms
                    .iter()
                    .map(|&a| {
                        let values: Vec<f64> = self
                            .cells
                            .iter()
                            .filter(|c| &c.dataset == d && c.algorithm == a)
                            .filter_map(|c| c.metric(metric))
                            .collect();
                        (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
                    })
                    .collect()
            })
            .collect();
        ScoreMatrix::new(datasets, algorithms.iter().map(|a| a.to_string()).collect(), scores)
    }

    /// Deterministic JSON: configuration and cells, no timings.
    pub fn results_json(&self) -> String {
        let v = serde_json::json!({ "config": self.config_echo, "cells": self.cells });
        serde_json::to_string_pretty(&v).expect("report serializes")
    }

    /// Write `results.json`, `aggregate.csv`, `features.csv`, `timings.json` and one JSON
    /// file per cell under `cells/`.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        let cells_dir = dir.join("cells");
        fs::create_dir_all(&cells_dir).map_err(|e| Error::io(&cells_dir, e))?;
        let write = |path: &Path, text: String| fs::write(path, text).map_err(|e| Error::io(path, e));
        for c in &self.cells {
            let file = format!("{}__{}__seed{}.json", sanitize(&c.dataset), c.algorithm, c.seed);
            write(&cells_dir.join(file), serde_json::to_string_pretty(c).expect("cell serializes"))?;
        }
        write(&dir.join("results.json"), self.results_json())?;
        write(&dir.join("aggregate.csv"), self.aggregate_csv())?;
        write(&dir.join("features.csv"), self.feature_table_csv())?;
        write(
            &dir.join("timings.json"),
            serde_json::to_string_pretty(&self.timings).expect("timings serialize"),
        )
    }
}

fn sanitize(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

/// Wins per algorithm across the report's datasets.
pub fn wins_table(report: &BenchmarkReport, metric: Metric) -> Result<Vec<WinCount>> {
    Ok(wins_from_matrix(&report.score_matrix(metric)?))
}
