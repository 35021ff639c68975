//! Fuzzy-rough feature selection.
//!
//! Subsets of conditional features are scored by the fuzzy-rough dependency degree of the
//! decision on them, and searched for minimal subsets with a binary shuffled frog leaping
//! algorithm. Greedy, genetic and particle swarm baselines, exhaustive enumeration for
//! small tables, Friedman/Li statistics and a benchmark harness are included.
//!
//! ```
//! use frogsel::{bsfla, synth, SearchConfig};
//!
//! let table = synth::duplicate_feature(24, 3, 0);
//! let config = SearchConfig::auto(table.objects(), table.feature_count()).with_seed(1);
//! let report = bsfla::search(&table, &config).unwrap();
//! assert_eq!(report.best_fitness, 1.0);
//! assert_eq!(report.best_cardinality, 1);
//! ```

pub mod baselines;
pub mod bsfla;
pub mod datatable;
pub mod error;
pub mod fitness;
pub mod fuzzy_rough;
pub mod harness;
pub mod mask;
pub mod oracle;
pub mod report;
pub mod rng;
pub mod stats;
pub mod synth;

pub use bsfla::{DistanceMode, SearchConfig};
pub use datatable::{
    load_table, ColumnRef, DecisionColumn, DecisionTable, FeatureColumn, FeatureKind, LoadOptions,
    MissingPolicy, SigmaMode, TableFormat,
};
pub use error::{Error, Result};
pub use fitness::{FrddEvaluator, Frog, SubsetEvaluator};
pub use fuzzy_rough::{crisp_regions, frdd, pos_dissimilarity, CrispRegions, FrddValue};
pub use harness::Algorithm;
pub use mask::FeatureMask;
pub use report::{ReductReport, StopReason, TracePoint};
