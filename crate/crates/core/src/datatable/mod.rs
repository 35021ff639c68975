//! Decision tables: conditional feature columns plus one nominal decision column.

mod arff;
mod delimited;

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mask::FeatureMask;

pub use arff::{read_arff, write_arff};
pub use delimited::{read_csv, write_csv};

/// How the per-feature spread used by the similarity relation is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SigmaMode {
    /// Population variance (default).
    #[default]
    Variance,
    /// Population standard deviation.
    Stddev,
}

impl FromStr for SigmaMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "variance" | "var" => Ok(SigmaMode::Variance),
            "stddev" | "std" => Ok(SigmaMode::Stddev),
            other => Err(Error::Config(format!("unknown sigma mode `{other}`"))),
        }
    }
}

impl fmt::Display for SigmaMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SigmaMode::Variance => "variance",
            SigmaMode::Stddev => "stddev",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MissingPolicy {
    #[default]
    Reject,
    /// Column mean for real features, mode for nominal ones.
    Impute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Arff,
}

impl TableFormat {
    /// Guess the format from a file extension, defaulting to CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("arff") => TableFormat::Arff,
            _ => TableFormat::Csv,
        }
    }
}

impl FromStr for TableFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(TableFormat::Csv),
            "arff" => Ok(TableFormat::Arff),
            other => Err(Error::Config(format!("unknown table format `{other}`"))),
        }
    }
}

/// Names a column either by header name or by zero-based position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnRef {
    Name(String),
    Index(usize),
}

impl ColumnRef {
    pub(crate) fn resolve(&self, names: &[String]) -> Result<usize> {
        match self {
            ColumnRef::Index(i) if *i < names.len() => Ok(*i),
            ColumnRef::Index(i) => Err(Error::Schema(format!(
                "column index {i} out of range ({} columns)",
                names.len()
            ))),
            ColumnRef::Name(n) => names
                .iter()
                .position(|c| c == n)
                .ok_or_else(|| Error::Schema(format!("no column named `{n}`"))),
        }
    }
}

impl FromStr for ColumnRef {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s.parse::<usize>() {
            Ok(i) => ColumnRef::Index(i),
            Err(_) => ColumnRef::Name(s.to_string()),
        })
    }
}

#[derive(Debug, Clone)]
pub struct LoadOptions {
    /// Decision column; `None` means the last column (CSV) or the `class` attribute (ARFF).
    pub class: Option<ColumnRef>,
    pub sigma: SigmaMode,
    /// Min-max scale real columns to [0, 1] before computing sigma.
    pub normalize: bool,
    pub missing: MissingPolicy,
    /// Numeric-looking CSV columns to treat as nominal.
    pub force_nominal: Vec<ColumnRef>,
    /// Integer columns with at most this many distinct values are reported as nominal candidates.
    pub nominal_threshold: usize,
    /// Table name; defaults to the file stem.
    pub name: Option<String>,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions {
            class: None,
            sigma: SigmaMode::Variance,
            normalize: true,
            missing: MissingPolicy::Reject,
            force_nominal: Vec::new(),
            nominal_threshold: 10,
            name: None,
        }
    }
}

/// Population variance, or population standard deviation in `Stddev` mode.
///
/// Uses a two-pass mean/deviation sum, so the result depends only on the multiset of values
/// up to rounding of the summation.
pub fn compute_sigma(values: &[f64], mode: SigmaMode) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let var = var.max(0.0);
    match mode {
        SigmaMode::Variance => var,
        SigmaMode::Stddev => var.sqrt(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureKind {
    Real,
    Nominal,
}

/// One conditional attribute.
///
/// Nominal values are stored as symbol indices (exact small integers) so both kinds share
/// one value vector.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureColumn {
    name: String,
    kind: FeatureKind,
    values: Vec<f64>,
    symbols: Vec<String>,
    sigma: f64,
}

impl FeatureColumn {
    /// A real-valued column. Panics on non-finite values.
    pub fn real(name: impl Into<String>, values: Vec<f64>, mode: SigmaMode) -> Self {
        assert!(
            values.iter().all(|v| v.is_finite()),
            "real feature values must be finite"
        );
        let sigma = compute_sigma(&values, mode);
        FeatureColumn {
            name: name.into(),
            kind: FeatureKind::Real,
            values,
            symbols: Vec::new(),
            sigma,
        }
    }

    /// A nominal column given per-object symbol indices into `symbols`.
    pub fn nominal(name: impl Into<String>, codes: Vec<usize>, symbols: Vec<String>) -> Self {
        assert!(
            codes.iter().all(|&c| c < symbols.len()),
            "nominal code out of symbol range"
        );
        FeatureColumn {
            name: name.into(),
            kind: FeatureKind::Nominal,
            values: codes.into_iter().map(|c| c as f64).collect(),
            symbols,
            sigma: 0.0,
        }
    }

    /// Nominal column from raw labels, symbols numbered by first appearance.
    pub fn nominal_from_labels<S: AsRef<str>>(name: impl Into<String>, labels: &[S]) -> Self {
        let (codes, symbols) = encode_labels(labels);
        Self::nominal(name, codes, symbols)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> FeatureKind {
        self.kind
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Rendered value of one object (symbol for nominal columns).
    pub fn display_value(&self, row: usize) -> String {
        match self.kind {
            FeatureKind::Real => format!("{}", self.values[row]),
            FeatureKind::Nominal => self.symbols[self.values[row] as usize].clone(),
        }
    }

    fn min_max_normalize(&mut self, mode: SigmaMode) {
        if self.kind != FeatureKind::Real {
            return;
        }
        let lo = self.values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let span = hi - lo;
        for v in &mut self.values {
            *v = if span > 0.0 { (*v - lo) / span } else { 0.0 };
        }
        self.sigma = compute_sigma(&self.values, mode);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecisionColumn {
    name: String,
    labels: Vec<usize>,
    class_names: Vec<String>,
}

impl DecisionColumn {
    pub fn new(name: impl Into<String>, labels: Vec<usize>, class_names: Vec<String>) -> Result<Self> {
        if class_names.is_empty() {
            return Err(Error::Schema("decision has no classes".into()));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= class_names.len()) {
            return Err(Error::Schema(format!("class index {bad} out of range")));
        }
        Ok(DecisionColumn {
            name: name.into(),
            labels,
            class_names,
        })
    }

    pub fn from_labels<S: AsRef<str>>(name: impl Into<String>, labels: &[S]) -> Result<Self> {
        let (codes, names) = encode_labels(labels);
        Self::new(name, codes, names)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn classes(&self) -> usize {
        self.class_names.len()
    }
}

fn encode_labels<S: AsRef<str>>(labels: &[S]) -> (Vec<usize>, Vec<String>) {
    let mut symbols: Vec<String> = Vec::new();
    let codes = labels
        .iter()
        .map(|l| {
            let l = l.as_ref();
            match symbols.iter().position(|s| s == l) {
                Some(i) => i,
                None => {
                    symbols.push(l.to_string());
                    symbols.len() - 1
                }
            }
        })
        .collect();
    (codes, symbols)
}

/// Objects described by conditional features plus a decision. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionTable {
    name: String,
    features: Vec<FeatureColumn>,
    decision: DecisionColumn,
    sigma_mode: SigmaMode,
    normalized: bool,
}

/// JSON summary of a loaded table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableSummary {
    pub name: String,
    pub objects: usize,
    pub features: usize,
    pub classes: usize,
    pub sigma_mode: SigmaMode,
    pub normalized: bool,
}

impl DecisionTable {
    pub fn new(
        name: impl Into<String>,
        features: Vec<FeatureColumn>,
        decision: DecisionColumn,
    ) -> Result<Self> {
        let objects = decision.labels.len();
        if objects == 0 {
            return Err(Error::Schema("table has no objects".into()));
        }
        if features.is_empty() {
            return Err(Error::Schema("table has no conditional features".into()));
        }
        if let Some(f) = features.iter().find(|f| f.len() != objects) {
            return Err(Error::Schema(format!(
                "feature `{}` has {} values, expected {objects}",
                f.name,
                f.len()
            )));
        }
        Ok(DecisionTable {
            name: name.into(),
            features,
            decision,
            sigma_mode: SigmaMode::Variance,
            normalized: false,
        })
    }

    /// Rescale real columns to [0, 1] and recompute every sigma under `mode`.
    pub fn with_preprocessing(mut self, mode: SigmaMode, normalize: bool) -> Self {
        for f in &mut self.features {
            if normalize {
                f.min_max_normalize(mode);
            } else if f.kind == FeatureKind::Real {
                f.sigma = compute_sigma(&f.values, mode);
            }
        }
        self.sigma_mode = mode;
        self.normalized = normalize;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn objects(&self) -> usize {
        self.decision.labels.len()
    }

    /// Number of conditional features, `L`.
    pub fn feature_count(&self) -> usize {
        self.features.len()
    }

    pub fn features(&self) -> &[FeatureColumn] {
        &self.features
    }

    pub fn feature(&self, i: usize) -> &FeatureColumn {
        &self.features[i]
    }

    pub fn decision(&self) -> &DecisionColumn {
        &self.decision
    }

    pub fn sigma_mode(&self) -> SigmaMode {
        self.sigma_mode
    }

    pub fn normalized(&self) -> bool {
        self.normalized
    }

    pub fn summary(&self) -> TableSummary {
        TableSummary {
            name: self.name.clone(),
            objects: self.objects(),
            features: self.feature_count(),
            classes: self.decision.classes(),
            sigma_mode: self.sigma_mode,
            normalized: self.normalized,
        }
    }

    /// Keep only the selected conditional columns; sigma values are carried over unchanged.
    pub fn project(&self, mask: &FeatureMask) -> Result<DecisionTable> {
        mask.check_len(self.feature_count())?;
        if mask.is_empty() {
            return Err(Error::EmptyMask);
        }
        Ok(DecisionTable {
            name: self.name.clone(),
            features: mask.ones().map(|i| self.features[i].clone()).collect(),
            decision: self.decision.clone(),
            sigma_mode: self.sigma_mode,
            normalized: self.normalized,
        })
    }
}

/// Load a table from disk and apply the sigma/normalization options.
pub fn load_table(path: &Path, format: TableFormat, options: &LoadOptions) -> Result<DecisionTable> {
    let raw = match format {
        TableFormat::Csv => read_csv(path, options)?,
        TableFormat::Arff => read_arff(path, options)?,
    };
    Ok(raw.with_preprocessing(options.sigma, options.normalize))
}

/// Per-column raw cells, shared by both readers before typing.
pub(crate) struct RawColumn {
    pub name: String,
    pub cells: Vec<Option<String>>,
    /// `Some` when the schema declares the column nominal with an explicit symbol order.
    pub declared_symbols: Option<Vec<String>>,
    /// `Some(true)` when the schema declares the column numeric.
    pub declared_numeric: bool,
}

pub(crate) fn is_missing(cell: &str) -> bool {
    let t = cell.trim();
    t.is_empty() || t == "?"
}

/// Type raw columns, apply the missing-value policy and assemble a table.
pub(crate) fn assemble(
    name: String,
    mut columns: Vec<RawColumn>,
    class_idx: usize,
    options: &LoadOptions,
) -> Result<DecisionTable> {
    let names: Vec<String> = columns.iter().map(|c| c.name.clone()).collect();
    let mut forced = Vec::new();
    for r in &options.force_nominal {
        forced.push(r.resolve(&names)?);
    }

    let class_col = columns.remove(class_idx);
    let class_cells: Vec<String> = class_col
        .cells
        .iter()
        .enumerate()
        .map(|(row, c)| {
            c.clone().ok_or_else(|| Error::MissingValue {
                column: class_col.name.clone(),
                row,
            })
        })
        .collect::<Result<_>>()?;
    let decision = match class_col.declared_symbols {
        Some(symbols) => {
            let labels = class_cells
                .iter()
                .map(|c| {
                    symbols.iter().position(|s| s == c).ok_or_else(|| {
                        Error::Schema(format!("class value `{c}` not declared"))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            DecisionColumn::new(class_col.name, labels, symbols)?
        }
        None => DecisionColumn::from_labels(class_col.name, &class_cells)?,
    };

    let mut features = Vec::with_capacity(columns.len());
    for (pos, col) in columns.into_iter().enumerate() {
        let original = if pos >= class_idx { pos + 1 } else { pos };
        let force = forced.contains(&original);
        features.push(type_column(col, force, options)?);
    }
    DecisionTable::new(name, features, decision)
}

fn type_column(col: RawColumn, force_nominal: bool, options: &LoadOptions) -> Result<FeatureColumn> {
    let present: Vec<&str> = col.cells.iter().flatten().map(String::as_str).collect();
    if present.is_empty() {
        return Err(Error::Schema(format!("column `{}` has no values", col.name)));
    }
    let numeric = col.declared_symbols.is_none()
        && !force_nominal
        && (col.declared_numeric
            || present
                .iter()
                .all(|c| c.trim().parse::<f64>().map(f64::is_finite).unwrap_or(false)));

    if numeric {
        let parsed: Vec<Option<f64>> = col
            .cells
            .iter()
            .enumerate()
            .map(|(row, c)| match c {
                None => Ok(None),
                Some(s) => s
                    .trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .map(Some)
                    .ok_or_else(|| Error::Parse {
                        line: row + 1,
                        message: format!("`{s}` in numeric column `{}`", col.name),
                    }),
            })
            .collect::<Result<_>>()?;
        let values = fill_real(&col.name, parsed, options.missing)?;
        let distinct_ints = {
            let mut ints: Vec<i64> = Vec::new();
            let all_int = values.iter().all(|v| v.fract() == 0.0);
            if all_int {
                for v in &values {
                    let i = *v as i64;
                    if !ints.contains(&i) {
                        ints.push(i);
                    }
                    if ints.len() > options.nominal_threshold {
                        break;
                    }
                }
            }
            all_int && ints.len() <= options.nominal_threshold
        };
        if distinct_ints {
            log::info!(
                "column `{}` has few distinct integer values; pass it as nominal to treat it crisply",
                col.name
            );
        }
        Ok(FeatureColumn::real(col.name, values, options.sigma))
    } else {
        let symbols = col.declared_symbols.clone();
        let labels = fill_nominal(&col.name, col.cells, options.missing)?;
        match symbols {
            Some(symbols) => {
                let codes = labels
                    .iter()
                    .map(|l| {
                        symbols.iter().position(|s| s == l).ok_or_else(|| {
                            Error::Schema(format!("value `{l}` not declared for `{}`", col.name))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(FeatureColumn::nominal(col.name, codes, symbols))
            }
            None => Ok(FeatureColumn::nominal_from_labels(col.name, &labels)),
        }
    }
}

fn fill_real(name: &str, cells: Vec<Option<f64>>, policy: MissingPolicy) -> Result<Vec<f64>> {
    if let Some(row) = cells.iter().position(Option::is_none) {
        if policy == MissingPolicy::Reject {
            return Err(Error::MissingValue {
                column: name.to_string(),
                row,
            });
        }
    }
    let present: Vec<f64> = cells.iter().flatten().copied().collect();
    let mean = present.iter().sum::<f64>() / present.len() as f64;
    Ok(cells.into_iter().map(|c| c.unwrap_or(mean)).collect())
}

fn fill_nominal(name: &str, cells: Vec<Option<String>>, policy: MissingPolicy) -> Result<Vec<String>> {
    if let Some(row) = cells.iter().position(Option::is_none) {
        if policy == MissingPolicy::Reject {
            return Err(Error::MissingValue {
                column: name.to_string(),
                row,
            });
        }
    }
    // mode, ties broken by first appearance
    let mut counts: Vec<(&str, usize)> = Vec::new();
    for c in cells.iter().flatten() {
        match counts.iter_mut().find(|(s, _)| s == c) {
            Some((_, n)) => *n += 1,
            None => counts.push((c, 1)),
        }
    }
    let mode = counts
        .iter()
        .fold(("", 0), |best, &(s, n)| if n > best.1 { (s, n) } else { best })
        .0
        .to_string();
    Ok(cells.into_iter().map(|c| c.unwrap_or_else(|| mode.clone())).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn two_feature_table() -> DecisionTable {
        DecisionTable::new(
            "t",
            vec![
                FeatureColumn::real("a", vec![0.1, 0.5, 0.9], SigmaMode::Variance),
                FeatureColumn::nominal_from_labels("b", &["x", "y", "x"]),
            ],
            DecisionColumn::from_labels("d", &["0", "1", "0"]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn sigma_examples() {
        assert_abs_diff_eq!(compute_sigma(&[0.5, 0.6], SigmaMode::Variance), 0.0025, epsilon = 1e-15);
        assert_eq!(compute_sigma(&[3.0, 3.0, 3.0], SigmaMode::Variance), 0.0);
        assert_abs_diff_eq!(compute_sigma(&[0.0, 1.0], SigmaMode::Stddev), 0.5, epsilon = 1e-15);
        assert_eq!(compute_sigma(&[7.0], SigmaMode::Variance), 0.0);
    }

    #[test]
    fn project_identity_and_subset() {
        let t = two_feature_table();
        assert_eq!(t.project(&FeatureMask::full(2)).unwrap(), t);
        let p = t.project(&FeatureMask::from_indices(2, &[0])).unwrap();
        assert_eq!(p.feature_count(), 1);
        assert_eq!(p.objects(), 3);
        assert_eq!(p.feature(0).sigma(), t.feature(0).sigma());
    }

    #[test]
    fn project_rejects_bad_masks() {
        let t = two_feature_table();
        assert!(matches!(t.project(&FeatureMask::empty(2)), Err(Error::EmptyMask)));
        assert!(matches!(
            t.project(&FeatureMask::full(3)),
            Err(Error::MaskLength { expected: 2, got: 3 })
        ));
    }

    #[test]
    fn ragged_and_empty_tables_are_schema_errors() {
        let d = DecisionColumn::from_labels("d", &["0", "1"]).unwrap();
        let short = FeatureColumn::real("a", vec![1.0], SigmaMode::Variance);
        assert!(matches!(DecisionTable::new("t", vec![short], d.clone()), Err(Error::Schema(_))));
        assert!(matches!(DecisionTable::new("t", vec![], d), Err(Error::Schema(_))));
    }

    #[test]
    fn normalization_rescales_and_recomputes_sigma() {
        let t = DecisionTable::new(
            "t",
            vec![FeatureColumn::real("a", vec![10.0, 20.0], SigmaMode::Variance)],
            DecisionColumn::from_labels("d", &["0", "1"]).unwrap(),
        )
        .unwrap()
        .with_preprocessing(SigmaMode::Stddev, true);
        assert_eq!(t.feature(0).values(), &[0.0, 1.0]);
        assert_abs_diff_eq!(t.feature(0).sigma(), 0.5, epsilon = 1e-15);
        assert!(t.normalized());
    }

    #[test]
    fn summary_json_fields() {
        let json = serde_json::to_value(two_feature_table().summary()).unwrap();
        assert_eq!(json["objects"], 3);
        assert_eq!(json["features"], 2);
        assert_eq!(json["classes"], 2);
        assert_eq!(json["sigma_mode"], "variance");
        assert_eq!(json["normalized"], false);
    }

    proptest! {
        #[test]
        fn sigma_invariant_under_reordering(mut v in proptest::collection::vec(-1e3f64..1e3, 1..40), seed in any::<u64>()) {
            let before = compute_sigma(&v, SigmaMode::Variance);
            // deterministic permutation from the seed
            let n = v.len();
            let mut s = seed;
            for i in (1..n).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let j = (s >> 33) as usize % (i + 1);
                v.swap(i, j);
            }
            let after = compute_sigma(&v, SigmaMode::Variance);
            prop_assert!((before - after).abs() <= 1e-9 * before.max(1.0));
            prop_assert!(after >= 0.0);
        }
    }
}
