use std::fs::File;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// How datasets with missing algorithm results enter the ranking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScoreMissingPolicy {
    #[default]
    Error,
    /// Leave out datasets with any missing cell.
    DropDataset,
    /// Missing algorithms share the worst ranks of their dataset.
    ImputeWorstRank,
}

impl FromStr for ScoreMissingPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "error" => Ok(Self::Error),
            "drop" | "drop_dataset" => Ok(Self::DropDataset),
            "worst" | "impute_worst_rank" => Ok(Self::ImputeWorstRank),
            other => Err(Error::Config(format!("unknown missing-score policy `{other}`"))),
        }
    }
}

/// Datasets x algorithms scores, higher is better.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreMatrix {
    pub datasets: Vec<String>,
    pub algorithms: Vec<String>,
    pub scores: Vec<Vec<Option<f64>>>,
}

impl ScoreMatrix {
    pub fn new(datasets: Vec<String>, algorithms: Vec<String>, scores: Vec<Vec<Option<f64>>>) -> Result<Self> {
        if algorithms.is_empty() || datasets.is_empty() {
            return Err(Error::Scores("need at least one algorithm and one dataset".into()));
        }
        if scores.len() != datasets.len() {
            return Err(Error::Scores("need one row per dataset".into()));
        }
        if let Some(i) = scores.iter().position(|r| r.len() != algorithms.len()) {
            return Err(Error::Scores(format!("row for `{}` has the wrong width", datasets[i])));
        }
        Ok(ScoreMatrix {
            datasets,
            algorithms,
            scores,
        })
    }

    /// CSV with a header row; first column names the dataset, the rest are algorithms.
    /// Empty, `-` and `?` cells are missing.
    pub fn from_csv(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
        let header = reader.headers().map_err(|e| Error::Parse {
            line: 1,
            message: e.to_string(),
        })?;
        let algorithms: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
        let mut datasets = Vec::new();
        let mut scores = Vec::new();
        for (i, rec) in reader.records().enumerate() {
            let rec = rec.map_err(|e| Error::Parse {
                line: i + 2,
                message: e.to_string(),
            })?;
            datasets.push(rec.get(0).unwrap_or_default().to_string());
            let row = rec
                .iter()
                .skip(1)
                .map(|c| match c {
                    "" | "-" | "?" => Ok(None),
                    v => v.parse::<f64>().map(Some).map_err(|_| Error::Parse {
                        line: i + 2,
                        message: format!("`{v}` is not a score"),
                    }),
                })
                .collect::<Result<Vec<_>>>()?;
            scores.push(row);
        }
        Self::new(datasets, algorithms, scores)
    }

    /// Rows ready for ranking under `policy`.
    pub(crate) fn complete_rows(&self, policy: ScoreMissingPolicy) -> Result<Vec<Vec<f64>>> {
        let mut rows = Vec::new();
        for (name, row) in self.datasets.iter().zip(&self.scores) {
            if row.iter().all(Option::is_some) {
                rows.push(row.iter().map(|v| v.unwrap()).collect());
                continue;
            }
            match policy {
                ScoreMissingPolicy::Error => {
                    return Err(Error::Scores(format!("missing score for dataset `{name}`")))
                }
                ScoreMissingPolicy::DropDataset => {}
                ScoreMissingPolicy::ImputeWorstRank => {
                    rows.push(row.iter().map(|v| v.unwrap_or(f64::NEG_INFINITY)).collect())
                }
            }
        }
        Ok(rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::friedman;
    use std::io::Write;

    #[test]
    fn csv_with_missing_cells() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        write!(f, "dataset,A,B,C\nd1,0.9,0.8,-\nd2,0.7,0.9,0.6\nd3,0.5,0.4,0.3\n").unwrap();
        let m = ScoreMatrix::from_csv(f.path()).unwrap();
        assert_eq!(m.algorithms, vec!["A", "B", "C"]);
        assert_eq!(m.scores[0][2], None);

        assert!(friedman(&m, ScoreMissingPolicy::Error).is_err());
        let dropped = friedman(&m, ScoreMissingPolicy::DropDataset).unwrap();
        assert_eq!(dropped.n, 2);
        let imputed = friedman(&m, ScoreMissingPolicy::ImputeWorstRank).unwrap();
        assert_eq!(imputed.n, 3);
        assert_eq!(imputed.average_ranks[2], 3.0);
    }

    #[test]
    fn malformed_matrices_rejected() {
        assert!(ScoreMatrix::new(vec![], vec!["x".into()], vec![]).is_err());
        assert!(ScoreMatrix::new(vec!["a".into()], vec!["x".into(), "y".into()], vec![vec![Some(1.0)]]).is_err());
        assert!(ScoreMatrix::new(vec!["a".into(), "b".into()], vec!["x".into()], vec![vec![Some(1.0)]]).is_err());
        let single = ScoreMatrix::new(vec!["a".into()], vec!["x".into(), "y".into()], vec![vec![Some(1.0); 2]]).unwrap();
        assert!(friedman(&single, ScoreMissingPolicy::Error).is_err());
    }
}
