use std::fs::File;
use std::io::Write;
use std::path::Path;

use super::{assemble, is_missing, ColumnRef, DecisionTable, LoadOptions, RawColumn};
use crate::error::{Error, Result};

/// Read a headed CSV file. The decision column defaults to the last column.
pub fn read_csv(path: &Path, options: &LoadOptions) -> Result<DecisionTable> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .trim(csv::Trim::All)
        .from_reader(file);

    let headers: Vec<String> = reader
        .headers()
        .map_err(csv_error)?
        .iter()
        .map(str::to_string)
        .collect();
    if headers.len() < 2 {
        return Err(Error::Schema(
            "need at least one feature column and a decision column".into(),
        ));
    }

    let mut columns: Vec<RawColumn> = headers
        .iter()
        .map(|h| RawColumn {
            name: h.clone(),
            cells: Vec::new(),
            declared_symbols: None,
            declared_numeric: false,
        })
        .collect();
    for record in reader.records() {
        let record = record.map_err(csv_error)?;
        for (col, cell) in columns.iter_mut().zip(record.iter()) {
            col.cells.push(if is_missing(cell) {
                None
            } else {
                Some(cell.to_string())
            });
        }
    }
    if columns[0].cells.is_empty() {
        return Err(Error::Schema("table has no rows".into()));
    }

    let class_idx = options
        .class
        .clone()
        .unwrap_or(ColumnRef::Index(headers.len() - 1))
        .resolve(&headers)?;
    let name = options.name.clone().unwrap_or_else(|| stem(path));
    assemble(name, columns, class_idx, options)
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
    match e.kind() {
        csv::ErrorKind::UnequalLengths { .. } => Error::Schema(format!("ragged row at line {line}")),
        _ => Error::Parse {
            line,
            message: e.to_string(),
        },
    }
}

pub(crate) fn stem(path: &Path) -> String {
    path.file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("table")
        .to_string()
}

/// Write the table as CSV with a header row and the decision column last.
pub fn write_csv(table: &DecisionTable, path: &Path) -> Result<()> {
    let mut out = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut out);
        let mut header: Vec<&str> = table.features().iter().map(|f| f.name()).collect();
        header.push(table.decision().name());
        w.write_record(&header).map_err(|e| Error::io(path, e.into()))?;
        for row in 0..table.objects() {
            let mut rec: Vec<String> = table.features().iter().map(|f| f.display_value(row)).collect();
            rec.push(table.decision().class_names()[table.decision().labels()[row]].clone());
            w.write_record(&rec).map_err(|e| Error::io(path, e.into()))?;
        }
        w.flush().map_err(|e| Error::io(path, e))?;
    }
    let mut file = File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(&out).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datatable::{load_table, FeatureKind, MissingPolicy, SigmaMode, TableFormat};
    use std::io::Write;

    fn write_tmp(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::Builder::new().suffix(".csv").tempfile().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn single_row_single_feature() {
        let f = write_tmp("x,class\n0.3,a\n");
        let t = load_table(f.path(), TableFormat::Csv, &LoadOptions::default()).unwrap();
        assert_eq!(t.objects(), 1);
        assert_eq!(t.feature_count(), 1);
        assert_eq!(t.feature(0).sigma(), 0.0);
    }

    #[test]
    fn class_by_name_and_kind_inference() {
        let f = write_tmp("label,h,w\nyes,1.5,red\nno,2.5,blue\n");
        let opts = LoadOptions {
            class: Some("label".parse().unwrap()),
            ..Default::default()
        };
        let t = load_table(f.path(), TableFormat::Csv, &opts).unwrap();
        assert_eq!(t.decision().name(), "label");
        assert_eq!(t.feature(0).kind(), FeatureKind::Real);
        assert_eq!(t.feature(1).kind(), FeatureKind::Nominal);
        assert_eq!(t.feature(1).symbols(), &["red".to_string(), "blue".to_string()]);
    }

    #[test]
    fn force_nominal_override() {
        let f = write_tmp("a,b,c\n1,0.2,x\n2,0.4,y\n1,0.1,x\n");
        let opts = LoadOptions {
            force_nominal: vec![ColumnRef::Name("a".into())],
            ..Default::default()
        };
        let t = load_table(f.path(), TableFormat::Csv, &opts).unwrap();
        assert_eq!(t.feature(0).kind(), FeatureKind::Nominal);
        assert_eq!(t.feature(1).kind(), FeatureKind::Real);
    }

    #[test]
    fn ragged_rows_rejected() {
        let f = write_tmp("a,b,c\n1,2,x\n1,2\n");
        let err = load_table(f.path(), TableFormat::Csv, &LoadOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Schema(_)), "{err}");
    }

    #[test]
    fn header_only_rejected() {
        let f = write_tmp("a,b\n");
        assert!(matches!(
            load_table(f.path(), TableFormat::Csv, &LoadOptions::default()),
            Err(Error::Schema(_))
        ));
    }

    #[test]
    fn missing_values_reject_or_impute() {
        let f = write_tmp("a,b,c\n1,?,x\n3,p,y\n?,p,x\n2,q,y\n");
        let err = load_table(f.path(), TableFormat::Csv, &LoadOptions::default()).unwrap_err();
        assert!(matches!(err, Error::MissingValue { .. }));

        let opts = LoadOptions {
            missing: MissingPolicy::Impute,
            normalize: false,
            ..Default::default()
        };
        let t = load_table(f.path(), TableFormat::Csv, &opts).unwrap();
        assert_eq!(t.feature(0).values(), &[1.0, 3.0, 2.0, 2.0]);
        assert_eq!(t.feature(1).display_value(0), "p");
        assert_eq!(t.sigma_mode(), SigmaMode::Variance);
    }

    #[test]
    fn wine_fixture_shape() {
        let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/wine.csv");
        let t = load_table(&path, TableFormat::Csv, &LoadOptions::default()).unwrap();
        assert_eq!(t.objects(), 178);
        assert_eq!(t.feature_count(), 13);
        assert_eq!(t.decision().classes(), 3);
        assert!(t.features().iter().all(|f| f.sigma() > 0.0));
    }

    #[test]
    fn loading_twice_is_identical() {
        let f = write_tmp("a,b,c\n0.1,x,0\n0.7,y,1\n0.4,x,1\n");
        let a = load_table(f.path(), TableFormat::Csv, &LoadOptions::default()).unwrap();
        let b = load_table(f.path(), TableFormat::Csv, &LoadOptions::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn write_then_read_back() {
        let f = write_tmp("a,b,c\n0.25,x,0\n0.75,y,1\n");
        let opts = LoadOptions {
            normalize: false,
            name: Some("t".into()),
            ..Default::default()
        };
        let t = load_table(f.path(), TableFormat::Csv, &opts).unwrap();
        let out = tempfile::Builder::new().suffix(".csv").tempfile().unwrap();
        write_csv(&t, out.path()).unwrap();
        let back = load_table(out.path(), TableFormat::Csv, &opts).unwrap();
        assert_eq!(back, t);
    }
}
