use std::path::Path;

use crate::datatable::{write_arff, write_csv, DecisionTable, TableFormat};
use crate::error::Result;
use crate::mask::FeatureMask;

/// Write the selected columns plus the decision (last) to `path`.
pub fn export_reduced(table: &DecisionTable, mask: &FeatureMask, path: &Path, format: TableFormat) -> Result<()> {
    let reduced = table.project(mask)?;
    match format {
        TableFormat::Csv => write_csv(&reduced, path),
        TableFormat::Arff => write_arff(&reduced, path),
    }
}
