use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::delimited::stem;
use super::{assemble, is_missing, DecisionTable, FeatureKind, LoadOptions, RawColumn};
use crate::error::{Error, Result};

/// Read a dense ARFF file with numeric and nominal attributes.
///
/// The decision is `options.class`, else an attribute named `class` (case-insensitive),
/// else the last attribute.
pub fn read_arff(path: &Path, options: &LoadOptions) -> Result<DecisionTable> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut relation = None;
    let mut columns: Vec<RawColumn> = Vec::new();
    let mut in_data = false;

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        if !in_data {
            let lower = line.to_ascii_lowercase();
            if lower.starts_with("@relation") {
                relation = Some(unquote(line["@relation".len()..].trim()).to_string());
            } else if lower.starts_with("@attribute") {
                columns.push(parse_attribute(line["@attribute".len()..].trim(), line_no)?);
            } else if lower.starts_with("@data") {
                in_data = true;
            } else {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("unexpected header line `{line}`"),
                });
            }
            continue;
        }
        if line.starts_with('{') {
            return Err(Error::Parse {
                line: line_no,
                message: "sparse ARFF rows are not supported".into(),
            });
        }
        let cells = split_fields(line, line_no)?;
        if cells.len() != columns.len() {
            return Err(Error::Schema(format!(
                "row at line {line_no} has {} values, expected {}",
                cells.len(),
                columns.len()
            )));
        }
        for (col, cell) in columns.iter_mut().zip(cells) {
            col.cells.push(if is_missing(&cell) { None } else { Some(cell) });
        }
    }

    if columns.len() < 2 {
        return Err(Error::Schema("need at least one feature and a class attribute".into()));
    }
    if columns[0].cells.is_empty() {
        return Err(Error::Schema("table has no rows".into()));
    }
    let names: Vec<String> = columns.iter().map(|c| c.name.clone()).collect();
    let class_idx = match &options.class {
        Some(r) => r.resolve(&names)?,
        None => names
            .iter()
            .position(|n| n.eq_ignore_ascii_case("class"))
            .unwrap_or(names.len() - 1),
    };
    let name = options
        .name
        .clone()
        .or(relation)
        .unwrap_or_else(|| stem(path));
    assemble(name, columns, class_idx, options)
}

fn parse_attribute(rest: &str, line: usize) -> Result<RawColumn> {
    let (name, ty) = split_name(rest).ok_or_else(|| Error::Parse {
        line,
        message: "attribute declaration without a type".into(),
    })?;
    let ty = ty.trim();
    let (declared_symbols, declared_numeric) = if ty.starts_with('{') {
        let inner = ty
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(|| Error::Parse {
                line,
                message: "unterminated nominal specification".into(),
            })?;
        (Some(split_fields(inner, line)?), false)
    } else {
        match ty.to_ascii_lowercase().as_str() {
            "numeric" | "real" | "integer" => (None, true),
            other => {
                return Err(Error::Parse {
                    line,
                    message: format!("unsupported attribute type `{other}`"),
                })
            }
        }
    };
    Ok(RawColumn {
        name,
        cells: Vec::new(),
        declared_symbols,
        declared_numeric,
    })
}

fn split_name(rest: &str) -> Option<(String, &str)> {
    let rest = rest.trim_start();
    if let Some(q) = rest.chars().next().filter(|c| *c == '\'' || *c == '"') {
        let end = rest[1..].find(q)? + 1;
        Some((rest[1..end].to_string(), &rest[end + 1..]))
    } else {
        let end = rest.find(char::is_whitespace)?;
        Some((rest[..end].to_string(), &rest[end..]))
    }
}

/// Comma-separated values with optional single or double quotes.
fn split_fields(s: &str, line: usize) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut quote: Option<char> = None;
    let mut chars = s.chars().peekable();
    while let Some(c) = chars.next() {
        match quote {
            Some(q) if c == q => quote = None,
            Some(_) if c == '\\' => {
                if let Some(n) = chars.next() {
                    cur.push(n);
                }
            }
            Some(_) => cur.push(c),
            None if c == '\'' || c == '"' => quote = Some(c),
            None if c == ',' => out.push(std::mem::take(&mut cur).trim().to_string()),
            None => cur.push(c),
        }
    }
    if quote.is_some() {
        return Err(Error::Parse {
            line,
            message: "unterminated quote".into(),
        });
    }
    out.push(cur.trim().to_string());
    Ok(out)
}

fn quote_if_needed(s: &str) -> String {
    if s.is_empty() || s.contains([',', ' ', '\'', '"', '{', '}', '%', '\t']) {
        format!("'{}'", s.replace('\\', "\\\\").replace('\'', "\\'"))
    } else {
        s.to_string()
    }
}

fn unquote(s: &str) -> &str {
    s.trim_matches(|c| c == '\'' || c == '"')
}

/// Write the table as dense ARFF with the decision attribute last.
pub fn write_arff(table: &DecisionTable, path: &Path) -> Result<()> {
    let mut out = String::new();
    let _ = writeln!(out, "@relation {}", quote_if_needed(table.name()));
    out.push('\n');
    for f in table.features() {
        match f.kind() {
            FeatureKind::Real => {
                let _ = writeln!(out, "@attribute {} numeric", quote_if_needed(f.name()));
            }
            FeatureKind::Nominal => {
                let symbols: Vec<String> = f.symbols().iter().map(|s| quote_if_needed(s)).collect();
                let _ = writeln!(out, "@attribute {} {{{}}}", quote_if_needed(f.name()), symbols.join(","));
            }
        }
    }
    let classes: Vec<String> = table
        .decision()
        .class_names()
        .iter()
        .map(|s| quote_if_needed(s))
        .collect();
    let _ = writeln!(
        out,
        "@attribute {} {{{}}}",
        quote_if_needed(table.decision().name()),
        classes.join(",")
    );
    out.push_str("\n@data\n");
    for row in 0..table.objects() {
        let mut cells: Vec<String> = table
            .features()
            .iter()
            .map(|f| quote_if_needed(&f.display_value(row)))
            .collect();
        cells.push(classes[table.decision().labels()[row]].clone());
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}
