//! Headed CSV. Columns whose non-empty cells all parse as numbers are
//! numeric, everything else is nominal with values in order of first
//! appearance. Empty cells are missing.

use std::path::Path;

use super::{Attribute, DataError, Dataset, Instance, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassColumn {
    Name(String),
    Index(usize),
    Last,
}

pub fn load_csv(
    path: impl AsRef<Path>,
    class_column: &ClassColumn,
    nominal_columns: &[String],
) -> Result<Dataset, DataError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| DataError::Io { path: path.to_path_buf(), source })?;
    let relation = path.file_stem().and_then(|s| s.to_str()).unwrap_or("data");
    parse_csv(&text, relation, class_column, nominal_columns)
}

pub fn parse_csv(
    text: &str,
    relation: &str,
    class_column: &ClassColumn,
    nominal_columns: &[String],
) -> Result<Dataset, DataError> {
    let mut reader = ::csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| DataError::parse(1, e.to_string()))?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    let mut rows: Vec<Vec<String>> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let record = record.map_err(|e| match e.kind() {
            ::csv::ErrorKind::UnequalLengths { len, expected_len, .. } => {
                DataError::parse(line, format!("row has {len} fields, header has {expected_len}"))
            }
            _ => DataError::parse(line, e.to_string()),
        })?;
        rows.push(record.iter().map(|f| f.trim().to_string()).collect());
    }
    if rows.is_empty() {
        return Err(DataError::Invalid("CSV has no data rows".into()));
    }
    let class_idx = match class_column {
        ClassColumn::Name(name) => headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| DataError::Invalid(format!("class column `{name}` not in header")))?,
        ClassColumn::Index(i) if *i < headers.len() => *i,
        ClassColumn::Last if !headers.is_empty() => headers.len() - 1,
        ClassColumn::Last => return Err(DataError::Invalid("no columns".into())),
        ClassColumn::Index(i) => return Err(DataError::Invalid(format!("class column {i} out of range"))),
    };

    let mut classes: Vec<String> = Vec::new();
    for row in &rows {
        let c = &row[class_idx];
        if !c.is_empty() && !classes.contains(c) {
            classes.push(c.clone());
        }
    }
    if classes.len() < 2 {
        return Err(DataError::Invalid(format!("class column has {} distinct value(s)", classes.len())));
    }

    let columns: Vec<usize> = (0..headers.len()).filter(|&c| c != class_idx).collect();
    let attributes: Vec<Attribute> = columns
        .iter()
        .map(|&c| {
            let forced = nominal_columns.iter().any(|n| *n == headers[c]);
            let numeric = !forced && rows.iter().all(|r| r[c].is_empty() || r[c].parse::<f64>().is_ok_and(f64::is_finite));
            if numeric {
                Attribute::numeric(headers[c].clone())
            } else {
                let mut values: Vec<String> = Vec::new();
                for r in &rows {
                    if !r[c].is_empty() && !values.contains(&r[c]) {
                        values.push(r[c].clone());
                    }
                }
                if values.is_empty() {
                    values.push("?".into());
                }
                Attribute::nominal(headers[c].clone(), values)
            }
        })
        .collect();

    let mut instances = Vec::with_capacity(rows.len());
    let mut skipped = 0usize;
    for row in &rows {
        let Some(label) = classes.iter().position(|c| *c == row[class_idx]) else {
            skipped += 1;
            continue;
        };
        let values = columns
            .iter()
            .zip(&attributes)
            .map(|(&c, attr)| {
                let cell = &row[c];
                if cell.is_empty() {
                    return Value::Missing;
                }
                match &attr.kind {
                    super::AttributeKind::Numeric => Value::Numeric(cell.parse().unwrap_or(f64::NAN)),
                    super::AttributeKind::Nominal(values) => {
                        Value::Nominal(values.iter().position(|v| v == cell).unwrap_or(0))
                    }
                }
            })
            .collect();
        instances.push(Instance::new(values, label));
    }
    if skipped > 0 {
        log::warn!("{relation}: skipped {skipped} rows with an empty class");
    }
    Dataset::new(relation, attributes, headers[class_idx].clone(), classes, instances)
}
