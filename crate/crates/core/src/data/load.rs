use std::collections::HashMap;
use std::path::Path;

use super::Dataset;
use crate::error::{Error, Result};

/// Accepted text labels for the development methodology column.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodologyLabels {
    pub traditional: Vec<String>,
    pub agile: Vec<String>,
}

impl Default for MethodologyLabels {
    fn default() -> Self {
        let owned = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect();
        Self {
            traditional: owned(&["traditional", "waterfall", "rup", "spiral", "v-model"]),
            agile: owned(&["agile", "scrum", "xp", "kanban", "extreme programming"]),
        }
    }
}

impl MethodologyLabels {
    /// 0 for traditional, 1 for agile; matching is case-insensitive.
    pub fn encode(&self, label: &str) -> Result<f64> {
        let needle = label.trim().to_lowercase();
        if needle.is_empty() {
            return Err(Error::invalid("empty methodology label"));
        }
        if self.traditional.iter().any(|l| l.to_lowercase() == needle) {
            Ok(0.0)
        } else if self.agile.iter().any(|l| l.to_lowercase() == needle) {
            Ok(1.0)
        } else {
            Err(Error::UnknownLabel {
                label: label.to_string(),
                accepted: self.traditional.iter().chain(&self.agile).cloned().collect(),
            })
        }
    }
}

/// Encode a methodology label with the default label sets.
pub fn encode_methodology(label: &str) -> Result<f64> {
    MethodologyLabels::default().encode(label)
}

/// Which text columns get an encoding rule.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadOptions {
    pub methodology_column: String,
    pub donator_column: String,
    pub labels: MethodologyLabels,
}

impl Default for LoadOptions {
    fn default() -> Self {
        Self {
            methodology_column: "Methodology".into(),
            donator_column: "Donator".into(),
            labels: MethodologyLabels::default(),
        }
    }
}

/// Fully numeric CSV contents before the target column is separated.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn into_dataset(self, target_column: &str) -> Result<Dataset> {
        let t = self.column_index(target_column).ok_or_else(|| Error::MissingColumn {
            column: target_column.to_string(),
            available: self.columns.clone(),
        })?;
        let feature_names = self
            .columns
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != t)
            .map(|(_, c)| c.clone())
            .collect();
        let mut rows = Vec::with_capacity(self.rows.len());
        let mut targets = Vec::with_capacity(self.rows.len());
        for mut row in self.rows {
            targets.push(row.remove(t));
            rows.push(row);
        }
        Dataset::new(feature_names, rows, targets, target_column)
    }

    /// Project onto `names` (by name, in that order). Extra columns listed in
    /// `ignore` are tolerated; any other mismatch is a schema error.
    pub fn select(&self, names: &[String], ignore: &[&str]) -> Result<Vec<Vec<f64>>> {
        let missing: Vec<String> = names
            .iter()
            .filter(|n| self.column_index(n).is_none())
            .cloned()
            .collect();
        let extra: Vec<String> = self
            .columns
            .iter()
            .filter(|c| !names.contains(c) && !ignore.contains(&c.as_str()))
            .cloned()
            .collect();
        if !missing.is_empty() || !extra.is_empty() {
            return Err(Error::SchemaMismatch { missing, extra });
        }
        let idx: Vec<usize> = names.iter().map(|n| self.column_index(n).unwrap()).collect();
        Ok(self
            .rows
            .iter()
            .map(|r| idx.iter().map(|&j| r[j]).collect())
            .collect())
    }
}

pub fn load_dataset(path: impl AsRef<Path>, target_column: &str) -> Result<Dataset> {
    load_dataset_with(path, target_column, &LoadOptions::default())
}

pub fn load_dataset_with(
    path: impl AsRef<Path>,
    target_column: &str,
    options: &LoadOptions,
) -> Result<Dataset> {
    load_table(path, options)?.into_dataset(target_column)
}

/// Read a headed CSV and encode its text columns.
///
/// Methodology cells go through [`MethodologyLabels::encode`]; a donator
/// column holding text is mapped to 0, 1, 2, ... in order of first
/// appearance. Any other non-numeric cell is an error.
pub fn load_table(path: impl AsRef<Path>, options: &LoadOptions) -> Result<Table> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(file);
    let columns: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if columns.is_empty() || columns.iter().all(String::is_empty) {
        return Err(Error::EmptyFile { path: path.into() });
    }

    let mut raw: Vec<(u64, Vec<String>)> = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        raw.push((line, record.iter().map(str::to_string).collect()));
    }
    if raw.is_empty() {
        return Err(Error::EmptyFile { path: path.into() });
    }

    let mut rows = vec![Vec::with_capacity(columns.len()); raw.len()];
    for (j, name) in columns.iter().enumerate() {
        let cells = raw.iter().map(|(line, r)| (*line, r[j].as_str()));
        let encoded = if name.eq_ignore_ascii_case(&options.methodology_column) {
            encode_column(cells, name, |s| options.labels.encode(s))?
        } else if name.eq_ignore_ascii_case(&options.donator_column) {
            encode_ordinal(cells, name)?
        } else {
            cells
                .map(|(line, s)| parse_cell(line, name, s))
                .collect::<Result<Vec<_>>>()?
        };
        for (row, v) in rows.iter_mut().zip(encoded) {
            row.push(v);
        }
    }
    Ok(Table { columns, rows })
}

fn parse_cell(line: u64, column: &str, cell: &str) -> Result<f64> {
    if cell.is_empty() {
        return Err(Error::EmptyCell {
            line,
            column: column.to_string(),
        });
    }
    match cell.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(Error::NonNumeric {
            line,
            column: column.to_string(),
            value: cell.to_string(),
        }),
    }
}

fn encode_column<'a>(
    cells: impl Iterator<Item = (u64, &'a str)>,
    column: &str,
    encode: impl Fn(&str) -> Result<f64>,
) -> Result<Vec<f64>> {
    cells
        .map(|(line, s)| {
            if s.is_empty() {
                return Err(Error::EmptyCell {
                    line,
                    column: column.to_string(),
                });
            }
            match s.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => encode(s),
            }
        })
        .collect()
}

fn encode_ordinal<'a>(
    cells: impl Iterator<Item = (u64, &'a str)>,
    column: &str,
) -> Result<Vec<f64>> {
    let cells: Vec<(u64, &str)> = cells.collect();
    if let Some((line, _)) = cells.iter().find(|(_, s)| s.is_empty()) {
        return Err(Error::EmptyCell {
            line: *line,
            column: column.to_string(),
        });
    }
    if cells.iter().all(|(_, s)| s.parse::<f64>().is_ok_and(f64::is_finite)) {
        return Ok(cells.iter().map(|(_, s)| s.parse().unwrap()).collect());
    }
    let mut codes: HashMap<&str, f64> = HashMap::new();
    Ok(cells
        .iter()
        .map(|(_, s)| {
            let next = codes.len() as f64;
            *codes.entry(s).or_insert(next)
        })
        .collect())
}
