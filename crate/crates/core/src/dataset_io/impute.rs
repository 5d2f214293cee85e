use std::fmt;

use super::{Cell, RawTable};
use crate::error::{Error, Result};

/// Missing-cell census of the numeric feature columns, taken before imputation.
#[derive(Debug, Clone, PartialEq)]
pub struct MissingReport {
    pub total_missing: usize,
    /// Every numeric feature column in attribute order, with its missing count.
    pub per_feature_missing: Vec<(String, usize)>,
    /// `total_missing` over rows x numeric feature columns.
    pub missing_fraction: f64,
}

impl MissingReport {
    pub fn affected(&self) -> impl Iterator<Item = (&str, usize)> + '_ {
        self.per_feature_missing
            .iter()
            .filter(|(_, c)| *c > 0)
            .map(|(n, c)| (n.as_str(), *c))
    }

    pub fn count_for(&self, feature: &str) -> usize {
        self.per_feature_missing
            .iter()
            .find(|(n, _)| n == feature)
            .map_or(0, |(_, c)| *c)
    }
}

impl fmt::Display for MissingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "missing={}", self.total_missing)?;
        let parts: Vec<String> = self.affected().map(|(n, c)| format!("{n}-{c}")).collect();
        if !parts.is_empty() {
            write!(f, " ({})", parts.join(", "))?;
        }
        write!(f, " fraction={:.6}", self.missing_fraction)
    }
}

/// Replaces each missing numeric feature cell with the mean of the present
/// values of its column. Nominal and text cells are left alone.
pub fn impute_mean(table: &RawTable) -> Result<(RawTable, MissingReport)> {
    let cols = table.feature_columns();
    let mut out = table.clone();
    let mut per_feature = Vec::with_capacity(cols.len());
    let mut total = 0;
    for &j in &cols {
        let (mut sum, mut present, mut missing) = (0.0, 0usize, 0usize);
        for row in &table.rows {
            match row[j] {
                Cell::Number(v) => {
                    sum += v;
                    present += 1;
                }
                Cell::Missing => missing += 1,
                _ => {}
            }
        }
        let name = table.attribute_names[j].clone();
        if missing > 0 {
            if present == 0 {
                return Err(Error::AllMissing { column: name });
            }
            let mean = sum / present as f64;
            for row in &mut out.rows {
                if row[j].is_missing() {
                    row[j] = Cell::Number(mean);
                }
            }
        }
        total += missing;
        per_feature.push((name, missing));
    }
    let cells = table.rows.len() * cols.len();
    let report = MissingReport {
        total_missing: total,
        per_feature_missing: per_feature,
        missing_fraction: if cells == 0 {
            0.0
        } else {
            total as f64 / cells as f64
        },
    };
    Ok((out, report))
}
