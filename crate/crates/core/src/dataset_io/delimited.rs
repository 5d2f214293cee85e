use super::{AttributeKind, Cell, RawTable};
use crate::error::{Error, Result};

fn is_missing(tok: &str) -> bool {
    let t = tok.trim();
    t.is_empty() || t == "?"
}

fn line_of(rec: &csv::StringRecord) -> usize {
    rec.position().map_or(0, |p| p.line() as usize)
}

/// Reads a headed CSV table. Columns whose present values all parse as
/// numbers are numeric; other non-label columns are kept as text.
pub fn parse_csv(text: &str, label_column: &str) -> Result<RawTable> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| Error::parse(1, e.to_string()))?
        .clone();
    if header.is_empty() || header.iter().all(|h| h.trim().is_empty()) {
        return Err(Error::parse(1, "missing header row"));
    }
    let names: Vec<String> = header.iter().map(|h| h.trim().to_string()).collect();
    let label = names
        .iter()
        .position(|n| n == label_column)
        .ok_or_else(|| Error::parse(1, format!("unknown label column `{label_column}`")))?;

    let mut records = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            Error::parse(line, e.to_string())
        })?;
        records.push(rec);
    }

    let mut levels: Vec<String> = Vec::new();
    for rec in &records {
        let tok = rec[label].trim();
        if is_missing(tok) || levels.iter().any(|l| l == tok) {
            continue;
        }
        if levels.len() == 2 {
            return Err(Error::parse(
                line_of(rec),
                format!("label column `{label_column}` has more than 2 distinct values"),
            ));
        }
        levels.push(tok.to_string());
    }
    if levels.len() != 2 {
        return Err(Error::parse(
            1,
            format!("label column `{label_column}` needs exactly 2 distinct values, found {}", levels.len()),
        ));
    }

    let kinds: Vec<AttributeKind> = (0..names.len())
        .map(|j| {
            if j == label {
                AttributeKind::Nominal(levels.clone())
            } else if records
                .iter()
                .map(|r| r[j].trim())
                .filter(|t| !is_missing(t))
                .all(|t| t.parse::<f64>().is_ok_and(f64::is_finite))
            {
                AttributeKind::Numeric
            } else {
                AttributeKind::Text
            }
        })
        .collect();

    let rows = records
        .iter()
        .map(|rec| {
            rec.iter()
                .zip(&kinds)
                .map(|(tok, kind)| {
                    let t = tok.trim();
                    if is_missing(t) {
                        return Cell::Missing;
                    }
                    match kind {
                        AttributeKind::Numeric => Cell::Number(t.parse().expect("checked numeric")),
                        AttributeKind::Nominal(l) => {
                            Cell::Level(l.iter().position(|x| x == t).expect("collected level"))
                        }
                        AttributeKind::Text => Cell::Text(t.to_string()),
                    }
                })
                .collect()
        })
        .collect();

    Ok(RawTable {
        attribute_names: names,
        attribute_kinds: kinds,
        rows,
        class_attribute: label,
    })
}
