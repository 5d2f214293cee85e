//! Canonical single-file dataset form.
//!
//! ```text
//! intersmell-dataset 1
//! name: LM
//! smell: LM
//! language: Java
//! granularity: method
//! features: 2
//! feature: LOC_method
//! feature: CYCLO_method
//! rows: 3
//! data:
//! 1 12 3
//! 0 4 1
//! 0 7.5 2
//! ```
//!
//! Header lines are `key: value`, in the order shown. Feature names take one
//! `feature:` line each, in column order. After `data:` comes one line per row:
//! the label (0/1) followed by the feature values, separated by single spaces.
//! Numbers use the shortest decimal form that round-trips to the same `f64`.

use super::{Dataset, DatasetDescriptor, Granularity, Smell};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

pub const CANONICAL_MAGIC: &str = "intersmell-dataset 1";

fn check_value(what: &str, v: &str) -> Result<()> {
    if v.contains('\n') || v.contains('\r') || v.trim() != v {
        return Err(Error::InvalidDataset(format!(
            "{what} `{v}` cannot be written: no line breaks or surrounding blanks allowed"
        )));
    }
    Ok(())
}

pub fn write_canonical(ds: &Dataset) -> Result<String> {
    let d = &ds.descriptor;
    check_value("name", &d.name)?;
    check_value("language", &d.language)?;
    check_value("smell", d.smell.code())?;
    let mut out = String::new();
    out.push_str(CANONICAL_MAGIC);
    out.push('\n');
    out.push_str(&format!("name: {}\n", d.name));
    out.push_str(&format!("smell: {}\n", d.smell));
    out.push_str(&format!("language: {}\n", d.language));
    out.push_str(&format!("granularity: {}\n", d.granularity));
    out.push_str(&format!("features: {}\n", d.dimension()));
    for f in &d.feature_names {
        check_value("feature name", f)?;
        out.push_str(&format!("feature: {f}\n"));
    }
    out.push_str(&format!("rows: {}\n", ds.len()));
    out.push_str("data:\n");
    for (i, row) in ds.features.iter_rows().enumerate() {
        out.push_str(&ds.labels[i].to_string());
        for v in row {
            out.push(' ');
            out.push_str(&v.to_string());
        }
        out.push('\n');
    }
    Ok(out)
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn next_line(&mut self) -> Result<(usize, &'a str)> {
        let (i, l) = self
            .inner
            .next()
            .ok_or_else(|| Error::parse(self.last + 1, "unexpected end of file"))?;
        self.last = i + 1;
        Ok((i + 1, l))
    }

    fn field(&mut self, key: &str) -> Result<(usize, &'a str)> {
        let (n, l) = self.next_line()?;
        let v = l
            .strip_prefix(key)
            .and_then(|r| r.strip_prefix(':'))
            .ok_or_else(|| Error::parse(n, format!("expected `{key}:`")))?;
        Ok((n, v.strip_prefix(' ').unwrap_or(v)))
    }

    fn count(&mut self, key: &str) -> Result<usize> {
        let (n, v) = self.field(key)?;
        v.parse()
            .map_err(|_| Error::parse(n, format!("`{key}` must be a non-negative integer")))
    }
}

pub fn read_canonical(text: &str) -> Result<Dataset> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
        last: 0,
    };
    let (n, magic) = lines.next_line()?;
    if magic.trim_end() != CANONICAL_MAGIC {
        return Err(Error::parse(n, "not a canonical dataset file"));
    }
    let name = lines.field("name")?.1.to_string();
    let smell: Smell = lines.field("smell")?.1.parse()?;
    let language = lines.field("language")?.1.to_string();
    let (gl, g) = lines.field("granularity")?;
    let granularity: Granularity = g.parse().map_err(|e: Error| Error::parse(gl, e.to_string()))?;
    let dim = lines.count("features")?;
    let feature_names = (0..dim)
        .map(|_| lines.field("feature").map(|(_, v)| v.to_string()))
        .collect::<Result<Vec<_>>>()?;
    let rows = lines.count("rows")?;
    let (dl, d) = lines.next_line()?;
    if d.trim_end() != "data:" {
        return Err(Error::parse(dl, "expected `data:`"));
    }
    let mut data = Vec::with_capacity(rows * dim);
    let mut labels = Vec::with_capacity(rows);
    for _ in 0..rows {
        let (ln, l) = lines.next_line()?;
        let mut toks = l.split(' ');
        let label = match toks.next() {
            Some("0") => 0,
            Some("1") => 1,
            _ => return Err(Error::parse(ln, "label must be 0 or 1")),
        };
        let before = data.len();
        for t in toks {
            data.push(
                t.parse::<f64>()
                    .map_err(|_| Error::parse(ln, format!("bad number `{t}`")))?,
            );
        }
        if data.len() - before != dim {
            return Err(Error::parse(
                ln,
                format!("row has {} values, expected {dim}", data.len() - before),
            ));
        }
        labels.push(label);
    }
    if let Some((i, l)) = lines.inner.find(|(_, l)| !l.trim().is_empty()) {
        return Err(Error::parse(i + 1, format!("trailing content `{l}`")));
    }
    Dataset::new(
        DatasetDescriptor {
            name,
            smell,
            language,
            granularity,
            feature_names,
        },
        Matrix::new(rows, dim, data)?,
        labels,
    )
}
