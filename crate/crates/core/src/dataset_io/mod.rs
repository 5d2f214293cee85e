//! Metric-dataset ingestion: ARFF/CSV parsing, mean imputation, label
//! binarization, and the balanced/unbalanced source resampling.

mod arff;
mod canonical;
mod delimited;
mod impute;
mod resample;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

pub use arff::parse_arff;
pub use canonical::{read_canonical, write_canonical, CANONICAL_MAGIC};
pub use delimited::parse_csv;
pub use impute::{impute_mean, MissingReport};
pub use resample::{resample, resample_logged, Condition};

#[derive(Debug, Clone, PartialEq)]
pub enum AttributeKind {
    Numeric,
    Nominal(Vec<String>),
    /// Free text (ARFF `string`, or a non-numeric CSV column). Never a feature.
    Text,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Number(f64),
    /// Index into the attribute's nominal levels.
    Level(usize),
    Text(String),
    Missing,
}

impl Cell {
    pub fn is_missing(&self) -> bool {
        matches!(self, Cell::Missing)
    }
}

/// A parsed table before any repair.
#[derive(Debug, Clone, PartialEq)]
pub struct RawTable {
    pub attribute_names: Vec<String>,
    pub attribute_kinds: Vec<AttributeKind>,
    pub rows: Vec<Vec<Cell>>,
    pub class_attribute: usize,
}

impl RawTable {
    pub fn class_levels(&self) -> &[String] {
        match &self.attribute_kinds[self.class_attribute] {
            AttributeKind::Nominal(levels) => levels,
            _ => &[],
        }
    }

    /// Indices of numeric attributes other than the class attribute.
    pub fn feature_columns(&self) -> Vec<usize> {
        self.attribute_kinds
            .iter()
            .enumerate()
            .filter(|(i, k)| *i != self.class_attribute && matches!(k, AttributeKind::Numeric))
            .map(|(i, _)| i)
            .collect()
    }

    pub(crate) fn validate(&self) -> Result<()> {
        let width = self.attribute_names.len();
        if self.attribute_kinds.len() != width {
            return Err(Error::InvalidDataset(
                "attribute names and kinds differ in length".into(),
            ));
        }
        if let Some((i, _)) = self.rows.iter().enumerate().find(|(_, r)| r.len() != width) {
            return Err(Error::InvalidDataset(format!(
                "row {i} does not have {width} cells"
            )));
        }
        if self.class_levels().len() != 2 {
            return Err(Error::InvalidDataset(
                "class attribute must be nominal with exactly 2 levels".into(),
            ));
        }
        Ok(())
    }
}

/// Index of the class attribute: an attribute named `is_smell`/`smelly` wins,
/// otherwise the last two-level nominal attribute.
pub(crate) fn detect_class_attribute(names: &[String], kinds: &[AttributeKind]) -> Option<usize> {
    let two_level = |k: &AttributeKind| matches!(k, AttributeKind::Nominal(l) if l.len() == 2);
    let preferred = names.iter().zip(kinds).position(|(n, k)| {
        let n = n.to_ascii_lowercase();
        (n == "is_smell" || n == "smelly") && two_level(k)
    });
    preferred.or_else(|| kinds.iter().rposition(two_level))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Smell {
    LongMethod,
    FeatureEnvy,
    GodClass,
    DataClass,
    Other(String),
}

impl Smell {
    pub fn code(&self) -> &str {
        match self {
            Smell::LongMethod => "LM",
            Smell::FeatureEnvy => "FE",
            Smell::GodClass => "GC",
            Smell::DataClass => "DC",
            Smell::Other(s) => s,
        }
    }
}

impl fmt::Display for Smell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Smell {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm: String = s
            .trim()
            .chars()
            .filter(|c| !matches!(c, '_' | '-' | ' '))
            .collect::<String>()
            .to_ascii_lowercase();
        Ok(match norm.as_str() {
            "lm" | "longmethod" => Smell::LongMethod,
            "fe" | "featureenvy" => Smell::FeatureEnvy,
            "gc" | "godclass" => Smell::GodClass,
            "dc" | "dataclass" => Smell::DataClass,
            "" => return Err(Error::InvalidInput("empty smell name".into())),
            _ => Smell::Other(s.trim().to_string()),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Granularity {
    Class,
    Method,
}

impl fmt::Display for Granularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Granularity::Class => "class",
            Granularity::Method => "method",
        })
    }
}

impl FromStr for Granularity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "class" => Ok(Granularity::Class),
            "method" => Ok(Granularity::Method),
            other => Err(Error::InvalidInput(format!("unknown granularity `{other}`"))),
        }
    }
}

/// Identity of a dataset: which smell it labels, in which language, over
/// which feature space.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetDescriptor {
    pub name: String,
    pub smell: Smell,
    pub language: String,
    pub granularity: Granularity,
    pub feature_names: Vec<String>,
}

impl DatasetDescriptor {
    pub fn validate(&self) -> Result<()> {
        if self.feature_names.is_empty() {
            return Err(Error::InvalidDataset(format!(
                "dataset `{}` has no feature columns",
                self.name
            )));
        }
        let mut seen = HashSet::new();
        for f in &self.feature_names {
            if !seen.insert(f.as_str()) {
                return Err(Error::InvalidDataset(format!(
                    "duplicate feature name `{f}` in `{}`",
                    self.name
                )));
            }
        }
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        self.feature_names.len()
    }
}

/// Feature matrix plus binary labels (1 = smelly).
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub descriptor: DatasetDescriptor,
    pub features: Matrix,
    pub labels: Vec<u8>,
}

impl Dataset {
    pub fn new(descriptor: DatasetDescriptor, features: Matrix, labels: Vec<u8>) -> Result<Self> {
        descriptor.validate()?;
        if features.cols() != descriptor.dimension() {
            return Err(Error::DimensionMismatch {
                expected: descriptor.dimension(),
                got: features.cols(),
            });
        }
        if labels.len() != features.rows() {
            return Err(Error::InvalidDataset(format!(
                "{} labels for {} rows",
                labels.len(),
                features.rows()
            )));
        }
        if labels.iter().any(|&l| l > 1) {
            return Err(Error::InvalidDataset("labels must be 0 or 1".into()));
        }
        if features.as_slice().iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidDataset("non-finite feature value".into()));
        }
        Ok(Dataset {
            descriptor,
            features,
            labels,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn positives(&self) -> usize {
        self.labels.iter().filter(|&&l| l == 1).count()
    }

    pub fn subset(&self, idx: &[usize]) -> Dataset {
        Dataset {
            descriptor: self.descriptor.clone(),
            features: self.features.select_rows(idx),
            labels: idx.iter().map(|&i| self.labels[i]).collect(),
        }
    }

    /// Reorders columns so that they follow `names`. The feature sets must match.
    pub fn align_to(&self, names: &[String]) -> Result<Dataset> {
        let mismatch = || Error::FeatureMismatch {
            source_name: "reference".into(),
            target_name: self.descriptor.name.clone(),
        };
        if names.len() != self.descriptor.dimension() {
            return Err(mismatch());
        }
        let order = names
            .iter()
            .map(|n| self.descriptor.feature_names.iter().position(|f| f == n))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(mismatch)?;
        let mut descriptor = self.descriptor.clone();
        descriptor.feature_names = names.to_vec();
        Ok(Dataset {
            descriptor,
            features: self.features.select_columns(&order),
            labels: self.labels.clone(),
        })
    }

    /// FNV-1a hash over feature names, values and labels.
    pub fn fingerprint(&self) -> String {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut feed = |bytes: &[u8]| {
            for b in bytes {
                h ^= u64::from(*b);
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
        };
        for n in &self.descriptor.feature_names {
            feed(n.as_bytes());
            feed(&[0]);
        }
        for v in self.features.as_slice() {
            feed(&v.to_bits().to_le_bytes());
        }
        feed(&self.labels);
        format!("{h:016x}")
    }
}

/// Turns an imputed table into a labeled dataset.
pub fn build_dataset(
    table: &RawTable,
    name: &str,
    smell: Smell,
    language: &str,
    granularity: Granularity,
    positive_level: &str,
) -> Result<Dataset> {
    table.validate()?;
    let levels = table.class_levels();
    let positive = levels.iter().position(|l| l == positive_level).ok_or_else(|| {
        Error::InvalidInput(format!(
            "positive level `{positive_level}` is not a class level (levels: {})",
            levels.join(", ")
        ))
    })?;
    let cols = table.feature_columns();
    let descriptor = DatasetDescriptor {
        name: name.to_string(),
        smell,
        language: language.to_string(),
        granularity,
        feature_names: cols
            .iter()
            .map(|&j| table.attribute_names[j].clone())
            .collect(),
    };
    let mut data = Vec::with_capacity(table.rows.len() * cols.len());
    let mut labels = Vec::with_capacity(table.rows.len());
    for (i, row) in table.rows.iter().enumerate() {
        for &j in &cols {
            match row[j] {
                Cell::Number(v) => data.push(v),
                Cell::Missing => {
                    return Err(Error::InvalidDataset(format!(
                        "row {i} column `{}` is still missing; impute first",
                        table.attribute_names[j]
                    )))
                }
                _ => unreachable!("numeric column holds a non-numeric cell"),
            }
        }
        labels.push(match row[table.class_attribute] {
            Cell::Level(l) => u8::from(l == positive),
            _ => {
                return Err(Error::InvalidDataset(format!(
                    "row {i} has a missing class label"
                )))
            }
        });
    }
    let features = Matrix::new(labels.len(), cols.len(), data)?;
    Dataset::new(descriptor, features, labels)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DatasetStats {
    pub row_count: usize,
    pub feature_count: usize,
    pub positive_count: usize,
    pub negative_count: usize,
    pub positive_fraction: f64,
}

impl fmt::Display for DatasetStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "rows={} features={} pos={} neg={}",
            self.row_count, self.feature_count, self.positive_count, self.negative_count
        )
    }
}

pub fn dataset_stats(ds: &Dataset) -> DatasetStats {
    let pos = ds.positives();
    let n = ds.len();
    DatasetStats {
        row_count: n,
        feature_count: ds.descriptor.dimension(),
        positive_count: pos,
        negative_count: n - pos,
        positive_fraction: if n == 0 { 0.0 } else { pos as f64 / n as f64 },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "@relation t\n@attribute a numeric\n@attribute cls {true,false}\n@data\n1.0,true\n?,false\n";

    fn lm_like() -> RawTable {
        parse_arff("@relation x\n@attribute a numeric\n@attribute b numeric\n@attribute is_smell {true,false}\n@data\n1,2,true\n3,4,false\n5,6,false\n").unwrap()
    }

    #[test]
    fn build_binarizes_labels() {
        let t = lm_like();
        let ds = build_dataset(&t, "x", Smell::LongMethod, "Java", Granularity::Method, "true").unwrap();
        assert_eq!(ds.labels, vec![1, 0, 0]);
        assert_eq!(ds.descriptor.feature_names, vec!["a", "b"]);
        assert_eq!(ds.features.row(2), &[5.0, 6.0]);
    }

    #[test]
    fn build_rejects_unknown_level() {
        let t = lm_like();
        let err = build_dataset(&t, "x", Smell::LongMethod, "Java", Granularity::Method, "maybe");
        assert!(matches!(err, Err(Error::InvalidInput(_))));
    }

    #[test]
    fn build_rejects_residual_missing() {
        let t = parse_arff(MINIMAL).unwrap();
        assert!(build_dataset(&t, "x", Smell::LongMethod, "Java", Granularity::Method, "true").is_err());
    }

    #[test]
    fn empty_table_builds_empty_dataset() {
        let t = parse_arff("@relation t\n@attribute a numeric\n@attribute cls {y,n}\n@data\n").unwrap();
        let ds = build_dataset(&t, "e", Smell::DataClass, "Java", Granularity::Class, "y").unwrap();
        assert!(ds.is_empty());
        let s = dataset_stats(&ds);
        assert_eq!((s.row_count, s.positive_count, s.negative_count), (0, 0, 0));
        assert_eq!(s.positive_fraction, 0.0);
        assert_eq!(s.feature_count, 1);
    }

    #[test]
    fn align_reorders_columns() {
        let t = lm_like();
        let ds = build_dataset(&t, "x", Smell::LongMethod, "Java", Granularity::Method, "true").unwrap();
        let al = ds.align_to(&["b".to_string(), "a".to_string()]).unwrap();
        assert_eq!(al.features.row(0), &[2.0, 1.0]);
        assert!(ds.align_to(&["a".to_string(), "z".to_string()]).is_err());
    }

    #[test]
    fn smell_parsing() {
        assert_eq!("long_method".parse::<Smell>().unwrap(), Smell::LongMethod);
        assert_eq!("DC".parse::<Smell>().unwrap(), Smell::DataClass);
        assert_eq!("Blob".parse::<Smell>().unwrap(), Smell::Other("Blob".into()));
    }
}
