//! Run configuration file: one `key = value` per line, `#` starts a comment,
//! lists are comma-separated.
//!
//! ```text
//! seed = 7
//! folds = 5
//! models = rf,dt,lr,nb,mlp,knn,svm
//! out = runs/seed7
//! shared_params = false
//! override_scenario_guard = false
//! permutations = 200
//! cases = LM:FE,FE:LM
//!
//! # canonical dataset files, relative to this file
//! dataset.lm = data/lm.ismd
//! dataset.fe = data/fe.ismd
//!
//! # raw files are ingested on load
//! dataset.gc = data/god-class.arff
//! dataset.gc.positive = true
//! dataset.gc.language = Java
//! dataset.gc.granularity = class
//! dataset.dc = data/data-class.csv
//! dataset.dc.label_column = is_smell
//!
//! # grid overrides, <learner>.<parameter> = values
//! knn.k = 1,5,9
//! svm.kernel = rbf
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::dataset_io::Granularity;
use crate::error::{Error, Result};
use crate::learners::{default_grid, GridSpec, LearnerKind, ParamValue};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Arff,
    Csv,
    Canonical,
}

impl InputFormat {
    /// `.arff` and `.csv` by extension, anything else canonical.
    pub fn from_path(path: &Path) -> Self {
        match path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase)
            .as_deref()
        {
            Some("arff") => InputFormat::Arff,
            Some("csv") => InputFormat::Csv,
            _ => InputFormat::Canonical,
        }
    }
}

impl std::str::FromStr for InputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "arff" => Ok(InputFormat::Arff),
            "csv" => Ok(InputFormat::Csv),
            "canonical" => Ok(InputFormat::Canonical),
            _ => Err(Error::Config(format!("unknown format `{s}` (arff, csv, canonical)"))),
        }
    }
}

/// Where a dataset comes from and how to read it when it is not canonical.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetSource {
    pub path: PathBuf,
    pub format: InputFormat,
    pub language: String,
    pub granularity: Option<Granularity>,
    pub positive_level: String,
    pub label_column: String,
}

impl DatasetSource {
    pub fn new(path: PathBuf) -> Self {
        DatasetSource {
            format: InputFormat::from_path(&path),
            path,
            language: "Java".into(),
            granularity: None,
            positive_level: "true".into(),
            label_column: "is_smell".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunConfig {
    /// Keyed by upper-case smell code.
    pub datasets: BTreeMap<String, DatasetSource>,
    pub seed: Option<u64>,
    pub folds: Option<usize>,
    pub models: Option<Vec<LearnerKind>>,
    pub grids: BTreeMap<LearnerKind, GridSpec>,
    pub out: Option<PathBuf>,
    pub shared_params: Option<bool>,
    pub override_scenario_guard: Option<bool>,
    pub permutations: Option<usize>,
    pub cases: Option<Vec<(String, String)>>,
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(Error::Config(format!("`{key}` expects true/false, got `{v}`"))),
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::Config(format!("`{key}` expects a non-negative integer, got `{v}`")))
}

fn list(v: &str) -> impl Iterator<Item = &str> {
    v.split(',').map(str::trim).filter(|s| !s.is_empty())
}

pub fn parse_models(v: &str) -> Result<Vec<LearnerKind>> {
    let models = list(v).map(str::parse).collect::<Result<Vec<LearnerKind>>>()?;
    if models.is_empty() {
        return Err(Error::Config("empty model list".into()));
    }
    Ok(models)
}

/// `SRC:TGT` smell-code pair.
pub fn parse_case(v: &str) -> Result<(String, String)> {
    let (a, b) = v
        .split_once(':')
        .ok_or_else(|| Error::Config(format!("case `{v}` must look like LM:FE")))?;
    let (a, b) = (a.trim().to_ascii_uppercase(), b.trim().to_ascii_uppercase());
    if a.is_empty() || b.is_empty() {
        return Err(Error::Config(format!("case `{v}` must look like LM:FE")));
    }
    Ok((a, b))
}

impl RunConfig {
    /// Relative dataset paths resolve against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let mut cfg = RunConfig::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", n + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            cfg.apply(key, value, base)
                .map_err(|e| Error::Config(format!("line {}: {}", n + 1, strip_prefix(e))))?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        RunConfig::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    fn apply(&mut self, key: &str, value: &str, base: &Path) -> Result<()> {
        match key {
            "seed" => self.seed = Some(parse_num(key, value)?),
            "folds" => self.folds = Some(parse_num(key, value)?),
            "permutations" => self.permutations = Some(parse_num(key, value)?),
            "models" => self.models = Some(parse_models(value)?),
            "out" => self.out = Some(base.join(value)),
            "shared_params" => self.shared_params = Some(parse_bool(key, value)?),
            "override_scenario_guard" => self.override_scenario_guard = Some(parse_bool(key, value)?),
            "cases" => self.cases = Some(list(value).map(parse_case).collect::<Result<_>>()?),
            _ => {
                if let Some(rest) = key.strip_prefix("dataset.") {
                    return self.apply_dataset(rest, value, base);
                }
                let (kind, param) = key
                    .split_once('.')
                    .ok_or_else(|| Error::Config(format!("unknown key `{key}`")))?;
                let kind: LearnerKind = kind
                    .parse()
                    .map_err(|_| Error::Config(format!("unknown key `{key}`")))?;
                let values: Vec<ParamValue> = list(value).map(ParamValue::parse).collect();
                if values.is_empty() {
                    return Err(Error::Config(format!("`{key}` has no values")));
                }
                let grid = self.grids.entry(kind).or_insert_with(|| default_grid(kind));
                grid.set_axis(param, values);
                for point in grid.expand() {
                    kind.validate(&point)?;
                }
            }
        }
        Ok(())
    }

    fn apply_dataset(&mut self, rest: &str, value: &str, base: &Path) -> Result<()> {
        let (code, field) = match rest.split_once('.') {
            Some((c, f)) => (c.to_ascii_uppercase(), Some(f)),
            None => (rest.to_ascii_uppercase(), None),
        };
        let entry = self
            .datasets
            .entry(code.clone())
            .or_insert_with(|| DatasetSource::new(PathBuf::new()));
        match field {
            None => {
                let path = base.join(value);
                entry.format = InputFormat::from_path(&path);
                entry.path = path;
            }
            Some("format") => entry.format = value.parse()?,
            Some("language") => entry.language = value.to_string(),
            Some("granularity") => entry.granularity = Some(value.parse()?),
            Some("positive") => entry.positive_level = value.to_string(),
            Some("label_column") => entry.label_column = value.to_string(),
            Some(other) => return Err(Error::Config(format!("unknown dataset field `{other}` for {code}"))),
        }
        Ok(())
    }

    /// Every dataset entry names a file.
    pub fn check_paths(&self) -> Result<()> {
        for (code, d) in &self.datasets {
            if d.path.as_os_str().is_empty() {
                return Err(Error::Config(format!("dataset.{} has options but no path", code.to_ascii_lowercase())));
            }
            if !d.path.exists() {
                return Err(Error::Config(format!("dataset file `{}` does not exist", d.path.display())));
            }
        }
        Ok(())
    }
}

fn strip_prefix(e: Error) -> String {
    match e {
        Error::Config(m) => m,
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_documented_keys() {
        let text = "seed = 7\nfolds=3 # trailing\nmodels = knn, svm\ncases = LM:FE,fe:lm\n\
                    dataset.lm = data/lm.arff\ndataset.lm.positive = yes\n\
                    knn.k = 1,3\nsvm.C = 0.5\nshared_params = true\n";
        let cfg = RunConfig::parse(text, Path::new("/base")).unwrap();
        assert_eq!(cfg.seed, Some(7));
        assert_eq!(cfg.folds, Some(3));
        assert_eq!(cfg.models, Some(vec![LearnerKind::Knn, LearnerKind::Svm]));
        assert_eq!(cfg.cases.as_ref().unwrap()[1], ("FE".to_string(), "LM".to_string()));
        let lm = &cfg.datasets["LM"];
        assert_eq!(lm.path, Path::new("/base/data/lm.arff"));
        assert_eq!(lm.format, InputFormat::Arff);
        assert_eq!(lm.positive_level, "yes");
        assert_eq!(cfg.grids[&LearnerKind::Knn].expand().len(), 2);
        // untouched svm axes keep their defaults
        assert_eq!(cfg.grids[&LearnerKind::Svm].expand().len(), 6);
        assert_eq!(cfg.shared_params, Some(true));
    }

    #[test]
    fn errors_name_the_line() {
        let e = RunConfig::parse("seed = 1\nbogus\n", Path::new(".")).unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
        let e = RunConfig::parse("knn.k = 0\n", Path::new(".")).unwrap_err();
        assert!(e.to_string().contains("line 1"), "{e}");
        assert!(RunConfig::parse("xgb.depth = 3\n", Path::new(".")).is_err());
        assert!(RunConfig::parse("cases = LMFE\n", Path::new(".")).is_err());
    }
}
