//! Hyperparameter values, per-kind legality checks, and grid expansion.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::LearnerKind;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum ParamValue {
    Int(i64),
    Float(f64),
    Text(String),
}

impl ParamValue {
    /// Integers first, then floats, otherwise text.
    pub fn parse(s: &str) -> ParamValue {
        let t = s.trim();
        if let Ok(i) = t.parse::<i64>() {
            ParamValue::Int(i)
        } else if let Ok(f) = t.parse::<f64>() {
            ParamValue::Float(f)
        } else {
            ParamValue::Text(t.to_string())
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            ParamValue::Int(i) => Some(*i as f64),
            ParamValue::Float(f) => Some(*f),
            ParamValue::Text(_) => None,
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            ParamValue::Text(t) => Some(t),
            _ => None,
        }
    }
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Int(i) => write!(f, "{i}"),
            ParamValue::Float(x) => write!(f, "{x:?}"),
            ParamValue::Text(t) => f.write_str(t),
        }
    }
}

impl From<i64> for ParamValue {
    fn from(v: i64) -> Self {
        ParamValue::Int(v)
    }
}

impl From<f64> for ParamValue {
    fn from(v: f64) -> Self {
        ParamValue::Float(v)
    }
}

impl From<&str> for ParamValue {
    fn from(v: &str) -> Self {
        ParamValue::Text(v.to_string())
    }
}

/// A hyperparameter assignment. Absent names take the kind's default.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct HyperParams(BTreeMap<String, ParamValue>);

impl HyperParams {
    pub fn new() -> Self {
        HyperParams::default()
    }

    pub fn with(mut self, name: &str, value: impl Into<ParamValue>) -> Self {
        self.0.insert(name.to_string(), value.into());
        self
    }

    pub fn set(&mut self, name: &str, value: ParamValue) {
        self.0.insert(name.to_string(), value);
    }

    pub fn get(&self, name: &str) -> Option<&ParamValue> {
        self.0.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &ParamValue)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for HyperParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|(k, v)| format!("{k}={v}")).collect();
        f.write_str(&parts.join(";"))
    }
}

impl FromStr for HyperParams {
    type Err = Error;

    /// `name=value;name=value` (the `Display` form).
    fn from_str(s: &str) -> Result<Self> {
        let mut hp = HyperParams::new();
        for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::InvalidInput(format!("expected name=value, got `{part}`")))?;
            hp.set(k.trim(), ParamValue::parse(v));
        }
        Ok(hp)
    }
}

fn invalid(kind: LearnerKind, message: impl Into<String>) -> Error {
    Error::InvalidParams {
        kind: kind.as_str().to_string(),
        message: message.into(),
    }
}

/// Reads typed values out of a [`HyperParams`] with defaults, rejecting
/// unknown names.
pub(crate) struct Reader<'a> {
    kind: LearnerKind,
    params: &'a HyperParams,
}

impl<'a> Reader<'a> {
    pub(crate) fn new(kind: LearnerKind, params: &'a HyperParams, legal: &[&str]) -> Result<Self> {
        if let Some((name, _)) = params.iter().find(|(n, _)| !legal.contains(n)) {
            return Err(invalid(
                kind,
                format!("unknown parameter `{name}` (legal: {})", legal.join(", ")),
            ));
        }
        Ok(Reader { kind, params })
    }

    pub(crate) fn int(&self, name: &str, default: i64, min: i64) -> Result<i64> {
        let v = match self.params.get(name) {
            None => default,
            Some(ParamValue::Int(i)) => *i,
            Some(other) => return Err(invalid(self.kind, format!("`{name}` must be an integer, got `{other}`"))),
        };
        if v < min {
            return Err(invalid(self.kind, format!("`{name}` must be >= {min}, got {v}")));
        }
        Ok(v)
    }

    pub(crate) fn positive(&self, name: &str, default: f64) -> Result<f64> {
        let v = match self.params.get(name) {
            None => default,
            Some(p) => p
                .as_f64()
                .ok_or_else(|| invalid(self.kind, format!("`{name}` must be a number")))?,
        };
        if !(v > 0.0 && v.is_finite()) {
            return Err(invalid(self.kind, format!("`{name}` must be > 0, got {v}")));
        }
        Ok(v)
    }

    pub(crate) fn choice(&self, name: &str, default: &str, legal: &[&str]) -> Result<String> {
        let v = match self.params.get(name) {
            None => default.to_string(),
            Some(p) => p.to_string().to_ascii_lowercase(),
        };
        if !legal.contains(&v.as_str()) {
            return Err(invalid(
                self.kind,
                format!("`{name}` must be one of {}, got `{v}`", legal.join("/")),
            ));
        }
        Ok(v)
    }

    /// An integer, or one of the given keywords.
    pub(crate) fn int_or(&self, name: &str, default: &str, keywords: &[&str], min: i64) -> Result<IntOr> {
        match self.params.get(name) {
            None => Ok(IntOr::Keyword(default.to_string())),
            Some(ParamValue::Int(i)) if *i >= min => Ok(IntOr::Int(*i as usize)),
            Some(ParamValue::Text(t)) if keywords.contains(&t.to_ascii_lowercase().as_str()) => {
                Ok(IntOr::Keyword(t.to_ascii_lowercase()))
            }
            Some(ParamValue::Float(f)) if *f > 0.0 && *f <= 1.0 && keywords.contains(&"fraction") => {
                Ok(IntOr::Fraction(*f))
            }
            Some(other) => Err(invalid(
                self.kind,
                format!("`{name}` must be an integer >= {min} or one of {}, got `{other}`", keywords.join("/")),
            )),
        }
    }
}

pub(crate) enum IntOr {
    Int(usize),
    Fraction(f64),
    Keyword(String),
}

/// Named value lists whose cartesian product is a grid. The first parameter
/// varies slowest.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GridSpec {
    pub axes: Vec<(String, Vec<ParamValue>)>,
}

impl GridSpec {
    pub fn axis(mut self, name: &str, values: Vec<ParamValue>) -> Self {
        self.set_axis(name, values);
        self
    }

    /// Replaces an existing axis in place, or appends a new one.
    pub fn set_axis(&mut self, name: &str, values: Vec<ParamValue>) {
        match self.axes.iter_mut().find(|(n, _)| n == name) {
            Some(slot) => slot.1 = values,
            None => self.axes.push((name.to_string(), values)),
        }
    }

    pub fn expand(&self) -> Vec<HyperParams> {
        let mut out = vec![HyperParams::new()];
        for (name, values) in &self.axes {
            out = out
                .into_iter()
                .flat_map(|hp| {
                    values
                        .iter()
                        .map(move |v| hp.clone().with(name, v.clone()))
                        .collect::<Vec<_>>()
                })
                .collect();
        }
        out
    }

    pub fn describe(&self) -> String {
        self.axes
            .iter()
            .map(|(n, vs)| {
                let vs: Vec<String> = vs.iter().map(ToString::to_string).collect();
                format!("{n}={{{}}}", vs.join(","))
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn ints(v: &[i64]) -> Vec<ParamValue> {
    v.iter().map(|&x| ParamValue::Int(x)).collect()
}

fn floats(v: &[f64]) -> Vec<ParamValue> {
    v.iter().map(|&x| ParamValue::Float(x)).collect()
}

fn texts(v: &[&str]) -> Vec<ParamValue> {
    v.iter().map(|&x| ParamValue::Text(x.to_string())).collect()
}

/// The default tuning grid of each learner.
pub fn default_grid(kind: LearnerKind) -> GridSpec {
    let g = GridSpec::default();
    match kind {
        LearnerKind::Knn => g.axis("k", ints(&[1, 3, 5, 7, 11, 15, 21])),
        LearnerKind::Svm => g
            .axis("kernel", texts(&["linear", "rbf"]))
            .axis("C", floats(&[0.1, 1.0, 10.0]))
            .axis(
                "gamma",
                vec![ParamValue::Text("scale".into()), ParamValue::Float(0.01), ParamValue::Float(0.1)],
            ),
        LearnerKind::NaiveBayes => g.axis("var_smoothing", floats(&[1e-9, 1e-6, 1e-3])),
        LearnerKind::DecisionTree => g
            .axis("criterion", texts(&["gini", "gain_ratio"]))
            .axis("min_samples_split", ints(&[2, 5, 10]))
            .axis("min_samples_leaf", ints(&[1, 3, 5]))
            .axis(
                "max_leaf_nodes",
                vec![ParamValue::Text("unbounded".into()), ParamValue::Int(32)],
            ),
        LearnerKind::RandomForest => g.axis("n_estimators", ints(&[50, 100, 200])),
        LearnerKind::LogisticRegression => g
            .axis("C", floats(&[0.01, 0.1, 1.0, 10.0]))
            .axis("max_iter", ints(&[2000])),
        LearnerKind::Mlp => g
            .axis("hidden_units", ints(&[16, 32]))
            .axis("learning_rate", floats(&[0.01, 0.1]))
            .axis("epochs", ints(&[500])),
    }
}
