//! Seven classical binary classifiers behind one fit/score contract, plus
//! stratified grid-search tuning.
//!
//! Every model z-scores its inputs with moments taken from the training
//! matrix. Scores grow with confidence in the positive class; the label is
//! `score >= threshold`, where the threshold is 0.5 for the probabilistic
//! kinds and 0 for the SVM decision value.

pub mod diagnostics;
mod forest;
mod grid;
mod knn;
mod logistic;
mod mlp;
mod naive_bayes;
mod params;
mod svm;
mod tree;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matrix::{column_moments, Matrix};

pub use grid::{cross_validate, grid_search, search_plan, stratified_folds, GridPoint, GridSearchResult};
pub use params::{default_grid, GridSpec, HyperParams, ParamValue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LearnerKind {
    RandomForest,
    DecisionTree,
    LogisticRegression,
    NaiveBayes,
    Mlp,
    Knn,
    Svm,
}

impl LearnerKind {
    /// In report row order.
    pub const ALL: [LearnerKind; 7] = [
        LearnerKind::RandomForest,
        LearnerKind::DecisionTree,
        LearnerKind::LogisticRegression,
        LearnerKind::NaiveBayes,
        LearnerKind::Mlp,
        LearnerKind::Knn,
        LearnerKind::Svm,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            LearnerKind::Knn => "knn",
            LearnerKind::NaiveBayes => "naive_bayes",
            LearnerKind::LogisticRegression => "logistic_regression",
            LearnerKind::DecisionTree => "decision_tree",
            LearnerKind::RandomForest => "random_forest",
            LearnerKind::Mlp => "mlp",
            LearnerKind::Svm => "svm",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            LearnerKind::RandomForest => "Random Forest",
            LearnerKind::DecisionTree => "Decision Tree (C4.5)",
            LearnerKind::LogisticRegression => "Logistic Regression",
            LearnerKind::NaiveBayes => "Naive Bayes",
            LearnerKind::Mlp => "Multilayer Perceptron",
            LearnerKind::Knn => "K-nearest neighbor",
            LearnerKind::Svm => "Support Vector Machine",
        }
    }

    pub fn threshold(self) -> f64 {
        match self {
            LearnerKind::Svm => 0.0,
            _ => 0.5,
        }
    }

    pub fn index(self) -> u64 {
        LearnerKind::ALL.iter().position(|&k| k == self).unwrap() as u64
    }

    /// Checks names and value domains without training anything.
    pub fn validate(self, params: &HyperParams) -> Result<()> {
        match self {
            LearnerKind::Knn => knn::Config::read(params).map(drop),
            LearnerKind::NaiveBayes => naive_bayes::Config::read(params).map(drop),
            LearnerKind::LogisticRegression => logistic::Config::read(params).map(drop),
            LearnerKind::DecisionTree => tree::Config::read(params).map(drop),
            LearnerKind::RandomForest => forest::Config::read(params).map(drop),
            LearnerKind::Mlp => mlp::Config::read(params).map(drop),
            LearnerKind::Svm => svm::Config::read(params).map(drop),
        }
    }
}

impl fmt::Display for LearnerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LearnerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace(['-', ' '], "_");
        Ok(match norm.as_str() {
            "knn" | "k_nearest_neighbor" | "k_nearest_neighbors" => LearnerKind::Knn,
            "naive_bayes" | "nb" => LearnerKind::NaiveBayes,
            "logistic_regression" | "lr" => LearnerKind::LogisticRegression,
            "decision_tree" | "dt" | "c4.5" => LearnerKind::DecisionTree,
            "random_forest" | "rf" => LearnerKind::RandomForest,
            "mlp" | "multilayer_perceptron" => LearnerKind::Mlp,
            "svm" | "svc" => LearnerKind::Svm,
            _ => return Err(Error::InvalidInput(format!("unknown learner `{s}`"))),
        })
    }
}

/// Per-feature z-scoring fitted on training rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    pub std_dev: Vec<f64>,
}

impl Standardizer {
    pub fn fit(x: &Matrix) -> Self {
        let (mean, std_dev) = column_moments(x);
        Standardizer { mean, std_dev }
    }

    pub fn transform_row(&self, row: &[f64], out: &mut [f64]) {
        for (j, (o, v)) in out.iter_mut().zip(row).enumerate() {
            *o = if self.std_dev[j] > 0.0 {
                (v - self.mean[j]) / self.std_dev[j]
            } else {
                0.0
            };
        }
    }

    pub fn transform(&self, x: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(x.rows(), x.cols());
        for i in 0..x.rows() {
            self.transform_row(x.row(i), out.row_mut(i));
        }
        out
    }
}

#[derive(Debug, Clone)]
enum State {
    Knn(knn::Knn),
    NaiveBayes(naive_bayes::GaussianNb),
    LogisticRegression(logistic::Logistic),
    DecisionTree(tree::Tree),
    RandomForest(forest::Forest),
    Mlp(mlp::Mlp),
    Svm(svm::Svm),
}

impl State {
    fn score(&self, z: &[f64]) -> f64 {
        match self {
            State::Knn(m) => m.score(z),
            State::NaiveBayes(m) => m.score(z),
            State::LogisticRegression(m) => m.score(z),
            State::DecisionTree(m) => m.score(z),
            State::RandomForest(m) => m.score(z),
            State::Mlp(m) => m.score(z),
            State::Svm(m) => m.decision(z),
        }
    }
}

/// A trained classifier.
#[derive(Debug, Clone)]
pub struct FittedModel {
    pub kind: LearnerKind,
    pub params: HyperParams,
    pub standardizer: Standardizer,
    state: State,
}

fn check_training(x: &Matrix, y: &[u8]) -> Result<()> {
    if x.is_empty() || x.cols() == 0 {
        return Err(Error::InvalidInput("empty training matrix".into()));
    }
    if y.len() != x.rows() {
        return Err(Error::InvalidInput(format!(
            "{} labels for {} training rows",
            y.len(),
            x.rows()
        )));
    }
    if y.iter().any(|&l| l > 1) {
        return Err(Error::InvalidInput("labels must be 0 or 1".into()));
    }
    let pos = y.iter().filter(|&&l| l == 1).count();
    if pos == 0 || pos == y.len() {
        return Err(Error::InvalidInput(
            "training labels contain a single class".into(),
        ));
    }
    Ok(())
}

pub fn fit(
    kind: LearnerKind,
    params: &HyperParams,
    x: &Matrix,
    y: &[u8],
    seed: u64,
) -> Result<FittedModel> {
    check_training(x, y)?;
    let standardizer = Standardizer::fit(x);
    let z = standardizer.transform(x);
    let state = match kind {
        LearnerKind::Knn => State::Knn(knn::Knn::fit(&knn::Config::read(params)?, z, y)),
        LearnerKind::NaiveBayes => {
            State::NaiveBayes(naive_bayes::GaussianNb::fit(&naive_bayes::Config::read(params)?, &z, y))
        }
        LearnerKind::LogisticRegression => State::LogisticRegression(logistic::Logistic::fit(
            &logistic::Config::read(params)?,
            &z,
            y,
        )),
        LearnerKind::DecisionTree => {
            let cfg = tree::Config::read(params)?;
            let idx: Vec<usize> = (0..z.rows()).collect();
            State::DecisionTree(tree::Tree::fit(&cfg, &z, y, &idx, seed))
        }
        LearnerKind::RandomForest => {
            State::RandomForest(forest::Forest::fit(&forest::Config::read(params)?, &z, y, seed))
        }
        LearnerKind::Mlp => State::Mlp(mlp::Mlp::fit(&mlp::Config::read(params)?, &z, y, seed)),
        LearnerKind::Svm => State::Svm(svm::Svm::fit(&svm::Config::read(params)?, &z, y)),
    };
    Ok(FittedModel {
        kind,
        params: params.clone(),
        standardizer,
        state,
    })
}

impl FittedModel {
    pub fn feature_count(&self) -> usize {
        self.standardizer.mean.len()
    }

    pub fn threshold(&self) -> f64 {
        self.kind.threshold()
    }

    pub fn predict_score(&self, x: &Matrix) -> Result<Vec<f64>> {
        if x.cols() != self.feature_count() {
            return Err(Error::DimensionMismatch {
                expected: self.feature_count(),
                got: x.cols(),
            });
        }
        let mut z = vec![0.0; x.cols()];
        Ok(x
            .iter_rows()
            .map(|r| {
                self.standardizer.transform_row(r, &mut z);
                self.state.score(&z)
            })
            .collect())
    }

    pub fn predict_label(&self, x: &Matrix) -> Result<Vec<u8>> {
        let t = self.threshold();
        Ok(self
            .predict_score(x)?
            .into_iter()
            .map(|s| u8::from(s >= t))
            .collect())
    }
}

#[inline]
pub(crate) fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// log(1 + e^z) without overflow.
#[inline]
pub(crate) fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kind_names_round_trip() {
        for k in LearnerKind::ALL {
            assert_eq!(k.as_str().parse::<LearnerKind>().unwrap(), k);
        }
        assert!("xgboost".parse::<LearnerKind>().is_err());
    }

    #[test]
    fn standardizer_zero_variance_maps_to_zero() {
        let x = Matrix::from_rows(&[vec![1.0, 5.0], vec![3.0, 5.0]], 2).unwrap();
        let s = Standardizer::fit(&x);
        assert_eq!(s.transform(&x).as_slice(), &[-1.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn fit_rejects_bad_input() {
        let x = Matrix::from_rows(&[vec![1.0], vec![2.0]], 1).unwrap();
        let hp = HyperParams::new();
        assert!(fit(LearnerKind::Knn, &hp, &x, &[1, 1], 0).is_err());
        assert!(fit(LearnerKind::Knn, &hp, &Matrix::zeros(0, 1), &[], 0).is_err());
        assert!(fit(LearnerKind::Knn, &HyperParams::new().with("k", 0i64), &x, &[1, 0], 0).is_err());
        assert!(fit(LearnerKind::Knn, &HyperParams::new().with("depth", 3i64), &x, &[1, 0], 0).is_err());
        let m = fit(LearnerKind::Knn, &hp, &x, &[1, 0], 0).unwrap();
        assert!(m.predict_score(&Matrix::zeros(1, 2)).is_err());
    }

    #[test]
    fn sigmoid_softplus_stable() {
        assert_eq!(sigmoid(0.0), 0.5);
        assert!(sigmoid(-800.0) >= 0.0 && sigmoid(800.0) <= 1.0);
        assert!((softplus(800.0) - 800.0).abs() < 1e-9);
        assert!(softplus(-800.0) >= 0.0);
    }
}
