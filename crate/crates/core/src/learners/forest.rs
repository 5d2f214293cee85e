use rand::Rng;

use super::params::Reader;
use super::tree::{self, MaxFeatures, Tree, TREE_PARAMS};
use super::{HyperParams, LearnerKind};
use crate::error::Result;
use crate::matrix::Matrix;
use crate::seed;

pub(crate) struct Config {
    pub n_estimators: usize,
    pub tree: tree::Config,
}

impl Config {
    pub fn read(p: &HyperParams) -> Result<Self> {
        let legal: Vec<&str> = std::iter::once("n_estimators")
            .chain(TREE_PARAMS.iter().copied().filter(|&n| n != "max_features"))
            .collect();
        let r = Reader::new(LearnerKind::RandomForest, p, &legal)?;
        let mut tree = tree::Config::from_reader(&r, LearnerKind::RandomForest)?;
        tree.max_features = MaxFeatures::Sqrt;
        Ok(Config {
            n_estimators: r.int("n_estimators", 100, 1)? as usize,
            tree,
        })
    }
}

/// Bagged trees with ceil(sqrt(d)) candidate features per split. Each tree
/// votes positive when its leaf fraction is at least 1/2; the score is the
/// share of positive votes.
#[derive(Debug, Clone)]
pub(crate) struct Forest {
    trees: Vec<Tree>,
}

impl Forest {
    pub fn fit(cfg: &Config, x: &Matrix, y: &[u8], seed: u64) -> Self {
        let n = x.rows();
        let trees = (0..cfg.n_estimators as u64)
            .map(|t| {
                let mut rng = seed::rng_for(seed, &[t, 0]);
                let bootstrap: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
                Tree::fit(&cfg.tree, x, y, &bootstrap, seed::derive(seed, &[t, 1]))
            })
            .collect();
        Forest { trees }
    }

    pub fn score(&self, q: &[f64]) -> f64 {
        let votes = self.trees.iter().filter(|t| t.score(q) >= 0.5).count();
        votes as f64 / self.trees.len() as f64
    }
}
