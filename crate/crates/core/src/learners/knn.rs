use super::params::Reader;
use super::{HyperParams, LearnerKind};
use crate::error::Result;
use crate::matrix::{squared_distance, Matrix};

pub(crate) struct Config {
    pub k: usize,
}

impl Config {
    pub fn read(p: &HyperParams) -> Result<Self> {
        let r = Reader::new(LearnerKind::Knn, p, &["k"])?;
        Ok(Config {
            k: r.int("k", 5, 1)? as usize,
        })
    }
}

/// Stores the standardized training rows; the score of a query is the
/// positive fraction among its k nearest rows (Euclidean), ties going to the
/// lower training index. k is clamped to the training size.
#[derive(Debug, Clone)]
pub(crate) struct Knn {
    k: usize,
    x: Matrix,
    y: Vec<u8>,
}

impl Knn {
    pub fn fit(cfg: &Config, x: Matrix, y: &[u8]) -> Self {
        Knn {
            k: cfg.k.min(x.rows()),
            x,
            y: y.to_vec(),
        }
    }

    pub fn score(&self, q: &[f64]) -> f64 {
        let mut d: Vec<(f64, usize)> = self
            .x
            .iter_rows()
            .enumerate()
            .map(|(i, r)| (squared_distance(r, q), i))
            .collect();
        let k = self.k;
        if k < d.len() {
            d.select_nth_unstable_by(k - 1, |a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        }
        let pos = d[..k].iter().filter(|(_, i)| self.y[*i] == 1).count();
        pos as f64 / k as f64
    }
}
