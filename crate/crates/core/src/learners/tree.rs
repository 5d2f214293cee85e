//! Binary decision tree grown best-first.
//!
//! Splits have the form `x[f] <= t` where `t` is a training value of the
//! node, so the partition depends only on the per-feature ordering of the
//! training data.

use rand::seq::index;

use super::params::{IntOr, Reader};
use super::{HyperParams, LearnerKind};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::seed;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Criterion {
    Gini,
    /// C4.5 information gain ratio.
    GainRatio,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum MaxFeatures {
    All,
    Sqrt,
    Log2,
    Count(usize),
    Fraction(f64),
}

impl MaxFeatures {
    pub fn resolve(self, d: usize) -> usize {
        let k = match self {
            MaxFeatures::All => d,
            MaxFeatures::Sqrt => (d as f64).sqrt().ceil() as usize,
            MaxFeatures::Log2 => (d as f64).log2().ceil() as usize,
            MaxFeatures::Count(k) => k,
            MaxFeatures::Fraction(f) => (f * d as f64).ceil() as usize,
        };
        k.clamp(1, d.max(1))
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Config {
    pub criterion: Criterion,
    pub max_features: MaxFeatures,
    pub max_leaf_nodes: Option<usize>,
    pub min_samples_split: usize,
    pub min_samples_leaf: usize,
}

pub(crate) const TREE_PARAMS: [&str; 5] = [
    "criterion",
    "max_features",
    "max_leaf_nodes",
    "min_samples_split",
    "min_samples_leaf",
];

impl Config {
    pub fn from_reader(r: &Reader<'_>, kind: LearnerKind) -> Result<Self> {
        let criterion = match r.choice("criterion", "gini", &["gini", "gain_ratio"])?.as_str() {
            "gini" => Criterion::Gini,
            _ => Criterion::GainRatio,
        };
        let max_features = match r.int_or("max_features", "all", &["all", "sqrt", "log2", "fraction"], 1)? {
            IntOr::Int(k) => MaxFeatures::Count(k),
            IntOr::Fraction(f) => MaxFeatures::Fraction(f),
            IntOr::Keyword(k) => match k.as_str() {
                "sqrt" => MaxFeatures::Sqrt,
                "log2" => MaxFeatures::Log2,
                "all" => MaxFeatures::All,
                _ => {
                    return Err(Error::InvalidParams {
                        kind: kind.as_str().into(),
                        message: "max_features `fraction` takes a number in (0, 1]".into(),
                    })
                }
            },
        };
        let max_leaf_nodes = match r.int_or("max_leaf_nodes", "unbounded", &["unbounded", "none"], 2)? {
            IntOr::Int(k) => Some(k),
            _ => None,
        };
        Ok(Config {
            criterion,
            max_features,
            max_leaf_nodes,
            min_samples_split: r.int("min_samples_split", 2, 2)? as usize,
            min_samples_leaf: r.int("min_samples_leaf", 1, 1)? as usize,
        })
    }

    pub fn read(p: &HyperParams) -> Result<Self> {
        let r = Reader::new(LearnerKind::DecisionTree, p, &TREE_PARAMS)?;
        Self::from_reader(&r, LearnerKind::DecisionTree)
    }
}

#[derive(Debug, Clone)]
enum Node {
    Leaf { positive_fraction: f64 },
    Split { feature: usize, threshold: f64, left: usize, right: usize },
}

#[derive(Debug, Clone)]
pub(crate) struct Tree {
    nodes: Vec<Node>,
}

#[derive(Debug, Clone, Copy)]
struct SplitChoice {
    feature: usize,
    threshold: f64,
    /// Criterion value, used to pick among this node's candidates.
    quality: f64,
    /// Node-size-weighted quality, used to order nodes for expansion.
    priority: f64,
}

fn gini(pos: usize, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let p = pos as f64 / n as f64;
    2.0 * p * (1.0 - p)
}

fn entropy(pos: usize, n: usize) -> f64 {
    let h = |c: usize| {
        if c == 0 || c == n {
            0.0
        } else {
            let p = c as f64 / n as f64;
            -p * p.log2()
        }
    };
    if n == 0 {
        0.0
    } else {
        h(pos) + h(n - pos)
    }
}

struct Builder<'a> {
    cfg: &'a Config,
    x: &'a Matrix,
    y: &'a [u8],
    total: usize,
    rng: seed::Rng,
}

impl Builder<'_> {
    fn best_split(&mut self, idx: &[usize]) -> Option<SplitChoice> {
        let n = idx.len();
        let pos = idx.iter().filter(|&&i| self.y[i] == 1).count();
        if n < self.cfg.min_samples_split || pos == 0 || pos == n || n < 2 * self.cfg.min_samples_leaf {
            return None;
        }
        let d = self.x.cols();
        let k = self.cfg.max_features.resolve(d);
        let features: Vec<usize> = if k >= d {
            (0..d).collect()
        } else {
            let mut f = index::sample(&mut self.rng, d, k).into_vec();
            f.sort_unstable();
            f
        };

        let parent_gini = gini(pos, n);
        let parent_entropy = entropy(pos, n);
        let mut best: Option<SplitChoice> = None;
        let mut order = idx.to_vec();
        for &f in &features {
            order.sort_by(|&a, &b| self.x.get(a, f).total_cmp(&self.x.get(b, f)));
            let mut left_pos = 0;
            for split in 1..n {
                let prev = order[split - 1];
                left_pos += usize::from(self.y[prev] == 1);
                let (lo, hi) = (self.x.get(prev, f), self.x.get(order[split], f));
                if lo == hi || split < self.cfg.min_samples_leaf || n - split < self.cfg.min_samples_leaf {
                    continue;
                }
                let (nl, nr) = (split, n - split);
                let (wl, wr) = (nl as f64 / n as f64, nr as f64 / n as f64);
                let right_pos = pos - left_pos;
                let quality = match self.cfg.criterion {
                    Criterion::Gini => parent_gini - (wl * gini(left_pos, nl) + wr * gini(right_pos, nr)),
                    Criterion::GainRatio => {
                        let gain = parent_entropy
                            - (wl * entropy(left_pos, nl) + wr * entropy(right_pos, nr));
                        let split_info = -(wl * wl.log2() + wr * wr.log2());
                        if gain <= 1e-12 {
                            0.0
                        } else {
                            gain / split_info
                        }
                    }
                };
                if quality > 1e-12 && best.is_none_or(|b| quality > b.quality) {
                    best = Some(SplitChoice {
                        feature: f,
                        threshold: lo,
                        quality,
                        priority: quality * n as f64 / self.total as f64,
                    });
                }
            }
        }
        best
    }
}

struct Pending {
    node: usize,
    idx: Vec<usize>,
    split: SplitChoice,
}

impl Tree {
    /// Grows a tree over the rows `idx` of `x` (repeats allowed, as in a bootstrap sample).
    pub fn fit(cfg: &Config, x: &Matrix, y: &[u8], idx: &[usize], seed: u64) -> Self {
        let mut b = Builder {
            cfg,
            x,
            y,
            total: idx.len().max(1),
            rng: seed::rng(seed),
        };
        let leaf = |rows: &[usize]| Node::Leaf {
            positive_fraction: if rows.is_empty() {
                0.0
            } else {
                rows.iter().filter(|&&i| y[i] == 1).count() as f64 / rows.len() as f64
            },
        };
        let mut nodes = vec![leaf(idx)];
        let mut frontier: Vec<Pending> = Vec::new();
        if let Some(split) = b.best_split(idx) {
            frontier.push(Pending { node: 0, idx: idx.to_vec(), split });
        }
        let mut leaves = 1;
        while !frontier.is_empty() && cfg.max_leaf_nodes.is_none_or(|m| leaves < m) {
            // highest priority first; earliest-created node on ties
            let pick = frontier
                .iter()
                .enumerate()
                .max_by(|(_, a), (_, c)| {
                    a.split
                        .priority
                        .total_cmp(&c.split.priority)
                        .then(c.node.cmp(&a.node))
                })
                .map(|(i, _)| i)
                .unwrap();
            let Pending { node, idx, split } = frontier.swap_remove(pick);
            let (l_idx, r_idx): (Vec<usize>, Vec<usize>) = idx
                .iter()
                .partition(|&&i| x.get(i, split.feature) <= split.threshold);
            let left = nodes.len();
            nodes.push(leaf(&l_idx));
            let right = nodes.len();
            nodes.push(leaf(&r_idx));
            nodes[node] = Node::Split {
                feature: split.feature,
                threshold: split.threshold,
                left,
                right,
            };
            leaves += 1;
            for (child, rows) in [(left, l_idx), (right, r_idx)] {
                if let Some(s) = b.best_split(&rows) {
                    frontier.push(Pending { node: child, idx: rows, split: s });
                }
            }
        }
        Tree { nodes }
    }

    /// Positive fraction of the leaf `q` falls into.
    pub fn score(&self, q: &[f64]) -> f64 {
        let mut at = 0;
        loop {
            match self.nodes[at] {
                Node::Leaf { positive_fraction } => return positive_fraction,
                Node::Split { feature, threshold, left, right } => {
                    at = if q[feature] <= threshold { left } else { right };
                }
            }
        }
    }

    #[cfg(test)]
    pub fn leaf_count(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, Node::Leaf { .. })).count()
    }
}
