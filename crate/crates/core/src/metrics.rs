//! Evaluation measures: confusion counts, precision, rank AUC, and the
//! kernel two-sample discrepancy (unbiased squared MMD with an RBF kernel).

use rayon::prelude::*;
use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::matrix::{squared_distance, zscore_with, Matrix};
use crate::seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConfusionMatrix {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
}

impl ConfusionMatrix {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }

    pub fn accuracy(&self) -> f64 {
        if self.total() == 0 {
            0.0
        } else {
            (self.tp + self.tn) as f64 / self.total() as f64
        }
    }
}

pub fn confusion(y_true: &[u8], y_pred: &[u8]) -> Result<ConfusionMatrix> {
    if y_true.len() != y_pred.len() {
        return Err(Error::InvalidInput(format!(
            "{} labels vs {} predictions",
            y_true.len(),
            y_pred.len()
        )));
    }
    if y_true.is_empty() {
        return Err(Error::InvalidInput("confusion of an empty sample".into()));
    }
    let mut cm = ConfusionMatrix::default();
    for (&t, &p) in y_true.iter().zip(y_pred) {
        match (t == 1, p == 1) {
            (true, true) => cm.tp += 1,
            (false, true) => cm.fp += 1,
            (false, false) => cm.tn += 1,
            (true, false) => cm.fn_ += 1,
        }
    }
    Ok(cm)
}

/// `tp / (tp + fp)`; an all-negative predictor scores 0.
pub fn precision(cm: &ConfusionMatrix) -> f64 {
    let predicted = cm.tp + cm.fp;
    if predicted == 0 {
        0.0
    } else {
        cm.tp as f64 / predicted as f64
    }
}

/// Area under the ROC curve as the Mann-Whitney statistic: the fraction of
/// (positive, negative) pairs in which the positive scores higher, ties
/// counting one half. Computed from mid-ranks in O(n log n).
pub fn auc(y_true: &[u8], scores: &[f64]) -> Result<f64> {
    if y_true.len() != scores.len() {
        return Err(Error::InvalidInput(format!(
            "{} labels vs {} scores",
            y_true.len(),
            scores.len()
        )));
    }
    let n_pos = y_true.iter().filter(|&&y| y == 1).count();
    let n_neg = y_true.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::InvalidInput("AUC needs both classes".into()));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));

    // Ranks are 1-based; a tie block spanning ranks lo..=hi shares (lo+hi)/2.
    // Twice the rank sum stays integral, so the statistic is exact.
    let mut twice_rank_sum: u64 = 0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]].total_cmp(&scores[order[i]]).is_eq() {
            j += 1;
        }
        let twice_mid = (i + 1 + j + 1) as u64;
        let pos_in_block = order[i..=j].iter().filter(|&&k| y_true[k] == 1).count() as u64;
        twice_rank_sum += twice_mid * pos_in_block;
        i = j + 1;
    }
    let n1 = n_pos as u64;
    let twice_u = twice_rank_sum - n1 * (n1 + 1);
    Ok(twice_u as f64 / (2.0 * n_pos as f64 * n_neg as f64))
}

/// Empirical ROC points (fpr, tpr), starting at (0,0), one point per distinct score.
pub fn roc_curve(y_true: &[u8], scores: &[f64]) -> Result<Vec<(f64, f64)>> {
    if y_true.len() != scores.len() {
        return Err(Error::InvalidInput("length mismatch".into()));
    }
    let p = y_true.iter().filter(|&&y| y == 1).count() as f64;
    let n = y_true.len() as f64 - p;
    if p == 0.0 || n == 0.0 {
        return Err(Error::InvalidInput("ROC needs both classes".into()));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    let mut pts = vec![(0.0, 0.0)];
    let (mut tp, mut fp) = (0usize, 0usize);
    for (k, &i) in order.iter().enumerate() {
        if y_true[i] == 1 {
            tp += 1;
        } else {
            fp += 1;
        }
        let last_of_block = order
            .get(k + 1)
            .is_none_or(|&nx| !scores[nx].total_cmp(&scores[i]).is_eq());
        if last_of_block {
            pts.push((fp as f64 / n, tp as f64 / p));
        }
    }
    Ok(pts)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MmdResult {
    /// Unbiased estimate; can dip slightly below zero.
    pub mmd2_unbiased: f64,
    pub bandwidth: f64,
    pub n_a: usize,
    pub n_b: usize,
}

/// Order-independent sum of values in [0, 1] via 2^-62 fixed point.
#[derive(Default)]
struct FixedSum(i128);

impl FixedSum {
    const SCALE: f64 = (1u64 << 62) as f64;

    fn add(&mut self, v: f64) {
        self.0 += (v * Self::SCALE).round() as i128;
    }

    fn value(&self) -> f64 {
        self.0 as f64 / Self::SCALE
    }
}

/// Pooled z-scoring; moments are accumulated per input and then combined so
/// that swapping the inputs gives bit-identical results.
fn pooled_standardize(a: &Matrix, b: &Matrix) -> (Matrix, Matrix) {
    let d = a.cols();
    let n = (a.rows() + b.rows()) as f64;
    let col_sum = |m: &Matrix, j: usize| m.iter_rows().map(|r| r[j]).sum::<f64>();
    let mean: Vec<f64> = (0..d).map(|j| (col_sum(a, j) + col_sum(b, j)) / n).collect();
    let dev = |m: &Matrix, j: usize| {
        m.iter_rows()
            .map(|r| (r[j] - mean[j]) * (r[j] - mean[j]))
            .sum::<f64>()
    };
    let sd: Vec<f64> = (0..d).map(|j| ((dev(a, j) + dev(b, j)) / n).sqrt()).collect();
    (zscore_with(a, &mean, &sd), zscore_with(b, &mean, &sd))
}

fn check_pair(a: &Matrix, b: &Matrix, min_rows: usize) -> Result<()> {
    if a.cols() != b.cols() {
        return Err(Error::DimensionMismatch {
            expected: a.cols(),
            got: b.cols(),
        });
    }
    if a.rows() < min_rows || b.rows() < min_rows {
        return Err(Error::InvalidInput(format!(
            "MMD needs at least {min_rows} rows per sample (got {} and {})",
            a.rows(),
            b.rows()
        )));
    }
    Ok(())
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

fn median_of_standardized(za: &Matrix, zb: &Matrix) -> f64 {
    let rows: Vec<&[f64]> = za.iter_rows().chain(zb.iter_rows()).collect();
    let mut dists = Vec::with_capacity(rows.len() * (rows.len() - 1) / 2);
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            dists.push(squared_distance(rows[i], rows[j]).sqrt());
        }
    }
    let m = median(dists);
    if m > 0.0 {
        m
    } else {
        1.0
    }
}

/// Median pairwise Euclidean distance over the pooled, pooled-standardized
/// rows; falls back to 1.0 when the median is zero.
pub fn median_heuristic(a: &Matrix, b: &Matrix) -> Result<f64> {
    if a.cols() != b.cols() {
        return Err(Error::DimensionMismatch {
            expected: a.cols(),
            got: b.cols(),
        });
    }
    if a.rows() + b.rows() < 2 {
        return Err(Error::InvalidInput("median heuristic needs 2 pooled rows".into()));
    }
    let (za, zb) = pooled_standardize(a, b);
    Ok(median_of_standardized(&za, &zb))
}

/// Same statistic without the pooled z-scoring; for callers that already
/// standardized their inputs.
pub fn median_heuristic_raw(a: &Matrix, b: &Matrix) -> Result<f64> {
    check_pair(a, b, 0)?;
    if a.rows() + b.rows() < 2 {
        return Err(Error::InvalidInput("median heuristic needs 2 pooled rows".into()));
    }
    Ok(median_of_standardized(a, b))
}

/// Gram matrix of the pooled rows under k(x,y) = exp(-|x-y|^2 / (2 sigma^2)).
struct PooledGram {
    n: usize,
    k: Vec<f64>,
}

impl PooledGram {
    fn new(rows: &[&[f64]], bandwidth: f64) -> Self {
        let n = rows.len();
        let denom = 2.0 * bandwidth * bandwidth;
        let mut k = vec![0.0; n * n];
        for i in 0..n {
            k[i * n + i] = 1.0;
            for j in i + 1..n {
                let v = (-squared_distance(rows[i], rows[j]) / denom).exp();
                k[i * n + j] = v;
                k[j * n + i] = v;
            }
        }
        PooledGram { n, k }
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.k[i * self.n + j]
    }

    /// Unbiased MMD^2 between the row groups `xa` and `xb` (pooled indices).
    fn mmd2(&self, xa: &[usize], xb: &[usize]) -> f64 {
        let within = |idx: &[usize]| {
            let mut s = FixedSum::default();
            for (p, &i) in idx.iter().enumerate() {
                for &j in &idx[p + 1..] {
                    s.add(self.at(i, j));
                }
            }
            let m = idx.len() as f64;
            2.0 * s.value() / (m * (m - 1.0))
        };
        let mut cross = FixedSum::default();
        for &i in xa {
            for &j in xb {
                cross.add(self.at(i, j));
            }
        }
        let cross = cross.value() / (xa.len() as f64 * xb.len() as f64);
        (within(xa) + within(xb)) - 2.0 * cross
    }
}

/// Unbiased squared MMD with an RBF kernel, after pooled z-scoring of the columns.
pub fn mmd2(a: &Matrix, b: &Matrix, bandwidth: f64) -> Result<MmdResult> {
    check_pair(a, b, 2)?;
    if !(bandwidth > 0.0 && bandwidth.is_finite()) {
        return Err(Error::InvalidInput(format!("bandwidth must be > 0, got {bandwidth}")));
    }
    let (za, zb) = pooled_standardize(a, b);
    let rows: Vec<&[f64]> = za.iter_rows().chain(zb.iter_rows()).collect();
    let gram = PooledGram::new(&rows, bandwidth);
    let xa: Vec<usize> = (0..a.rows()).collect();
    let xb: Vec<usize> = (a.rows()..rows.len()).collect();
    Ok(MmdResult {
        mmd2_unbiased: gram.mmd2(&xa, &xb),
        bandwidth,
        n_a: a.rows(),
        n_b: b.rows(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MmdTest {
    pub observed: MmdResult,
    /// (1 + #{null >= observed}) / (1 + permutations)
    pub p_value: f64,
    /// 95th percentile of the permutation distribution.
    pub null_q95: f64,
    pub permutations: usize,
}

impl MmdTest {
    /// The two samples are flagged as differing when the observed statistic
    /// exceeds the permutation 95th percentile.
    pub fn distributions_differ(&self) -> bool {
        self.observed.mmd2_unbiased > self.null_q95
    }
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Permutation two-sample test: the pooled rows are reshuffled into groups of
/// the original sizes `permutations` times. The bandwidth (median heuristic
/// when `None`) is fixed from the pooled sample, which every permutation shares.
pub fn mmd_permutation_test(
    a: &Matrix,
    b: &Matrix,
    bandwidth: Option<f64>,
    permutations: usize,
    seed: u64,
) -> Result<MmdTest> {
    check_pair(a, b, 2)?;
    let (za, zb) = pooled_standardize(a, b);
    let bandwidth = match bandwidth {
        Some(bw) if bw > 0.0 && bw.is_finite() => bw,
        Some(bw) => return Err(Error::InvalidInput(format!("bandwidth must be > 0, got {bw}"))),
        None => median_of_standardized(&za, &zb),
    };
    let rows: Vec<&[f64]> = za.iter_rows().chain(zb.iter_rows()).collect();
    let gram = PooledGram::new(&rows, bandwidth);
    let n_a = a.rows();
    let all: Vec<usize> = (0..rows.len()).collect();
    let observed = gram.mmd2(&all[..n_a], &all[n_a..]);

    let mut null: Vec<f64> = (0..permutations)
        .into_par_iter()
        .map(|p| {
            let mut rng = seed::rng_for(seed, &[p as u64]);
            let mut idx = all.clone();
            idx.shuffle(&mut rng);
            gram.mmd2(&idx[..n_a], &idx[n_a..])
        })
        .collect();
    let exceed = null.iter().filter(|&&v| v >= observed).count();
    null.sort_by(f64::total_cmp);
    Ok(MmdTest {
        observed: MmdResult {
            mmd2_unbiased: observed,
            bandwidth,
            n_a,
            n_b: b.rows(),
        },
        p_value: (1 + exceed) as f64 / (1 + permutations) as f64,
        null_q95: quantile(&null, 0.95),
        permutations,
    })
}
