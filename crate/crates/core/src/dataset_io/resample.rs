use std::fmt;
use std::str::FromStr;

use rand::seq::index;

use super::Dataset;
use crate::error::{Error, Result};
use crate::seed;

/// Class composition of the training source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Condition {
    /// Positive fraction 1/3 of all rows.
    Balanced,
    /// Positive fraction at most 0.10 of all rows.
    Unbalanced,
}

impl Condition {
    pub const ALL: [Condition; 2] = [Condition::Balanced, Condition::Unbalanced];

    pub fn as_str(self) -> &'static str {
        match self {
            Condition::Balanced => "balanced",
            Condition::Unbalanced => "unbalanced",
        }
    }

    pub(crate) fn index(self) -> u64 {
        match self {
            Condition::Balanced => 0,
            Condition::Unbalanced => 1,
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Condition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "balanced" => Ok(Condition::Balanced),
            "unbalanced" => Ok(Condition::Unbalanced),
            other => Err(Error::InvalidInput(format!("unknown condition `{other}`"))),
        }
    }
}

const BALANCED_FRACTION: f64 = 1.0 / 3.0;
const BALANCED_TOLERANCE: f64 = 0.01;
/// Unbalanced positive fraction as the exact ratio 1/10.
const UNBALANCED_NUM: usize = 1;
const UNBALANCED_DEN: usize = 10;

fn within_balanced(pos: usize, neg: usize) -> bool {
    let total = pos + neg;
    total > 0 && (pos as f64 / total as f64 - BALANCED_FRACTION).abs() <= BALANCED_TOLERANCE
}

/// Keeps `keep` of the rows in `pool`, uniformly without replacement, in original order.
fn draw(pool: &[usize], keep: usize, rng: &mut seed::Rng) -> Vec<usize> {
    let mut picked: Vec<usize> = index::sample(rng, pool.len(), keep)
        .into_iter()
        .map(|i| pool[i])
        .collect();
    picked.sort_unstable();
    picked
}

pub fn resample(ds: &Dataset, condition: Condition, seed: u64) -> Result<Dataset> {
    resample_logged(ds, condition, seed, &mut Vec::new())
}

/// As [`resample`], appending any positive-shortfall warning to `log`.
pub fn resample_logged(
    ds: &Dataset,
    condition: Condition,
    seed: u64,
    log: &mut Vec<String>,
) -> Result<Dataset> {
    let (pos_idx, neg_idx): (Vec<usize>, Vec<usize>) =
        (0..ds.len()).partition(|&i| ds.labels[i] == 1);
    let (pos, neg) = (pos_idx.len(), neg_idx.len());
    if pos == 0 || neg == 0 {
        return Err(Error::InsufficientPositives(format!(
            "`{}` needs both classes to resample ({pos} positive, {neg} negative)",
            ds.descriptor.name
        )));
    }
    let mut rng = seed::rng_for(seed, &[condition.index()]);

    let (keep_pos, keep_neg) = match condition {
        Condition::Balanced => {
            if within_balanced(pos, neg) {
                return Ok(ds.clone());
            }
            if pos as f64 / (pos + neg) as f64 > BALANCED_FRACTION {
                let p = (1..pos)
                    .rev()
                    .find(|&p| within_balanced(p, neg))
                    .ok_or_else(|| {
                        Error::InsufficientPositives(format!(
                            "cannot reach a 1/3 positive fraction with {neg} negatives"
                        ))
                    })?;
                (draw(&pos_idx, p, &mut rng), neg_idx)
            } else {
                let n = (1..neg)
                    .rev()
                    .find(|&n| within_balanced(pos, n))
                    .ok_or_else(|| {
                        Error::InsufficientPositives(format!(
                            "cannot reach a 1/3 positive fraction with {pos} positives"
                        ))
                    })?;
                (pos_idx, draw(&neg_idx, n, &mut rng))
            }
        }
        Condition::Unbalanced => {
            let target = UNBALANCED_NUM * neg / (UNBALANCED_DEN - UNBALANCED_NUM);
            if target < 1 {
                return Err(Error::InsufficientPositives(format!(
                    "{neg} negatives leave room for no positive at a 0.10 fraction"
                )));
            }
            if pos <= target {
                if pos < target {
                    log.push(format!(
                        "{}: unbalanced target is {target} positives but only {pos} available; keeping all",
                        ds.descriptor.name
                    ));
                }
                (pos_idx, neg_idx)
            } else {
                (draw(&pos_idx, target, &mut rng), neg_idx)
            }
        }
    };

    let mut keep: Vec<usize> = keep_pos.into_iter().chain(keep_neg).collect();
    keep.sort_unstable();
    Ok(ds.subset(&keep))
}
