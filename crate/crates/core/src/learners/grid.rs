use rand::seq::SliceRandom;
use rayon::prelude::*;

use super::{fit, HyperParams, LearnerKind};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::metrics::auc;
use crate::seed;

/// One evaluated grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct GridPoint {
    pub params: HyperParams,
    pub mean_auc: f64,
    pub fold_aucs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSearchResult {
    pub best_params: HyperParams,
    pub best_index: usize,
    /// In grid enumeration order.
    pub cv_table: Vec<GridPoint>,
}

impl GridSearchResult {
    pub fn best(&self) -> &GridPoint {
        &self.cv_table[self.best_index]
    }
}

/// Validation index sets for `folds` stratified folds. Each class is
/// shuffled with its own stream, then dealt round-robin, so every fold gets
/// floor or ceil of its share of each class. Indices within a fold are
/// ascending.
pub fn stratified_folds(y: &[u8], folds: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if folds < 2 {
        return Err(Error::InvalidInput(format!("need at least 2 folds, got {folds}")));
    }
    let mut out = vec![Vec::new(); folds];
    let mut offset = 0;
    for class in [0u8, 1] {
        let mut idx: Vec<usize> = (0..y.len()).filter(|&i| y[i] == class).collect();
        if idx.len() < folds {
            return Err(Error::InvalidInput(format!(
                "class {class} has {} rows, fewer than {folds} folds",
                idx.len()
            )));
        }
        idx.shuffle(&mut seed::rng_for(seed, &[u64::from(class)]));
        for (k, i) in idx.into_iter().enumerate() {
            out[(k + offset) % folds].push(i);
        }
        // start the next class where this one stopped so fold sizes stay even
        offset = (offset + y.iter().filter(|&&l| l == class).count()) % folds;
    }
    for f in &mut out {
        f.sort_unstable();
    }
    Ok(out)
}

/// Mean validation AUC of one parameter setting over precomputed folds.
/// The model seed depends only on the fold, so a point scores the same
/// whatever else is in the grid.
pub fn cross_validate(
    kind: LearnerKind,
    params: &HyperParams,
    x: &Matrix,
    y: &[u8],
    folds: &[Vec<usize>],
    seed: u64,
) -> Result<GridPoint> {
    let mut fold_aucs = Vec::with_capacity(folds.len());
    let mut in_fold = vec![false; y.len()];
    for (f, valid) in folds.iter().enumerate() {
        in_fold.iter_mut().for_each(|b| *b = false);
        valid.iter().for_each(|&i| in_fold[i] = true);
        let train: Vec<usize> = (0..y.len()).filter(|&i| !in_fold[i]).collect();
        let ytr: Vec<u8> = train.iter().map(|&i| y[i]).collect();
        let yva: Vec<u8> = valid.iter().map(|&i| y[i]).collect();
        let model = fit(kind, params, &x.select_rows(&train), &ytr, seed::derive(seed, &[f as u64]))?;
        let scores = model.predict_score(&x.select_rows(valid))?;
        fold_aucs.push(auc(&yva, &scores)?);
    }
    let mean_auc = fold_aucs.iter().sum::<f64>() / fold_aucs.len() as f64;
    Ok(GridPoint {
        params: params.clone(),
        mean_auc,
        fold_aucs,
    })
}

/// Exhaustive search scored by mean stratified-CV AUC. Ties go to the
/// earliest grid point.
pub fn grid_search(
    kind: LearnerKind,
    grid: &[HyperParams],
    x: &Matrix,
    y: &[u8],
    folds: usize,
    seed: u64,
) -> Result<GridSearchResult> {
    if grid.is_empty() {
        return Err(Error::InvalidInput(format!("empty grid for {kind}")));
    }
    if x.rows() != y.len() {
        return Err(Error::InvalidInput(format!("{} labels for {} rows", y.len(), x.rows())));
    }
    for p in grid {
        kind.validate(p)?;
    }
    let split = stratified_folds(y, folds, seed::derive(seed, &[0]))?;
    let fit_seed = seed::derive(seed, &[1]);
    let cv_table: Vec<GridPoint> = grid
        .par_iter()
        .map(|p| cross_validate(kind, p, x, y, &split, fit_seed))
        .collect::<Result<_>>()?;
    let mut best_index = 0;
    for (i, p) in cv_table.iter().enumerate() {
        if p.mean_auc > cv_table[best_index].mean_auc {
            best_index = i;
        }
    }
    Ok(GridSearchResult {
        best_params: cv_table[best_index].params.clone(),
        best_index,
        cv_table,
    })
}

/// The fold split and fit seed `grid_search` uses internally, for
/// re-evaluating a single point outside the search.
pub fn search_plan(y: &[u8], folds: usize, seed: u64) -> Result<(Vec<Vec<usize>>, u64)> {
    Ok((stratified_folds(y, folds, seed::derive(seed, &[0]))?, seed::derive(seed, &[1])))
}
