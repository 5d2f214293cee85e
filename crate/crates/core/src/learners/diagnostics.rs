//! Internal-consistency checks on individual learners.

use super::{check_training, mlp, svm, HyperParams, Standardizer};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::seed;

/// Largest relative error between the analytic MLP loss gradient and
/// central finite differences, at a seeded random initialisation with
/// small nonzero biases.
pub fn mlp_gradient_error(x: &Matrix, y: &[u8], hidden_units: usize, seed: u64) -> Result<f64> {
    if x.rows() != y.len() || x.is_empty() || hidden_units == 0 {
        return Err(Error::InvalidInput("gradient check needs matching rows and hidden units".into()));
    }
    let mut rng = seed::rng(seed);
    let mut p = mlp::Params::init(x.cols(), hidden_units, &mut rng);
    // keep pre-activations off the ReLU kink
    p.b1 = (0..hidden_units).map(|u| 0.05 + 0.03 * u as f64).collect();
    p.b2 = 0.03;
    let (_, g) = mlp::loss_and_grad(&p, x, y);
    let analytic = g.flat();
    let theta = p.flat();
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    for k in 0..theta.len() {
        let mut plus = theta.clone();
        let mut minus = theta.clone();
        plus[k] += h;
        minus[k] -= h;
        let lp = mlp::loss_and_grad(&p.with_flat(&plus), x, y).0;
        let lm = mlp::loss_and_grad(&p.with_flat(&minus), x, y).0;
        let fd = (lp - lm) / (2.0 * h);
        let scale = fd.abs().max(analytic[k].abs()).max(1e-8);
        worst = worst.max((fd - analytic[k]).abs() / scale);
    }
    Ok(worst)
}

/// Box and equality constraint residuals of a trained SVM dual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualCheck {
    pub c: f64,
    pub min_alpha: f64,
    pub max_alpha: f64,
    /// sum of alpha_i * y_i with y in {-1, +1}
    pub balance: f64,
    pub support_vectors: usize,
}

impl DualCheck {
    pub fn satisfied(&self, tol: f64) -> bool {
        self.min_alpha >= -tol && self.max_alpha <= self.c + tol && self.balance.abs() <= tol
    }
}

/// Trains an SVM exactly as `fit` would and reports its dual residuals.
pub fn svm_dual_check(params: &HyperParams, x: &Matrix, y: &[u8]) -> Result<DualCheck> {
    check_training(x, y)?;
    let cfg = svm::Config::read(params)?;
    let z = Standardizer::fit(x).transform(x);
    let m = svm::Svm::fit(&cfg, &z, y);
    Ok(DualCheck {
        c: cfg.c,
        min_alpha: m.alphas.iter().copied().fold(f64::INFINITY, f64::min),
        max_alpha: m.alphas.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        balance: m.alphas.iter().zip(&m.signs).map(|(a, s)| a * s).sum(),
        support_vectors: m.alphas.iter().filter(|&&a| a > 0.0).count(),
    })
}
