use super::params::Reader;
use super::{sigmoid, HyperParams, LearnerKind};
use crate::error::Result;
use crate::matrix::Matrix;

pub(crate) struct Config {
    pub var_smoothing: f64,
}

impl Config {
    pub fn read(p: &HyperParams) -> Result<Self> {
        let r = Reader::new(LearnerKind::NaiveBayes, p, &["var_smoothing"])?;
        Ok(Config {
            var_smoothing: r.positive("var_smoothing", 1e-9)?,
        })
    }
}

/// Gaussian class-conditional naive Bayes.
#[derive(Debug, Clone)]
pub(crate) struct GaussianNb {
    log_prior: [f64; 2],
    mean: [Vec<f64>; 2],
    var: [Vec<f64>; 2],
}

fn moments(x: &Matrix, rows: &[usize]) -> (Vec<f64>, Vec<f64>) {
    let d = x.cols();
    let n = rows.len() as f64;
    let mut mean = vec![0.0; d];
    for &i in rows {
        for (m, v) in mean.iter_mut().zip(x.row(i)) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n);
    let mut var = vec![0.0; d];
    for &i in rows {
        for ((s, v), m) in var.iter_mut().zip(x.row(i)).zip(&mean) {
            *s += (v - m) * (v - m);
        }
    }
    var.iter_mut().for_each(|s| *s /= n);
    (mean, var)
}

impl GaussianNb {
    pub fn fit(cfg: &Config, x: &Matrix, y: &[u8]) -> Self {
        let all: Vec<usize> = (0..x.rows()).collect();
        let (_, total_var) = moments(x, &all);
        let max_var = total_var.iter().copied().fold(0.0, f64::max);
        // keep a strictly positive floor when every feature is constant
        let eps = (cfg.var_smoothing * max_var).max(cfg.var_smoothing * f64::EPSILON);

        let by_class = |c: u8| -> Vec<usize> { (0..y.len()).filter(|&i| y[i] == c).collect() };
        let (r0, r1) = (by_class(0), by_class(1));
        let (m0, mut v0) = moments(x, &r0);
        let (m1, mut v1) = moments(x, &r1);
        v0.iter_mut().chain(v1.iter_mut()).for_each(|v| *v += eps);
        let n = y.len() as f64;
        GaussianNb {
            log_prior: [(r0.len() as f64 / n).ln(), (r1.len() as f64 / n).ln()],
            mean: [m0, m1],
            var: [v0, v1],
        }
    }

    fn log_joint(&self, c: usize, q: &[f64]) -> f64 {
        let ll: f64 = q
            .iter()
            .zip(&self.mean[c])
            .zip(&self.var[c])
            .map(|((x, m), v)| -0.5 * ((2.0 * std::f64::consts::PI * v).ln() + (x - m) * (x - m) / v))
            .sum();
        self.log_prior[c] + ll
    }

    /// Posterior P(y = 1 | q).
    pub fn score(&self, q: &[f64]) -> f64 {
        sigmoid(self.log_joint(1, q) - self.log_joint(0, q))
    }
}
