use super::params::Reader;
use super::{sigmoid, softplus, HyperParams, LearnerKind};
use crate::error::Result;
use crate::matrix::{dot, Matrix};

pub(crate) struct Config {
    pub l2: bool,
    pub c: f64,
    pub max_iter: usize,
}

impl Config {
    pub fn read(p: &HyperParams) -> Result<Self> {
        let r = Reader::new(LearnerKind::LogisticRegression, p, &["penalty", "C", "max_iter"])?;
        Ok(Config {
            l2: r.choice("penalty", "l2", &["l2", "none"])? == "l2",
            c: r.positive("C", 1.0)?,
            max_iter: r.int("max_iter", 2000, 1)? as usize,
        })
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Logistic {
    w: Vec<f64>,
    b: f64,
}

/// Mean log-loss plus `lambda / 2 * |w|^2`.
fn loss(x: &Matrix, y: &[u8], w: &[f64], b: f64, lambda: f64) -> f64 {
    let n = x.rows() as f64;
    let data: f64 = x
        .iter_rows()
        .zip(y)
        .map(|(r, &t)| {
            let z = dot(r, w) + b;
            softplus(z) - f64::from(t) * z
        })
        .sum::<f64>()
        / n;
    data + 0.5 * lambda * dot(w, w)
}

fn gradient(x: &Matrix, y: &[u8], w: &[f64], b: f64, lambda: f64) -> (Vec<f64>, f64) {
    let n = x.rows() as f64;
    let mut gw = vec![0.0; w.len()];
    let mut gb = 0.0;
    for (r, &t) in x.iter_rows().zip(y) {
        let e = sigmoid(dot(r, w) + b) - f64::from(t);
        for (g, v) in gw.iter_mut().zip(r) {
            *g += e * v;
        }
        gb += e;
    }
    for (g, wi) in gw.iter_mut().zip(w) {
        *g = *g / n + lambda * wi;
    }
    (gw, gb / n)
}

/// Full-batch gradient descent. A step is accepted only if it lowers the
/// loss; otherwise the step size is halved. Returns the model and the loss
/// after each accepted step.
pub(crate) fn train(cfg: &Config, x: &Matrix, y: &[u8]) -> (Logistic, Vec<f64>) {
    // sklearn-style strength: C * sum(loss) + |w|^2 / 2, divided through by C * n
    let lambda = if cfg.l2 {
        1.0 / (cfg.c * x.rows() as f64)
    } else {
        0.0
    };
    let mut w = vec![0.0; x.cols()];
    let mut b = 0.0;
    let mut step = 1.0;
    let mut current = loss(x, y, &w, b, lambda);
    let mut trace = vec![current];
    for _ in 0..cfg.max_iter {
        let (gw, gb) = gradient(x, y, &w, b, lambda);
        let gmax = gw.iter().fold(gb.abs(), |m, g| m.max(g.abs()));
        if gmax < 1e-8 || step < 1e-12 {
            break;
        }
        let cand_w: Vec<f64> = w.iter().zip(&gw).map(|(wi, g)| wi - step * g).collect();
        let cand_b = b - step * gb;
        let cand = loss(x, y, &cand_w, cand_b, lambda);
        if cand < current {
            w = cand_w;
            b = cand_b;
            current = cand;
            trace.push(current);
        } else {
            step *= 0.5;
        }
    }
    (Logistic { w, b }, trace)
}

impl Logistic {
    pub fn fit(cfg: &Config, x: &Matrix, y: &[u8]) -> Self {
        train(cfg, x, y).0
    }

    pub fn score(&self, q: &[f64]) -> f64 {
        sigmoid(dot(q, &self.w) + self.b)
    }
}
