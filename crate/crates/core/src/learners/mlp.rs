use rand::Rng;

use super::params::Reader;
use super::{sigmoid, softplus, HyperParams, LearnerKind};
use crate::error::Result;
use crate::matrix::{dot, Matrix};
use crate::seed;

pub(crate) struct Config {
    pub hidden_units: usize,
    pub learning_rate: f64,
    pub epochs: usize,
}

impl Config {
    pub fn read(p: &HyperParams) -> Result<Self> {
        let r = Reader::new(LearnerKind::Mlp, p, &["hidden_units", "learning_rate", "epochs"])?;
        Ok(Config {
            hidden_units: r.int("hidden_units", 16, 1)? as usize,
            learning_rate: r.positive("learning_rate", 0.1)?,
            epochs: r.int("epochs", 500, 1)? as usize,
        })
    }
}

/// One ReLU hidden layer, sigmoid output.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Params {
    /// hidden x input, row-major
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    pub w2: Vec<f64>,
    pub b2: f64,
    pub d: usize,
}

impl Params {
    pub(crate) fn init(d: usize, h: usize, rng: &mut seed::Rng) -> Self {
        let s1 = 1.0 / (d as f64).sqrt();
        let s2 = 1.0 / (h as f64).sqrt();
        Params {
            w1: (0..h * d).map(|_| rng.gen_range(-0.5..0.5) * s1).collect(),
            b1: vec![0.0; h],
            w2: (0..h).map(|_| rng.gen_range(-0.5..0.5) * s2).collect(),
            b2: 0.0,
            d,
        }
    }

    fn zeros_like(&self) -> Self {
        Params {
            w1: vec![0.0; self.w1.len()],
            b1: vec![0.0; self.b1.len()],
            w2: vec![0.0; self.w2.len()],
            b2: 0.0,
            d: self.d,
        }
    }

    fn hidden(&self) -> usize {
        self.b1.len()
    }

    /// Pre-activations of the hidden layer and the output logit.
    fn forward(&self, q: &[f64], pre: &mut [f64]) -> f64 {
        for (u, a) in pre.iter_mut().enumerate() {
            *a = dot(&self.w1[u * self.d..(u + 1) * self.d], q) + self.b1[u];
        }
        pre.iter()
            .zip(&self.w2)
            .map(|(a, w)| a.max(0.0) * w)
            .sum::<f64>()
            + self.b2
    }

    pub fn flat(&self) -> Vec<f64> {
        let mut v = self.w1.clone();
        v.extend(&self.b1);
        v.extend(&self.w2);
        v.push(self.b2);
        v
    }

    pub fn with_flat(&self, v: &[f64]) -> Self {
        let (h, d) = (self.hidden(), self.d);
        Params {
            w1: v[..h * d].to_vec(),
            b1: v[h * d..h * d + h].to_vec(),
            w2: v[h * d + h..h * d + 2 * h].to_vec(),
            b2: v[h * d + 2 * h],
            d,
        }
    }
}

/// Mean binary cross-entropy and its gradient.
pub(crate) fn loss_and_grad(p: &Params, x: &Matrix, y: &[u8]) -> (f64, Params) {
    let n = x.rows() as f64;
    let h = p.hidden();
    let mut g = p.zeros_like();
    let mut pre = vec![0.0; h];
    let mut loss = 0.0;
    for (r, &t) in x.iter_rows().zip(y) {
        let z = p.forward(r, &mut pre);
        let t = f64::from(t);
        loss += softplus(z) - t * z;
        let dz = (sigmoid(z) - t) / n;
        g.b2 += dz;
        for (u, &a) in pre.iter().enumerate().take(h) {
            if a > 0.0 {
                g.w2[u] += dz * a;
                let da = dz * p.w2[u];
                g.b1[u] += da;
                for (gw, v) in g.w1[u * p.d..(u + 1) * p.d].iter_mut().zip(r) {
                    *gw += da * v;
                }
            }
        }
    }
    (loss / n, g)
}

#[derive(Debug, Clone)]
pub(crate) struct Mlp {
    params: Params,
}

impl Mlp {
    pub fn fit(cfg: &Config, x: &Matrix, y: &[u8], seed: u64) -> Self {
        let mut rng = seed::rng(seed);
        let mut p = Params::init(x.cols(), cfg.hidden_units, &mut rng);
        let lr = cfg.learning_rate;
        for _ in 0..cfg.epochs {
            let (_, g) = loss_and_grad(&p, x, y);
            p.w1.iter_mut().zip(&g.w1).for_each(|(w, d)| *w -= lr * d);
            p.b1.iter_mut().zip(&g.b1).for_each(|(w, d)| *w -= lr * d);
            p.w2.iter_mut().zip(&g.w2).for_each(|(w, d)| *w -= lr * d);
            p.b2 -= lr * g.b2;
        }
        Mlp { params: p }
    }

    pub fn score(&self, q: &[f64]) -> f64 {
        let mut pre = vec![0.0; self.params.hidden()];
        sigmoid(self.params.forward(q, &mut pre))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gradient_check() {
        let x = Matrix::from_rows(
            &[
                vec![0.5, -1.2, 0.3],
                vec![-0.7, 0.8, 1.5],
                vec![1.1, 0.2, -0.4],
                vec![-1.3, -0.6, 0.9],
                vec![0.2, 1.4, -1.1],
            ],
            3,
        )
        .unwrap();
        let err = super::super::diagnostics::mlp_gradient_error(&x, &[1, 0, 1, 0, 1], 4, 42).unwrap();
        assert!(err < 1e-4, "{err}");
    }

    #[test]
    fn scores_are_probabilities() {
        let x = Matrix::from_rows(&[vec![0.0], vec![1.0], vec![2.0], vec![3.0]], 1).unwrap();
        let cfg = Config { hidden_units: 4, learning_rate: 0.5, epochs: 200 };
        let m = Mlp::fit(&cfg, &x, &[0, 0, 1, 1], 7);
        for r in x.iter_rows() {
            let s = m.score(r);
            assert!((0.0..=1.0).contains(&s));
        }
        assert!(m.score(&[3.0]) > m.score(&[0.0]));
    }
}
