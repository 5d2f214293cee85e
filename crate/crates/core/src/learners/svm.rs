use super::params::Reader;
use super::{HyperParams, LearnerKind, ParamValue};
use crate::error::{Error, Result};
use crate::matrix::{dot, squared_distance, Matrix};

const TOLERANCE: f64 = 1e-3;
const TAU: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Kernel {
    Linear,
    Rbf { gamma: f64 },
    Poly { gamma: f64, degree: i32 },
}

impl Kernel {
    fn eval(self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            Kernel::Linear => dot(a, b),
            Kernel::Rbf { gamma } => (-gamma * squared_distance(a, b)).exp(),
            Kernel::Poly { gamma, degree } => (gamma * dot(a, b) + 1.0).powi(degree),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Gamma {
    /// 1 / (d * variance of all training entries)
    Scale,
    Value(f64),
}

pub(crate) struct Config {
    pub kernel: String,
    pub c: f64,
    pub gamma: Gamma,
    pub degree: i32,
}

impl Config {
    pub fn read(p: &HyperParams) -> Result<Self> {
        let r = Reader::new(LearnerKind::Svm, p, &["kernel", "C", "gamma", "degree"])?;
        let gamma = match p.get("gamma") {
            None => Gamma::Scale,
            Some(ParamValue::Text(t)) if t.eq_ignore_ascii_case("scale") => Gamma::Scale,
            Some(v) => match v.as_f64() {
                Some(g) if g > 0.0 && g.is_finite() => Gamma::Value(g),
                _ => {
                    return Err(Error::InvalidParams {
                        kind: LearnerKind::Svm.as_str().into(),
                        message: format!("`gamma` must be `scale` or a number > 0, got `{v}`"),
                    })
                }
            },
        };
        Ok(Config {
            kernel: r.choice("kernel", "rbf", &["linear", "rbf", "poly"])?,
            c: r.positive("C", 1.0)?,
            gamma,
            degree: r.int("degree", 3, 1)? as i32,
        })
    }

    fn kernel_for(&self, x: &Matrix) -> Kernel {
        let gamma = match self.gamma {
            Gamma::Value(g) => g,
            Gamma::Scale => {
                let v = x.as_slice();
                let n = v.len() as f64;
                let mean = v.iter().sum::<f64>() / n;
                let var = v.iter().map(|a| (a - mean) * (a - mean)).sum::<f64>() / n;
                if var > 0.0 {
                    1.0 / (x.cols() as f64 * var)
                } else {
                    1.0
                }
            }
        };
        match self.kernel.as_str() {
            "linear" => Kernel::Linear,
            "poly" => Kernel::Poly { gamma, degree: self.degree },
            _ => Kernel::Rbf { gamma },
        }
    }
}

/// Soft-margin C-SVC trained by SMO with second-order working-set selection.
#[derive(Debug, Clone)]
pub(crate) struct Svm {
    kernel: Kernel,
    support: Vec<Vec<f64>>,
    /// alpha_i * y_i for each support vector
    coef: Vec<f64>,
    rho: f64,
    pub(crate) alphas: Vec<f64>,
    pub(crate) signs: Vec<f64>,
}

impl Svm {
    pub fn fit(cfg: &Config, x: &Matrix, y: &[u8]) -> Self {
        let n = x.rows();
        let kernel = cfg.kernel_for(x);
        let c = cfg.c;
        let s: Vec<f64> = y.iter().map(|&l| if l == 1 { 1.0 } else { -1.0 }).collect();
        let mut k = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = kernel.eval(x.row(i), x.row(j));
                k[i * n + j] = v;
                k[j * n + i] = v;
            }
        }
        let q = |i: usize, j: usize| s[i] * s[j] * k[i * n + j];
        let mut a = vec![0.0; n];
        let mut g = vec![-1.0; n];
        let max_iter = 10_000usize.saturating_mul(n).max(10_000);

        for _ in 0..max_iter {
            // i: maximal violator among the up set
            let mut gmax = f64::NEG_INFINITY;
            let mut pick_i = None;
            for t in 0..n {
                let v = if s[t] > 0.0 {
                    (a[t] < c).then(|| -g[t])
                } else {
                    (a[t] > 0.0).then(|| g[t])
                };
                if let Some(v) = v {
                    if v >= gmax {
                        gmax = v;
                        pick_i = Some(t);
                    }
                }
            }
            let Some(i) = pick_i else { break };
            // j: best second-order gain among the low set
            let mut gmax2 = f64::NEG_INFINITY;
            let mut pick_j = None;
            let mut best = f64::INFINITY;
            for t in 0..n {
                let (eligible, gt) = if s[t] > 0.0 {
                    (a[t] > 0.0, g[t])
                } else {
                    (a[t] < c, -g[t])
                };
                if !eligible {
                    continue;
                }
                if gt >= gmax2 {
                    gmax2 = gt;
                }
                let diff = gmax + gt;
                if diff > 0.0 {
                    let mut quad = k[i * n + i] + k[t * n + t] - 2.0 * k[i * n + t];
                    if quad <= 0.0 {
                        quad = TAU;
                    }
                    let obj = -(diff * diff) / quad;
                    if obj <= best {
                        best = obj;
                        pick_j = Some(t);
                    }
                }
            }
            let Some(j) = pick_j else { break };
            if gmax + gmax2 < TOLERANCE {
                break;
            }

            let (old_i, old_j) = (a[i], a[j]);
            if s[i] != s[j] {
                let mut quad = k[i * n + i] + k[j * n + j] + 2.0 * q(i, j);
                if quad <= 0.0 {
                    quad = TAU;
                }
                let delta = (-g[i] - g[j]) / quad;
                let diff = a[i] - a[j];
                a[i] += delta;
                a[j] += delta;
                if diff > 0.0 {
                    if a[j] < 0.0 {
                        a[j] = 0.0;
                        a[i] = diff;
                    }
                } else if a[i] < 0.0 {
                    a[i] = 0.0;
                    a[j] = -diff;
                }
                if diff > 0.0 {
                    if a[i] > c {
                        a[i] = c;
                        a[j] = c - diff;
                    }
                } else if a[j] > c {
                    a[j] = c;
                    a[i] = c + diff;
                }
            } else {
                let mut quad = k[i * n + i] + k[j * n + j] - 2.0 * q(i, j);
                if quad <= 0.0 {
                    quad = TAU;
                }
                let delta = (g[i] - g[j]) / quad;
                let sum = a[i] + a[j];
                a[i] -= delta;
                a[j] += delta;
                if sum > c {
                    if a[i] > c {
                        a[i] = c;
                        a[j] = sum - c;
                    }
                } else if a[j] < 0.0 {
                    a[j] = 0.0;
                    a[i] = sum;
                }
                if sum > c {
                    if a[j] > c {
                        a[j] = c;
                        a[i] = sum - c;
                    }
                } else if a[i] < 0.0 {
                    a[i] = 0.0;
                    a[j] = sum;
                }
            }
            let (di, dj) = (a[i] - old_i, a[j] - old_j);
            for (t, gt) in g.iter_mut().enumerate() {
                *gt += q(i, t) * di + q(j, t) * dj;
            }
        }

        let rho = {
            let (mut ub, mut lb) = (f64::INFINITY, f64::NEG_INFINITY);
            let (mut free, mut sum_free) = (0usize, 0.0);
            for t in 0..n {
                let yg = s[t] * g[t];
                if a[t] >= c {
                    if s[t] < 0.0 {
                        ub = ub.min(yg);
                    } else {
                        lb = lb.max(yg);
                    }
                } else if a[t] <= 0.0 {
                    if s[t] > 0.0 {
                        ub = ub.min(yg);
                    } else {
                        lb = lb.max(yg);
                    }
                } else {
                    free += 1;
                    sum_free += yg;
                }
            }
            if free > 0 {
                sum_free / free as f64
            } else {
                (ub + lb) / 2.0
            }
        };

        let mut support = Vec::new();
        let mut coef = Vec::new();
        for t in 0..n {
            if a[t] > 0.0 {
                support.push(x.row(t).to_vec());
                coef.push(a[t] * s[t]);
            }
        }
        Svm { kernel, support, coef, rho, alphas: a, signs: s }
    }

    /// Signed distance-like decision value; positive means smelly.
    pub fn decision(&self, q: &[f64]) -> f64 {
        self.support
            .iter()
            .zip(&self.coef)
            .map(|(sv, c)| c * self.kernel.eval(sv, q))
            .sum::<f64>()
            - self.rho
    }
}
