#![allow(dead_code)]

use std::path::{Path, PathBuf};

use intersmell::dataset_io::{write_canonical, Dataset, DatasetDescriptor, Granularity, Smell};
use intersmell::matrix::Matrix;
use intersmell::seed;
use rand::Rng;

pub fn normal(rng: &mut impl Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// `n` rows, one third positive. Positives are shifted by `shift` along
/// the columns in `informative`.
pub fn synthetic(
    smell: Smell,
    names: &[&str],
    n: usize,
    informative: &[usize],
    shift: f64,
    seed: u64,
) -> Dataset {
    let mut rng = seed::rng(seed);
    let d = names.len();
    let mut data = Vec::with_capacity(n * d);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let y = u8::from(i % 3 == 0);
        for j in 0..d {
            let mut v = normal(&mut rng);
            if y == 1 && informative.contains(&j) {
                v += shift;
            }
            data.push(v);
        }
        labels.push(y);
    }
    let granularity = match smell {
        Smell::LongMethod | Smell::FeatureEnvy => Granularity::Method,
        _ => Granularity::Class,
    };
    let descriptor = DatasetDescriptor {
        name: smell.code().to_string(),
        smell,
        language: "Java".into(),
        granularity,
        feature_names: names.iter().map(|s| s.to_string()).collect(),
    };
    Dataset::new(descriptor, Matrix::new(n, d, data).unwrap(), labels).unwrap()
}

pub const METHOD_FEATURES: [&str; 4] = ["LOC_method", "CYCLO_method", "ATFD_method", "FDP_method"];
pub const CLASS_FEATURES: [&str; 4] = ["LOC_type", "WMC_type", "NOAM_type", "WOC_type"];

/// Four small datasets: LM and FE share features and signal; GC and DC
/// share features but carry their signal in different columns.
pub fn suite(n: usize) -> [Dataset; 4] {
    [
        synthetic(Smell::LongMethod, &METHOD_FEATURES, n, &[0, 1], 2.5, 11),
        synthetic(Smell::FeatureEnvy, &METHOD_FEATURES, n, &[0, 1], 2.5, 12),
        synthetic(Smell::GodClass, &CLASS_FEATURES, n, &[0, 1], 2.5, 13),
        synthetic(Smell::DataClass, &CLASS_FEATURES, n, &[2, 3], 2.5, 14),
    ]
}

/// Writes the suite as canonical files `lm.ismd` .. `dc.ismd`.
pub fn write_suite(dir: &Path, n: usize) -> [PathBuf; 4] {
    let ds = suite(n);
    let names = ["lm.ismd", "fe.ismd", "gc.ismd", "dc.ismd"];
    let mut out: Vec<PathBuf> = Vec::new();
    for (d, name) in ds.iter().zip(names) {
        let p = dir.join(name);
        std::fs::write(&p, write_canonical(d).unwrap()).unwrap();
        out.push(p);
    }
    out.try_into().unwrap()
}

/// Small grids so a full suite finishes quickly.
pub const FAST_GRIDS: &str = "\
knn.k = 1,5
svm.kernel = linear,rbf
svm.C = 1
svm.gamma = scale
naive_bayes.var_smoothing = 1e-9
decision_tree.min_samples_split = 2
decision_tree.min_samples_leaf = 1,5
decision_tree.max_leaf_nodes = 32
decision_tree.criterion = gini
random_forest.n_estimators = 15
logistic_regression.C = 1
mlp.hidden_units = 8
mlp.learning_rate = 0.1
mlp.epochs = 60
";
