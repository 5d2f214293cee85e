//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero when a criterion that ran has failed.
//!
//! A1 to A5 need the four public metric datasets. Point `INTERSMELL_DATA_DIR`
//! at a directory holding them (`lm.arff`, `fe.arff`, `gc.arff`, `dc.arff`,
//! or the long names such as `long-method.arff`; canonical `.ismd` files are
//! accepted for A1 to A4). Without it those criteria report FAIL as blocked.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};

use intersmell::cli::load_dataset;
use intersmell::config::DatasetSource;
use intersmell::dataset_io::{dataset_stats, Condition, Dataset, DatasetDescriptor, Granularity, MissingReport, Smell};
use intersmell::experiment::{run_suite, Report, SuiteData, SuiteOptions};
use intersmell::learners::diagnostics::{mlp_gradient_error, svm_dual_check};
use intersmell::learners::{fit, grid_search, search_plan, HyperParams, LearnerKind};
use intersmell::matrix::Matrix;
use intersmell::metrics::{auc, roc_curve};
use intersmell::seed;
use intersmell::taxonomy::classify_scenario;
use rand::Rng;

// Tolerances and thresholds.
const A1_PREC_LM_FE: f64 = 0.50;
const A1_PREC_FE_LM: f64 = 0.60;
const A1_AUC: f64 = 0.60;
const A1_MIN_MODELS: usize = 4;
const A2_MAX_PREC: f64 = 0.35;
const A2_MAX_MEDIAN_AUC: f64 = 0.55;
const A3_MAX_GAIN: f64 = 0.05;
const A3_NONTRIVIAL: f64 = 0.25;
const A3_COLLAPSED: f64 = 0.05;
const A4_ALPHA: f64 = 0.05;
const A4_FACTOR: f64 = 5.0;
const A6_TOL: f64 = 1e-12;
const A6_INSTANCES: usize = 1000;
const A8_MIN: f64 = 0.95;
const A8_GRAD_TOL: f64 = 1e-4;
const A8_DUAL_TOL: f64 = 1e-6;
const A10_TOL: f64 = 1e-12;

const SEEDS: [u64; 5] = [0, 1, 2, 3, 4];
const PERMUTATIONS: usize = 500;

type Outcome = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Outcome);

struct Line {
    id: &'static str,
    title: &'static str,
    outcome: Outcome,
    blocked: bool,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------------------------------------------------------------- data

const CODES: [&str; 4] = ["LM", "FE", "GC", "DC"];

fn candidates(code: &str) -> Vec<String> {
    let long = match code {
        "LM" => "long-method",
        "FE" => "feature-envy",
        "GC" => "god-class",
        _ => "data-class",
    };
    let lower = code.to_ascii_lowercase();
    let mut names = Vec::new();
    for stem in [lower.clone(), long.to_string(), long.replace('-', "_"), long.replace('-', "")] {
        for ext in ["arff", "ismd"] {
            names.push(format!("{stem}.{ext}"));
        }
    }
    names
}

struct Loaded {
    data: SuiteData,
    missing: BTreeMap<String, Option<MissingReport>>,
}

fn load_real(dir: &Path) -> Result<Loaded, String> {
    let mut data = SuiteData::new();
    let mut missing = BTreeMap::new();
    for code in CODES {
        let path: PathBuf = candidates(code)
            .into_iter()
            .map(|n| dir.join(n))
            .find(|p| p.exists())
            .ok_or_else(|| format!("no file for {code} in {}", dir.display()))?;
        let smell: Smell = code.parse().unwrap();
        let (ds, report) =
            load_dataset(&DatasetSource::new(path.clone()), &smell, code).map_err(|e| format!("{}: {e}", path.display()))?;
        data.insert(code.to_string(), ds);
        missing.insert(code.to_string(), report);
    }
    Ok(Loaded { data, missing })
}

/// Seed-averaged metrics per (case, condition, model).
struct Averages {
    precision: BTreeMap<(String, Condition, LearnerKind), f64>,
    auc: BTreeMap<(String, Condition, LearnerKind), f64>,
}

impl Averages {
    fn from_reports(reports: &[Report]) -> Self {
        let mut precision = BTreeMap::new();
        let mut auc = BTreeMap::new();
        let n = reports.len() as f64;
        for r in reports {
            for c in &r.cases {
                for m in &c.records {
                    let key = (c.case_name.clone(), c.condition, m.kind);
                    *precision.entry(key.clone()).or_insert(0.0) += m.precision / n;
                    *auc.entry(key).or_insert(0.0) += m.auc / n;
                }
            }
        }
        Averages { precision, auc }
    }

    fn models<'a>(
        map: &'a BTreeMap<(String, Condition, LearnerKind), f64>,
        case: &'a str,
        cond: Condition,
    ) -> impl Iterator<Item = (LearnerKind, f64)> + 'a {
        map.iter()
            .filter(move |((c, k, _), _)| c == case && *k == cond)
            .map(|((_, _, m), v)| (*m, *v))
    }

    fn best_precision(&self, case: &str, cond: Condition) -> f64 {
        Self::models(&self.precision, case, cond).map(|(_, v)| v).fold(f64::NEG_INFINITY, f64::max)
    }
}

struct RealRun {
    averages: Averages,
    first: Report,
}

fn run_real(data: &SuiteData) -> Result<RealRun, String> {
    let mut reports = Vec::new();
    for &s in &SEEDS {
        let opts = SuiteOptions {
            seed: s,
            permutations: PERMUTATIONS,
            mmd: s == SEEDS[0],
            cases: vec![
                ("LM".into(), "FE".into()),
                ("FE".into(), "LM".into()),
                ("GC".into(), "DC".into()),
                ("DC".into(), "GC".into()),
            ],
            ..SuiteOptions::default()
        };
        reports.push(run_suite(data, &opts).map_err(|e| e.to_string())?);
    }
    Ok(RealRun {
        averages: Averages::from_reports(&reports),
        first: reports.swap_remove(0),
    })
}

fn a1(run: &RealRun) -> Outcome {
    let av = &run.averages;
    let mut notes = Vec::new();
    for (case, need) in [("LM→FE", A1_PREC_LM_FE), ("FE→LM", A1_PREC_FE_LM)] {
        let best = av.best_precision(case, Condition::Balanced);
        ensure(best >= need, || format!("{case} best precision {best:.3} < {need}"))?;
        let good = Averages::models(&av.auc, case, Condition::Balanced)
            .filter(|(_, a)| *a >= A1_AUC)
            .count();
        ensure(good >= A1_MIN_MODELS, || format!("{case}: {good} models with AUC >= {A1_AUC}"))?;
        notes.push(format!("{case} best precision {best:.3}, {good}/7 AUC>={A1_AUC}"));
    }
    Ok(notes.join("; "))
}

fn a2(run: &RealRun) -> Outcome {
    let av = &run.averages;
    let mut notes = Vec::new();
    for case in ["GC→DC", "DC→GC"] {
        for cond in Condition::ALL {
            for (m, p) in Averages::models(&av.precision, case, cond) {
                ensure(p <= A2_MAX_PREC, || format!("{case} {cond} {m} precision {p:.3} > {A2_MAX_PREC}"))?;
            }
            let mut aucs: Vec<f64> = Averages::models(&av.auc, case, cond).map(|(_, a)| a).collect();
            ensure(!aucs.is_empty(), || format!("{case} {cond}: no records"))?;
            aucs.sort_by(f64::total_cmp);
            let median = if aucs.len() % 2 == 1 {
                aucs[aucs.len() / 2]
            } else {
                (aucs[aucs.len() / 2 - 1] + aucs[aucs.len() / 2]) / 2.0
            };
            ensure(median <= A2_MAX_MEDIAN_AUC, || format!("{case} {cond} median AUC {median:.3}"))?;
            notes.push(format!("{case} {cond} median AUC {median:.3}"));
        }
    }
    Ok(notes.join("; "))
}

fn a3(run: &RealRun) -> Outcome {
    let av = &run.averages;
    let cases = ["LM→FE", "FE→LM"];
    let mean_best =
        |cond| cases.iter().map(|c| av.best_precision(c, cond)).sum::<f64>() / cases.len() as f64;
    let (bal, unb) = (mean_best(Condition::Balanced), mean_best(Condition::Unbalanced));
    ensure(unb - bal <= A3_MAX_GAIN, || format!("best precision rose from {bal:.3} to {unb:.3}"))?;
    let mut collapsed = Vec::new();
    for case in cases {
        for (m, p) in Averages::models(&av.precision, case, Condition::Balanced) {
            let q = av.precision[&(case.to_string(), Condition::Unbalanced, m)];
            if p >= A3_NONTRIVIAL && q <= A3_COLLAPSED {
                collapsed.push(format!("{case} {m} {p:.2}->{q:.2}"));
            }
        }
    }
    ensure(!collapsed.is_empty(), || "no model collapsed under imbalance".into())?;
    Ok(format!("mean best precision {bal:.3} -> {unb:.3}; collapsed: {}", collapsed.join(", ")))
}

fn a4(run: &RealRun) -> Outcome {
    let rows = &run.first.mmd_table;
    let get = |name: &str| {
        rows.iter()
            .find(|r| r.pair == name)
            .ok_or_else(|| format!("no MMD row `{name}`"))
    };
    let mut notes = Vec::new();
    for (pair, half) in [("LM vs FE", "LM-half vs LM-half"), ("GC vs DC", "GC-half vs GC-half")] {
        let (p, h) = (get(pair)?, get(half)?);
        ensure(p.p_value <= A4_ALPHA, || format!("{pair} p={:.4}", p.p_value))?;
        ensure(h.p_value >= A4_ALPHA, || format!("{half} p={:.4}", h.p_value))?;
        // a non-positive self value is noise around zero; the pair must still be clearly positive
        let floor = A4_FACTOR * h.mmd2.max(0.0);
        ensure(p.mmd2 > 0.0 && p.mmd2 >= floor, || {
            format!("{pair} mmd2 {:.5} vs self {:.5}", p.mmd2, h.mmd2)
        })?;
        notes.push(format!("{pair} mmd2={:.4} p={:.3}; self mmd2={:.4} p={:.3}", p.mmd2, p.p_value, h.mmd2, h.p_value));
    }
    Ok(notes.join("; "))
}

fn a5(loaded: &Loaded) -> Outcome {
    let expected_missing = [("LM", 92usize), ("FE", 92), ("GC", 76), ("DC", 75)];
    let allowed = ["NMO", "NIM", "NOC", "WOC"];
    let mut notes = Vec::new();
    for (code, total) in expected_missing {
        let ds = &loaded.data[code];
        let st = dataset_stats(ds);
        let features = if code == "LM" || code == "FE" { 82 } else { 62 };
        ensure(st.feature_count == features, || format!("{code}: {} features, want {features}", st.feature_count))?;
        if code == "GC" || code == "DC" {
            ensure(st.positive_count == 140 && st.negative_count == 280, || {
                format!("{code}: pos={} neg={}", st.positive_count, st.negative_count)
            })?;
        }
        let report = loaded.missing[code]
            .as_ref()
            .ok_or_else(|| format!("{code}: raw ARFF needed for the missing-value census"))?;
        ensure(report.total_missing == total, || format!("{code}: missing={}, want {total}", report.total_missing))?;
        for (name, _) in report.affected() {
            let stem = name.split('_').next().unwrap_or(name);
            ensure(allowed.contains(&stem), || format!("{code}: missing values in `{name}`"))?;
        }
        notes.push(format!("{code} {st} missing={total}"));
    }
    Ok(notes.join("; "))
}

// ---------------------------------------------------------------- A6

fn pairwise_auc(y: &[u8], s: &[f64]) -> f64 {
    let (mut num, mut pairs) = (0.0, 0.0);
    for i in 0..y.len() {
        for j in 0..y.len() {
            if y[i] == 1 && y[j] == 0 {
                pairs += 1.0;
                if s[i] > s[j] {
                    num += 1.0;
                } else if s[i] == s[j] {
                    num += 0.5;
                }
            }
        }
    }
    num / pairs
}

/// ROC area by trapezoids over descending score groups.
fn trapezoid_auc(y: &[u8], s: &[f64]) -> f64 {
    let mut idx: Vec<usize> = (0..y.len()).collect();
    idx.sort_by(|&a, &b| s[b].total_cmp(&s[a]));
    let p = y.iter().filter(|&&l| l == 1).count() as f64;
    let n = y.len() as f64 - p;
    let (mut tp, mut fp, mut area) = (0.0, 0.0, 0.0);
    let mut k = 0;
    while k < idx.len() {
        let (tp0, fp0) = (tp, fp);
        let v = s[idx[k]];
        while k < idx.len() && s[idx[k]] == v {
            if y[idx[k]] == 1 {
                tp += 1.0;
            } else {
                fp += 1.0;
            }
            k += 1;
        }
        area += (fp - fp0) * (tp + tp0) / 2.0;
    }
    area / (p * n)
}

fn curve_area(points: &[(f64, f64)]) -> f64 {
    points.windows(2).map(|w| (w[1].0 - w[0].0) * (w[1].1 + w[0].1) / 2.0).sum()
}

fn a6() -> Outcome {
    let four = auc(&[1, 0, 1, 0], &[0.9, 0.1, 0.4, 0.6]).map_err(|e| e.to_string())?;
    ensure(four == 0.75, || format!("4-point case gave {four}"))?;
    let mut rng = seed::rng(606);
    let mut worst: f64 = 0.0;
    for _ in 0..A6_INSTANCES {
        let n = rng.gen_range(2..=50);
        let mut y: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2)).collect();
        y[0] = 1;
        y[1] = 0;
        let levels = rng.gen_range(2..=20);
        let s: Vec<f64> = (0..n)
            .map(|_| if rng.gen_bool(0.5) { rng.gen_range(0..levels) as f64 / levels as f64 } else { rng.gen() })
            .collect();
        let got = auc(&y, &s).map_err(|e| e.to_string())?;
        let u = pairwise_auc(&y, &s);
        let t = trapezoid_auc(&y, &s);
        let c = curve_area(&roc_curve(&y, &s).map_err(|e| e.to_string())?);
        for (name, v) in [("trapezoid", t), ("library", got), ("roc_curve", c)] {
            let d = (v - u).abs();
            worst = worst.max(d);
            ensure(d <= A6_TOL, || format!("{name} {v} vs pairwise {u} (n={n})"))?;
        }
    }
    Ok(format!("{A6_INSTANCES} instances, max deviation {worst:.1e}; 4-point case 0.75"))
}

// ---------------------------------------------------------------- A7

fn a7() -> Outcome {
    // (features equal, smell equal, language equal) -> id
    let table = [
        ((true, true, true), "1.1"),
        ((true, false, true), "1.2"),
        ((false, true, true), "2.1"),
        ((false, false, true), "2.2"),
        ((true, true, false), "3.1"),
        ((true, false, false), "3.2"),
        ((false, true, false), "3.3"),
        ((false, false, false), "3.4"),
    ];
    let descriptor = |smell: Smell, lang: &str, names: &[&str]| DatasetDescriptor {
        name: "d".into(),
        smell,
        language: lang.into(),
        granularity: Granularity::Method,
        feature_names: names.iter().map(|s| s.to_string()).collect(),
    };
    let src = descriptor(Smell::LongMethod, "Java", &["a", "b", "c"]);
    for ((fe, se, le), id) in table {
        let names: &[&str] = if fe { &["c", "a", "b"] } else { &["a", "b", "x"] };
        let smell = if se { Smell::LongMethod } else { Smell::FeatureEnvy };
        let lang = if le { "JAVA" } else { "C#" };
        let got = classify_scenario(&src, &descriptor(smell, lang, names)).sub_scenario.id();
        ensure(got == id, || format!("({fe},{se},{le}) gave {got}, want {id}"))?;
    }
    Ok("8/8 predicate triples".into())
}

// ---------------------------------------------------------------- A8

fn blobs(n: usize, seed_value: u64) -> (Matrix, Vec<u8>) {
    let mut rng = seed::rng(seed_value);
    let mut data = Vec::with_capacity(2 * n);
    let mut y = Vec::with_capacity(n);
    for i in 0..n {
        let c = (i % 2) as u8;
        data.push(common::normal(&mut rng) + 10.0 * f64::from(c));
        data.push(common::normal(&mut rng));
        y.push(c);
    }
    (Matrix::new(n, 2, data).unwrap(), y)
}

fn a8() -> Outcome {
    let (x, y) = blobs(200, 81);
    let (xt, yt) = blobs(200, 82);
    let mut notes = Vec::new();
    for kind in LearnerKind::ALL {
        let m = fit(kind, &HyperParams::new(), &x, &y, 7).map_err(|e| format!("{kind}: {e}"))?;
        let train_auc = auc(&y, &m.predict_score(&x).unwrap()).unwrap();
        let test_auc = auc(&yt, &m.predict_score(&xt).unwrap()).unwrap();
        let pred = m.predict_label(&xt).unwrap();
        let acc = pred.iter().zip(&yt).filter(|(a, b)| a == b).count() as f64 / yt.len() as f64;
        ensure(train_auc >= A8_MIN && test_auc >= A8_MIN && acc >= A8_MIN, || {
            format!("{kind}: train AUC {train_auc:.3}, test AUC {test_auc:.3}, accuracy {acc:.3}")
        })?;
        notes.push(format!("{kind} {acc:.2}"));
    }
    let mut rng = seed::rng(83);
    let gx = Matrix::new(5, 3, (0..15).map(|_| common::normal(&mut rng)).collect()).unwrap();
    let grad = mlp_gradient_error(&gx, &[1, 0, 1, 1, 0], 4, 84).map_err(|e| e.to_string())?;
    ensure(grad <= A8_GRAD_TOL, || format!("MLP gradient relative error {grad:.2e}"))?;
    for kernel in ["linear", "rbf", "poly"] {
        for c in [0.1, 1.0, 10.0] {
            let params = HyperParams::new().with("kernel", kernel).with("C", c);
            let d = svm_dual_check(&params, &x, &y).map_err(|e| e.to_string())?;
            ensure(d.satisfied(A8_DUAL_TOL), || format!("SVM {kernel} C={c}: {d:?}"))?;
        }
    }
    Ok(format!("test accuracy {}; gradient error {grad:.1e}", notes.join(", ")))
}

// ---------------------------------------------------------------- A9

fn run_binary(config: &Path, out: &Path, threads: &str) -> Result<Vec<u8>, String> {
    let o = Command::new(env!("CARGO_BIN_EXE_intersmell"))
        .args(["run", "--config"])
        .arg(config)
        .arg("--out")
        .arg(out)
        .args(["--threads", threads])
        .env_remove("INTERSMELL_SEED")
        .output()
        .map_err(|e| e.to_string())?;
    ensure(o.status.success(), || String::from_utf8_lossy(&o.stderr).into_owned())?;
    std::fs::read(out.join("report.csv")).map_err(|e| e.to_string())
}

fn a9() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    common::write_suite(dir.path(), 120);
    let cfg = dir.path().join("run.conf");
    std::fs::write(
        &cfg,
        format!(
            "seed = 42\nfolds = 5\npermutations = 50\n\
             dataset.lm = lm.ismd\ndataset.fe = fe.ismd\ndataset.gc = gc.ismd\ndataset.dc = dc.ismd\n{}",
            common::FAST_GRIDS
        ),
    )
    .map_err(|e| e.to_string())?;
    let a = run_binary(&cfg, &dir.path().join("a"), "4")?;
    let b = run_binary(&cfg, &dir.path().join("b"), "4")?;
    let c = run_binary(&cfg, &dir.path().join("c"), "1")?;
    ensure(a == b, || "two runs differ".into())?;
    ensure(a == c, || "1 thread and 4 threads differ".into())?;
    let rows = String::from_utf8_lossy(&a).lines().count() - 1;
    ensure(rows == 56, || format!("{rows} report rows"))?;
    let mmd_a = std::fs::read(dir.path().join("a/mmd.csv")).map_err(|e| e.to_string())?;
    let mmd_c = std::fs::read(dir.path().join("c/mmd.csv")).map_err(|e| e.to_string())?;
    ensure(mmd_a == mmd_c, || "mmd.csv depends on thread count".into())?;
    Ok(format!("{rows} rows, {} bytes identical across 3 runs", a.len()))
}

// ---------------------------------------------------------------- A10

fn reevaluate(kind: LearnerKind, p: &HyperParams, x: &Matrix, y: &[u8], folds: &[Vec<usize>], fit_seed: u64) -> f64 {
    let mut total = 0.0;
    for (f, valid) in folds.iter().enumerate() {
        let train: Vec<usize> = (0..y.len()).filter(|i| !valid.contains(i)).collect();
        let ytr: Vec<u8> = train.iter().map(|&i| y[i]).collect();
        let yva: Vec<u8> = valid.iter().map(|&i| y[i]).collect();
        let m = fit(kind, p, &x.select_rows(&train), &ytr, seed::derive(fit_seed, &[f as u64])).unwrap();
        total += pairwise_auc(&yva, &m.predict_score(&x.select_rows(valid)).unwrap());
    }
    total / folds.len() as f64
}

fn a10() -> Outcome {
    let ds: Dataset = common::synthetic(Smell::LongMethod, &common::METHOD_FEATURES, 90, &[0], 1.0, 1010);
    let (x, y) = (&ds.features, &ds.labels);
    let grids: Vec<(LearnerKind, Vec<HyperParams>)> = vec![
        (LearnerKind::Knn, [1i64, 3, 7, 15, 31].iter().map(|&k| HyperParams::new().with("k", k)).collect()),
        (
            LearnerKind::DecisionTree,
            [1i64, 5, 20].iter().map(|&l| HyperParams::new().with("min_samples_leaf", l)).collect(),
        ),
        (LearnerKind::Svm, [0.01, 1.0, 100.0].iter().map(|&c| HyperParams::new().with("C", c)).collect()),
        (
            LearnerKind::RandomForest,
            [5i64, 20].iter().map(|&t| HyperParams::new().with("n_estimators", t)).collect(),
        ),
        (
            LearnerKind::LogisticRegression,
            [0.001, 1.0].iter().map(|&c| HyperParams::new().with("C", c)).collect(),
        ),
        // identical points tie exactly
        (LearnerKind::NaiveBayes, vec![HyperParams::new(); 3]),
    ];
    let search_seed = 77;
    let mut checked = 0;
    for (kind, grid) in &grids {
        let r = grid_search(*kind, grid, x, y, 5, search_seed).map_err(|e| format!("{kind}: {e}"))?;
        let (folds, fit_seed) = search_plan(y, 5, search_seed).map_err(|e| e.to_string())?;
        let means: Vec<f64> = grid.iter().map(|p| reevaluate(*kind, p, x, y, &folds, fit_seed)).collect();
        for (i, (m, row)) in means.iter().zip(&r.cv_table).enumerate() {
            ensure((m - row.mean_auc).abs() <= A10_TOL, || {
                format!("{kind} point {i}: reported {} vs re-evaluated {m}", row.mean_auc)
            })?;
        }
        let max = means.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let first = means.iter().position(|&m| m == max).unwrap();
        ensure(r.best_index == first && r.best_params == grid[first], || {
            format!("{kind}: chose {} but first maximum is {first}", r.best_index)
        })?;
        checked += grid.len();
    }
    // a grid whose points all score the same resolves to the first
    let (bx, by) = blobs(60, 1011);
    let ties: Vec<HyperParams> = [3i64, 1, 5].iter().map(|&k| HyperParams::new().with("k", k)).collect();
    let r = grid_search(LearnerKind::Knn, &ties, &bx, &by, 5, 3).map_err(|e| e.to_string())?;
    ensure(r.cv_table.iter().all(|p| p.mean_auc == 1.0) && r.best_index == 0, || {
        format!("tie resolved to {}", r.best_index)
    })?;
    Ok(format!("{checked} grid points re-evaluated across {} learners; ties go first", grids.len()))
}

// ---------------------------------------------------------------- main

fn guarded(f: impl FnOnce() -> Outcome) -> Outcome {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(o) => o,
        Err(p) => Err(p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .map_or_else(|| "panicked".into(), |m| format!("panicked: {m}"))),
    }
}

fn real_data_lines() -> Vec<Line> {
    const TITLES: [(&str, &str); 5] = [
        ("A1", "LM/FE detectability"),
        ("A2", "GC/DC non-detectability"),
        ("A3", "degradation under imbalance"),
        ("A4", "discrepancy ordering"),
        ("A5", "ingestion fidelity"),
    ];
    let blocked = |why: String| {
        TITLES
            .iter()
            .map(|&(id, title)| Line {
                id,
                title,
                outcome: Err(format!("blocked: {why}")),
                blocked: true,
            })
            .collect()
    };
    let Some(dir) = std::env::var_os("INTERSMELL_DATA_DIR") else {
        return blocked("INTERSMELL_DATA_DIR is not set, the four public datasets are required".into());
    };
    let loaded = match load_real(Path::new(&dir)) {
        Ok(l) => l,
        Err(e) => return blocked(e),
    };
    let real = catch_unwind(AssertUnwindSafe(|| run_real(&loaded.data)))
        .unwrap_or_else(|_| Err("suite run panicked".into()));
    let mut lines = Vec::new();
    for &(id, title) in &TITLES {
        let outcome = match (id, &real) {
            ("A5", _) => guarded(|| a5(&loaded)),
            (_, Err(e)) => Err(e.clone()),
            ("A1", Ok(r)) => guarded(|| a1(r)),
            ("A2", Ok(r)) => guarded(|| a2(r)),
            ("A3", Ok(r)) => guarded(|| a3(r)),
            (_, Ok(r)) => guarded(|| a4(r)),
        };
        lines.push(Line {
            id,
            title,
            outcome,
            blocked: false,
        });
    }
    lines
}

fn main() -> ExitCode {
    let mut lines = real_data_lines();
    let suites: [Criterion; 5] = [
        ("A6", "AUC oracle", a6),
        ("A7", "taxonomy truth table", a7),
        ("A8", "learner sanity", a8),
        ("A9", "determinism", a9),
        ("A10", "grid search optimality", a10),
    ];
    for (id, title, f) in suites {
        lines.push(Line {
            id,
            title,
            outcome: guarded(f),
            blocked: false,
        });
    }
    let mut failed = 0;
    let mut blocked = 0;
    for l in &lines {
        match &l.outcome {
            Ok(detail) => println!("{} PASS {}: {detail}", l.id, l.title),
            Err(why) => {
                println!("{} FAIL {}: {why}", l.id, l.title);
                if l.blocked {
                    blocked += 1;
                } else {
                    failed += 1;
                }
            }
        }
    }
    let passed = lines.len() - failed - blocked;
    println!("acceptance: {passed} passed, {failed} failed, {blocked} blocked (reported as FAIL)");
    if failed > 0 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
