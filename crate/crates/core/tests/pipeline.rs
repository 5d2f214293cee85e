mod common;

use std::collections::BTreeMap;
use std::path::Path;

use intersmell::config::RunConfig;
use intersmell::dataset_io::{
    build_dataset, impute_mean, parse_arff, read_canonical, resample, write_canonical, Condition, Granularity, Smell,
};
use intersmell::experiment::{
    emit_report, run_case, run_suite, CaseSpec, ReportFormat, SuiteData, SuiteOptions,
};
use intersmell::learners::{GridSpec, LearnerKind};
use intersmell::Error;

fn fast_grids() -> BTreeMap<LearnerKind, GridSpec> {
    RunConfig::parse(common::FAST_GRIDS, Path::new(".")).unwrap().grids
}

fn suite_data(n: usize) -> SuiteData {
    common::suite(n)
        .into_iter()
        .map(|d| (d.descriptor.smell.code().to_string(), d))
        .collect()
}

#[test]
fn arff_to_canonical_to_dataset() {
    let text = "@relation r\n@attribute a numeric\n@attribute b numeric\n@attribute is_smell {true,false}\n\
                @data\n1,?,true\n3,4,false\n5,8,false\n";
    let (table, report) = impute_mean(&parse_arff(text).unwrap()).unwrap();
    assert_eq!(report.total_missing, 1);
    let ds = build_dataset(&table, "x", Smell::GodClass, "Java", Granularity::Class, "true").unwrap();
    assert_eq!(ds.features.row(0), &[1.0, 6.0]);
    let back = read_canonical(&write_canonical(&ds).unwrap()).unwrap();
    assert_eq!(back, ds);
}

#[test]
fn resampling_hits_both_compositions() {
    let ds = &common::suite(300)[0];
    let b = resample(ds, Condition::Balanced, 1).unwrap();
    let frac = b.positives() as f64 / b.len() as f64;
    assert!((frac - 1.0 / 3.0).abs() <= 0.01, "{frac}");
    let u = resample(ds, Condition::Unbalanced, 1).unwrap();
    assert!(u.positives() as f64 / u.len() as f64 <= 0.10);
    assert_eq!(resample(ds, Condition::Unbalanced, 1).unwrap(), u);
}

#[test]
fn target_labels_never_reach_training() {
    let data = common::suite(90);
    let (src, tgt) = (&data[0], &data[1]);
    let mut flipped = tgt.clone();
    flipped.labels.iter_mut().for_each(|l| *l = 1 - *l);
    let grids = fast_grids();
    let spec = |target| CaseSpec {
        source: src,
        target,
        case_name: "LM→FE".into(),
        condition: Condition::Balanced,
        models: vec![LearnerKind::Knn, LearnerKind::DecisionTree, LearnerKind::LogisticRegression],
        seed: 5,
        cv_folds: 3,
        grids: &grids,
        override_scenario_guard: false,
        fixed_params: None,
    };
    let a = run_case(&spec(tgt)).unwrap();
    let b = run_case(&spec(&flipped)).unwrap();
    for (x, y) in a.records.iter().zip(&b.records) {
        assert_eq!(x.best_params, y.best_params);
        assert_eq!(x.cv_auc, y.cv_auc);
        // flipping every label mirrors the ranking
        assert!((x.auc + y.auc - 1.0).abs() < 1e-12);
    }
}

#[test]
fn columns_are_matched_by_name() {
    let data = common::suite(90);
    let src = &data[0];
    let mut names = data[1].descriptor.feature_names.clone();
    names.reverse();
    let shuffled = data[1].align_to(&names).unwrap();
    let grids = fast_grids();
    let run = |target| {
        run_case(&CaseSpec {
            source: src,
            target,
            case_name: "LM→FE".into(),
            condition: Condition::Unbalanced,
            models: vec![LearnerKind::NaiveBayes],
            seed: 2,
            cv_folds: 3,
            grids: &grids,
            override_scenario_guard: false,
            fixed_params: None,
        })
        .unwrap()
    };
    assert_eq!(run(&data[1]).records, run(&shuffled).records);
}

#[test]
fn suite_is_deterministic_and_complete() {
    let data = suite_data(60);
    let opts = SuiteOptions {
        seed: 17,
        folds: 3,
        grids: fast_grids(),
        permutations: 30,
        ..SuiteOptions::default()
    };
    let a = run_suite(&data, &opts).unwrap();
    assert_eq!(a.record_count(), 56);
    assert_eq!(a.mmd_table.len(), 4);
    let b = run_suite(&data, &opts).unwrap();
    assert_eq!(emit_report(&a, ReportFormat::Csv).unwrap(), emit_report(&b, ReportFormat::Csv).unwrap());
    assert_eq!(a, b);
    for c in &a.cases {
        for r in &c.records {
            assert!((0.0..=1.0).contains(&r.precision));
            assert!((0.0..=1.0).contains(&r.auc));
            assert_eq!(r.confusion.total(), 60);
        }
    }
}

#[test]
fn shared_params_reuse_balanced_choices() {
    let data = suite_data(60);
    let opts = SuiteOptions {
        seed: 4,
        folds: 3,
        models: vec![LearnerKind::Knn, LearnerKind::Svm],
        grids: fast_grids(),
        shared_params: true,
        mmd: false,
        ..SuiteOptions::default()
    };
    let r = run_suite(&data, &opts).unwrap();
    for case in ["LM→FE", "GC→DC"] {
        let bal = r.find(case, Condition::Balanced).unwrap();
        let unb = r.find(case, Condition::Unbalanced).unwrap();
        for (x, y) in bal.records.iter().zip(&unb.records) {
            assert_eq!(x.best_params, y.best_params);
            assert!(y.cv_auc.is_none());
        }
    }
}

#[test]
fn guard_blocks_out_of_scope_cases_before_training() {
    let data = suite_data(60);
    let opts = SuiteOptions {
        cases: vec![("LM".into(), "FE".into()), ("DC".into(), "FE".into())],
        mmd: false,
        ..SuiteOptions::default()
    };
    match run_suite(&data, &opts) {
        Err(e @ Error::ScenarioGuard { .. }) => assert!(e.to_string().contains("2.2")),
        other => panic!("expected a guard error, got {other:?}"),
    }
}
