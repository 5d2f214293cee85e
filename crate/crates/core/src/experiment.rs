//! Train on one smell's dataset, predict another's, and tabulate the results.
//!
//! Randomness is derived from the suite seed by position (case, condition,
//! model), so results do not depend on how jobs are scheduled.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rayon::prelude::*;

use crate::dataset_io::{resample_logged, Condition, Dataset};
use crate::error::{Error, Result};
use crate::learners::{default_grid, fit, grid_search, GridSpec, HyperParams, LearnerKind};
use crate::metrics::{auc, confusion, mmd_permutation_test, precision, ConfusionMatrix};
use crate::seed;
use crate::taxonomy::{classify_scenario, ScenarioLabel, SubScenario};

/// The four inter-smell cases, as (source, target) smell codes.
pub const DEFAULT_CASES: [(&str, &str); 4] = [("LM", "FE"), ("FE", "LM"), ("GC", "DC"), ("DC", "GC")];

/// Dataset pairs compared by the discrepancy test; the first member of
/// each also provides a split-half control.
pub const MMD_PAIRS: [(&str, &str); 2] = [("LM", "FE"), ("GC", "DC")];

pub const DEFAULT_PERMUTATIONS: usize = 200;

pub fn case_name(source: &str, target: &str) -> String {
    format!("{source}→{target}")
}

/// Grid for `kind`: the override when present, else the default.
pub fn grid_for(grids: &BTreeMap<LearnerKind, GridSpec>, kind: LearnerKind) -> GridSpec {
    grids.get(&kind).cloned().unwrap_or_else(|| default_grid(kind))
}

pub struct CaseSpec<'a> {
    pub source: &'a Dataset,
    pub target: &'a Dataset,
    pub case_name: String,
    pub condition: Condition,
    pub models: Vec<LearnerKind>,
    pub seed: u64,
    pub cv_folds: usize,
    pub grids: &'a BTreeMap<LearnerKind, GridSpec>,
    /// Also accept same-smell pairs (sanity runs).
    pub override_scenario_guard: bool,
    /// When set, skip tuning and fit these parameters directly.
    pub fixed_params: Option<&'a BTreeMap<LearnerKind, HyperParams>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelRecord {
    pub kind: LearnerKind,
    pub best_params: HyperParams,
    /// Mean CV AUC of the chosen point; absent when parameters were fixed.
    pub cv_auc: Option<f64>,
    pub precision: f64,
    pub auc: f64,
    pub confusion: ConfusionMatrix,
    pub train_rows_used: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseResult {
    pub case_name: String,
    pub condition: Condition,
    pub scenario: ScenarioLabel,
    pub train_positives: usize,
    pub records: Vec<ModelRecord>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MmdRow {
    pub pair: String,
    pub n_a: usize,
    pub n_b: usize,
    pub mmd2: f64,
    pub bandwidth: f64,
    pub p_value: f64,
    pub null_q95: f64,
    pub differ: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    /// Ordered key/value pairs describing the run.
    pub metadata: Vec<(String, String)>,
    pub cases: Vec<CaseResult>,
    pub mmd_table: Vec<MmdRow>,
}

impl Report {
    pub fn record_count(&self) -> usize {
        self.cases.iter().map(|c| c.records.len()).sum()
    }

    pub fn find(&self, case: &str, condition: Condition) -> Option<&CaseResult> {
        self.cases
            .iter()
            .find(|c| c.case_name == case && c.condition == condition)
    }
}

/// Rejects every pair except inter-smell within one domain and shared
/// features (and identical-smell pairs when overridden).
pub fn check_scenario(source: &Dataset, target: &Dataset, override_guard: bool) -> Result<ScenarioLabel> {
    let label = classify_scenario(&source.descriptor, &target.descriptor);
    match label.sub_scenario {
        SubScenario::S1_2 => Ok(label),
        SubScenario::S1_1 if override_guard => Ok(label),
        other => Err(Error::ScenarioGuard {
            id: other.id().into(),
            abbreviation: other.abbreviation().into(),
        }),
    }
}

pub fn run_case(spec: &CaseSpec<'_>) -> Result<CaseResult> {
    let scenario = check_scenario(spec.source, spec.target, spec.override_scenario_guard)?;
    if spec.models.is_empty() {
        return Err(Error::InvalidInput("no models requested".into()));
    }
    let target = spec.target.align_to(&spec.source.descriptor.feature_names)?;
    let pos = target.positives();
    if pos == 0 || pos == target.len() {
        return Err(Error::InvalidDataset(format!(
            "target `{}` must contain both classes",
            target.descriptor.name
        )));
    }
    let mut warnings = Vec::new();
    let source = resample_logged(spec.source, spec.condition, seed::derive(spec.seed, &[0]), &mut warnings)?;
    for w in &mut warnings {
        *w = format!("{} {}: {w}", spec.case_name, spec.condition);
    }

    let records = spec
        .models
        .par_iter()
        .map(|&kind| {
            let model_seed = seed::derive(spec.seed, &[1, kind.index()]);
            let (params, cv_auc) = match spec.fixed_params.and_then(|m| m.get(&kind)) {
                Some(p) => (p.clone(), None),
                None => {
                    let grid = grid_for(spec.grids, kind).expand();
                    let r = grid_search(
                        kind,
                        &grid,
                        &source.features,
                        &source.labels,
                        spec.cv_folds,
                        seed::derive(model_seed, &[0]),
                    )?;
                    let cv = r.best().mean_auc;
                    (r.best_params, Some(cv))
                }
            };
            let model = fit(kind, &params, &source.features, &source.labels, seed::derive(model_seed, &[1]))?;
            let scores = model.predict_score(&target.features)?;
            let t = model.threshold();
            let predicted: Vec<u8> = scores.iter().map(|&s| u8::from(s >= t)).collect();
            let cm = confusion(&target.labels, &predicted)?;
            Ok(ModelRecord {
                kind,
                best_params: params,
                cv_auc,
                precision: precision(&cm),
                auc: auc(&target.labels, &scores)?,
                confusion: cm,
                train_rows_used: source.len(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(CaseResult {
        case_name: spec.case_name.clone(),
        condition: spec.condition,
        scenario,
        train_positives: source.positives(),
        records,
        warnings,
    })
}

pub struct SuiteOptions {
    pub seed: u64,
    pub folds: usize,
    pub models: Vec<LearnerKind>,
    pub grids: BTreeMap<LearnerKind, GridSpec>,
    /// Tune on balanced data only and reuse those parameters when unbalanced.
    pub shared_params: bool,
    pub override_scenario_guard: bool,
    /// (source, target) smell codes; the four default cases when empty.
    pub cases: Vec<(String, String)>,
    pub permutations: usize,
    pub mmd: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: 0,
            folds: 5,
            models: LearnerKind::ALL.to_vec(),
            grids: BTreeMap::new(),
            shared_params: false,
            override_scenario_guard: false,
            cases: Vec::new(),
            permutations: DEFAULT_PERMUTATIONS,
            mmd: true,
        }
    }
}

/// Datasets keyed by smell code (`LM`, `FE`, `GC`, `DC`).
pub type SuiteData = BTreeMap<String, Dataset>;

fn lookup<'a>(data: &'a SuiteData, code: &str) -> Result<&'a Dataset> {
    data.get(&code.to_ascii_uppercase())
        .ok_or_else(|| Error::InvalidInput(format!("no dataset loaded for `{code}`")))
}

fn mmd_row(pair: String, a: &Dataset, b: &Dataset, permutations: usize, seed: u64) -> Result<MmdRow> {
    let b = b.align_to(&a.descriptor.feature_names)?;
    let t = mmd_permutation_test(&a.features, &b.features, None, permutations, seed)?;
    Ok(MmdRow {
        pair,
        n_a: t.observed.n_a,
        n_b: t.observed.n_b,
        mmd2: t.observed.mmd2_unbiased,
        bandwidth: t.observed.bandwidth,
        p_value: t.p_value,
        null_q95: t.null_q95,
        differ: t.distributions_differ(),
    })
}

/// Two disjoint random halves of `ds` (sizes floor and ceil of n/2).
pub fn split_halves(ds: &Dataset, seed: u64) -> (Dataset, Dataset) {
    let mut idx: Vec<usize> = (0..ds.len()).collect();
    idx.shuffle(&mut seed::rng(seed));
    let (a, b) = idx.split_at(ds.len() / 2);
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    a.sort_unstable();
    b.sort_unstable();
    (ds.subset(&a), ds.subset(&b))
}

fn mmd_table(data: &SuiteData, opts: &SuiteOptions) -> Result<Vec<MmdRow>> {
    let mut jobs: Vec<(String, Dataset, Dataset)> = Vec::new();
    for (i, (x, y)) in MMD_PAIRS.iter().enumerate() {
        if let (Ok(a), Ok(b)) = (lookup(data, x), lookup(data, y)) {
            jobs.push((format!("{x} vs {y}"), a.clone(), b.clone()));
            let (h1, h2) = split_halves(a, seed::derive(opts.seed, &[3, i as u64]));
            jobs.push((format!("{x}-half vs {x}-half"), h1, h2));
        }
    }
    jobs.iter()
        .enumerate()
        .map(|(j, (name, a, b))| mmd_row(name.clone(), a, b, opts.permutations, seed::derive(opts.seed, &[4, j as u64])))
        .collect()
}

/// Runs every requested case under both conditions and the discrepancy
/// diagnostics.
pub fn run_suite(data: &SuiteData, opts: &SuiteOptions) -> Result<Report> {
    let cases: Vec<(String, String)> = if opts.cases.is_empty() {
        DEFAULT_CASES.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    } else {
        opts.cases.iter().map(|(a, b)| (a.to_ascii_uppercase(), b.to_ascii_uppercase())).collect()
    };
    // fail before any training if a pair is out of scope
    let mut pairs = Vec::with_capacity(cases.len());
    for (s, t) in &cases {
        let (src, tgt) = (lookup(data, s)?, lookup(data, t)?);
        check_scenario(src, tgt, opts.override_scenario_guard)?;
        pairs.push((src, tgt));
    }

    let run = |condition: Condition, fixed: Option<&Vec<BTreeMap<LearnerKind, HyperParams>>>| {
        pairs
            .par_iter()
            .enumerate()
            .map(|(c, (src, tgt))| {
                run_case(&CaseSpec {
                    source: src,
                    target: tgt,
                    case_name: case_name(&cases[c].0, &cases[c].1),
                    condition,
                    models: opts.models.clone(),
                    seed: seed::derive(opts.seed, &[c as u64, condition.index()]),
                    cv_folds: opts.folds,
                    grids: &opts.grids,
                    override_scenario_guard: opts.override_scenario_guard,
                    fixed_params: fixed.map(|f| &f[c]),
                })
            })
            .collect::<Result<Vec<_>>>()
    };
    let balanced = run(Condition::Balanced, None)?;
    let shared: Option<Vec<BTreeMap<LearnerKind, HyperParams>>> = opts.shared_params.then(|| {
        balanced
            .iter()
            .map(|c| c.records.iter().map(|r| (r.kind, r.best_params.clone())).collect())
            .collect()
    });
    let unbalanced = run(Condition::Unbalanced, shared.as_ref())?;

    let mut metadata = vec![
        ("seed".to_string(), opts.seed.to_string()),
        ("folds".to_string(), opts.folds.to_string()),
        (
            "models".to_string(),
            opts.models.iter().map(|k| k.as_str()).collect::<Vec<_>>().join(","),
        ),
        ("shared_params".to_string(), opts.shared_params.to_string()),
        ("override_scenario_guard".to_string(), opts.override_scenario_guard.to_string()),
        ("permutations".to_string(), opts.permutations.to_string()),
        (
            "cases".to_string(),
            cases.iter().map(|(a, b)| format!("{a}:{b}")).collect::<Vec<_>>().join(","),
        ),
    ];
    for (code, ds) in data {
        metadata.push((format!("dataset.{code}.name"), ds.descriptor.name.clone()));
        metadata.push((format!("dataset.{code}.fingerprint"), ds.fingerprint()));
    }
    for &k in &opts.models {
        metadata.push((format!("grid.{k}"), grid_for(&opts.grids, k).describe()));
    }

    let mut results = balanced;
    results.extend(unbalanced);
    let mmd_table = if opts.mmd { mmd_table(data, opts)? } else { Vec::new() };
    metadata.push(("records".to_string(), results.iter().map(|c| c.records.len()).sum::<usize>().to_string()));
    Ok(Report {
        metadata,
        cases: results,
        mmd_table,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Markdown,
    Csv,
}

fn case_order(report: &Report) -> Vec<&str> {
    let mut names: Vec<&str> = Vec::new();
    for c in &report.cases {
        if !names.contains(&c.case_name.as_str()) {
            names.push(&c.case_name);
        }
    }
    names
}

fn model_order(report: &Report) -> Vec<LearnerKind> {
    LearnerKind::ALL
        .into_iter()
        .filter(|k| report.cases.iter().any(|c| c.records.iter().any(|r| r.kind == *k)))
        .collect()
}

fn record<'a>(report: &'a Report, case: &str, condition: Condition, kind: LearnerKind) -> Option<&'a ModelRecord> {
    report.find(case, condition)?.records.iter().find(|r| r.kind == kind)
}

fn cell(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |v| format!("{v:.2}"))
}

fn markdown(report: &Report) -> String {
    let cases = case_order(report);
    let models = model_order(report);
    let mut out = String::new();
    for condition in Condition::ALL {
        let _ = writeln!(out, "## {} source data\n", title(condition));
        out.push_str("| Model |");
        for c in &cases {
            let _ = write!(out, " {c} Precision | {c} AUC |");
        }
        out.push_str("\n|---|");
        out.push_str(&"---|---|".repeat(cases.len()));
        out.push('\n');
        for &k in &models {
            let _ = write!(out, "| {} |", k.display_name());
            for c in &cases {
                let r = record(report, c, condition, k);
                let _ = write!(out, " {} | {} |", cell(r.map(|r| r.precision)), cell(r.map(|r| r.auc)));
            }
            out.push('\n');
        }
        out.push('\n');
    }

    out.push_str("## Balanced vs unbalanced\n\n| Case | Source data | Measure |");
    for k in &models {
        let _ = write!(out, " {} |", k.display_name());
    }
    out.push_str("\n|---|---|---|");
    out.push_str(&"---|".repeat(models.len()));
    out.push('\n');
    for c in &cases {
        for condition in Condition::ALL {
            if report.find(c, condition).is_none() {
                continue;
            }
            for (measure, get) in [
                ("Precision", (|r: &ModelRecord| r.precision) as fn(&ModelRecord) -> f64),
                ("AUC", |r: &ModelRecord| r.auc),
            ] {
                let _ = write!(out, "| {c} | {} | {measure} |", title(condition));
                for &k in &models {
                    let _ = write!(out, " {} |", cell(record(report, c, condition, k).map(get)));
                }
                out.push('\n');
            }
        }
    }

    if !report.mmd_table.is_empty() {
        out.push_str("\n## Distribution discrepancy (MMD)\n\n");
        out.push_str("| Pair | n_a | n_b | mmd2 | bandwidth | p-value | differ |\n|---|---|---|---|---|---|---|\n");
        for m in &report.mmd_table {
            let _ = writeln!(
                out,
                "| {} | {} | {} | {:.4} | {:.3} | {:.3} | {} |",
                m.pair,
                m.n_a,
                m.n_b,
                m.mmd2,
                m.bandwidth,
                m.p_value,
                if m.differ { "yes" } else { "no" }
            );
        }
    }
    out
}

fn title(c: Condition) -> &'static str {
    match c {
        Condition::Balanced => "Balanced",
        Condition::Unbalanced => "Unbalanced",
    }
}

fn csv_text(report: &Report) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.into());
    w.write_record(["case", "condition", "model", "precision", "auc", "best_params"])
        .map_err(io)?;
    for c in &report.cases {
        for r in &c.records {
            w.write_record([
                c.case_name.as_str(),
                c.condition.as_str(),
                r.kind.as_str(),
                &r.precision.to_string(),
                &r.auc.to_string(),
                &r.best_params.to_string(),
            ])
            .map_err(io)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn emit_report(report: &Report, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Markdown => Ok(markdown(report)),
        ReportFormat::Csv => csv_text(report),
    }
}

pub fn emit_mmd_csv(report: &Report) -> String {
    let mut out = String::from("pair,n_a,n_b,mmd2,bandwidth,p_value,null_q95,differ\n");
    for m in &report.mmd_table {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            m.pair, m.n_a, m.n_b, m.mmd2, m.bandwidth, m.p_value, m.null_q95, m.differ
        );
    }
    out
}

/// Writes `report.md`, `report.csv`, `mmd.csv`, `run.txt` (one `key=value`
/// per line) and `run.log` (warnings, one per line) into `dir`.
pub fn write_run_dir(report: &Report, extra_metadata: &[(String, String)], dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("report.md"), emit_report(report, ReportFormat::Markdown)?)?;
    fs::write(dir.join("report.csv"), emit_report(report, ReportFormat::Csv)?)?;
    fs::write(dir.join("mmd.csv"), emit_mmd_csv(report))?;
    let mut meta = String::new();
    for (k, v) in extra_metadata.iter().chain(&report.metadata) {
        let _ = writeln!(meta, "{k}={v}");
    }
    fs::write(dir.join("run.txt"), meta)?;
    let mut log = String::new();
    for c in &report.cases {
        for w in &c.warnings {
            log.push_str(w);
            log.push('\n');
        }
    }
    fs::write(dir.join("run.log"), log)?;
    Ok(())
}
