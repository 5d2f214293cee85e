//! Command-line surface: `ingest`, `classify`, `run`, `mmd`.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::config::{parse_case, parse_models, DatasetSource, InputFormat, RunConfig};
use crate::dataset_io::{
    build_dataset, dataset_stats, impute_mean, parse_arff, parse_csv, read_canonical, write_canonical, Dataset,
    Granularity, MissingReport, Smell,
};
use crate::error::{Error, Result};
use crate::experiment::{emit_report, run_suite, write_run_dir, ReportFormat, SuiteData, SuiteOptions, DEFAULT_PERMUTATIONS};
use crate::learners::LearnerKind;
use crate::metrics::mmd_permutation_test;
use crate::taxonomy::{classify_scenario, recommend_technique, taxonomy_path};

pub const SEED_ENV: &str = "INTERSMELL_SEED";

#[derive(Debug, Parser)]
#[command(name = "intersmell", version, about = "Cross-smell detection experiments on code-metric datasets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a raw ARFF/CSV dataset, impute missing values and write the canonical form.
    Ingest(IngestArgs),
    /// Report the scenario, taxonomy path and suggested technique for a dataset pair.
    Classify(ClassifyArgs),
    /// Run the cross-smell experiment and write a report directory.
    Run(RunArgs),
    /// Kernel two-sample discrepancy between two datasets.
    Mmd(MmdArgs),
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// Raw dataset file.
    #[arg(long)]
    pub input: PathBuf,
    /// arff or csv; guessed from the extension when omitted.
    #[arg(long)]
    pub format: Option<String>,
    /// LM, FE, GC, DC or any other code.
    #[arg(long)]
    pub smell: String,
    #[arg(long, default_value = "Java")]
    pub language: String,
    /// class or method; LM/FE default to method, others to class.
    #[arg(long)]
    pub granularity: Option<String>,
    /// Class level that marks a smelly instance.
    #[arg(long, default_value = "true")]
    pub positive: String,
    /// Label column for CSV input.
    #[arg(long, default_value = "is_smell")]
    pub label_column: String,
    /// Dataset name; defaults to the smell code.
    #[arg(long)]
    pub name: Option<String>,
    /// Where to write the canonical file.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub source: PathBuf,
    #[arg(long)]
    pub target: PathBuf,
    /// Decide distribution similarity with a permutation MMD test.
    #[arg(long)]
    pub mmd_check: bool,
    #[arg(long, default_value_t = DEFAULT_PERMUTATIONS)]
    pub permutations: usize,
    /// Defaults to $INTERSMELL_SEED, then 0.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// key = value run configuration; explicit flags win over its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub lm: Option<PathBuf>,
    #[arg(long)]
    pub fe: Option<PathBuf>,
    #[arg(long)]
    pub gc: Option<PathBuf>,
    #[arg(long)]
    pub dc: Option<PathBuf>,
    /// Defaults to the config value, then $INTERSMELL_SEED, then 0.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Cross-validation folds for tuning (default 5).
    #[arg(long)]
    pub folds: Option<usize>,
    /// Comma-separated learners (default: all seven).
    #[arg(long)]
    pub models: Option<String>,
    /// Tune on balanced data and reuse the parameters for unbalanced data.
    #[arg(long)]
    pub shared_params: bool,
    /// Allow same-smell pairs (sanity runs).
    #[arg(long)]
    pub override_scenario_guard: bool,
    /// Run only this SRC:TGT case; repeatable.
    #[arg(long = "case")]
    pub cases: Vec<String>,
    /// Permutations for the discrepancy test (default 200).
    #[arg(long)]
    pub permutations: Option<usize>,
    /// Skip the discrepancy table.
    #[arg(long)]
    pub no_mmd: bool,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Report directory (default intersmell-run).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MmdArgs {
    #[arg(long)]
    pub a: PathBuf,
    #[arg(long)]
    pub b: PathBuf,
    #[arg(long, default_value_t = DEFAULT_PERMUTATIONS)]
    pub permutations: usize,
    /// Defaults to $INTERSMELL_SEED, then 0.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Fixed RBF bandwidth; median heuristic when omitted.
    #[arg(long)]
    pub bandwidth: Option<f64>,
}

fn env_seed() -> Result<Option<u64>> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::Config(format!("{SEED_ENV} must be a non-negative integer, got `{v}`"))),
        Err(_) => Ok(None),
    }
}

fn default_granularity(smell: &Smell) -> Granularity {
    match smell {
        Smell::LongMethod | Smell::FeatureEnvy => Granularity::Method,
        _ => Granularity::Class,
    }
}

/// Reads a dataset from `source`, ingesting raw formats on the fly. The
/// missing-value census is returned for raw inputs.
pub fn load_dataset(source: &DatasetSource, smell: &Smell, name: &str) -> Result<(Dataset, Option<MissingReport>)> {
    let text = std::fs::read_to_string(&source.path).map_err(|e| {
        Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", source.path.display())))
    })?;
    let table = match source.format {
        InputFormat::Canonical => return Ok((read_canonical(&text)?, None)),
        InputFormat::Arff => parse_arff(&text)?,
        InputFormat::Csv => parse_csv(&text, &source.label_column)?,
    };
    let (table, report) = impute_mean(&table)?;
    let granularity = source.granularity.unwrap_or_else(|| default_granularity(smell));
    let ds = build_dataset(&table, name, smell.clone(), &source.language, granularity, &source.positive_level)?;
    Ok((ds, Some(report)))
}

fn read_dataset_file(path: &Path) -> Result<Dataset> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    read_canonical(&text)
}

pub fn cmd_ingest(args: &IngestArgs, out: &mut dyn Write) -> Result<()> {
    let smell: Smell = args.smell.parse()?;
    let mut source = DatasetSource::new(args.input.clone());
    if let Some(f) = &args.format {
        source.format = f.parse()?;
    }
    source.language = args.language.clone();
    source.granularity = args.granularity.as_deref().map(str::parse).transpose()?;
    source.positive_level = args.positive.clone();
    source.label_column = args.label_column.clone();
    let name = args.name.clone().unwrap_or_else(|| smell.code().to_string());
    let (ds, report) = load_dataset(&source, &smell, &name)?;
    std::fs::write(&args.out, write_canonical(&ds)?)?;
    let missing = report.as_ref().map_or(0, |r| r.total_missing);
    writeln!(out, "{} missing={missing}", dataset_stats(&ds))?;
    if let Some(r) = report {
        writeln!(out, "{r}")?;
    }
    writeln!(out, "wrote {}", args.out.display())?;
    Ok(())
}

pub fn cmd_classify(args: &ClassifyArgs, out: &mut dyn Write) -> Result<()> {
    let src = read_dataset_file(&args.source)?;
    let tgt = read_dataset_file(&args.target)?;
    let label = classify_scenario(&src.descriptor, &tgt.descriptor);
    writeln!(out, "scenario: {label}")?;
    writeln!(out, "path: {}", taxonomy_path(label))?;
    let similar = if args.mmd_check {
        match tgt.align_to(&src.descriptor.feature_names) {
            Ok(aligned) => {
                let seed = args.seed.or(env_seed()?).unwrap_or(0);
                let t = mmd_permutation_test(&src.features, &aligned.features, None, args.permutations, seed)?;
                writeln!(
                    out,
                    "mmd2: {:.6} p_value: {:.4} differ: {}",
                    t.observed.mmd2_unbiased,
                    t.p_value,
                    t.distributions_differ()
                )?;
                !t.distributions_differ()
            }
            Err(_) => {
                writeln!(out, "mmd2: not computed (feature spaces differ)")?;
                false
            }
        }
    } else {
        true
    };
    let hint = recommend_technique(label, similar);
    writeln!(out, "technique: {}", hint.technique)?;
    writeln!(out, "rationale: {}", hint.rationale)?;
    Ok(())
}

pub fn cmd_mmd(args: &MmdArgs, out: &mut dyn Write) -> Result<()> {
    let a = read_dataset_file(&args.a)?;
    let b = read_dataset_file(&args.b)?;
    let b = b.align_to(&a.descriptor.feature_names).map_err(|_| Error::FeatureMismatch {
        source_name: a.descriptor.name.clone(),
        target_name: b.descriptor.name.clone(),
    })?;
    let seed = args.seed.or(env_seed()?).unwrap_or(0);
    let t = mmd_permutation_test(&a.features, &b.features, args.bandwidth, args.permutations, seed)?;
    writeln!(out, "mmd2={}", t.observed.mmd2_unbiased)?;
    writeln!(out, "bandwidth={}", t.observed.bandwidth)?;
    writeln!(out, "n_a={} n_b={}", t.observed.n_a, t.observed.n_b)?;
    writeln!(out, "permutations={}", t.permutations)?;
    writeln!(out, "null_q95={}", t.null_q95)?;
    writeln!(out, "p_value={}", t.p_value)?;
    writeln!(out, "differ={}", t.distributions_differ())?;
    Ok(())
}

/// Everything `run` needs after merging config and flags.
pub struct ResolvedRun {
    pub data: SuiteData,
    pub options: SuiteOptions,
    pub out: PathBuf,
    /// Dataset paths and ingestion stats for the run record.
    pub metadata: Vec<(String, String)>,
}

/// Merges the config file and flags into suite inputs. Flags win.
pub fn resolve_run(args: &RunArgs) -> Result<ResolvedRun> {
    let mut cfg = match &args.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    for (code, flag) in [("LM", &args.lm), ("FE", &args.fe), ("GC", &args.gc), ("DC", &args.dc)] {
        if let Some(p) = flag {
            cfg.datasets.insert(code.to_string(), DatasetSource::new(p.clone()));
        }
    }
    cfg.check_paths()?;
    if cfg.datasets.is_empty() {
        return Err(Error::Config("no datasets given (use --config or --lm/--fe/--gc/--dc)".into()));
    }

    let seed = match args.seed.or(cfg.seed) {
        Some(s) => s,
        None => env_seed()?.unwrap_or(0),
    };
    let folds = args.folds.or(cfg.folds).unwrap_or(5);
    if folds < 2 {
        return Err(Error::Config(format!("folds must be at least 2, got {folds}")));
    }
    let models = match &args.models {
        Some(m) => parse_models(m)?,
        None => cfg.models.clone().unwrap_or_else(|| LearnerKind::ALL.to_vec()),
    };
    let cases = if args.cases.is_empty() {
        cfg.cases.clone().unwrap_or_default()
    } else {
        args.cases.iter().map(|c| parse_case(c)).collect::<Result<_>>()?
    };
    let opts = SuiteOptions {
        seed,
        folds,
        models,
        grids: cfg.grids.clone(),
        shared_params: args.shared_params || cfg.shared_params.unwrap_or(false),
        override_scenario_guard: args.override_scenario_guard || cfg.override_scenario_guard.unwrap_or(false),
        cases,
        permutations: args.permutations.or(cfg.permutations).unwrap_or(DEFAULT_PERMUTATIONS),
        mmd: !args.no_mmd,
    };
    let out = args
        .out
        .clone()
        .or(cfg.out.clone())
        .unwrap_or_else(|| PathBuf::from("intersmell-run"));

    let mut data = SuiteData::new();
    let mut extra = Vec::new();
    for (code, source) in &cfg.datasets {
        let smell: Smell = code.parse()?;
        let (ds, report) = load_dataset(source, &smell, code)?;
        if ds.descriptor.smell.code() != smell.code() {
            return Err(Error::Config(format!(
                "dataset for {code} is labelled {} in `{}`",
                ds.descriptor.smell,
                source.path.display()
            )));
        }
        extra.push((format!("dataset.{code}.path"), source.path.display().to_string()));
        extra.push((format!("dataset.{code}.stats"), dataset_stats(&ds).to_string()));
        if let Some(r) = report {
            extra.push((format!("dataset.{code}.missing"), r.total_missing.to_string()));
        }
        data.insert(code.clone(), ds);
    }
    Ok(ResolvedRun {
        data,
        options: opts,
        out,
        metadata: extra,
    })
}

pub fn cmd_run(args: &RunArgs, out: &mut dyn Write) -> Result<()> {
    let ResolvedRun {
        data,
        options: opts,
        out: dir,
        metadata: extra,
    } = resolve_run(args)?;
    let report = match args.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(|| run_suite(&data, &opts))?,
        None => run_suite(&data, &opts)?,
    };
    write_run_dir(&report, &extra, &dir)?;
    for c in &report.cases {
        for w in &c.warnings {
            eprintln!("warning: {w}");
        }
    }
    write!(out, "{}", emit_report(&report, ReportFormat::Markdown)?)?;
    writeln!(out, "\n{} records written to {}", report.record_count(), dir.display())?;
    Ok(())
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Ingest(a) => cmd_ingest(a, out),
        Command::Classify(a) => cmd_classify(a, out),
        Command::Run(a) => cmd_run(a, out),
        Command::Mmd(a) => cmd_mmd(a, out),
    }
}
