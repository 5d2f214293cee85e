//! C ABI over the intersmell library.
//!
//! Datasets and models are opaque handles created by `ism_*_new`/`load`/`fit`
//! functions and released with the matching `_free`. Every fallible call
//! returns an [`IsmStatus`]; on failure the message is available from
//! [`ism_last_error`] on the same thread until the next failing call.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::OnceLock;

use intersmell::dataset_io::{dataset_stats, read_canonical, write_canonical, Dataset, DatasetDescriptor, Granularity, Smell};
use intersmell::learners::{fit, FittedModel, HyperParams, LearnerKind};
use intersmell::matrix::Matrix;
use intersmell::metrics::{auc, mmd_permutation_test};
use intersmell::taxonomy::{classify_scenario, SubScenario};
use intersmell::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Io = 3,
    Parse = 4,
    InvalidDataset = 5,
    InvalidInput = 6,
    InvalidParams = 7,
    DimensionMismatch = 8,
    FeatureMismatch = 9,
    ScenarioGuard = 10,
    Panic = 11,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsmLearner {
    RandomForest = 0,
    DecisionTree = 1,
    LogisticRegression = 2,
    NaiveBayes = 3,
    Mlp = 4,
    Knn = 5,
    Svm = 6,
}

impl From<IsmLearner> for LearnerKind {
    fn from(k: IsmLearner) -> Self {
        match k {
            IsmLearner::RandomForest => LearnerKind::RandomForest,
            IsmLearner::DecisionTree => LearnerKind::DecisionTree,
            IsmLearner::LogisticRegression => LearnerKind::LogisticRegression,
            IsmLearner::NaiveBayes => LearnerKind::NaiveBayes,
            IsmLearner::Mlp => LearnerKind::Mlp,
            IsmLearner::Knn => LearnerKind::Knn,
            IsmLearner::Svm => LearnerKind::Svm,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsmScenario {
    S11 = 0,
    S12 = 1,
    S21 = 2,
    S22 = 3,
    S31 = 4,
    S32 = 5,
    S33 = 6,
    S34 = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IsmStats {
    pub row_count: usize,
    pub feature_count: usize,
    pub positive_count: usize,
    pub negative_count: usize,
    pub positive_fraction: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IsmMmd {
    pub mmd2: f64,
    pub bandwidth: f64,
    pub p_value: f64,
    pub null_q95: f64,
    /// 1 when the observed value exceeds the permutation 95th percentile.
    pub differ: i32,
}

/// Opaque dataset handle.
pub struct IsmDataset(Dataset);

/// Opaque trained-model handle.
pub struct IsmModel(FittedModel);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> IsmStatus {
    match e {
        Error::Parse { .. } | Error::Config(_) => IsmStatus::Parse,
        Error::AllMissing { .. } | Error::InvalidDataset(_) | Error::InsufficientPositives(_) => IsmStatus::InvalidDataset,
        Error::InvalidParams { .. } => IsmStatus::InvalidParams,
        Error::InvalidInput(_) => IsmStatus::InvalidInput,
        Error::DimensionMismatch { .. } => IsmStatus::DimensionMismatch,
        Error::FeatureMismatch { .. } => IsmStatus::FeatureMismatch,
        Error::ScenarioGuard { .. } => IsmStatus::ScenarioGuard,
        Error::Io(_) => IsmStatus::Io,
    }
}

struct Fail(IsmStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(IsmStatus::NullPointer, format!("`{what}` is null"))
}

/// Runs `f`, converting errors and panics into a status plus message.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> IsmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => IsmStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            IsmStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(IsmStatus::InvalidUtf8, format!("`{what}` is not UTF-8")))
}

unsafe fn matrix(x: *const f64, rows: usize, cols: usize) -> Result<Matrix, Fail> {
    if x.is_null() && rows * cols > 0 {
        return Err(null("x"));
    }
    let data = if rows * cols == 0 {
        Vec::new()
    } else {
        std::slice::from_raw_parts(x, rows * cols).to_vec()
    };
    Ok(Matrix::new(rows, cols, data)?)
}

unsafe fn slice<'a, T>(p: *const T, n: usize, what: &str) -> Result<&'a [T], Fail> {
    if n == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, n))
}

/// Message of the last failing call on this thread, or "" when none.
/// Valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ism_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ism_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Reads a canonical dataset file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ism_dataset_load(path: *const c_char, out: *mut *mut IsmDataset) -> IsmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let path = text(path, "path")?;
        let body = std::fs::read_to_string(path).map_err(|e| Fail(IsmStatus::Io, format!("{path}: {e}")))?;
        let ds = read_canonical(&body)?;
        *out = Box::into_raw(Box::new(IsmDataset(ds)));
        Ok(())
    })
}

/// Builds a dataset from row-major `features` (`rows` x `cols`), 0/1
/// `labels` and `cols` feature names.
///
/// # Safety
/// Pointers must reference arrays of the stated lengths; strings must be
/// NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ism_dataset_new(
    name: *const c_char,
    smell: *const c_char,
    language: *const c_char,
    feature_names: *const *const c_char,
    features: *const f64,
    labels: *const u8,
    rows: usize,
    cols: usize,
    out: *mut *mut IsmDataset,
) -> IsmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let smell: Smell = text(smell, "smell")?.parse()?;
        let names = slice(feature_names, cols, "feature_names")?
            .iter()
            .map(|&p| text(p, "feature name").map(str::to_string))
            .collect::<Result<Vec<_>, _>>()?;
        let granularity = match smell {
            Smell::LongMethod | Smell::FeatureEnvy => Granularity::Method,
            _ => Granularity::Class,
        };
        let descriptor = DatasetDescriptor {
            name: text(name, "name")?.to_string(),
            smell,
            language: text(language, "language")?.to_string(),
            granularity,
            feature_names: names,
        };
        let ds = Dataset::new(descriptor, matrix(features, rows, cols)?, slice(labels, rows, "labels")?.to_vec())?;
        *out = Box::into_raw(Box::new(IsmDataset(ds)));
        Ok(())
    })
}

/// Writes `ds` in canonical form to `path`.
///
/// # Safety
/// `ds` must be a live handle; `path` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn ism_dataset_save(ds: *const IsmDataset, path: *const c_char) -> IsmStatus {
    guard(|| {
        let ds = ds.as_ref().ok_or_else(|| null("ds"))?;
        let path = text(path, "path")?;
        std::fs::write(path, write_canonical(&ds.0)?).map_err(|e| Fail(IsmStatus::Io, format!("{path}: {e}")))
    })
}

/// # Safety
/// `ds` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ism_dataset_free(ds: *mut IsmDataset) {
    if !ds.is_null() {
        drop(Box::from_raw(ds));
    }
}

/// # Safety
/// `ds` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ism_dataset_stats(ds: *const IsmDataset, out: *mut IsmStats) -> IsmStatus {
    guard(|| {
        let ds = ds.as_ref().ok_or_else(|| null("ds"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let s = dataset_stats(&ds.0);
        *out = IsmStats {
            row_count: s.row_count,
            feature_count: s.feature_count,
            positive_count: s.positive_count,
            negative_count: s.negative_count,
            positive_fraction: s.positive_fraction,
        };
        Ok(())
    })
}

/// Sub-scenario of a (source, target) pair.
///
/// # Safety
/// Both handles must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ism_classify(
    source: *const IsmDataset,
    target: *const IsmDataset,
    out: *mut IsmScenario,
) -> IsmStatus {
    guard(|| {
        let s = source.as_ref().ok_or_else(|| null("source"))?;
        let t = target.as_ref().ok_or_else(|| null("target"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let sub = classify_scenario(&s.0.descriptor, &t.0.descriptor).sub_scenario;
        let i = SubScenario::ALL.iter().position(|&x| x == sub).unwrap();
        *out = [
            IsmScenario::S11,
            IsmScenario::S12,
            IsmScenario::S21,
            IsmScenario::S22,
            IsmScenario::S31,
            IsmScenario::S32,
            IsmScenario::S33,
            IsmScenario::S34,
        ][i];
        Ok(())
    })
}

/// NUL-terminated (id, abbreviation) per sub-scenario, built once.
fn scenario_strings() -> &'static [(CString, CString)] {
    static TABLE: OnceLock<Vec<(CString, CString)>> = OnceLock::new();
    TABLE.get_or_init(|| {
        SubScenario::ALL
            .iter()
            .map(|s| (CString::new(s.id()).unwrap(), CString::new(s.abbreviation()).unwrap()))
            .collect()
    })
}

/// Sub-scenario id such as "1.2"; a static string.
#[no_mangle]
pub extern "C" fn ism_scenario_id(s: IsmScenario) -> *const c_char {
    scenario_strings()[s as usize].0.as_ptr()
}

/// Short name such as "Inter SD_iD"; a static string.
#[no_mangle]
pub extern "C" fn ism_scenario_abbreviation(s: IsmScenario) -> *const c_char {
    scenario_strings()[s as usize].1.as_ptr()
}

/// Rank-based area under the ROC curve.
///
/// # Safety
/// `labels` and `scores` must hold `n` elements; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ism_auc(labels: *const u8, scores: *const f64, n: usize, out: *mut f64) -> IsmStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = auc(slice(labels, n, "labels")?, slice(scores, n, "scores")?)?;
        Ok(())
    })
}

/// Permutation MMD test between two datasets with equal feature sets.
/// `bandwidth <= 0` selects the median heuristic.
///
/// # Safety
/// Both handles must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ism_mmd_test(
    a: *const IsmDataset,
    b: *const IsmDataset,
    bandwidth: f64,
    permutations: usize,
    seed: u64,
    out: *mut IsmMmd,
) -> IsmStatus {
    guard(|| {
        let a = a.as_ref().ok_or_else(|| null("a"))?;
        let b = b.as_ref().ok_or_else(|| null("b"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let b = b.0.align_to(&a.0.descriptor.feature_names)?;
        let bw = (bandwidth > 0.0).then_some(bandwidth);
        let t = mmd_permutation_test(&a.0.features, &b.features, bw, permutations, seed)?;
        *out = IsmMmd {
            mmd2: t.observed.mmd2_unbiased,
            bandwidth: t.observed.bandwidth,
            p_value: t.p_value,
            null_q95: t.null_q95,
            differ: i32::from(t.distributions_differ()),
        };
        Ok(())
    })
}

/// Trains a classifier. `params` is `name=value;name=value` or null for
/// defaults.
///
/// # Safety
/// `x` must hold `rows * cols` values and `y` `rows` labels; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ism_model_fit(
    kind: IsmLearner,
    params: *const c_char,
    x: *const f64,
    y: *const u8,
    rows: usize,
    cols: usize,
    seed: u64,
    out: *mut *mut IsmModel,
) -> IsmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let hp: HyperParams = if params.is_null() {
            HyperParams::new()
        } else {
            text(params, "params")?.parse()?
        };
        let m = fit(kind.into(), &hp, &matrix(x, rows, cols)?, slice(y, rows, "y")?, seed)?;
        *out = Box::into_raw(Box::new(IsmModel(m)));
        Ok(())
    })
}

/// Fits on a dataset handle.
///
/// # Safety
/// `ds` must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ism_model_fit_dataset(
    kind: IsmLearner,
    params: *const c_char,
    ds: *const IsmDataset,
    seed: u64,
    out: *mut *mut IsmModel,
) -> IsmStatus {
    let Some(d) = ds.as_ref() else {
        set_error("`ds` is null");
        return IsmStatus::NullPointer;
    };
    ism_model_fit(
        kind,
        params,
        d.0.features.as_slice().as_ptr(),
        d.0.labels.as_ptr(),
        d.0.len(),
        d.0.features.cols(),
        seed,
        out,
    )
}

/// Positive-class scores for `rows` rows; `out` receives `rows` values.
///
/// # Safety
/// `model` must be live; `x` holds `rows * cols` values; `out` holds `rows`.
#[no_mangle]
pub unsafe extern "C" fn ism_model_predict_score(
    model: *const IsmModel,
    x: *const f64,
    rows: usize,
    cols: usize,
    out: *mut f64,
) -> IsmStatus {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        let s = m.0.predict_score(&matrix(x, rows, cols)?)?;
        if rows > 0 && out.is_null() {
            return Err(null("out"));
        }
        ptr::copy_nonoverlapping(s.as_ptr(), out, s.len());
        Ok(())
    })
}

/// 0/1 labels for `rows` rows.
///
/// # Safety
/// As [`ism_model_predict_score`], with `out` holding `rows` bytes.
#[no_mangle]
pub unsafe extern "C" fn ism_model_predict_label(
    model: *const IsmModel,
    x: *const f64,
    rows: usize,
    cols: usize,
    out: *mut u8,
) -> IsmStatus {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        let l = m.0.predict_label(&matrix(x, rows, cols)?)?;
        if rows > 0 && out.is_null() {
            return Err(null("out"));
        }
        ptr::copy_nonoverlapping(l.as_ptr(), out, l.len());
        Ok(())
    })
}

/// Decision threshold applied to scores by [`ism_model_predict_label`].
///
/// # Safety
/// `model` must be null or live. Returns NaN for null.
#[no_mangle]
pub unsafe extern "C" fn ism_model_threshold(model: *const IsmModel) -> f64 {
    model.as_ref().map_or(f64::NAN, |m| m.0.threshold())
}

/// # Safety
/// `model` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ism_model_free(model: *mut IsmModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}
