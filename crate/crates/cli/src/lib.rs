//! Dataset ingestion, run configuration, and table emission for the
//! `ssurv` command-line driver.
//!
//! The library half of the binary so loaders and writers stay testable:
//! CSV survival datasets in, plot-ready CSV tables (per-cell concordance,
//! per-fraction curves, curve-AUC, augmentation traces, method ranking)
//! out.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use ssurv_core::{
    CurveResult, Dataset, ExperimentPlan, ForestConfig, Method, RankingResult, SupervisionStatus,
    SurvivalRecord,
};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] ssurv_core::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io { path: path.to_path_buf(), source }
}

fn parse_err(path: &Path, message: impl Into<String>) -> Error {
    Error::Parse { path: path.to_path_buf(), message: message.into() }
}

// ---------------------------------------------------------------------------
// dataset loading

/// Reads a survival dataset from a headed CSV file.
///
/// A `time` column (non-negative real) and a `status` column (`1` =
/// observed, `0` = censored, empty or `-1` = unlabeled) are required; every
/// other column is a numeric feature, kept in file order. Unlabeled rows
/// have their time erased even when one is present.
pub fn load_dataset(path: &Path) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| parse_err(path, e.to_string()))?;

    let headers = reader.headers().map_err(|e| parse_err(path, e.to_string()))?.clone();
    let time_col = headers
        .iter()
        .position(|h| h == "time")
        .ok_or_else(|| parse_err(path, "missing `time` column"))?;
    let status_col = headers
        .iter()
        .position(|h| h == "status")
        .ok_or_else(|| parse_err(path, "missing `status` column"))?;
    let feature_cols: Vec<usize> =
        (0..headers.len()).filter(|&c| c != time_col && c != status_col).collect();
    let feature_names: Vec<String> =
        feature_cols.iter().map(|&c| headers[c].to_string()).collect();

    let mut records = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let line = i + 2; // header occupies line 1
        let row = row.map_err(|e| parse_err(path, format!("row {line}: {e}")))?;
        if row.len() != headers.len() {
            return Err(parse_err(
                path,
                format!("row {line}: expected {} fields, found {}", headers.len(), row.len()),
            ));
        }
        let features: Vec<f64> = feature_cols
            .iter()
            .map(|&c| {
                row[c].parse::<f64>().map_err(|_| {
                    parse_err(
                        path,
                        format!("row {line}: non-numeric value {:?} in column `{}`", &row[c], &headers[c]),
                    )
                })
            })
            .collect::<Result<_>>()?;

        let status = &row[status_col];
        let record = match status {
            "" | "-1" => SurvivalRecord::unlabeled(features),
            "0" | "1" => {
                let time: f64 = row[time_col].parse().map_err(|_| {
                    parse_err(path, format!("row {line}: non-numeric time {:?}", &row[time_col]))
                })?;
                if !time.is_finite() || time < 0.0 {
                    return Err(parse_err(path, format!("row {line}: negative time {time}")));
                }
                if status == "1" {
                    SurvivalRecord::observed(features, time)
                } else {
                    SurvivalRecord::censored(features, time)
                }
            }
            other => {
                return Err(parse_err(
                    path,
                    format!("row {line}: status must be 1, 0, -1 or empty, found {other:?}"),
                ))
            }
        };
        records.push(record);
    }
    if records.is_empty() {
        return Err(parse_err(path, "empty dataset"));
    }
    Ok(Dataset::new(records, feature_names)?)
}

/// Keeps the `k` features with the largest per-feature variance across all
/// records, in their original column order; ties also break by column
/// order.
pub fn reduce_features(data: &Dataset, k: usize) -> Result<Dataset> {
    let p = data.n_features();
    if k == 0 || k > p {
        return Err(Error::Config(format!("k = {k} must be in 1..={p}")));
    }
    let n = data.len() as f64;
    let mut variances: Vec<(f64, usize)> = (0..p)
        .map(|f| {
            let mean: f64 = data.records.iter().map(|r| r.features[f]).sum::<f64>() / n;
            let var = data.records.iter().map(|r| (r.features[f] - mean).powi(2)).sum::<f64>() / n;
            (var, f)
        })
        .collect();
    variances.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut kept: Vec<usize> = variances[..k].iter().map(|&(_, f)| f).collect();
    kept.sort_unstable();

    let records = data
        .records
        .iter()
        .map(|r| SurvivalRecord {
            features: kept.iter().map(|&f| r.features[f]).collect(),
            time: r.time,
            status: r.status,
        })
        .collect();
    let names = kept.iter().map(|&f| data.feature_names[f].clone()).collect();
    Ok(Dataset::new(records, names)?)
}

/// Writes a dataset back out in the loader's CSV format. Unlabeled rows
/// get an empty time and status `-1`.
pub fn write_dataset(path: &Path, data: &Dataset) -> Result<()> {
    let mut out = String::new();
    for name in &data.feature_names {
        let _ = write!(out, "{name},");
    }
    let _ = writeln!(out, "time,status");
    for r in &data.records {
        for v in &r.features {
            let _ = write!(out, "{v},");
        }
        match r.status {
            SupervisionStatus::Observed => {
                let _ = writeln!(out, "{},1", r.time);
            }
            SupervisionStatus::Censored => {
                let _ = writeln!(out, "{},0", r.time);
            }
            SupervisionStatus::Unlabeled => {
                let _ = writeln!(out, ",-1");
            }
        }
    }
    fs::write(path, out).map_err(io_err(path))
}

// ---------------------------------------------------------------------------
// run configuration

/// Resolved configuration of an `experiment` run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub datasets: Vec<PathBuf>,
    pub methods: Vec<Method>,
    pub fractions: Vec<f64>,
    pub n_folds: usize,
    pub n_repeats: usize,
    pub n_trees: usize,
    pub mtry_fraction: f64,
    pub min_leaf_events: usize,
    pub max_depth: Option<usize>,
    pub seed: u64,
    pub output_dir: PathBuf,
    /// Optional top-k-variance feature reduction applied after loading.
    pub reduce_to: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let forest = ForestConfig::default();
        let plan = ExperimentPlan::new(Method::Rsf);
        RunConfig {
            datasets: Vec::new(),
            methods: Method::ALL.to_vec(),
            fractions: plan.fractions,
            n_folds: plan.n_folds,
            n_repeats: plan.n_repeats,
            n_trees: forest.n_trees,
            mtry_fraction: forest.mtry_fraction,
            min_leaf_events: forest.min_leaf_events,
            max_depth: None,
            seed: 42,
            output_dir: PathBuf::from("out"),
            reduce_to: None,
        }
    }
}

impl RunConfig {
    /// Parses a flat `key = value` configuration file. Blank lines and
    /// `#` comments are ignored; list values are comma-separated. Every
    /// key can later be overridden by a command-line flag.
    pub fn from_file(path: &Path) -> Result<RunConfig> {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        let mut config = RunConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| parse_err(path, format!("line {}: expected key = value", i + 1)))?;
            config
                .set(key.trim(), value.trim())
                .map_err(|e| parse_err(path, format!("line {}: {e}", i + 1)))?;
        }
        Ok(config)
    }

    /// Applies one key/value pair; shared by the file parser and flag
    /// overrides.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
            value
                .parse()
                .map_err(|_| Error::Config(format!("invalid value {value:?} for key `{key}`")))
        }
        fn parse_list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
            value.split(',').map(|v| parse(key, v.trim())).collect()
        }
        match key {
            "datasets" => {
                self.datasets = value.split(',').map(|v| PathBuf::from(v.trim())).collect()
            }
            "methods" => self.methods = parse_list(key, value)?,
            "fractions" => self.fractions = parse_list(key, value)?,
            "folds" => self.n_folds = parse(key, value)?,
            "repeats" => self.n_repeats = parse(key, value)?,
            "trees" => self.n_trees = parse(key, value)?,
            "mtry" => self.mtry_fraction = parse(key, value)?,
            "min_leaf_events" => self.min_leaf_events = parse(key, value)?,
            "max_depth" => {
                self.max_depth =
                    if value.is_empty() { None } else { Some(parse(key, value)?) }
            }
            "seed" => self.seed = parse(key, value)?,
            "output" => self.output_dir = PathBuf::from(value),
            "reduce_features" => {
                self.reduce_to = if value.is_empty() { None } else { Some(parse(key, value)?) }
            }
            other => return Err(Error::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    pub fn forest_config(&self) -> ForestConfig {
        ForestConfig {
            n_trees: self.n_trees,
            mtry_fraction: self.mtry_fraction,
            min_leaf_events: self.min_leaf_events,
            max_depth: self.max_depth,
            seed: self.seed,
        }
    }

    pub fn plan(&self, method: Method) -> ExperimentPlan {
        ExperimentPlan {
            fractions: self.fractions.clone(),
            n_folds: self.n_folds,
            n_repeats: self.n_repeats,
            method,
            forest_config: self.forest_config(),
            seed: self.seed,
        }
    }

    /// The resolved configuration in the file format, echoed next to the
    /// outputs so every table carries its seed and grid provenance.
    pub fn echo(&self) -> String {
        let join = |it: &mut dyn Iterator<Item = String>| it.collect::<Vec<_>>().join(",");
        let mut s = String::new();
        let _ = writeln!(
            s,
            "datasets = {}",
            join(&mut self.datasets.iter().map(|p| p.display().to_string()))
        );
        let _ = writeln!(s, "methods = {}", join(&mut self.methods.iter().map(|m| m.to_string())));
        let _ = writeln!(s, "fractions = {}", join(&mut self.fractions.iter().map(f64::to_string)));
        let _ = writeln!(s, "folds = {}", self.n_folds);
        let _ = writeln!(s, "repeats = {}", self.n_repeats);
        let _ = writeln!(s, "trees = {}", self.n_trees);
        let _ = writeln!(s, "mtry = {}", self.mtry_fraction);
        let _ = writeln!(s, "min_leaf_events = {}", self.min_leaf_events);
        let _ = writeln!(s, "max_depth = {}", self.max_depth.map_or(String::new(), |d| d.to_string()));
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "output = {}", self.output_dir.display());
        let _ = writeln!(
            s,
            "reduce_features = {}",
            self.reduce_to.map_or(String::new(), |k| k.to_string())
        );
        s
    }
}

// ---------------------------------------------------------------------------
// output tables

/// Formats a number with 6 significant digits, in plain decimal notation.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

/// One experiment's worth of output rows, labeled by dataset and method.
pub struct LabeledResult {
    pub dataset: String,
    pub method: Method,
    pub result: CurveResult,
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(io_err(path))
}

/// `cells.csv`: one row per non-missing cross-validation cell.
pub fn write_cells(dir: &Path, results: &[LabeledResult]) -> Result<()> {
    let mut out = String::from("dataset,method,fraction,repeat,fold,c_index\n");
    for lr in results {
        for cell in &lr.result.cells {
            if let Some(c) = cell.c_index {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    lr.dataset,
                    lr.method,
                    sig6(cell.fraction),
                    cell.repeat,
                    cell.fold,
                    sig6(c)
                );
            }
        }
    }
    write_file(&dir.join("cells.csv"), &out)
}

/// `curves.csv`: per-fraction mean and standard deviation of the C-index.
pub fn write_curves(dir: &Path, results: &[LabeledResult]) -> Result<()> {
    let mut out = String::from("dataset,method,fraction,mean,std\n");
    for lr in results {
        for s in &lr.result.summaries {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                lr.dataset,
                lr.method,
                sig6(s.fraction),
                sig6(s.mean),
                sig6(s.std)
            );
        }
    }
    write_file(&dir.join("curves.csv"), &out)
}

/// `auc.csv`: normalized curve-AUC per dataset and method, with the
/// standard deviation over repeats.
pub fn write_auc(dir: &Path, results: &[LabeledResult]) -> Result<()> {
    let mut out = String::from("dataset,method,curve_auc,std\n");
    for lr in results {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            lr.dataset,
            lr.method,
            sig6(lr.result.curve_auc),
            sig6(lr.result.auc_std)
        );
    }
    write_file(&dir.join("auc.csv"), &out)
}

/// `augmentation.csv`: per-iteration admission counts of every
/// self-training cell, for learning-curve plots.
pub fn write_augmentation(dir: &Path, results: &[LabeledResult]) -> Result<()> {
    let mut out = String::from("dataset,method,fraction,repeat,fold,iteration,count\n");
    for lr in results {
        for trace in &lr.result.augmentation {
            for &(iteration, count) in &trace.log {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    lr.dataset,
                    lr.method,
                    sig6(trace.fraction),
                    trace.repeat,
                    trace.fold,
                    iteration,
                    count
                );
            }
        }
    }
    write_file(&dir.join("augmentation.csv"), &out)
}

/// Writes all four tables plus the `run_config.txt` provenance echo.
pub fn write_experiment_outputs(
    dir: &Path,
    config: &RunConfig,
    results: &[LabeledResult],
) -> Result<()> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    write_file(&dir.join("run_config.txt"), &config.echo())?;
    write_cells(dir, results)?;
    write_curves(dir, results)?;
    write_auc(dir, results)?;
    write_augmentation(dir, results)
}

// ---------------------------------------------------------------------------
// ranking

/// A dataset-by-method AUC matrix assembled from one or more `auc.csv`
/// files (externally computed baseline columns merge in the same way).
#[derive(Debug)]
pub struct AucTable {
    pub datasets: Vec<String>,
    pub methods: Vec<String>,
    pub scores: Vec<Vec<f64>>,
}

/// Reads and merges `auc.csv` files into one complete matrix.
///
/// Datasets and methods keep first-appearance order. The merged grid must
/// be complete; missing (dataset, method) cells are an error listing every
/// gap.
pub fn read_auc_tables(paths: &[PathBuf]) -> Result<AucTable> {
    let mut datasets: Vec<String> = Vec::new();
    let mut methods: Vec<String> = Vec::new();
    let mut entries: Vec<(String, String, f64)> = Vec::new();
    for path in paths {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_path(path)
            .map_err(|e| parse_err(path, e.to_string()))?;
        let headers = reader.headers().map_err(|e| parse_err(path, e.to_string()))?;
        for col in ["dataset", "method", "curve_auc"] {
            if !headers.iter().any(|h| h == col) {
                return Err(parse_err(path, format!("missing `{col}` column")));
            }
        }
        let idx = |name: &str| headers.iter().position(|h| h == name).unwrap();
        let (d_col, m_col, a_col) = (idx("dataset"), idx("method"), idx("curve_auc"));
        for (i, row) in reader.records().enumerate() {
            let row = row.map_err(|e| parse_err(path, format!("row {}: {e}", i + 2)))?;
            let auc: f64 = row[a_col].parse().map_err(|_| {
                parse_err(path, format!("row {}: non-numeric curve_auc {:?}", i + 2, &row[a_col]))
            })?;
            let dataset = row[d_col].to_string();
            let method = row[m_col].to_string();
            if !datasets.contains(&dataset) {
                datasets.push(dataset.clone());
            }
            if !methods.contains(&method) {
                methods.push(method.clone());
            }
            entries.push((dataset, method, auc));
        }
    }

    let mut scores = vec![vec![f64::NAN; methods.len()]; datasets.len()];
    for (dataset, method, auc) in entries {
        let d = datasets.iter().position(|x| *x == dataset).unwrap();
        let m = methods.iter().position(|x| *x == method).unwrap();
        scores[d][m] = auc;
    }
    let mut missing = Vec::new();
    for (d, ds) in datasets.iter().enumerate() {
        for (m, me) in methods.iter().enumerate() {
            if scores[d][m].is_nan() {
                missing.push(format!("({ds}, {me})"));
            }
        }
    }
    if !missing.is_empty() {
        return Err(Error::Config(format!("incomplete AUC grid, missing: {}", missing.join(", "))));
    }
    Ok(AucTable { datasets, methods, scores })
}

/// `ranking.csv` (method, mean rank) and `cd.txt` (test summary).
pub fn write_ranking(dir: &Path, table: &AucTable, ranking: &RankingResult, alpha: f64) -> Result<()> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut order: Vec<usize> = (0..table.methods.len()).collect();
    order.sort_by(|&a, &b| ranking.mean_ranks[a].total_cmp(&ranking.mean_ranks[b]));

    let mut out = String::from("method,mean_rank\n");
    for &m in &order {
        let _ = writeln!(out, "{},{}", table.methods[m], sig6(ranking.mean_ranks[m]));
    }
    write_file(&dir.join("ranking.csv"), &out)?;

    let mut cd = String::new();
    let _ = writeln!(cd, "datasets = {}", table.datasets.len());
    let _ = writeln!(cd, "methods = {}", table.methods.len());
    let _ = writeln!(cd, "alpha = {alpha}");
    let _ = writeln!(cd, "friedman_statistic = {}", sig6(ranking.friedman_statistic));
    let _ = writeln!(cd, "critical_difference = {}", sig6(ranking.critical_difference));
    let mut pairs = BTreeSet::new();
    for i in 0..table.methods.len() {
        for j in i + 1..table.methods.len() {
            if ranking.significant[i][j] {
                pairs.insert(format!("{} vs {}", table.methods[i], table.methods[j]));
            }
        }
    }
    if pairs.is_empty() {
        let _ = writeln!(cd, "significant_pairs = none");
    } else {
        let _ = writeln!(cd, "significant_pairs = {}", pairs.into_iter().collect::<Vec<_>>().join("; "));
    }
    write_file(&dir.join("cd.txt"), &cd)
}

// ---------------------------------------------------------------------------
// model application

/// Splits a mixed dataset by supervision status, preserving record order
/// within each part.
pub fn partition_by_status(data: &Dataset) -> (Dataset, Dataset, Dataset) {
    let mut observed = data.empty_like();
    let mut censored = data.empty_like();
    let mut unlabeled = data.empty_like();
    for r in &data.records {
        match r.status {
            SupervisionStatus::Observed => observed.records.push(r.clone()),
            SupervisionStatus::Censored => censored.records.push(r.clone()),
            SupervisionStatus::Unlabeled => unlabeled.records.push(r.clone()),
        }
    }
    (observed, censored, unlabeled)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write as _;

    fn write_temp(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn loads_statuses_and_erases_unlabeled_times() {
        let f = write_temp("x,time,status\n1.0,5,1\n2.0,3,0\n3.0,9,-1\n4.0,,\n");
        let data = load_dataset(f.path()).unwrap();
        assert_eq!(data.len(), 4);
        assert_eq!(data.count_status(SupervisionStatus::Observed), 1);
        assert_eq!(data.count_status(SupervisionStatus::Censored), 1);
        assert_eq!(data.count_status(SupervisionStatus::Unlabeled), 2);
        assert_eq!(data.records[2].time, 0.0);
        assert_eq!(data.records[3].time, 0.0);
        assert_eq!(data.feature_names, vec!["x"]);
    }

    #[test]
    fn header_only_file_is_an_empty_dataset_error() {
        let f = write_temp("x,time,status\n");
        let err = load_dataset(f.path()).unwrap_err();
        assert!(err.to_string().contains("empty dataset"), "{err}");
    }

    #[test]
    fn loader_reports_row_numbers() {
        let f = write_temp("x,time,status\n1.0,5,1\nbad,3,0\n");
        let err = load_dataset(f.path()).unwrap_err();
        assert!(err.to_string().contains("row 3"), "{err}");

        let f = write_temp("x,time,status\n1.0,-5,1\n");
        let err = load_dataset(f.path()).unwrap_err();
        assert!(err.to_string().contains("negative time"), "{err}");

        let f = write_temp("x,time,status\n1.0,5,2\n");
        let err = load_dataset(f.path()).unwrap_err();
        assert!(err.to_string().contains("status"), "{err}");

        let f = write_temp("x,t,status\n1.0,5,1\n");
        let err = load_dataset(f.path()).unwrap_err();
        assert!(err.to_string().contains("`time`"), "{err}");
    }

    fn toy(features: Vec<Vec<f64>>) -> Dataset {
        let records = features
            .into_iter()
            .enumerate()
            .map(|(i, f)| SurvivalRecord::observed(f, i as f64 + 1.0))
            .collect();
        Dataset::new(records, vec!["a".into(), "b".into(), "c".into()]).unwrap()
    }

    #[test]
    fn reduce_features_keeps_top_variance_in_column_order() {
        // variances: a = 0 (constant), b large, c small
        let data = toy(vec![
            vec![1.0, 0.0, 5.0],
            vec![1.0, 10.0, 5.1],
            vec![1.0, -10.0, 4.9],
        ]);
        let reduced = reduce_features(&data, 2).unwrap();
        assert_eq!(reduced.feature_names, vec!["b", "c"]);
        assert_eq!(reduced.records[1].features, vec![10.0, 5.1]);

        let identity = reduce_features(&data, 3).unwrap();
        assert_eq!(identity.feature_names, data.feature_names);

        assert!(reduce_features(&data, 4).is_err());
    }

    #[test]
    fn config_file_round_trips_through_echo() {
        let f = write_temp(
            "# comment\ndatasets = a.csv, b.csv\nmethods = RSF, ST-RSF+CCT\n\
             fractions = 0.25,0.45\nfolds = 3\nrepeats = 2\ntrees = 10\nseed = 7\n",
        );
        let config = RunConfig::from_file(f.path()).unwrap();
        assert_eq!(config.methods, vec![Method::Rsf, Method::StRsfCct]);
        assert_eq!(config.n_folds, 3);
        assert_eq!(config.seed, 7);

        let echoed = write_temp(&config.echo());
        assert_eq!(RunConfig::from_file(echoed.path()).unwrap(), config);

        let bad = write_temp("bogus_key = 1\n");
        assert!(RunConfig::from_file(bad.path()).is_err());
    }

    #[test]
    fn sig6_prints_six_significant_digits() {
        assert_eq!(sig6(0.7123456789), "0.712346");
        assert_eq!(sig6(68.712345), "68.7123");
        assert_eq!(sig6(0.25), "0.250000");
        assert_eq!(sig6(0.0), "0");
        assert_eq!(sig6(123456.789), "123457");
    }

    #[test]
    fn merged_auc_tables_report_missing_cells() {
        let a = write_temp("dataset,method,curve_auc,std\nd1,RSF,64.7,1\nd2,RSF,83.1,1\n");
        let b = write_temp("dataset,method,curve_auc,std\nd1,Lasso-Cox,60.0,1\n");
        let paths = vec![a.path().to_path_buf(), b.path().to_path_buf()];
        let err = read_auc_tables(&paths).unwrap_err();
        assert!(err.to_string().contains("(d2, Lasso-Cox)"), "{err}");

        let c = write_temp("dataset,method,curve_auc,std\nd2,Lasso-Cox,61.0,1\n");
        let paths = vec![a.path().to_path_buf(), b.path().to_path_buf(), c.path().to_path_buf()];
        let table = read_auc_tables(&paths).unwrap();
        assert_eq!(table.datasets, vec!["d1", "d2"]);
        assert_eq!(table.methods, vec!["RSF", "Lasso-Cox"]);
        assert_eq!(table.scores, vec![vec![64.7, 60.0], vec![83.1, 61.0]]);
    }
}
