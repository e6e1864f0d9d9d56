//! `ssurv`: train and evaluate survival forests under partial supervision.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::{error, info};

use ssurv_cli::{
    load_dataset, partition_by_status, read_auc_tables, reduce_features, sig6, write_dataset,
    write_experiment_outputs, write_ranking, LabeledResult, RunConfig,
};
use ssurv_core::{friedman_nemenyi, run_experiment, rsf_plus_ud, st_rsf, st_rsf_cct, Forest, Method};

/// Survival forests with observed, censored and unlabeled records.
#[derive(Parser)]
#[command(name = "ssurv", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the repeated cross-validation protocol over a labeled-fraction
    /// grid and write plot-ready tables.
    Experiment(ExperimentArgs),
    /// Rank methods across datasets from one or more auc.csv tables with
    /// the Friedman-Nemenyi test.
    Rank(RankArgs),
    /// Keep the top-k features by variance and write the reduced dataset.
    ReduceFeatures(ReduceArgs),
    /// Fit one model on a full dataset and save it as JSON.
    Fit(FitArgs),
    /// Predict expected future lifetimes with a saved model.
    Predict(PredictArgs),
}

#[derive(Args)]
struct ForestFlags {
    /// Number of trees in the ensemble.
    #[arg(long)]
    trees: Option<usize>,
    /// Fraction of features tried per split.
    #[arg(long)]
    mtry: Option<f64>,
    /// Minimum observed events required to keep splitting a node.
    #[arg(long)]
    min_leaf_events: Option<usize>,
    /// Optional depth cap.
    #[arg(long)]
    max_depth: Option<usize>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Optional key = value configuration file; flags override its keys.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Dataset CSV paths (repeatable).
    #[arg(long = "data")]
    datasets: Vec<PathBuf>,
    /// Methods to evaluate (repeatable; default: all five).
    #[arg(long = "method")]
    methods: Vec<Method>,
    /// Comma-separated labeled fractions.
    #[arg(long, value_delimiter = ',')]
    fractions: Vec<f64>,
    #[arg(long)]
    folds: Option<usize>,
    #[arg(long)]
    repeats: Option<usize>,
    #[command(flatten)]
    forest: ForestFlags,
    /// Keep only the top-k features by variance before evaluating.
    #[arg(long)]
    reduce_features: Option<usize>,
    /// Output directory for the result tables.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Random seed; echoed into run_config.txt for provenance.
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Args)]
struct RankArgs {
    /// auc.csv paths to merge; may include externally computed baselines.
    #[arg(long = "auc", required = true)]
    auc_paths: Vec<PathBuf>,
    /// Significance level (0.05 or 0.10).
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct ReduceArgs {
    #[arg(long)]
    data: PathBuf,
    /// Number of features to keep.
    #[arg(long)]
    k: usize,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct FitArgs {
    #[arg(long)]
    data: PathBuf,
    /// Training strategy: RSF, RSF+UD, ST-RSF or ST-RSF+CCT.
    #[arg(long)]
    method: Method,
    #[command(flatten)]
    forest: ForestFlags,
    /// Output model path (JSON).
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Args)]
struct PredictArgs {
    /// Saved model (JSON).
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    data: PathBuf,
    /// Prediction time origin.
    #[arg(long, default_value_t = 0.0)]
    t0: f64,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
}

fn init_threads() -> Result<(), String> {
    match std::env::var("SSURV_THREADS") {
        Ok(v) => {
            let n: usize = v
                .parse()
                .map_err(|_| format!("SSURV_THREADS must be a positive integer, found {v:?}"))?;
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| e.to_string())
        }
        Err(_) => Ok(()),
    }
}

fn apply_forest_flags(config: &mut RunConfig, flags: &ForestFlags) {
    if let Some(t) = flags.trees {
        config.n_trees = t;
    }
    if let Some(m) = flags.mtry {
        config.mtry_fraction = m;
    }
    if let Some(e) = flags.min_leaf_events {
        config.min_leaf_events = e;
    }
    if let Some(d) = flags.max_depth {
        config.max_depth = Some(d);
    }
}

fn resolve_config(args: &ExperimentArgs) -> Result<RunConfig, ssurv_cli::Error> {
    let mut config = match &args.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    if !args.datasets.is_empty() {
        config.datasets = args.datasets.clone();
    }
    if !args.methods.is_empty() {
        config.methods = args.methods.clone();
    }
    if !args.fractions.is_empty() {
        config.fractions = args.fractions.clone();
    }
    if let Some(f) = args.folds {
        config.n_folds = f;
    }
    if let Some(r) = args.repeats {
        config.n_repeats = r;
    }
    apply_forest_flags(&mut config, &args.forest);
    if let Some(k) = args.reduce_features {
        config.reduce_to = Some(k);
    }
    config.output_dir = args.out.clone();
    config.seed = args.seed;
    if config.datasets.is_empty() {
        return Err(ssurv_cli::Error::Config("no datasets given (use --data or a config file)".into()));
    }
    Ok(config)
}

fn dataset_name(path: &std::path::Path) -> String {
    path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

fn cmd_experiment(args: ExperimentArgs) -> Result<(), String> {
    let config = resolve_config(&args).map_err(|e| e.to_string())?;
    let mut results = Vec::new();
    let mut failures = Vec::new();

    for path in &config.datasets {
        let name = dataset_name(path);
        let data = match load_dataset(path).and_then(|d| match config.reduce_to {
            Some(k) => reduce_features(&d, k),
            None => Ok(d),
        }) {
            Ok(d) => d,
            Err(e) => {
                failures.push(format!("{name}: {e}"));
                continue;
            }
        };
        for &method in &config.methods {
            info!("running {method} on {name}");
            match run_experiment(&data, &config.plan(method)) {
                Ok(result) => results.push(LabeledResult { dataset: name.clone(), method, result }),
                Err(e) => failures.push(format!("{name} / {method}: {e}")),
            }
        }
    }

    write_experiment_outputs(&config.output_dir, &config, &results).map_err(|e| e.to_string())?;
    if failures.is_empty() {
        return Ok(());
    }
    // keep the partial tables and record what failed next to them
    let mut log = String::new();
    for f in &failures {
        error!("{f}");
        let _ = writeln!(log, "{f}");
    }
    let log_path = config.output_dir.join("errors.log");
    fs::write(&log_path, log).map_err(|e| format!("{}: {e}", log_path.display()))?;
    Err(format!("{} run(s) failed, see {}", failures.len(), log_path.display()))
}

fn cmd_rank(args: RankArgs) -> Result<(), String> {
    let table = read_auc_tables(&args.auc_paths).map_err(|e| e.to_string())?;
    let ranking = friedman_nemenyi(&table.scores, args.alpha).map_err(|e| e.to_string())?;
    write_ranking(&args.out, &table, &ranking, args.alpha).map_err(|e| e.to_string())?;
    info!(
        "ranked {} methods over {} datasets, CD = {}",
        table.methods.len(),
        table.datasets.len(),
        sig6(ranking.critical_difference)
    );
    Ok(())
}

fn cmd_reduce(args: ReduceArgs) -> Result<(), String> {
    let data = load_dataset(&args.data).map_err(|e| e.to_string())?;
    let reduced = reduce_features(&data, args.k).map_err(|e| e.to_string())?;
    write_dataset(&args.out, &reduced).map_err(|e| e.to_string())
}

fn cmd_fit(args: FitArgs) -> Result<(), String> {
    let data = load_dataset(&args.data).map_err(|e| e.to_string())?;
    let mut config = RunConfig { seed: args.seed, ..RunConfig::default() };
    apply_forest_flags(&mut config, &args.forest);
    let forest_config = config.forest_config();

    let (observed, censored, unlabeled) = partition_by_status(&data);
    let mut labeled = observed.empty_like();
    labeled.records.extend(observed.records.iter().cloned());
    labeled.records.extend(censored.records.iter().cloned());

    let forest = match args.method {
        Method::Rsf => {
            if !unlabeled.is_empty() {
                return Err("RSF requires a fully labeled dataset".into());
            }
            Forest::fit(&labeled, &forest_config).map_err(|e| e.to_string())?
        }
        Method::RsfUd => rsf_plus_ud(&labeled, &unlabeled, &forest_config).map_err(|e| e.to_string())?,
        Method::StRsf => {
            st_rsf(&labeled, &unlabeled, &forest_config).map_err(|e| e.to_string())?.0
        }
        Method::StRsfCct => st_rsf_cct(&observed, &censored, &unlabeled, &forest_config)
            .map_err(|e| e.to_string())?
            .0,
        Method::MaxReference => {
            return Err("MAX-REFERENCE is an evaluation baseline; fit RSF instead".into())
        }
    };
    let json = forest.to_json().map_err(|e| e.to_string())?;
    fs::write(&args.out, json).map_err(|e| format!("{}: {e}", args.out.display()))?;
    info!("saved {} model to {}", args.method, args.out.display());
    Ok(())
}

fn cmd_predict(args: PredictArgs) -> Result<(), String> {
    let json = fs::read_to_string(&args.model).map_err(|e| format!("{}: {e}", args.model.display()))?;
    let forest = Forest::from_json(&json).map_err(|e| e.to_string())?;
    let data = load_dataset(&args.data).map_err(|e| e.to_string())?;

    let mut out = String::from("row,lifetime,sigma\n");
    for (i, r) in data.records.iter().enumerate() {
        let pred = forest
            .predict_with_variance(&r.features, args.t0)
            .map_err(|e| format!("row {}: {e}", i + 2))?;
        let _ = writeln!(out, "{},{},{}", i, sig6(pred.mean), sig6(pred.sigma));
    }
    fs::write(&args.out, out).map_err(|e| format!("{}: {e}", args.out.display()))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let outcome = init_threads().and_then(|()| match cli.command {
        Command::Experiment(args) => cmd_experiment(args),
        Command::Rank(args) => cmd_rank(args),
        Command::ReduceFeatures(args) => cmd_reduce(args),
        Command::Fit(args) => cmd_fit(args),
        Command::Predict(args) => cmd_predict(args),
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            error!("{message}");
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}
