//! Batch command-line surface.
//!
//! | command    | reads                        | writes                     |
//! |------------|------------------------------|----------------------------|
//! | `generate` | built-in set id or spec JSON | dataset CSV                |
//! | `cluster`  | dataset CSV                  | result JSON                |
//! | `evaluate` | result JSON + labeled CSV    | metrics JSON               |
//! | `bench`    | optional bench config TOML   | report JSON + text tables  |
//! | `plot`     | result JSON + dataset CSV    | SVG                        |
//!
//! Exit codes: 0 success, 2 usage error, 3 data error, 4 internal invariant violation.

pub mod bench;
pub mod files;
pub mod plot;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::eval::evaluate;
use crate::geometry::remap_labels;
use crate::meanshift::RunConfig;
use crate::neighbors::Strategy;
use crate::synth::{builtin_set, sample_mixture, MixtureSpec};
use bench::{parse_set_list, render_tables, run_bench, BenchConfig, BenchPlan};
use files::{format_dataset, read_dataset, read_json, write_json, write_text, Algorithm, MetricsFile, ResultFile};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
            CliError::Internal(_) => 4,
        }
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Data(format!("{}: {e}", path.display()))
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        match e {
            crate::Error::InvalidParameter { .. } => CliError::Usage(e.to_string()),
            crate::Error::EmptyNeighborhood => CliError::Internal(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "smshift", version, about = "Deterministic and stochastic mean-shift clustering")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a labeled Gaussian-mixture dataset to CSV.
    Generate(GenerateArgs),
    /// Cluster a dataset CSV and write the result as JSON.
    Cluster(ClusterArgs),
    /// Score predicted clusters against ground-truth labels.
    Evaluate(EvaluateArgs),
    /// Sweep built-in sets, algorithms, and seeds.
    Bench(BenchArgs),
    /// Draw a 2-D clustering run, with trajectories, as SVG.
    Plot(PlotArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Built-in set id, 1..=7.
    #[arg(long, conflicts_with = "spec", required_unless_present = "spec")]
    pub set: Option<u32>,
    /// Mixture spec JSON file.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ClusterArgs {
    #[arg(long, value_enum)]
    pub algo: Algorithm,
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Bandwidth.
    #[arg(long, allow_negative_numbers = true)]
    pub h: f64,
    /// Shift-convergence threshold.
    #[arg(long, allow_negative_numbers = true)]
    pub th1: f64,
    /// Mode-merging threshold.
    #[arg(long, allow_negative_numbers = true)]
    pub th2: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = crate::meanshift::DEFAULT_MAX_INNER_ITERS)]
    pub max_inner_iters: usize,
    /// Stochastic shift budget (default 100 × number of points).
    #[arg(long)]
    pub global_iter_budget: Option<usize>,
    /// Consecutive small shifts that end a stochastic run (default: number of points).
    #[arg(long)]
    pub stagnation_window: Option<usize>,
    #[arg(long, value_enum, default_value = "grid")]
    pub index: IndexChoice,
    /// Record per-datum trajectories in the result.
    #[arg(long)]
    pub trajectories: bool,
    /// Disable parallel climbing in the deterministic engine.
    #[arg(long)]
    pub sequential: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum IndexChoice {
    Naive,
    Grid,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Result JSON from `cluster`, or a CSV whose `label` column holds cluster ids.
    #[arg(long)]
    pub pred: PathBuf,
    /// Dataset CSV with a `label` column of ground-truth classes.
    #[arg(long)]
    pub truth: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Set ids, e.g. `1-7` or `1,3,4`.
    #[arg(long, default_value = "1-7")]
    pub sets: String,
    /// `det`, `stoch`, or `both`.
    #[arg(long, default_value = "both")]
    pub algos: String,
    /// Number of seeds per cell; seeds run from --first-seed upward.
    #[arg(long, default_value_t = 5)]
    pub seeds: u64,
    #[arg(long, default_value_t = 0)]
    pub first_seed: u64,
    /// Hyperparameter TOML (defaults to the shipped configuration).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Report JSON path.
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the aligned-text tables here (always printed to stdout).
    #[arg(long)]
    pub table: Option<PathBuf>,
    /// Run cells one at a time.
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// Result JSON recorded with --trajectories.
    #[arg(long)]
    pub result: PathBuf,
    /// The dataset CSV that was clustered.
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Generate(a) => cmd_generate(&a),
        Command::Cluster(a) => cmd_cluster(&a),
        Command::Evaluate(a) => cmd_evaluate(&a),
        Command::Bench(a) => cmd_bench(&a),
        Command::Plot(a) => cmd_plot(&a),
    }
}

pub fn cmd_generate(args: &GenerateArgs) -> Result<(), CliError> {
    let spec: MixtureSpec = match (args.set, &args.spec) {
        (Some(id), None) => builtin_set(id).map_err(|e| CliError::Usage(e.to_string()))?,
        (None, Some(path)) => read_json(path)?,
        _ => return Err(CliError::Usage("pass exactly one of --set or --spec".into())),
    };
    let data = sample_mixture(&spec, args.seed)?;
    write_text(&args.out, &format_dataset(data.data(), Some(data.labels())))
}

pub fn cmd_cluster(args: &ClusterArgs) -> Result<(), CliError> {
    let input = read_dataset(&args.input)?;
    let mut config = RunConfig::new(args.h, args.th1, args.th2)
        .with_seed(args.seed)
        .with_trajectories(args.trajectories)
        .with_strategy(match args.index {
            IndexChoice::Naive => Strategy::Naive,
            IndexChoice::Grid => Strategy::UniformGrid,
        });
    config.max_inner_iters = args.max_inner_iters;
    config.global_iter_budget = args.global_iter_budget;
    config.stagnation_window = args.stagnation_window;
    config.parallel = !args.sequential;
    config.validate()?;

    let result = args.algo.run(&input.data, &config)?;
    result.check_invariants(input.data.len()).map_err(CliError::Internal)?;
    write_json(&args.out, &ResultFile::new(args.algo, config, &input.data, result))
}

fn read_predictions(path: &Path) -> Result<Vec<usize>, CliError> {
    let is_csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    if is_csv {
        let csv = read_dataset(path)?;
        let raw = csv.labels.ok_or_else(|| CliError::Data(format!("{}: no `label` column", path.display())))?;
        Ok(remap_labels(&raw).0)
    } else {
        let file: ResultFile = read_json(path)?;
        Ok(file.result.assignments)
    }
}

pub fn cmd_evaluate(args: &EvaluateArgs) -> Result<(), CliError> {
    let predicted = read_predictions(&args.pred)?;
    let truth = read_dataset(&args.truth)?.labeled(&args.truth)?;
    let e = evaluate(&predicted, truth.labels())?;
    write_json(&args.out, &MetricsFile::from(e))
}

fn parse_algos(text: &str) -> Result<Vec<Algorithm>, CliError> {
    let mut algos = Vec::new();
    for part in text.split(',').map(str::trim) {
        match part {
            "both" => algos.extend([Algorithm::Deterministic, Algorithm::Stochastic]),
            "det" => algos.push(Algorithm::Deterministic),
            "stoch" => algos.push(Algorithm::Stochastic),
            other => return Err(CliError::Usage(format!("unknown algorithm `{other}`; use det, stoch, or both"))),
        }
    }
    algos.dedup();
    Ok(algos)
}

pub fn cmd_bench(args: &BenchArgs) -> Result<(), CliError> {
    let config = match &args.config {
        Some(path) => BenchConfig::from_toml(&std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?)?,
        None => BenchConfig::shipped(),
    };
    if args.seeds == 0 {
        return Err(CliError::Usage("--seeds must be at least 1".into()));
    }
    let plan = BenchPlan {
        sets: parse_set_list(&args.sets)?,
        algorithms: parse_algos(&args.algos)?,
        seeds: (args.first_seed..args.first_seed + args.seeds).collect(),
        parallel: !args.sequential,
    };
    let report = run_bench(&config, &plan)?;
    let tables = render_tables(&report);
    print!("{tables}");
    if let Some(path) = &args.table {
        write_text(path, &tables)?;
    }
    write_json(&args.out, &report)
}

pub fn cmd_plot(args: &PlotArgs) -> Result<(), CliError> {
    let file: ResultFile = read_json(&args.result)?;
    let data = read_dataset(&args.data)?.data;
    write_text(&args.out, &plot::render_svg(&data, &file.result)?)
}
