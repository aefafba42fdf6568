use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "cowhealth", version, about = "Dairy cow health classification toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a labeled cow-day dataset and, optionally, raw sensor telemetry.
    Simulate(SimulateArgs),
    /// Tune (C, gamma) with the genetic algorithm on the training split.
    Tune(TuneArgs),
    /// Fit a model on the training split and write a model file.
    Train(TrainArgs),
    /// Score a model on a dataset split: metrics, confusion matrix, ROC curves.
    Evaluate(EvaluateArgs),
    /// Retrain every model over a range of training fractions.
    Sweep(SweepArgs),
    /// Predict the class of every row of a dataset.
    Predict(PredictArgs),
    /// Aggregate telemetry into cow-day features and log status changes.
    Ingest(IngestArgs),
    /// Summarise a sweep as a comparison table and plot.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SplitArgs {
    /// Fraction of each class used for training; 1 trains on every row.
    #[arg(long, allow_negative_numbers = true)]
    pub train_fraction: Option<f64>,
    /// Defaults to --seed.
    #[arg(long)]
    pub split_seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, Args, Serialize)]
pub struct SolverArgs {
    #[arg(long, default_value_t = 1e-3, allow_negative_numbers = true)]
    pub kkt_tolerance: f64,
    #[arg(long, default_value_t = 200)]
    pub max_passes: usize,
    #[arg(long, default_value_t = 10_000_000)]
    pub max_iterations: usize,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub per_class: usize,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub separability: f64,
    /// Signature table; the built-in table when omitted.
    #[arg(long)]
    pub table: Option<PathBuf>,
    /// Dataset CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSONL sensor payloads for a herd over consecutive days.
    #[arg(long)]
    pub telemetry_out: Option<PathBuf>,
    /// Per cow-day labels and target features behind the telemetry.
    #[arg(long, requires = "telemetry_out")]
    pub truth_out: Option<PathBuf>,
    #[arg(long, default_value_t = 10)]
    pub cows: usize,
    #[arg(long, default_value_t = 7)]
    pub days: u64,
    #[arg(long, default_value = "2024-01-01")]
    pub start: chrono::NaiveDate,
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub episode_rate: f64,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub utc_offset_min: i32,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub duplicate_rate: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub reorder_rate: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub malformed_rate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Profile {
    /// Population 20, 15 generations.
    Desk,
    /// Population 200, up to 5000 generations.
    Paper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum FitnessArg {
    WeightedF1,
    Accuracy,
}

#[derive(Debug, Args)]
pub struct TuneArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[command(flatten)]
    pub split: SplitArgs,
    #[arg(long, value_enum, default_value_t = Profile::Desk)]
    pub profile: Profile,
    #[arg(long)]
    pub pop: Option<usize>,
    #[arg(long)]
    pub max_gen: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub crossover: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub mutation: Option<f64>,
    #[arg(long)]
    pub patience: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub target: Option<f64>,
    #[arg(long)]
    pub elitism: Option<usize>,
    #[arg(long)]
    pub cv_folds: Option<usize>,
    #[arg(long, value_enum, default_value_t = FitnessArg::WeightedF1)]
    pub fitness: FitnessArg,
    #[arg(long, allow_negative_numbers = true)]
    pub c_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c_max: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma_max: Option<f64>,
    #[arg(long)]
    pub c_bits: Option<usize>,
    #[arg(long)]
    pub gamma_bits: Option<usize>,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Best hyperparameters and run summary (JSON).
    #[arg(long)]
    pub out: PathBuf,
    /// Per-generation fitness trace.
    #[arg(long)]
    pub trace_out: Option<PathBuf>,
    /// Fitness-over-generations plot.
    #[arg(long)]
    pub plot_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum ModelKind {
    Hposvm,
    Ssvm,
    Knn,
    Logreg,
    GaussianNb,
    DecisionTree,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BaselineArgs {
    #[arg(long, default_value_t = 5)]
    pub k: usize,
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    pub learning_rate: f64,
    #[arg(long, default_value_t = 500)]
    pub epochs: usize,
    #[arg(long, default_value_t = 1e-3, allow_negative_numbers = true)]
    pub l2: f64,
    #[arg(long, default_value_t = 1e-9, allow_negative_numbers = true)]
    pub var_smoothing: f64,
    #[arg(long, default_value_t = 8)]
    pub max_depth: usize,
    #[arg(long, default_value_t = 1)]
    pub min_samples_leaf: usize,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[command(flatten)]
    pub split: SplitArgs,
    #[arg(long, value_enum, default_value_t = ModelKind::Hposvm)]
    pub model: ModelKind,
    /// Output of `tune`; supplies C and gamma.
    #[arg(long, conflicts_with_all = ["c", "gamma"])]
    pub params: Option<PathBuf>,
    #[arg(long, requires = "gamma", allow_negative_numbers = true)]
    pub c: Option<f64>,
    #[arg(long, requires = "c", allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    #[command(flatten)]
    pub baseline: BaselineArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Subset {
    Train,
    Test,
    All,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub data: PathBuf,
    /// Rows to score; the split defaults to the one recorded in the model file.
    #[arg(long, value_enum, default_value_t = Subset::Test)]
    pub on: Subset,
    #[command(flatten)]
    pub split: SplitArgs,
    /// Per-class and weighted metrics.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub confusion_out: Option<PathBuf>,
    /// Directory for roc.csv, one SVG per class and overlay.svg.
    #[arg(long)]
    pub roc_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [ModelKind::Hposvm, ModelKind::Ssvm, ModelKind::Knn, ModelKind::Logreg, ModelKind::GaussianNb, ModelKind::DecisionTree])]
    pub models: Vec<ModelKind>,
    /// Training percentages: a list such as `10,20,70` or a range `1-70`.
    #[arg(long, default_value = "1-70")]
    pub fractions: String,
    /// Fixed (C, gamma) from `tune`; otherwise tuned once at 70% with the desk profile.
    #[arg(long, conflicts_with_all = ["c", "gamma"])]
    pub params: Option<PathBuf>,
    #[arg(long, requires = "gamma", allow_negative_numbers = true)]
    pub c: Option<f64>,
    #[arg(long, requires = "c", allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    #[command(flatten)]
    pub baseline: BaselineArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub out: PathBuf,
    /// Accuracy-versus-fraction plot.
    #[arg(long)]
    pub plot_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// JSONL sensor payloads.
    #[arg(long)]
    pub telemetry: PathBuf,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub utc_offset_min: i32,
    /// Extracted cow-day features (CSV).
    #[arg(long)]
    pub features_out: Option<PathBuf>,
    /// Model used to classify complete windows.
    #[arg(long, requires = "alerts_out")]
    pub model: Option<PathBuf>,
    /// Status-change log (JSONL).
    #[arg(long, requires = "model")]
    pub alerts_out: Option<PathBuf>,
    /// Last known status per cow, from a previous run.
    #[arg(long, requires = "model")]
    pub state_in: Option<PathBuf>,
    #[arg(long, requires = "model")]
    pub state_out: Option<PathBuf>,
    /// Ingestion counters (JSON).
    #[arg(long)]
    pub summary_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Output of `sweep`.
    #[arg(long)]
    pub sweep: PathBuf,
    /// Training percentage compared in the table.
    #[arg(long, default_value_t = 70)]
    pub percent: u32,
    /// Markdown comparison table.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub plot_out: Option<PathBuf>,
}
