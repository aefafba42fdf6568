mod evaluate;
mod ingest;
mod predict;
mod report;
mod simulate;
mod sweep;
mod train;
mod tune;

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use cowhealth::baselines::BaselineSpec;
use cowhealth::herd::{stratified_split, Dataset, SplitSpec};
use cowhealth::svm::SolverConfig;

use crate::args::{BaselineArgs, Command, ModelKind, SolverArgs, SplitArgs};
use crate::error::{CliError, CliResult};
use crate::output::{read_bytes, sha256_hex, Outputs};

/// Executes one subcommand and returns the lines it reports on stdout.
pub fn dispatch(command: Command) -> CliResult<Vec<String>> {
    match command {
        Command::Simulate(a) => simulate::run(a),
        Command::Tune(a) => tune::run(a),
        Command::Train(a) => train::run(a),
        Command::Evaluate(a) => evaluate::run(a),
        Command::Sweep(a) => sweep::run(a),
        Command::Predict(a) => predict::run(a),
        Command::Ingest(a) => ingest::run(a),
        Command::Report(a) => report::run(a),
    }
}

pub(crate) struct LoadedData {
    pub data: Dataset,
    pub sha256: String,
}

pub(crate) fn load_dataset(path: &Path) -> CliResult<LoadedData> {
    let bytes = read_bytes(path, "dataset")?;
    let data = Dataset::read_csv(bytes.as_slice()).map_err(|e| CliError::data("dataset", format!("{}: {e}", path.display())))?;
    if data.is_empty() {
        return Err(CliError::data("dataset", format!("{}: no rows", path.display())));
    }
    Ok(LoadedData { data, sha256: sha256_hex(&bytes) })
}

/// Resolved split; `train_fraction == None` means every row is a training row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub(crate) struct Split {
    pub train_fraction: Option<f64>,
    pub seed: u64,
}

impl Split {
    pub fn resolve(args: &SplitArgs, default_fraction: f64, seed: u64) -> Self {
        let f = args.train_fraction.unwrap_or(default_fraction);
        Self { train_fraction: if f == 1.0 { None } else { Some(f) }, seed: args.split_seed.unwrap_or(seed) }
    }

    pub fn violations(&self) -> Vec<String> {
        match self.train_fraction {
            Some(f) if !(f > 0.0 && f < 1.0) => vec![format!("train_fraction must lie in (0, 1], got {f}")],
            _ => Vec::new(),
        }
    }

    /// `(train, test)`; the test side is empty when training on every row.
    pub fn apply(&self, data: &Dataset) -> CliResult<(Dataset, Dataset)> {
        match self.train_fraction {
            None => Ok((data.clone(), data.subset(&[]))),
            Some(f) => stratified_split(data, &SplitSpec::new(f, self.seed)).map_err(|e| CliError::data("split", e)),
        }
    }
}

pub(crate) fn solver_config(a: &SolverArgs) -> SolverConfig {
    SolverConfig { kkt_tolerance: a.kkt_tolerance, max_passes: a.max_passes, max_iterations: a.max_iterations, ..SolverConfig::default() }
}

pub(crate) fn solver_violations(cfg: &SolverConfig) -> Vec<String> {
    cfg.check().err().into_iter().collect()
}

/// Baseline parameters for `kind`, `None` for the tuned SVM.
pub(crate) fn baseline_spec(kind: ModelKind, a: &BaselineArgs) -> Option<BaselineSpec> {
    Some(match kind {
        ModelKind::Hposvm => return None,
        ModelKind::Ssvm => BaselineSpec::Ssvm,
        ModelKind::Knn => BaselineSpec::Knn { k: a.k },
        ModelKind::Logreg => BaselineSpec::LogReg { learning_rate: a.learning_rate, epochs: a.epochs, l2: a.l2 },
        ModelKind::GaussianNb => BaselineSpec::GaussianNb { var_smoothing: a.var_smoothing },
        ModelKind::DecisionTree => BaselineSpec::DecisionTree { max_depth: a.max_depth, min_samples_leaf: a.min_samples_leaf },
    })
}

pub(crate) fn baseline_violations(spec: &BaselineSpec) -> Vec<String> {
    spec.check().err().map(|e| e.to_string()).into_iter().collect()
}

/// Commits `outputs` and reports one line per written file.
pub(crate) fn finish(mut lines: Vec<String>, outputs: Outputs) -> CliResult<Vec<String>> {
    let written: Vec<PathBuf> = outputs.commit()?;
    lines.extend(written.iter().map(|p| format!("wrote {}", p.display())));
    Ok(lines)
}

/// Shortest representation that parses back to the same value.
pub(crate) fn num(v: f64) -> String {
    format!("{v:?}")
}

pub(crate) fn csv_bytes(header: &[String], rows: &[Vec<String>]) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| CliError::data("output", e);
    w.write_record(header).map_err(fail)?;
    for r in rows {
        w.write_record(r).map_err(fail)?;
    }
    w.into_inner().map_err(|e| CliError::data("output", e.error()))
}
