use std::path::Path;

use serde::{Deserialize, Serialize};

use cowhealth::ga::{optimize, write_trace_csv, FitnessKind, GaConfig, GaOutcome, GeneBounds, StopReason};
use cowhealth::herd::Dataset;
use cowhealth::svm::KernelSpec;

use super::{finish, load_dataset, solver_config, Split};
use crate::args::{FitnessArg, Profile, TuneArgs};
use crate::error::{check_all, CliError, CliResult};
use crate::output::{config_hash, json_bytes, read_bytes, sha256_hex, Meta, Outputs, SCHEMA_VERSION};
use crate::svg::{self, Chart, Series};

#[derive(Serialize)]
struct TuneConfig {
    data_sha256: String,
    split: Split,
    ga: GaConfig,
    bounds: GeneBounds,
}

/// Output of `tune`, read back by `train` and `sweep`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct TuneFile {
    pub schema_version: u32,
    pub config_sha256: String,
    pub data_sha256: String,
    pub c: f64,
    pub gamma: f64,
    pub best_fitness: f64,
    pub chromosome: String,
    pub stop: StopReason,
    pub generations: usize,
    pub evaluations: usize,
    pub bounds: GeneBounds,
    pub ga: GaConfig,
}

pub(crate) struct LoadedTune {
    pub file: TuneFile,
    pub sha256: String,
}

pub(crate) fn load_tune_file(path: &Path) -> CliResult<LoadedTune> {
    let bytes = read_bytes(path, "tune file")?;
    let file: TuneFile =
        serde_json::from_slice(&bytes).map_err(|e| CliError::data("tune file", format!("{}: {e}", path.display())))?;
    if file.schema_version != SCHEMA_VERSION {
        return Err(CliError::data("tune file", format!("unsupported schema_version {}", file.schema_version)));
    }
    if !(file.c > 0.0 && file.gamma > 0.0 && file.c.is_finite() && file.gamma.is_finite()) {
        return Err(CliError::data("tune file", format!("non-positive hyperparameters C={} gamma={}", file.c, file.gamma)));
    }
    Ok(LoadedTune { file, sha256: sha256_hex(&bytes) })
}

pub(crate) fn run_ga(train: &Dataset, bounds: &GeneBounds, ga: &GaConfig) -> CliResult<GaOutcome> {
    optimize(train, bounds, ga).map_err(|e| CliError::data("genetic search", e))
}

pub(crate) fn tune_file(outcome: &GaOutcome, bounds: GeneBounds, ga: GaConfig, data_sha256: &str, config_sha256: String) -> TuneFile {
    TuneFile {
        schema_version: SCHEMA_VERSION,
        config_sha256,
        data_sha256: data_sha256.to_string(),
        c: outcome.best.c,
        gamma: match outcome.best.kernel {
            KernelSpec::Rbf { gamma } => gamma,
            KernelSpec::Linear => f64::NAN,
        },
        best_fitness: outcome.best_fitness,
        chromosome: outcome.best_chromosome.to_string(),
        stop: outcome.stop,
        generations: outcome.trace.generations.len(),
        evaluations: outcome.trace.generations.last().map_or(0, |g| g.evaluations),
        bounds,
        ga,
    }
}

pub fn run(a: TuneArgs) -> CliResult<Vec<String>> {
    let base = match a.profile {
        Profile::Desk => GaConfig::desk(),
        Profile::Paper => GaConfig::default(),
    };
    let ga = GaConfig {
        population_size: a.pop.unwrap_or(base.population_size),
        crossover_rate: a.crossover.unwrap_or(base.crossover_rate),
        mutation_rate: a.mutation.unwrap_or(base.mutation_rate),
        max_generations: a.max_gen.unwrap_or(base.max_generations),
        patience: a.patience.unwrap_or(base.patience),
        target_fitness: a.target.unwrap_or(base.target_fitness),
        elitism_count: a.elitism.unwrap_or(base.elitism_count),
        cv_folds: a.cv_folds.unwrap_or(base.cv_folds),
        fitness: match a.fitness {
            FitnessArg::WeightedF1 => FitnessKind::WeightedF1,
            FitnessArg::Accuracy => FitnessKind::Accuracy,
        },
        solver: solver_config(&a.solver),
        seed: a.seed,
    };
    let d = GeneBounds::default();
    let bounds = GeneBounds {
        c_min: a.c_min.unwrap_or(d.c_min),
        c_max: a.c_max.unwrap_or(d.c_max),
        gamma_min: a.gamma_min.unwrap_or(d.gamma_min),
        gamma_max: a.gamma_max.unwrap_or(d.gamma_max),
        p: a.c_bits.unwrap_or(d.p),
        q: a.gamma_bits.unwrap_or(d.q),
    };
    let split = Split::resolve(&a.split, 0.7, a.seed);
    let mut violations = ga.violations();
    violations.extend(bounds.violations());
    violations.extend(split.violations());
    check_all(violations)?;

    let loaded = load_dataset(&a.data)?;
    let (train, _) = split.apply(&loaded.data)?;
    let config = TuneConfig { data_sha256: loaded.sha256.clone(), split, ga, bounds };
    let meta = Meta::new("tune", &config);
    let outcome = run_ga(&train, &bounds, &ga)?;
    let file = tune_file(&outcome, bounds, ga, &loaded.sha256, config_hash(&config));

    let mut outputs = Outputs::default();
    outputs.add(&a.out, json_bytes(&file));
    if let Some(path) = &a.trace_out {
        let mut bytes = Vec::new();
        write_trace_csv(&outcome.trace, &mut bytes).map_err(|e| CliError::data("output", e))?;
        outputs.add_with_meta(path, bytes, &meta);
    }
    if let Some(path) = &a.plot_out {
        outputs.add(path, fitness_plot(&outcome, &meta.svg_comment()).into_bytes());
    }
    let lines = vec![format!(
        "best C={} gamma={} fitness={:.6} after {} generations ({})",
        file.c,
        file.gamma,
        file.best_fitness,
        file.generations,
        stop_name(file.stop)
    )];
    finish(lines, outputs)
}

fn fitness_plot(outcome: &GaOutcome, comment: &str) -> String {
    let gens = &outcome.trace.generations;
    let best = Series { name: "best so far".into(), points: gens.iter().map(|g| (g.generation as f64, g.best_fitness)).collect() };
    let mean = Series { name: "generation mean".into(), points: gens.iter().map(|g| (g.generation as f64, g.mean_fitness)).collect() };
    let series = vec![best, mean];
    let last = gens.last().map_or(1.0, |g| g.generation as f64).max(2.0);
    let mut chart = Chart::new("Fitness by generation", "generation", "fitness", (1.0, last), Chart::fit_y_range(&series));
    chart.series = series;
    chart.comment = Some(comment.to_string());
    svg::render(&chart)
}

pub(crate) fn stop_name(stop: StopReason) -> &'static str {
    match stop {
        StopReason::TargetReached => "target reached",
        StopReason::Patience => "no improvement",
        StopReason::MaxGenerations => "generation limit",
    }
}
