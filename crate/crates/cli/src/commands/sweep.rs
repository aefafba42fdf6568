use serde::Serialize;

use cowhealth::ga::{GaConfig, GeneBounds};
use cowhealth::herd::{stratified_split, SplitSpec};
use cowhealth::metrics::sweep::{split_seed, sweep, write_sweep_csv, ModelSpec, SweepRow};
use cowhealth::Hyperparams;

use super::tune::{load_tune_file, run_ga, stop_name};
use super::{baseline_spec, baseline_violations, finish, load_dataset, solver_config, solver_violations};
use crate::args::{ModelKind, SweepArgs};
use crate::error::{check_all, CliError, CliResult};
use crate::output::{Meta, Outputs};
use crate::svg::{self, Chart, Series};

/// Percent at which hyperparameters are tuned when none are supplied.
const TUNE_PERCENT: u32 = 70;

#[derive(Serialize)]
struct SweepConfig {
    seed: u64,
    data_sha256: String,
    percents: Vec<u32>,
    models: Vec<ModelSpec>,
    hyperparams_source: HyperparamSource,
}

#[derive(Serialize)]
#[serde(rename_all = "snake_case")]
enum HyperparamSource {
    TuneFile { sha256: String },
    Flags,
    Tuned { percent: u32, ga: GaConfig, bounds: GeneBounds },
    Unused,
}

/// `a-b` for an inclusive range or a comma-separated list, in whole percent.
pub(crate) fn parse_percents(s: &str) -> Result<Vec<u32>, String> {
    let bad = || format!("fractions must be a range like 1-70 or a list like 10,20,70, got {s:?}");
    let values: Vec<u32> = if let Some((lo, hi)) = s.split_once('-') {
        let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
        let hi: u32 = hi.trim().parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        (lo..=hi).collect()
    } else {
        s.split(',').map(|p| p.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?
    };
    if values.is_empty() || values.iter().any(|&p| !(1..=99).contains(&p)) {
        return Err(format!("percentages must lie in 1..=99, got {s:?}"));
    }
    let mut sorted = values.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != values.len() {
        return Err(format!("duplicate percentage in {s:?}"));
    }
    Ok(values)
}

pub fn run(a: SweepArgs) -> CliResult<Vec<String>> {
    let mut violations = Vec::new();
    let percents = parse_percents(&a.fractions).unwrap_or_else(|e| {
        violations.push(e);
        Vec::new()
    });
    if a.models.is_empty() {
        violations.push("at least one model is required".into());
    }
    let mut kinds = a.models.clone();
    kinds.sort_by_key(|k| *k as u8);
    kinds.dedup();
    if kinds.len() != a.models.len() {
        violations.push("models must not repeat".into());
    }
    let solver = solver_config(&a.solver);
    violations.extend(solver_violations(&solver));
    let baselines: Vec<_> = a.models.iter().filter_map(|&k| baseline_spec(k, &a.baseline)).collect();
    for spec in &baselines {
        violations.extend(baseline_violations(spec));
    }
    let needs_svm = a.models.contains(&ModelKind::Hposvm);
    if let (Some(c), Some(gamma)) = (a.c, a.gamma) {
        violations.extend(Hyperparams::rbf(c, gamma).check().err().map(|e| e.to_string()));
    }
    check_all(violations)?;

    let loaded = load_dataset(&a.data)?;
    let mut lines = Vec::new();
    let (hyperparams, source) = if !needs_svm {
        (None, HyperparamSource::Unused)
    } else if let Some(path) = &a.params {
        let tune = load_tune_file(path)?;
        (Some(Hyperparams::rbf(tune.file.c, tune.file.gamma)), HyperparamSource::TuneFile { sha256: tune.sha256 })
    } else if let (Some(c), Some(gamma)) = (a.c, a.gamma) {
        (Some(Hyperparams::rbf(c, gamma)), HyperparamSource::Flags)
    } else {
        let ga = GaConfig { solver, ..GaConfig::desk().with_seed(a.seed) };
        let bounds = GeneBounds::default();
        let spec = SplitSpec::new(TUNE_PERCENT as f64 / 100.0, split_seed(a.seed, TUNE_PERCENT));
        let (train, _) = stratified_split(&loaded.data, &spec).map_err(|e| CliError::data("split", e))?;
        let outcome = run_ga(&train, &bounds, &ga)?;
        lines.push(format!(
            "tuned at {TUNE_PERCENT}%: C={} gamma={} fitness={:.6} ({})",
            outcome.best.c,
            match outcome.best.kernel {
                cowhealth::svm::KernelSpec::Rbf { gamma } => gamma,
                cowhealth::svm::KernelSpec::Linear => f64::NAN,
            },
            outcome.best_fitness,
            stop_name(outcome.stop)
        ));
        (Some(outcome.best), HyperparamSource::Tuned { percent: TUNE_PERCENT, ga, bounds })
    };

    let specs: Vec<ModelSpec> = a
        .models
        .iter()
        .map(|&k| match baseline_spec(k, &a.baseline) {
            Some(b) => ModelSpec::Baseline(b),
            None => ModelSpec::Hposvm { hyperparams: hyperparams.expect("resolved above"), solver },
        })
        .collect();
    let rows = sweep(&loaded.data, &specs, &percents, a.seed);
    let infeasible = rows.iter().filter(|r| r.outcome.is_err()).count();
    lines.push(format!("{} rows over {} fractions, {infeasible} infeasible", rows.len(), percents.len()));

    let config = SweepConfig { seed: a.seed, data_sha256: loaded.sha256, percents, models: specs, hyperparams_source: source };
    let meta = Meta::new("sweep", &config);
    let mut bytes = Vec::new();
    write_sweep_csv(&rows, &mut bytes).map_err(|e| CliError::data("output", e))?;
    let mut outputs = Outputs::default();
    outputs.add_with_meta(&a.out, bytes, &meta);
    if let Some(path) = &a.plot_out {
        let names: Vec<&str> = config.models.iter().map(ModelSpec::name).collect();
        outputs.add(path, accuracy_plot(&rows, &names, &meta.svg_comment()).into_bytes());
    }
    finish(lines, outputs)
}

pub(crate) fn accuracy_plot(rows: &[SweepRow], models: &[&str], comment: &str) -> String {
    let series: Vec<Series> = models
        .iter()
        .map(|&m| Series {
            name: m.to_string(),
            points: rows
                .iter()
                .filter(|r| r.model == m)
                .filter_map(|r| r.outcome.as_ref().ok().map(|o| (r.percent as f64, o.accuracy)))
                .collect(),
        })
        .collect();
    let xs = rows.iter().map(|r| r.percent as f64);
    let (lo, hi) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)));
    let x_range = if lo < hi { (lo, hi) } else { (lo - 1.0, lo + 1.0) };
    let mut chart = Chart::new("Test accuracy by training fraction", "training data (%)", "accuracy", x_range, (0.0, 1.0));
    chart.series = series;
    chart.comment = Some(comment.to_string());
    svg::render(&chart)
}
