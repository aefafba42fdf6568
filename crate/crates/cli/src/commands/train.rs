use serde::Serialize;

use cowhealth::baselines::{train_baseline, BaselineSpec};
use cowhealth::ovr::train_ovr_dataset;
use cowhealth::svm::SolverConfig;
use cowhealth::Hyperparams;

use super::tune::load_tune_file;
use super::{baseline_spec, baseline_violations, finish, load_dataset, solver_config, solver_violations, Split};
use crate::args::{ModelKind, TrainArgs};
use crate::error::{check_all, CliError, CliResult};
use crate::model_file::{ModelFile, Provenance, StoredModel};
use crate::output::{config_hash, Outputs};

#[derive(Serialize)]
struct TrainConfig {
    model: ModelKind,
    seed: u64,
    data_sha256: String,
    split: Split,
    hyperparams: Option<Hyperparams>,
    tuner_sha256: Option<String>,
    solver: Option<SolverConfig>,
    baseline: Option<BaselineSpec>,
}

pub fn run(a: TrainArgs) -> CliResult<Vec<String>> {
    let split = Split::resolve(&a.split, 0.7, a.seed);
    let solver = solver_config(&a.solver);
    let baseline = baseline_spec(a.model, &a.baseline);
    let mut violations = split.violations();

    let (hyperparams, tuner_sha256) = match (a.model, &a.params, a.c, a.gamma) {
        (ModelKind::Hposvm, Some(path), _, _) => {
            let tune = load_tune_file(path)?;
            (Some(Hyperparams::rbf(tune.file.c, tune.file.gamma)), Some(tune.sha256))
        }
        (ModelKind::Hposvm, None, Some(c), Some(gamma)) => (Some(Hyperparams::rbf(c, gamma)), None),
        (ModelKind::Hposvm, ..) => return Err(CliError::usage("hposvm needs --params or both --c and --gamma")),
        (_, None, None, None) => (None, None),
        _ => return Err(CliError::usage("--params, --c and --gamma apply only to --model hposvm")),
    };
    if let Some(hp) = &hyperparams {
        violations.extend(hp.check().err().map(|e| e.to_string()));
        violations.extend(solver_violations(&solver));
    }
    if let Some(spec) = &baseline {
        violations.extend(baseline_violations(spec));
    }
    check_all(violations)?;

    let loaded = load_dataset(&a.data)?;
    let (train, _) = split.apply(&loaded.data)?;
    let config = TrainConfig {
        model: a.model,
        seed: a.seed,
        data_sha256: loaded.sha256.clone(),
        split,
        hyperparams,
        tuner_sha256: tuner_sha256.clone(),
        solver: hyperparams.map(|_| solver),
        baseline,
    };

    let mut lines = Vec::new();
    let stored = match (&hyperparams, &baseline) {
        (Some(hp), _) => {
            let model = train_ovr_dataset(&train, hp, &solver, a.seed).map_err(|e| CliError::data("svm training", e))?;
            let unconverged = model.converged.iter().filter(|&&c| !c).count();
            if unconverged > 0 {
                lines.push(format!("warning: {unconverged} of 13 binary solves stopped at the iteration cap"));
            }
            StoredModel::Hposvm { model }
        }
        (None, Some(spec)) => StoredModel::Baseline {
            model: train_baseline(spec, &train, a.seed).map_err(|e| CliError::data("baseline training", e))?,
        },
        (None, None) => unreachable!("hposvm always resolves hyperparameters"),
    };
    lines.push(format!("trained {} on {} rows", stored.kind(), train.len()));

    let provenance = Provenance {
        seed: a.seed,
        data_sha256: loaded.sha256,
        train_fraction: split.train_fraction,
        split_seed: split.seed,
        tuner_sha256,
    };
    let file = ModelFile::new(stored, provenance, config_hash(&config));
    let mut outputs = Outputs::default();
    outputs.add(&a.out, file.to_bytes());
    finish(lines, outputs)
}
