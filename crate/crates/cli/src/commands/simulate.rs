use serde::Serialize;

use cowhealth::herd::FEATURE_NAMES;
use cowhealth::sim::{generate_dataset, herd_streams, inject_faults, FaultSpec, HerdSpec, SignatureTable, SimConfig};

use super::{csv_bytes, finish, num};
use crate::args::SimulateArgs;
use crate::error::{check_all, CliError, CliResult};
use crate::output::{read_bytes, sha256_hex, Meta, Outputs};

#[derive(Serialize)]
struct SimulateConfig {
    seed: u64,
    per_class: usize,
    separability: f64,
    table_sha256: String,
    herd: Option<HerdConfig>,
}

#[derive(Serialize)]
struct HerdConfig {
    herd: HerdSpec,
    faults: FaultSpec,
}

pub fn run(a: SimulateArgs) -> CliResult<Vec<String>> {
    if a.out.is_none() && a.telemetry_out.is_none() {
        return Err(CliError::usage("simulate needs --out, --telemetry-out or both"));
    }
    let table = match &a.table {
        None => SignatureTable::default(),
        Some(path) => {
            let text = String::from_utf8(read_bytes(path, "signature table")?)
                .map_err(|e| CliError::data("signature table", format!("{}: {e}", path.display())))?;
            SignatureTable::parse(&text).map_err(|e| CliError::data("signature table", e))?
        }
    };
    let table_sha256 = sha256_hex(table.to_csv().as_bytes());
    let sim = SimConfig { seed: a.seed, per_class_count: a.per_class, separability: a.separability, table };

    let herd = a.telemetry_out.as_ref().map(|_| HerdConfig {
        herd: HerdSpec {
            cows: a.cows,
            days: a.days,
            start: a.start,
            episode_rate: a.episode_rate,
            utc_offset_min: a.utc_offset_min,
        },
        faults: FaultSpec {
            duplicate_rate: a.duplicate_rate,
            reorder_rate: a.reorder_rate,
            malformed_rate: a.malformed_rate,
            seed: a.seed,
        },
    });

    let mut violations = sim.violations();
    if let Some(h) = &herd {
        violations.extend(h.faults.violations());
        if h.herd.cows == 0 || h.herd.days == 0 {
            violations.push("cows and days must be positive".into());
        }
        if !(0.0..=1.0).contains(&h.herd.episode_rate) {
            violations.push(format!("episode_rate must lie in [0, 1], got {}", h.herd.episode_rate));
        }
        if !(-720..=840).contains(&h.herd.utc_offset_min) {
            violations.push(format!("utc_offset_min must lie in [-720, 840], got {}", h.herd.utc_offset_min));
        }
    }
    check_all(violations)?;

    let config = SimulateConfig { seed: a.seed, per_class: a.per_class, separability: a.separability, table_sha256, herd };
    let meta = Meta::new("simulate", &config);
    let mut outputs = Outputs::default();
    let mut lines = Vec::new();

    if let Some(out) = &a.out {
        let data = generate_dataset(&sim).map_err(|e| CliError::data("simulator", e))?;
        lines.push(format!("{} rows, {} per class", data.len(), a.per_class));
        outputs.add_with_meta(out, data.to_csv_bytes(), &meta);
    }
    if let (Some(path), Some(h)) = (&a.telemetry_out, &config.herd) {
        let (samples, truth) = herd_streams(&sim, &h.herd);
        let faulted = inject_faults(&samples, &h.faults);
        lines.push(format!(
            "{} cow-days, {} samples; injected {} duplicates, {} reorderings, {} malformed lines",
            truth.len(),
            samples.len(),
            faulted.duplicates,
            faulted.reordered,
            faulted.malformed
        ));
        let mut body = faulted.lines.join("\n").into_bytes();
        body.push(b'\n');
        outputs.add_with_meta(path, body, &meta);

        if let Some(truth_path) = &a.truth_out {
            let mut header = vec!["cow_id".to_string(), "day".to_string(), "label".to_string()];
            header.extend(FEATURE_NAMES.iter().map(|s| s.to_string()));
            let rows: Vec<Vec<String>> = truth
                .iter()
                .map(|t| {
                    let mut r = vec![t.cow_id.clone(), t.day.to_string(), t.label.name().to_string()];
                    r.extend(t.target.0.iter().map(|&v| num(v)));
                    r
                })
                .collect();
            outputs.add_with_meta(truth_path, csv_bytes(&header, &rows)?, &meta);
        }
    }
    finish(lines, outputs)
}
