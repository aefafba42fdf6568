use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use cowhealth::herd::{DiseaseLabel, FEATURE_NAMES};
use cowhealth::telemetry::{extract_features, ingest, run_monitor, write_alert_log, IngestStats, WindowSpec};

use super::{csv_bytes, finish, num};
use crate::args::IngestArgs;
use crate::error::{check_all, CliError, CliResult};
use crate::model_file::ModelFile;
use crate::output::{json_bytes, read_bytes, sha256_hex, Meta, Outputs, SCHEMA_VERSION};

#[derive(Serialize)]
struct IngestConfig {
    telemetry_sha256: String,
    window: WindowSpec,
    model_sha256: Option<String>,
    state_sha256: Option<String>,
}

/// Last known status per cow, carried between runs.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    schema_version: u32,
    config_sha256: String,
    statuses: BTreeMap<String, DiseaseLabel>,
}

#[derive(Serialize)]
struct Summary<'a> {
    schema_version: u32,
    config_sha256: String,
    stats: IngestStats,
    windows: usize,
    complete_windows: usize,
    incomplete: Vec<IncompleteWindow>,
    alerts: Option<usize>,
    malformed_examples: &'a [(usize, String)],
}

#[derive(Serialize)]
struct IncompleteWindow {
    cow_id: String,
    day: String,
    reason: String,
}

pub fn run(a: IngestArgs) -> CliResult<Vec<String>> {
    let window = WindowSpec { utc_offset_min: a.utc_offset_min };
    if !(-720..=840).contains(&a.utc_offset_min) {
        check_all(vec![format!("utc_offset_min must lie in [-720, 840], got {}", a.utc_offset_min)])?;
    }
    let bytes = read_bytes(&a.telemetry, "telemetry")?;
    let text = String::from_utf8_lossy(&bytes);
    let result = ingest(text.lines(), window);

    let model = match &a.model {
        None => None,
        Some(path) => {
            let b = read_bytes(path, "model file")?;
            Some((ModelFile::from_bytes(&b)?, sha256_hex(&b)))
        }
    };
    let (mut statuses, state_sha256) = match &a.state_in {
        None => (BTreeMap::new(), None),
        Some(path) => {
            let b = read_bytes(path, "status state")?;
            let state: StateFile =
                serde_json::from_slice(&b).map_err(|e| CliError::data("status state", format!("{}: {e}", path.display())))?;
            if state.schema_version != SCHEMA_VERSION {
                return Err(CliError::data("status state", format!("unsupported schema_version {}", state.schema_version)));
            }
            (state.statuses, Some(sha256_hex(&b)))
        }
    };

    let config = IngestConfig {
        telemetry_sha256: sha256_hex(&bytes),
        window,
        model_sha256: model.as_ref().map(|m| m.1.clone()),
        state_sha256,
    };
    let meta = Meta::new("ingest", &config);
    let mut outputs = Outputs::default();

    let mut header = vec!["cow_id".to_string(), "day".to_string()];
    header.extend(FEATURE_NAMES.iter().map(|s| s.to_string()));
    let mut rows = Vec::new();
    let mut incomplete = Vec::new();
    for ((cow, day), w) in &result.windows {
        match extract_features(w) {
            Ok(f) => {
                let mut r = vec![cow.clone(), day.to_string()];
                r.extend(f.0.iter().map(|&v| num(v)));
                rows.push(r);
            }
            Err(e) => incomplete.push(IncompleteWindow { cow_id: cow.clone(), day: day.to_string(), reason: e.to_string() }),
        }
    }
    if let Some(path) = &a.features_out {
        outputs.add_with_meta(path, csv_bytes(&header, &rows)?, &meta);
    }

    let mut alerts = None;
    if let Some((file, _)) = &model {
        let report = run_monitor(&result.windows, file.model.classifier(), &file.config_sha256, &mut statuses, a.utc_offset_min)
            .map_err(|e| CliError::data("monitor", e))?;
        alerts = Some(report.alerts.len());
        if let Some(path) = &a.alerts_out {
            let mut log = Vec::new();
            write_alert_log(&report.alerts, &mut log).map_err(|e| CliError::data("output", e))?;
            outputs.add_with_meta(path, log, &meta);
        }
        if let Some(path) = &a.state_out {
            let state = StateFile { schema_version: SCHEMA_VERSION, config_sha256: meta.config_sha256.clone(), statuses };
            outputs.add(path, json_bytes(&state));
        }
    }

    let s = result.stats;
    let mut lines = vec![format!(
        "{} lines: {} accepted, {} duplicates dropped, {} out of order, {} malformed; {} windows, {} complete",
        s.lines,
        s.accepted,
        s.duplicates_dropped,
        s.out_of_order_accepted,
        s.malformed_lines,
        result.windows.len(),
        rows.len()
    )];
    if let Some(n) = alerts {
        lines.push(format!("{n} status changes"));
    }
    if let Some(path) = &a.summary_out {
        let summary = Summary {
            schema_version: SCHEMA_VERSION,
            config_sha256: meta.config_sha256.clone(),
            stats: s,
            windows: result.windows.len(),
            complete_windows: rows.len(),
            incomplete,
            alerts,
            malformed_examples: &result.malformed_examples,
        };
        outputs.add(path, json_bytes(&summary));
    }
    finish(lines, outputs)
}
