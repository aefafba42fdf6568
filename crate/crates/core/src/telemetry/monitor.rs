use std::collections::BTreeMap;
use std::io::Write;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use super::extract::extract_features;
use super::sample::SCHEMA_VERSION;
use super::window::{day_start_ms, CowDayWindow, WindowKey};
use crate::classifier::{argmax, Classifier, DimensionMismatch};
use crate::herd::DiseaseLabel;

/// A health-status change for one cow.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlertRecord {
    pub schema_version: u32,
    pub cow_id: String,
    pub day: NaiveDate,
    /// End of the window that triggered the change.
    pub ts_ms: i64,
    pub previous_status: DiseaseLabel,
    pub new_status: DiseaseLabel,
    pub model_id: String,
    pub scores: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MonitorReport {
    pub alerts: Vec<AlertRecord>,
    pub predictions: Vec<(String, NaiveDate, DiseaseLabel)>,
    /// Windows without a prediction because a required sensor was missing.
    pub skipped: usize,
}

/// Predicts every complete window in `(day, cow)` order and records status changes.
/// Cows absent from `statuses` start as Healthy.
pub fn run_monitor(
    windows: &BTreeMap<WindowKey, CowDayWindow>,
    model: &dyn Classifier,
    model_id: &str,
    statuses: &mut BTreeMap<String, DiseaseLabel>,
    utc_offset_min: i32,
) -> Result<MonitorReport, DimensionMismatch> {
    let mut keys: Vec<&WindowKey> = windows.keys().collect();
    keys.sort_by(|a, b| (a.1, &a.0).cmp(&(b.1, &b.0)));
    let mut report = MonitorReport::default();
    for key in keys {
        let window = &windows[key];
        let Ok(features) = extract_features(window) else {
            report.skipped += 1;
            continue;
        };
        let scores = model.scores(features.as_slice())?;
        let status = DiseaseLabel::from_index(argmax(&scores)).expect("class index");
        let previous = statuses.insert(key.0.clone(), status).unwrap_or(DiseaseLabel::Healthy);
        report.predictions.push((key.0.clone(), key.1, status));
        if previous != status {
            report.alerts.push(AlertRecord {
                schema_version: SCHEMA_VERSION,
                cow_id: key.0.clone(),
                day: key.1,
                ts_ms: day_start_ms(key.1, utc_offset_min) + 86_400_000 - 1,
                previous_status: previous,
                new_status: status,
                model_id: model_id.to_string(),
                scores: scores.to_vec(),
            });
        }
    }
    Ok(report)
}

pub fn write_alert_log<W: Write>(alerts: &[AlertRecord], mut w: W) -> std::io::Result<()> {
    for a in alerts {
        serde_json::to_writer(&mut w, a)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}
