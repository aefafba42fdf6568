//! Multi-day herd telemetry: each cow is healthy except during at most one disease episode.

use chrono::{Days, NaiveDate};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::generate::SimConfig;
use super::streams::generate_sensor_streams;
use crate::herd::{DiseaseLabel, FeatureVector, NUM_CLASSES};
use crate::rng;
use crate::telemetry::SensorSample;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HerdSpec {
    pub cows: usize,
    pub days: u64,
    pub start: NaiveDate,
    /// Probability that a cow has a disease episode within the period.
    pub episode_rate: f64,
    pub utc_offset_min: i32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CowDay {
    pub cow_id: String,
    pub day: NaiveDate,
    pub label: DiseaseLabel,
    pub target: FeatureVector,
}

pub fn herd_cow_id(i: usize) -> String {
    format!("cow-{i:04}")
}

/// Label of every cow on every day: an episode lasts 2 to 4 days from a uniform onset.
pub fn herd_schedule(seed: u64, spec: &HerdSpec) -> Vec<Vec<DiseaseLabel>> {
    (0..spec.cows)
        .map(|i| {
            let mut r = rng::stream(seed, &[0xE915, i as u64]);
            let mut labels = vec![DiseaseLabel::Healthy; spec.days as usize];
            if spec.days > 0 && r.random_bool(spec.episode_rate) {
                let disease = DiseaseLabel::from_index(r.random_range(1..NUM_CLASSES)).expect("class index");
                let onset = r.random_range(0..spec.days as usize);
                let length = r.random_range(2..=4usize);
                for l in labels.iter_mut().skip(onset).take(length) {
                    *l = disease;
                }
            }
            labels
        })
        .collect()
}

/// Streams for the whole herd, day by day and cow by cow within a day, plus the per cow-day truth.
pub fn herd_streams(cfg: &SimConfig, spec: &HerdSpec) -> (Vec<SensorSample>, Vec<CowDay>) {
    let schedule = herd_schedule(cfg.seed, spec);
    let mut samples = Vec::new();
    let mut truth = Vec::new();
    for d in 0..spec.days {
        let day = spec.start + Days::new(d);
        for (i, labels) in schedule.iter().enumerate() {
            let cow_id = herd_cow_id(i);
            let label = labels[d as usize];
            let (s, target) = generate_sensor_streams(cfg, &cow_id, day, label, spec.utc_offset_min);
            samples.extend(s);
            truth.push(CowDay { cow_id, day, label, target });
        }
    }
    (samples, truth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::herd::REFERENCE_DAY;

    fn spec(cows: usize, days: u64) -> HerdSpec {
        HerdSpec { cows, days, start: REFERENCE_DAY, episode_rate: 0.5, utc_offset_min: 60 }
    }

    #[test]
    fn episodes_are_single_contiguous_runs() {
        for labels in herd_schedule(3, &spec(200, 10)) {
            let sick: Vec<usize> = (0..labels.len()).filter(|&d| labels[d] != DiseaseLabel::Healthy).collect();
            if let (Some(&first), Some(&last)) = (sick.first(), sick.last()) {
                assert_eq!(last - first + 1, sick.len());
                assert!(sick.len() <= 4);
                assert!(sick.iter().all(|&d| labels[d] == labels[first]));
            }
        }
    }

    #[test]
    fn streams_cover_every_cow_day() {
        let (samples, truth) = herd_streams(&SimConfig::default(), &spec(2, 2));
        assert_eq!(truth.len(), 4);
        assert!(samples.len() > 4 * 2000);
        assert_eq!((truth[1].cow_id.as_str(), truth[1].day), ("cow-0001", REFERENCE_DAY));
    }
}
