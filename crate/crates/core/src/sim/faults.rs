//! At-least-once delivery faults applied to a clean sample stream.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::rng;
use crate::telemetry::{to_json_line, SensorKind, SensorSample};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FaultSpec {
    /// Probability that a sample is delivered a second time, later in the stream.
    pub duplicate_rate: f64,
    /// Approximate fraction of samples displaced by swapping neighbours of one sensor stream.
    pub reorder_rate: f64,
    /// Corrupted lines inserted per clean line.
    pub malformed_rate: f64,
    pub seed: u64,
}

impl FaultSpec {
    pub fn none() -> Self {
        Self { duplicate_rate: 0.0, reorder_rate: 0.0, malformed_rate: 0.0, seed: 0 }
    }

    pub fn violations(&self) -> Vec<String> {
        [("duplicate_rate", self.duplicate_rate), ("reorder_rate", self.reorder_rate), ("malformed_rate", self.malformed_rate)]
            .into_iter()
            .filter(|(_, v)| !(0.0..=1.0).contains(v))
            .map(|(name, v)| format!("{name} must lie in [0, 1], got {v}"))
            .collect()
    }
}

/// Faulted line stream plus the number of each fault injected.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FaultedStream {
    pub lines: Vec<String>,
    pub duplicates: usize,
    /// Swapped pairs; each makes exactly one sample arrive behind a later one.
    pub reordered: usize,
    pub malformed: usize,
}

/// Applies faults to `samples`, which must be in delivery order with strictly
/// increasing timestamps per `(cow_id, sensor)` where swaps are wanted.
pub fn inject_faults(samples: &[SensorSample], spec: &FaultSpec) -> FaultedStream {
    let mut r = rng::stream(spec.seed, &[0xFA17]);
    let mut order: Vec<usize> = (0..samples.len()).collect();

    let mut streams: BTreeMap<(&str, SensorKind), Vec<usize>> = BTreeMap::new();
    for (pos, s) in samples.iter().enumerate() {
        streams.entry((s.cow_id.as_str(), s.sensor())).or_default().push(pos);
    }
    let mut reordered = 0;
    for positions in streams.values() {
        let mut k = 0;
        while k + 1 < positions.len() {
            let (a, b) = (positions[k], positions[k + 1]);
            if samples[a].ts_ms < samples[b].ts_ms && r.random_bool(spec.reorder_rate / 2.0) {
                order.swap(a, b);
                reordered += 1;
                k += 2;
            } else {
                k += 1;
            }
        }
    }

    let clean: Vec<String> = order.iter().map(|&i| to_json_line(&samples[i])).collect();
    // Each extra line is attached after the clean line at `slot`.
    let mut extras: Vec<Vec<String>> = vec![Vec::new(); clean.len()];
    let mut duplicates = 0;
    let mut malformed = 0;
    for (pos, line) in clean.iter().enumerate() {
        if r.random_bool(spec.duplicate_rate) {
            let slot = r.random_range(pos..clean.len());
            extras[slot].push(line.clone());
            duplicates += 1;
        }
        if r.random_bool(spec.malformed_rate) {
            let bad = corrupt(line, malformed);
            extras[pos].push(bad);
            malformed += 1;
        }
    }

    let mut lines = Vec::with_capacity(clean.len() + duplicates + malformed);
    for (line, extra) in clean.into_iter().zip(extras) {
        lines.push(line);
        lines.extend(extra);
    }
    FaultedStream { lines, duplicates, reordered, malformed }
}

/// Cycles through corruption kinds the decoder must reject.
fn corrupt(line: &str, k: usize) -> String {
    match k % 5 {
        0 => line[..line.len() / 2].to_string(),
        1 => line.replacen("\"schema_version\":1", "\"schema_version\":99", 1),
        2 => replace_field(line, "sensor", "\"sonar\""),
        3 => remove_field(line, "seq"),
        _ => line.replacen('{', "{\"retry\":true,", 1),
    }
}

fn field_span(line: &str, name: &str) -> (usize, usize) {
    let key = format!("\"{name}\":");
    let start = line.find(&key).expect("field present in encoded sample");
    let rest = &line[start + key.len()..];
    let end = start + key.len() + rest.find(',').expect("field is not last");
    (start, end)
}

fn replace_field(line: &str, name: &str, value: &str) -> String {
    let (start, end) = field_span(line, name);
    format!("{}\"{name}\":{value}{}", &line[..start], &line[end..])
}

fn remove_field(line: &str, name: &str) -> String {
    let (start, end) = field_span(line, name);
    format!("{}{}", &line[..start], &line[end + 1..])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::herd::{DiseaseLabel, REFERENCE_DAY};
    use crate::sim::{generate_sensor_streams, SimConfig};
    use crate::telemetry::parse_line;

    #[test]
    fn every_corruption_is_rejected() {
        let (samples, _) = generate_sensor_streams(&SimConfig::default(), "c", REFERENCE_DAY, DiseaseLabel::Bloat, 0);
        for s in samples.iter().take(40) {
            let line = to_json_line(s);
            for k in 0..5 {
                assert!(parse_line(&corrupt(&line, k)).is_err(), "kind {k}: {}", corrupt(&line, k));
            }
        }
    }

    #[test]
    fn no_faults_is_the_clean_stream() {
        let (samples, _) = generate_sensor_streams(&SimConfig::default(), "c", REFERENCE_DAY, DiseaseLabel::Bloat, 0);
        let out = inject_faults(&samples, &FaultSpec::none());
        assert_eq!(out.lines, samples.iter().map(to_json_line).collect::<Vec<_>>());
        assert_eq!((out.duplicates, out.reordered, out.malformed), (0, 0, 0));
    }

    #[test]
    fn rates_are_respected_roughly() {
        let (samples, _) = generate_sensor_streams(&SimConfig::default(), "c", REFERENCE_DAY, DiseaseLabel::Bloat, 0);
        let spec = FaultSpec { duplicate_rate: 0.05, reorder_rate: 0.1, malformed_rate: 0.05, seed: 9 };
        let out = inject_faults(&samples, &spec);
        let n = samples.len() as f64;
        assert_eq!(out.lines.len(), samples.len() + out.duplicates + out.malformed);
        assert!((out.duplicates as f64 / n - 0.05).abs() < 0.02);
        assert!((out.malformed as f64 / n - 0.05).abs() < 0.02);
        assert!((2.0 * out.reordered as f64 / n - 0.1).abs() < 0.04);
    }
}
