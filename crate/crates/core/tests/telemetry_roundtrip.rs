use cowhealth::herd::{idx, DiseaseLabel, FeatureVector, NUM_FEATURES, REFERENCE_DAY};
use cowhealth::sim::{generate_sensor_streams, inject_faults, FaultSpec, SimConfig};
use cowhealth::telemetry::{extract_features, ingest, SensorSample, WindowSpec};
use proptest::prelude::*;

const COUNTS: [usize; 9] = [
    idx::LYING_TIME,
    idx::STEPS,
    idx::TRANSITIONS,
    idx::FEVER_HRS,
    idx::COUGH_COUNT,
    idx::MOO_COUNT,
    idx::LOAD_IMBALANCE_MIN,
    idx::LOW_PH_EVENTS,
    idx::HIGH_PH_EVENTS,
];

fn assert_matches(got: &FeatureVector, want: &FeatureVector) -> Result<(), TestCaseError> {
    for j in 0..NUM_FEATURES {
        if COUNTS.contains(&j) {
            prop_assert_eq!(got[j], want[j], "feature {}", j);
        } else {
            prop_assert!((got[j] - want[j]).abs() <= 1e-9, "feature {}: {} vs {}", j, got[j], want[j]);
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn faulted_streams_reduce_to_targets(
        seed in 0u64..1_000,
        cows in 1usize..=3,
        days in 1u64..=2,
        offset in -720i32..=840,
        labels in prop::collection::vec(0usize..13, 6),
        fault_seed in any::<u64>(),
    ) {
        let cfg = SimConfig::new(seed, 100, 1.0);
        let mut samples: Vec<SensorSample> = Vec::new();
        let mut targets = Vec::new();
        for d in 0..days {
            let day = REFERENCE_DAY + chrono::Days::new(d);
            for c in 0..cows {
                let label = DiseaseLabel::from_index(labels[(d as usize) * 3 + c]).unwrap();
                let cow = format!("cow-{c}");
                let (s, t) = generate_sensor_streams(&cfg, &cow, day, label, offset);
                samples.extend(s);
                targets.push(((cow, day), t));
            }
        }
        let spec = FaultSpec { duplicate_rate: 0.01, reorder_rate: 0.05, malformed_rate: 0.02, seed: fault_seed };
        let faulted = inject_faults(&samples, &spec);
        let result = ingest(&faulted.lines, WindowSpec { utc_offset_min: offset });
        prop_assert_eq!(result.stats.accepted, samples.len());
        prop_assert_eq!(result.stats.duplicates_dropped, faulted.duplicates);
        prop_assert_eq!(result.stats.out_of_order_accepted, faulted.reordered);
        prop_assert_eq!(result.stats.malformed_lines, faulted.malformed);
        prop_assert_eq!(result.windows.len(), targets.len());
        for (key, target) in &targets {
            let features = extract_features(&result.windows[key]).unwrap();
            assert_matches(&features, target)?;
        }
    }
}
