use std::fmt;

use super::sample::{AudioEvent, Posture, SensorKind, SensorValues};
use super::window::CowDayWindow;
use crate::herd::{idx, FeatureVector};
use crate::sim::{FEVER_THRESHOLD_C, HIGH_PH, LOAD_IMBALANCE_THRESHOLD_PCT, LOAD_INTERVAL_MIN, LOW_PH, TEMP_INTERVAL_MIN};

/// Accelerometer ticks are one minute apart.
const ACCEL_INTERVAL_MIN: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Incomplete {
    pub missing: Vec<SensorKind>,
}

impl fmt::Display for Incomplete {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.missing.iter().map(|k| k.name()).collect();
        write!(f, "incomplete window: missing {}", names.join(", "))
    }
}

impl std::error::Error for Incomplete {}

fn mean(values: impl IntoIterator<Item = f64>) -> f64 {
    let (mut sum, mut n) = (0.0, 0usize);
    for v in values {
        sum += v;
        n += 1;
    }
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

fn pct_diff(a: f64, b: f64) -> f64 {
    let hi = a.max(b);
    if hi > 0.0 {
        (a - b).abs() / hi * 100.0
    } else {
        0.0
    }
}

/// Reduces a closed cow-day window to its 30 daily features.
pub fn extract_features(w: &CowDayWindow) -> Result<FeatureVector, Incomplete> {
    let missing: Vec<SensorKind> =
        SensorKind::ALL.into_iter().filter(|k| k.required() && w.readings(*k).next().is_none()).collect();
    if !missing.is_empty() {
        return Err(Incomplete { missing });
    }
    let mut f = FeatureVector::zeros();

    let accel: Vec<_> = w.readings(SensorKind::Accelerometer).filter_map(|v| match v {
        SensorValues::Accelerometer(r) => Some(*r),
        _ => None,
    }).collect();
    let lying = accel.iter().filter(|r| r.posture == Posture::Lying).count();
    f[idx::LYING_TIME] = lying as f64 * ACCEL_INTERVAL_MIN / 60.0;
    f[idx::STEPS] = accel.iter().map(|r| r.steps as u64).sum::<u64>() as f64;
    f[idx::TRANSITIONS] = accel.windows(2).filter(|p| p[0].posture != p[1].posture).count() as f64;
    f[idx::ACTIVITY] = mean(accel.iter().map(|r| r.activity));

    let temps: Vec<f64> = w.readings(SensorKind::Temperature).filter_map(|v| match v {
        SensorValues::Temperature(r) => Some(r.celsius),
        _ => None,
    }).collect();
    f[idx::TEMP_AVG] = mean(temps.iter().copied());
    f[idx::TEMP_MAX] = temps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    f[idx::TEMP_MIN] = temps.iter().copied().fold(f64::INFINITY, f64::min);
    f[idx::FEVER_HRS] = temps.iter().filter(|&&c| c > FEVER_THRESHOLD_C).count() as f64 * TEMP_INTERVAL_MIN / 60.0;

    let (mut amps, mut durations, mut pitches) = (Vec::new(), Vec::new(), Vec::new());
    for v in w.readings(SensorKind::Audio) {
        match v {
            SensorValues::Audio(AudioEvent::Cough { amplitude_db }) => amps.push(*amplitude_db),
            SensorValues::Audio(AudioEvent::Moo { duration_s, pitch_hz }) => {
                durations.push(*duration_s);
                pitches.push(*pitch_hz);
            }
            _ => {}
        }
    }
    f[idx::COUGH_COUNT] = amps.len() as f64;
    f[idx::MOO_COUNT] = durations.len() as f64;
    f[idx::MOO_DURATION] = mean(durations);
    f[idx::MOO_PITCH] = mean(pitches);
    f[idx::COUGH_AMPLITUDE] = mean(amps);

    let loads: Vec<[f64; 4]> = w.readings(SensorKind::Load).filter_map(|v| match v {
        SensorValues::Load(r) => Some([r.lf_kg, r.rf_kg, r.lh_kg, r.rh_kg]),
        _ => None,
    }).collect();
    let leg_means: Vec<f64> = (0..4).map(|leg| mean(loads.iter().map(|l| l[leg]))).collect();
    let mut spread = 0.0f64;
    for a in 0..4 {
        for b in a + 1..4 {
            spread = spread.max(pct_diff(leg_means[a], leg_means[b]));
        }
    }
    f[idx::LOAD_IMBALANCE_PCT] = spread;
    let imbalanced = loads
        .iter()
        .filter(|l| {
            let hi = l.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let lo = l.iter().copied().fold(f64::INFINITY, f64::min);
            pct_diff(hi, lo) > LOAD_IMBALANCE_THRESHOLD_PCT
        })
        .count();
    f[idx::LOAD_IMBALANCE_MIN] = imbalanced as f64 * LOAD_INTERVAL_MIN;

    let ec: Vec<(u8, f64)> = w.readings(SensorKind::MilkEc).filter_map(|v| match v {
        SensorValues::MilkEc(r) => Some((r.quarter, r.ms_cm)),
        _ => None,
    }).collect();
    f[idx::EC_AVG] = mean(ec.iter().map(|e| e.1));
    f[idx::EC_MAX] = ec.iter().map(|e| e.1).fold(f64::NEG_INFINITY, f64::max);
    let quarter_means: Vec<f64> = (0..4u8)
        .filter(|q| ec.iter().any(|e| e.0 == *q))
        .map(|q| mean(ec.iter().filter(|e| e.0 == q).map(|e| e.1)))
        .collect();
    let q_hi = quarter_means.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let q_lo = quarter_means.iter().copied().fold(f64::INFINITY, f64::min);
    f[idx::EC_ASYMMETRY] = q_hi - q_lo;

    let ph: Vec<f64> = w.readings(SensorKind::MilkPh).filter_map(|v| match v {
        SensorValues::MilkPh(r) => Some(r.ph),
        _ => None,
    }).collect();
    f[idx::PH_AVG] = mean(ph.iter().copied());
    f[idx::LOW_PH_EVENTS] = ph.iter().filter(|&&p| p < LOW_PH).count() as f64;
    f[idx::HIGH_PH_EVENTS] = ph.iter().filter(|&&p| p > HIGH_PH).count() as f64;

    let gas: Vec<_> = w.readings(SensorKind::BreathGas).filter_map(|v| match v {
        SensorValues::BreathGas(r) => Some(*r),
        _ => None,
    }).collect();
    f[idx::NH3] = mean(gas.iter().map(|g| g.nh3_ppm));
    f[idx::CH4] = mean(gas.iter().map(|g| g.ch4_ppm));
    f[idx::H2S] = mean(gas.iter().map(|g| g.h2s_ppm));
    f[idx::VOC] = mean(gas.iter().map(|g| g.voc_index));

    let vitals: Vec<_> = w.readings(SensorKind::HeartRate).filter_map(|v| match v {
        SensorValues::HeartRate(r) => Some(*r),
        _ => None,
    }).collect();
    f[idx::HEART_RATE] = mean(vitals.iter().map(|v| v.bpm));
    f[idx::HRV] = mean(vitals.iter().map(|v| v.hrv_ms));
    f[idx::SPO2] = mean(vitals.iter().map(|v| v.spo2_pct));

    f[idx::SALIVA_PH] = mean(w.readings(SensorKind::SalivaPh).filter_map(|v| match v {
        SensorValues::SalivaPh(r) => Some(r.ph),
        _ => None,
    }));
    f[idx::CORTISOL] = mean(w.readings(SensorKind::Cortisol).filter_map(|v| match v {
        SensorValues::Cortisol(r) => Some(r.ng_ml),
        _ => None,
    }));
    Ok(f)
}
