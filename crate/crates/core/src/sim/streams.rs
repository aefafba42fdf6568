//! Raw per-sensor sample streams whose daily aggregation reproduces a target feature vector.

use chrono::NaiveDate;
use rand::seq::SliceRandom;
use rand::Rng;

use super::generate::{sample_target, SimConfig};
use super::realize::*;
use crate::herd::{idx, DiseaseLabel, FeatureVector, FEATURE_RANGES};
use crate::rng;
use crate::telemetry::{
    day_index, day_start_ms, AccelReading, AudioEvent, CortisolReading, GasReading, LoadReading, MilkEcReading, MilkPhReading,
    Posture, SalivaReading, SensorSample, SensorValues, TempReading, VitalsReading, SEQ_PER_DAY,
};

const MINUTE_MS: i64 = 60_000;
const DAY_MS: i64 = 86_400_000;

/// `n` values averaging `v`: symmetric `±d` pairs in random order, capped so readings stay inside `[0, hi]`.
fn jittered<R: Rng + ?Sized>(v: f64, n: usize, hi: f64, spread: f64, rng: &mut R) -> Vec<f64> {
    let room = if hi.is_finite() { v.min(hi - v) } else { v };
    let cap = (spread * room).max(0.0);
    let mut out = Vec::with_capacity(n);
    for _ in 0..n / 2 {
        let d = rng.random::<f64>() * cap;
        out.push(v + d);
        out.push(v - d);
    }
    if n % 2 == 1 {
        out.push(v);
    }
    out.shuffle(rng);
    out
}

fn expand(groups: &[Group], values: &[f64]) -> Vec<f64> {
    groups.iter().zip(values).flat_map(|(g, &v)| std::iter::repeat_n(v, g.count)).collect()
}

struct Emitter<'a> {
    cow_id: &'a str,
    base_seq: u64,
    out: Vec<SensorSample>,
}

impl Emitter<'_> {
    /// Emits samples in time order so `seq` grows with `ts_ms` per sensor.
    fn emit(&mut self, mut samples: Vec<(i64, SensorValues)>) {
        samples.sort_by_key(|s| s.0);
        for (k, (ts_ms, values)) in samples.into_iter().enumerate() {
            self.out.push(SensorSample { cow_id: self.cow_id.to_string(), seq: self.base_seq + k as u64, ts_ms, values });
        }
    }
}

/// Posture ticks with `lying` lying minutes and exactly `transitions` posture changes.
pub fn posture_ticks(lying: usize, transitions: usize) -> Vec<Posture> {
    let standing = ACCEL_TICKS - lying;
    if transitions == 0 {
        let p = if lying == ACCEL_TICKS { Posture::Lying } else { Posture::Standing };
        return vec![p; ACCEL_TICKS];
    }
    assert!(transitions <= lying.min(standing), "transitions not realisable");
    let runs = transitions + 1;
    let (lying_runs, standing_runs) = (runs.div_ceil(2), runs / 2);
    let mut ticks = Vec::with_capacity(ACCEL_TICKS);
    let (mut l, mut s) = (0, 0);
    for r in 0..runs {
        if r % 2 == 0 {
            let len = if l == 0 { lying - (lying_runs - 1) } else { 1 };
            ticks.extend(std::iter::repeat_n(Posture::Lying, len));
            l += 1;
        } else {
            let len = if s == 0 { standing - (standing_runs - 1) } else { 1 };
            ticks.extend(std::iter::repeat_n(Posture::Standing, len));
            s += 1;
        }
    }
    ticks
}

/// Builds one cow-day of samples from a realised target vector; `utc_offset_min` fixes the local day.
pub fn streams_for_target<R: Rng + ?Sized>(
    cow_id: &str,
    day: NaiveDate,
    target: &FeatureVector,
    utc_offset_min: i32,
    rng: &mut R,
) -> Vec<SensorSample> {
    debug_assert_eq!(&realize(target), target, "target must be realisable");
    let start = day_start_ms(day, utc_offset_min);
    let mut em = Emitter { cow_id, base_seq: day_index(day) as u64 * SEQ_PER_DAY, out: Vec::new() };
    let f = target;

    // accelerometer, one tick per minute
    let lying = (f[idx::LYING_TIME] * 60.0).round() as usize;
    let postures = posture_ticks(lying, f[idx::TRANSITIONS] as usize);
    let walkers: Vec<usize> = {
        let standing: Vec<usize> = (0..ACCEL_TICKS).filter(|&t| postures[t] == Posture::Standing).collect();
        if standing.is_empty() { (0..ACCEL_TICKS).collect() } else { standing }
    };
    let total_steps = f[idx::STEPS] as u64;
    let mut steps = vec![0u32; ACCEL_TICKS];
    let (per, extra) = (total_steps / walkers.len() as u64, (total_steps % walkers.len() as u64) as usize);
    for (k, &t) in walkers.iter().enumerate() {
        steps[t] = (per + u64::from(k < extra)) as u32;
    }
    let activity = jittered(f[idx::ACTIVITY], ACCEL_TICKS, FEATURE_RANGES[idx::ACTIVITY].max, 0.2, rng);
    em.emit(
        (0..ACCEL_TICKS)
            .map(|t| {
                let r = AccelReading { posture: postures[t], steps: steps[t], activity: activity[t] };
                (start + t as i64 * MINUTE_MS, SensorValues::Accelerometer(r))
            })
            .collect(),
    );

    // temperature, every five minutes
    let fever_ticks = (f[idx::FEVER_HRS] * 60.0 / TEMP_INTERVAL_MIN).round() as usize;
    let groups = temperature_groups(f[idx::TEMP_MAX], f[idx::TEMP_MIN], fever_ticks);
    let mut temps = expand(&groups, &fill_groups(&groups, f[idx::TEMP_AVG]));
    temps.shuffle(rng);
    em.emit(
        temps
            .iter()
            .enumerate()
            .map(|(t, &c)| (start + t as i64 * 5 * MINUTE_MS, SensorValues::Temperature(TempReading { celsius: c })))
            .collect(),
    );

    // audio events at uniformly random instants
    let coughs = f[idx::COUGH_COUNT] as usize;
    let moos = f[idx::MOO_COUNT] as usize;
    let amps = jittered(f[idx::COUGH_AMPLITUDE], coughs, FEATURE_RANGES[idx::COUGH_AMPLITUDE].max, 0.1, rng);
    let durations = jittered(f[idx::MOO_DURATION], moos, f64::INFINITY, 0.3, rng);
    let pitches = jittered(f[idx::MOO_PITCH], moos, FEATURE_RANGES[idx::MOO_PITCH].max, 0.1, rng);
    let mut events: Vec<(i64, SensorValues)> = Vec::with_capacity(coughs + moos);
    for &amplitude_db in &amps {
        events.push((start + rng.random_range(0..DAY_MS), SensorValues::Audio(AudioEvent::Cough { amplitude_db })));
    }
    for (&duration_s, &pitch_hz) in durations.iter().zip(&pitches) {
        events.push((start + rng.random_range(0..DAY_MS), SensorValues::Audio(AudioEvent::Moo { duration_s, pitch_hz })));
    }
    em.emit(events);

    // leg load, every five minutes; one leg carries the imbalance
    let base = rng.random_range(120.0..180.0);
    let imbalanced = (f[idx::LOAD_IMBALANCE_MIN] / LOAD_INTERVAL_MIN).round() as usize;
    let groups = lame_leg_groups(base, imbalanced);
    let lame_mean = base * (1.0 - f[idx::LOAD_IMBALANCE_PCT] / 100.0);
    let mut lame = expand(&groups, &fill_groups(&groups, lame_mean));
    lame.shuffle(rng);
    let lame_leg = rng.random_range(0..4);
    em.emit(
        lame.iter()
            .enumerate()
            .map(|(t, &w)| {
                let mut legs = [base; 4];
                legs[lame_leg] = w;
                let r = LoadReading { lf_kg: legs[0], rf_kg: legs[1], lh_kg: legs[2], rh_kg: legs[3] };
                (start + t as i64 * 5 * MINUTE_MS + 150_000, SensorValues::Load(r))
            })
            .collect(),
    );

    // milkings at 05:00 and 17:00, one reading per quarter
    let milking_ms = |m: usize, q: usize| start + (5 + 12 * m as i64) * 60 * MINUTE_MS + q as i64 * 1000;
    let mut quarter_order = [0usize, 1, 2, 3];
    quarter_order.shuffle(rng);
    let means = ec_quarter_means(f[idx::EC_AVG], f[idx::EC_ASYMMETRY]);
    let mut ec = Vec::with_capacity(MILK_READINGS);
    for (slot, &q) in quarter_order.iter().enumerate() {
        let mean = means[slot];
        let pair = if slot == 0 {
            [f[idx::EC_MAX], 2.0 * mean - f[idx::EC_MAX]]
        } else {
            let d = rng.random::<f64>() * (0.1 * mean).min(f[idx::EC_MAX] - mean);
            [mean + d, mean - d]
        };
        for (m, &ms_cm) in pair.iter().enumerate() {
            let r = MilkEcReading { milking: m as u8, quarter: q as u8, ms_cm };
            ec.push((milking_ms(m, q), SensorValues::MilkEc(r)));
        }
    }
    em.emit(ec);

    let (low, high) = (f[idx::LOW_PH_EVENTS] as usize, f[idx::HIGH_PH_EVENTS] as usize);
    let groups = ph_groups(low, high);
    let mut ph = expand(&groups, &fill_groups(&groups, f[idx::PH_AVG]));
    ph.shuffle(rng);
    em.emit(
        ph.iter()
            .enumerate()
            .map(|(k, &ph)| {
                let (m, q) = (k / QUARTERS, k % QUARTERS);
                (milking_ms(m, q) + 500, SensorValues::MilkPh(MilkPhReading { milking: m as u8, quarter: q as u8, ph }))
            })
            .collect(),
    );

    // breath gas and vitals, every fifteen minutes
    let series = |j: usize, spread: f64, rng: &mut R| jittered(f[j], VITALS_TICKS, FEATURE_RANGES[j].max, spread, rng);
    let (nh3, ch4, h2s, voc) = (series(idx::NH3, 0.2, rng), series(idx::CH4, 0.2, rng), series(idx::H2S, 0.2, rng), series(idx::VOC, 0.2, rng));
    em.emit(
        (0..VITALS_TICKS)
            .map(|t| {
                let r = GasReading { nh3_ppm: nh3[t], ch4_ppm: ch4[t], h2s_ppm: h2s[t], voc_index: voc[t] };
                (start + t as i64 * 15 * MINUTE_MS + 30_000, SensorValues::BreathGas(r))
            })
            .collect(),
    );
    let (bpm, hrv, spo2) = (series(idx::HEART_RATE, 0.1, rng), series(idx::HRV, 0.15, rng), series(idx::SPO2, 0.5, rng));
    em.emit(
        (0..VITALS_TICKS)
            .map(|t| {
                let r = VitalsReading { bpm: bpm[t], hrv_ms: hrv[t], spo2_pct: spo2[t] };
                (start + t as i64 * 15 * MINUTE_MS + 45_000, SensorValues::HeartRate(r))
            })
            .collect(),
    );

    // once-daily assays at noon
    let noon = start + 12 * 60 * MINUTE_MS;
    em.emit(vec![(noon, SensorValues::SalivaPh(SalivaReading { ph: f[idx::SALIVA_PH] }))]);
    em.emit(vec![(noon + 1000, SensorValues::Cortisol(CortisolReading { ng_ml: f[idx::CORTISOL] }))]);
    em.out
}

/// Draws a target for `label` and the streams that reproduce it; the target is returned for checking.
pub fn generate_sensor_streams(
    cfg: &SimConfig,
    cow_id: &str,
    day: NaiveDate,
    label: DiseaseLabel,
    utc_offset_min: i32,
) -> (Vec<SensorSample>, FeatureVector) {
    let mut r = rng::stream(cfg.seed, &[0x57E, rng::fnv1a(cow_id.as_bytes()), day_index(day) as u64, label.index() as u64]);
    let target = sample_target(&cfg.table, label, cfg.separability, &mut r);
    let samples = streams_for_target(cow_id, day, &target, utc_offset_min, &mut r);
    (samples, target)
}
