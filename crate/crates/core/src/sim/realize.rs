//! Projection of an unconstrained feature draw onto vectors that a day of raw
//! sensor samples can reproduce exactly, plus the per-sensor layouts shared
//! with stream generation.

use crate::herd::{idx, FeatureVector, FEATURE_RANGES, NUM_FEATURES};

pub const ACCEL_TICKS: usize = 1440;
pub const TEMP_TICKS: usize = 288;
pub const TEMP_INTERVAL_MIN: f64 = 5.0;
pub const LOAD_TICKS: usize = 288;
pub const LOAD_INTERVAL_MIN: f64 = 5.0;
pub const VITALS_TICKS: usize = 96;
pub const MILKINGS: usize = 2;
pub const QUARTERS: usize = 4;
pub const MILK_READINGS: usize = MILKINGS * QUARTERS;

pub const FEVER_THRESHOLD_C: f64 = 39.5;
/// Per-sample leg-load spread above which the sample counts toward imbalance time.
pub const LOAD_IMBALANCE_THRESHOLD_PCT: f64 = 10.0;
pub const LOW_PH: f64 = 6.4;
pub const HIGH_PH: f64 = 6.8;

/// Clearance kept from strict thresholds so rounding cannot move a reading across them.
const MARGIN: f64 = 1e-6;

/// pH bands used when placing low/high readings.
const PH_FLOOR: f64 = 4.0;
const PH_CEILING: f64 = 8.0;

/// `count` readings sharing a value inside `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Group {
    pub count: usize,
    pub lo: f64,
    pub hi: f64,
}

impl Group {
    pub fn new(count: usize, lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "group range {lo} > {hi}");
        Self { count, lo, hi }
    }

    pub fn fixed(count: usize, value: f64) -> Self {
        Self { count, lo: value, hi: value }
    }
}

fn total(groups: &[Group]) -> usize {
    groups.iter().map(|g| g.count).sum()
}

/// Smallest and largest mean the groups can realise.
pub fn mean_range(groups: &[Group]) -> (f64, f64) {
    let n = total(groups) as f64;
    let lo: f64 = groups.iter().map(|g| g.count as f64 * g.lo).sum();
    let hi: f64 = groups.iter().map(|g| g.count as f64 * g.hi).sum();
    (lo / n, hi / n)
}

/// One value per group, all at the same relative position in their ranges, so the overall mean equals `target`.
pub fn fill_groups(groups: &[Group], target: f64) -> Vec<f64> {
    let n = total(groups) as f64;
    let base: f64 = groups.iter().map(|g| g.count as f64 * g.lo).sum();
    let span: f64 = groups.iter().map(|g| g.count as f64 * (g.hi - g.lo)).sum();
    let t = if span > 0.0 { ((target * n - base) / span).clamp(0.0, 1.0) } else { 0.0 };
    groups.iter().map(|g| if g.count == 0 { g.lo } else { g.lo + t * (g.hi - g.lo) }).collect()
}

/// Temperature layout (max reading, min reading, fever readings, the rest); `fever_ticks` counts readings above threshold.
pub fn temperature_groups(max: f64, min: f64, fever_ticks: usize) -> Vec<Group> {
    if max == min {
        return vec![Group::fixed(TEMP_TICKS, max)];
    }
    let rest = TEMP_TICKS - 2;
    if fever_ticks == 0 || fever_ticks == TEMP_TICKS {
        return vec![Group::fixed(1, max), Group::fixed(1, min), Group::new(rest, min, max)];
    }
    let above_lo = (FEVER_THRESHOLD_C + MARGIN).min(max);
    vec![
        Group::fixed(1, max),
        Group::fixed(1, min),
        Group::new(fever_ticks - 1, above_lo, max),
        Group::new(TEMP_TICKS - fever_ticks - 1, min, FEVER_THRESHOLD_C),
    ]
}

/// Lame-leg readings relative to `base` kg: `imbalanced` ticks clearly past the threshold, the rest within it.
pub fn lame_leg_groups(base: f64, imbalanced: usize) -> Vec<Group> {
    let cut = base * (1.0 - LOAD_IMBALANCE_THRESHOLD_PCT / 100.0);
    vec![
        Group::new(imbalanced, 0.0, cut - MARGIN * base),
        Group::new(LOAD_TICKS - imbalanced, cut + MARGIN * base, base),
    ]
}

pub fn ph_groups(low: usize, high: usize) -> Vec<Group> {
    vec![
        Group::new(low, PH_FLOOR, LOW_PH - MARGIN),
        Group::new(high, HIGH_PH + MARGIN, PH_CEILING),
        Group::new(MILK_READINGS - low - high, LOW_PH, HIGH_PH),
    ]
}

/// Quarter means `(high, low, mid, mid)` with `mean = avg`, `high - low = asym`.
pub fn ec_quarter_means(avg: f64, asym: f64) -> [f64; QUARTERS] {
    [avg + asym / 2.0, avg - asym / 2.0, avg, avg]
}

fn count(v: f64, max: usize) -> usize {
    (v.round().max(0.0) as usize).min(max)
}

/// Projects `raw` onto the set of feature vectors reachable by aggregating one simulated day.
pub fn realize(raw: &FeatureVector) -> FeatureVector {
    let mut f = *raw;
    for j in 0..NUM_FEATURES {
        let r = FEATURE_RANGES[j];
        f[j] = if f[j].is_finite() { f[j].clamp(r.min, r.max) } else { r.min.max(0.0) };
    }

    // posture: lying minutes, transitions bounded by run structure
    let lying = count(f[idx::LYING_TIME] * 60.0, ACCEL_TICKS);
    let standing = ACCEL_TICKS - lying;
    f[idx::LYING_TIME] = lying as f64 / 60.0;
    let transitions = if lying == 0 || standing == 0 {
        0
    } else {
        count(f[idx::TRANSITIONS], lying.min(standing)).max(1)
    };
    f[idx::TRANSITIONS] = transitions as f64;
    let steps = f[idx::STEPS].round().max(0.0).min(u32::MAX as f64);
    f[idx::STEPS] = steps;

    // temperature
    let mut t = [f[idx::TEMP_MIN], f[idx::TEMP_AVG], f[idx::TEMP_MAX]];
    t.sort_by(f64::total_cmp);
    let [min, a, max] = t;
    let fever = if max == min || max <= FEVER_THRESHOLD_C {
        if min > FEVER_THRESHOLD_C { TEMP_TICKS } else { 0 }
    } else if min > FEVER_THRESHOLD_C {
        TEMP_TICKS
    } else {
        count(f[idx::FEVER_HRS] * 60.0 / TEMP_INTERVAL_MIN, TEMP_TICKS - 1).max(1)
    };
    let (lo, hi) = mean_range(&temperature_groups(max, min, fever));
    f[idx::TEMP_MAX] = max;
    f[idx::TEMP_MIN] = min;
    f[idx::TEMP_AVG] = a.clamp(lo, hi);
    f[idx::FEVER_HRS] = fever as f64 * TEMP_INTERVAL_MIN / 60.0;

    // audio events: descriptors are zero without events
    let coughs = f[idx::COUGH_COUNT].round().max(0.0);
    let moos = f[idx::MOO_COUNT].round().max(0.0);
    f[idx::COUGH_COUNT] = coughs;
    f[idx::MOO_COUNT] = moos;
    if coughs == 0.0 {
        f[idx::COUGH_AMPLITUDE] = 0.0;
    }
    if moos == 0.0 {
        f[idx::MOO_DURATION] = 0.0;
        f[idx::MOO_PITCH] = 0.0;
    }

    // leg load: imbalanced ticks at the load cadence, spread limited by that count
    let ticks = count(f[idx::LOAD_IMBALANCE_MIN] / LOAD_INTERVAL_MIN, LOAD_TICKS);
    let (mean_lo, mean_hi) = mean_range(&lame_leg_groups(1.0, ticks));
    let pct = f[idx::LOAD_IMBALANCE_PCT].clamp(100.0 * (1.0 - mean_hi), 100.0 * (1.0 - mean_lo));
    f[idx::LOAD_IMBALANCE_PCT] = pct;
    f[idx::LOAD_IMBALANCE_MIN] = ticks as f64 * LOAD_INTERVAL_MIN;

    // milk EC: low quarter non-negative, max reading within reach of the high quarter
    let avg = f[idx::EC_AVG];
    let asym = f[idx::EC_ASYMMETRY].min(2.0 * avg);
    let q_hi = avg + asym / 2.0;
    f[idx::EC_ASYMMETRY] = asym;
    f[idx::EC_MAX] = f[idx::EC_MAX].clamp(q_hi, 2.0 * q_hi);

    // milk pH
    let mut low = count(f[idx::LOW_PH_EVENTS], MILK_READINGS);
    let mut high = count(f[idx::HIGH_PH_EVENTS], MILK_READINGS);
    while low + high > MILK_READINGS {
        if low >= high { low -= 1 } else { high -= 1 }
    }
    let (lo, hi) = mean_range(&ph_groups(low, high));
    f[idx::PH_AVG] = f[idx::PH_AVG].clamp(lo, hi);
    f[idx::LOW_PH_EVENTS] = low as f64;
    f[idx::HIGH_PH_EVENTS] = high as f64;
    f
}
