use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

/// Number of predictors per cow-day.
pub const NUM_FEATURES: usize = 30;

/// Canonical feature order. Every module indexes features positionally.
pub const FEATURE_NAMES: [&str; NUM_FEATURES] = [
    "lying_time_hrs",
    "steps_per_day",
    "stand_lie_transitions",
    "activity_index",
    "temp_avg_c",
    "temp_max_c",
    "temp_min_c",
    "fever_hrs_gt_39_5",
    "cough_count",
    "moo_count",
    "moo_dur_avg_s",
    "moo_pitch_hz",
    "cough_amp_db",
    "leg_load_imbalance_pct",
    "load_imbalance_min",
    "milk_ec_avg_ms_cm",
    "milk_ec_asymmetry_ms_cm",
    "milk_ec_max_ms_cm",
    "milk_ph_avg",
    "low_ph_events",
    "high_ph_events",
    "nh3_ppm",
    "ch4_ppm",
    "h2s_ppm",
    "voc_index",
    "heart_rate_bpm",
    "hrv_sdnn_ms",
    "spo2_pct",
    "saliva_ph",
    "cortisol_ng_ml",
];

/// Positional indices into a [`FeatureVector`].
pub mod idx {
    pub const LYING_TIME: usize = 0;
    pub const STEPS: usize = 1;
    pub const TRANSITIONS: usize = 2;
    pub const ACTIVITY: usize = 3;
    pub const TEMP_AVG: usize = 4;
    pub const TEMP_MAX: usize = 5;
    pub const TEMP_MIN: usize = 6;
    pub const FEVER_HRS: usize = 7;
    pub const COUGH_COUNT: usize = 8;
    pub const MOO_COUNT: usize = 9;
    pub const MOO_DURATION: usize = 10;
    pub const MOO_PITCH: usize = 11;
    pub const COUGH_AMPLITUDE: usize = 12;
    pub const LOAD_IMBALANCE_PCT: usize = 13;
    pub const LOAD_IMBALANCE_MIN: usize = 14;
    pub const EC_AVG: usize = 15;
    pub const EC_ASYMMETRY: usize = 16;
    pub const EC_MAX: usize = 17;
    pub const PH_AVG: usize = 18;
    pub const LOW_PH_EVENTS: usize = 19;
    pub const HIGH_PH_EVENTS: usize = 20;
    pub const NH3: usize = 21;
    pub const CH4: usize = 22;
    pub const H2S: usize = 23;
    pub const VOC: usize = 24;
    pub const HEART_RATE: usize = 25;
    pub const HRV: usize = 26;
    pub const SPO2: usize = 27;
    pub const SALIVA_PH: usize = 28;
    pub const CORTISOL: usize = 29;
}

/// Whether a range breach is a contract violation or a plausibility warning.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Severity {
    Hard,
    Soft,
}

/// Validity range of one feature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureRange {
    pub min: f64,
    pub max: f64,
    pub severity: Severity,
}

const fn hard(min: f64, max: f64) -> FeatureRange {
    FeatureRange { min, max, severity: Severity::Hard }
}

const fn soft(min: f64, max: f64) -> FeatureRange {
    FeatureRange { min, max, severity: Severity::Soft }
}

const INF: f64 = f64::INFINITY;

/// Ranges aligned with [`FEATURE_NAMES`]. Counts, durations and bounded indices
/// are hard; physiological plausibility bands are soft.
pub const FEATURE_RANGES: [FeatureRange; NUM_FEATURES] = [
    hard(0.0, 24.0),
    hard(0.0, INF),
    hard(0.0, INF),
    hard(0.0, 100.0),
    soft(30.0, 45.0),
    soft(30.0, 45.0),
    soft(30.0, 45.0),
    hard(0.0, 24.0),
    hard(0.0, INF),
    hard(0.0, INF),
    hard(0.0, INF),
    soft(0.0, 2000.0),
    soft(0.0, 140.0),
    hard(0.0, 100.0),
    hard(0.0, 1440.0),
    soft(0.0, 20.0),
    soft(0.0, 20.0),
    soft(0.0, 30.0),
    soft(0.0, 14.0),
    hard(0.0, INF),
    hard(0.0, INF),
    soft(0.0, 200.0),
    soft(0.0, 1000.0),
    soft(0.0, 100.0),
    hard(0.0, 500.0),
    soft(0.0, 250.0),
    soft(0.0, 500.0),
    hard(0.0, 100.0),
    soft(0.0, 14.0),
    soft(0.0, 100.0),
];

/// The 30 physiological and behavioural predictors of one cow-day.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FeatureVector(pub [f64; NUM_FEATURES]);

impl Default for FeatureVector {
    fn default() -> Self {
        FeatureVector([0.0; NUM_FEATURES])
    }
}

impl FeatureVector {
    pub fn zeros() -> Self {
        Self::default()
    }

    pub fn from_slice(values: &[f64]) -> Option<Self> {
        let array: [f64; NUM_FEATURES] = values.try_into().ok()?;
        Some(FeatureVector(array))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        FEATURE_NAMES.iter().position(|n| *n == name).map(|i| self.0[i])
    }

    /// Range and finiteness check. Hard breaches are violations, soft ones warnings.
    pub fn validate(&self) -> Validation {
        let mut out = Validation::default();
        for (i, (&value, range)) in self.0.iter().zip(FEATURE_RANGES.iter()).enumerate() {
            let kind = if !value.is_finite() {
                Some(ViolationKind::NonFinite)
            } else if value < range.min {
                Some(ViolationKind::BelowMin(range.min))
            } else if value > range.max {
                Some(ViolationKind::AboveMax(range.max))
            } else {
                None
            };
            let Some(kind) = kind else { continue };
            let severity = if kind == ViolationKind::NonFinite { Severity::Hard } else { range.severity };
            let violation = Violation { feature: FEATURE_NAMES[i], index: i, value, kind, severity };
            match severity {
                Severity::Hard => out.violations.push(violation),
                Severity::Soft => out.warnings.push(violation),
            }
        }
        out
    }
}

impl Index<usize> for FeatureVector {
    type Output = f64;

    fn index(&self, index: usize) -> &f64 {
        &self.0[index]
    }
}

impl IndexMut<usize> for FeatureVector {
    fn index_mut(&mut self, index: usize) -> &mut f64 {
        &mut self.0[index]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ViolationKind {
    NonFinite,
    BelowMin(f64),
    AboveMax(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub feature: &'static str,
    pub index: usize,
    pub value: f64,
    pub kind: ViolationKind,
    pub severity: Severity,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ViolationKind::NonFinite => write!(f, "{} non-finite", self.feature),
            ViolationKind::BelowMin(min) => write!(f, "{} < {}", self.feature, min),
            ViolationKind::AboveMax(max) => write!(f, "{} > {}", self.feature, max),
        }
    }
}

/// Outcome of [`FeatureVector::validate`]; `ok` iff there are no hard violations.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Validation {
    pub violations: Vec<Violation>,
    pub warnings: Vec<Violation>,
}

impl Validation {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}
