use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SensorKind {
    Accelerometer,
    Temperature,
    Audio,
    Load,
    MilkEc,
    MilkPh,
    BreathGas,
    HeartRate,
    SalivaPh,
    Cortisol,
}

impl SensorKind {
    pub const ALL: [SensorKind; 10] = [
        Self::Accelerometer,
        Self::Temperature,
        Self::Audio,
        Self::Load,
        Self::MilkEc,
        Self::MilkPh,
        Self::BreathGas,
        Self::HeartRate,
        Self::SalivaPh,
        Self::Cortisol,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Accelerometer => "accelerometer",
            Self::Temperature => "temperature",
            Self::Audio => "audio",
            Self::Load => "load",
            Self::MilkEc => "milk_ec",
            Self::MilkPh => "milk_ph",
            Self::BreathGas => "breath_gas",
            Self::HeartRate => "heart_rate",
            Self::SalivaPh => "saliva_ph",
            Self::Cortisol => "cortisol",
        }
    }

    /// Audio is event-driven; a quiet day legitimately has no samples.
    pub fn required(self) -> bool {
        self != Self::Audio
    }
}

impl fmt::Display for SensorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SensorKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| format!("unknown sensor {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Posture {
    Lying,
    Standing,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case", deny_unknown_fields)]
pub enum AudioEvent {
    Cough { amplitude_db: f64 },
    Moo { duration_s: f64, pitch_hz: f64 },
}

macro_rules! reading {
    ($(#[$meta:meta])* $name:ident { $($field:ident: $ty:ty),* $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
        #[serde(deny_unknown_fields)]
        pub struct $name {
            $(pub $field: $ty),*
        }
    };
}

reading!(
    /// One-minute posture tick with the step count and activity index for that minute.
    AccelReading { posture: Posture, steps: u32, activity: f64 }
);
reading!(TempReading { celsius: f64 });
reading!(
    /// Per-leg load in kg: left/right fore, left/right hind.
    LoadReading { lf_kg: f64, rf_kg: f64, lh_kg: f64, rh_kg: f64 }
);
reading!(MilkEcReading { milking: u8, quarter: u8, ms_cm: f64 });
reading!(MilkPhReading { milking: u8, quarter: u8, ph: f64 });
reading!(GasReading { nh3_ppm: f64, ch4_ppm: f64, h2s_ppm: f64, voc_index: f64 });
reading!(VitalsReading { bpm: f64, hrv_ms: f64, spo2_pct: f64 });
reading!(SalivaReading { ph: f64 });
reading!(CortisolReading { ng_ml: f64 });

/// Sensor-specific payload; the variant determines the `sensor` field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SensorValues {
    Accelerometer(AccelReading),
    Temperature(TempReading),
    Audio(AudioEvent),
    Load(LoadReading),
    MilkEc(MilkEcReading),
    MilkPh(MilkPhReading),
    BreathGas(GasReading),
    HeartRate(VitalsReading),
    SalivaPh(SalivaReading),
    Cortisol(CortisolReading),
}

impl SensorValues {
    pub fn kind(&self) -> SensorKind {
        match self {
            Self::Accelerometer(_) => SensorKind::Accelerometer,
            Self::Temperature(_) => SensorKind::Temperature,
            Self::Audio(_) => SensorKind::Audio,
            Self::Load(_) => SensorKind::Load,
            Self::MilkEc(_) => SensorKind::MilkEc,
            Self::MilkPh(_) => SensorKind::MilkPh,
            Self::BreathGas(_) => SensorKind::BreathGas,
            Self::HeartRate(_) => SensorKind::HeartRate,
            Self::SalivaPh(_) => SensorKind::SalivaPh,
            Self::Cortisol(_) => SensorKind::Cortisol,
        }
    }

    /// Every numeric field, for finiteness and sign checks.
    pub fn numbers(&self) -> Vec<f64> {
        match *self {
            Self::Accelerometer(r) => vec![r.steps as f64, r.activity],
            Self::Temperature(r) => vec![r.celsius],
            Self::Audio(AudioEvent::Cough { amplitude_db }) => vec![amplitude_db],
            Self::Audio(AudioEvent::Moo { duration_s, pitch_hz }) => vec![duration_s, pitch_hz],
            Self::Load(r) => vec![r.lf_kg, r.rf_kg, r.lh_kg, r.rh_kg],
            Self::MilkEc(r) => vec![r.ms_cm],
            Self::MilkPh(r) => vec![r.ph],
            Self::BreathGas(r) => vec![r.nh3_ppm, r.ch4_ppm, r.h2s_ppm, r.voc_index],
            Self::HeartRate(r) => vec![r.bpm, r.hrv_ms, r.spo2_pct],
            Self::SalivaPh(r) => vec![r.ph],
            Self::Cortisol(r) => vec![r.ng_ml],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SensorSample {
    pub cow_id: String,
    /// Monotone per `(cow_id, sensor)`.
    pub seq: u64,
    pub ts_ms: i64,
    pub values: SensorValues,
}

impl SensorSample {
    pub fn sensor(&self) -> SensorKind {
        self.values.kind()
    }
}
