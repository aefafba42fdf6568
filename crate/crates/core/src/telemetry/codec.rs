//! Line-delimited JSON framing of sensor samples.

use std::fmt;

use serde::Serialize;
use serde_json::Value;

use super::sample::*;

/// A line that could not be decoded; carries the first problem found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Malformed {
    pub reason: String,
}

impl Malformed {
    fn new(reason: impl Into<String>) -> Self {
        Self { reason: reason.into() }
    }
}

impl fmt::Display for Malformed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "malformed line: {}", self.reason)
    }
}

impl std::error::Error for Malformed {}

const FIELDS: [&str; 6] = ["schema_version", "cow_id", "sensor", "seq", "ts_ms", "values"];

#[derive(Serialize)]
struct Envelope<'a, V: Serialize> {
    schema_version: u32,
    cow_id: &'a str,
    sensor: SensorKind,
    seq: u64,
    ts_ms: i64,
    values: V,
}

fn envelope<V: Serialize>(s: &SensorSample, values: V) -> String {
    let e = Envelope { schema_version: SCHEMA_VERSION, cow_id: &s.cow_id, sensor: s.sensor(), seq: s.seq, ts_ms: s.ts_ms, values };
    serde_json::to_string(&e).expect("sample serialises")
}

/// Serialises a sample as one JSON object without a trailing newline.
pub fn to_json_line(s: &SensorSample) -> String {
    match &s.values {
        SensorValues::Accelerometer(v) => envelope(s, v),
        SensorValues::Temperature(v) => envelope(s, v),
        SensorValues::Audio(v) => envelope(s, v),
        SensorValues::Load(v) => envelope(s, v),
        SensorValues::MilkEc(v) => envelope(s, v),
        SensorValues::MilkPh(v) => envelope(s, v),
        SensorValues::BreathGas(v) => envelope(s, v),
        SensorValues::HeartRate(v) => envelope(s, v),
        SensorValues::SalivaPh(v) => envelope(s, v),
        SensorValues::Cortisol(v) => envelope(s, v),
    }
}

fn typed<T: serde::de::DeserializeOwned>(v: Value, wrap: fn(T) -> SensorValues) -> Result<SensorValues, Malformed> {
    serde_json::from_value(v).map(wrap).map_err(|e| Malformed::new(format!("bad values: {e}")))
}

fn parse_values(kind: SensorKind, v: Value) -> Result<SensorValues, Malformed> {
    if !v.is_object() {
        return Err(Malformed::new("bad values: not an object"));
    }
    let values = match kind {
        SensorKind::Accelerometer => typed(v, SensorValues::Accelerometer),
        SensorKind::Temperature => typed(v, SensorValues::Temperature),
        SensorKind::Audio => typed(v, SensorValues::Audio),
        SensorKind::Load => typed(v, SensorValues::Load),
        SensorKind::MilkEc => typed(v, SensorValues::MilkEc),
        SensorKind::MilkPh => typed(v, SensorValues::MilkPh),
        SensorKind::BreathGas => typed(v, SensorValues::BreathGas),
        SensorKind::HeartRate => typed(v, SensorValues::HeartRate),
        SensorKind::SalivaPh => typed(v, SensorValues::SalivaPh),
        SensorKind::Cortisol => typed(v, SensorValues::Cortisol),
    }?;
    if values.numbers().iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(Malformed::new("bad values: negative or non-finite number"));
    }
    if let SensorValues::MilkEc(MilkEcReading { milking, quarter, .. }) | SensorValues::MilkPh(MilkPhReading { milking, quarter, .. }) = values {
        if milking > 1 || quarter > 3 {
            return Err(Malformed::new("bad values: milking must be 0-1 and quarter 0-3"));
        }
    }
    Ok(values)
}

/// Strictly decodes one payload line.
pub fn parse_line(text: &str) -> Result<SensorSample, Malformed> {
    let value: Value = serde_json::from_str(text.trim()).map_err(|_| Malformed::new("syntax"))?;
    let Value::Object(mut map) = value else {
        return Err(Malformed::new("not an object"));
    };
    if let Some(unknown) = map.keys().find(|k| !FIELDS.contains(&k.as_str())) {
        return Err(Malformed::new(format!("unknown field {unknown}")));
    }
    let mut take = |name: &str| map.remove(name).ok_or_else(|| Malformed::new(format!("missing {name}")));
    let (version, cow, sensor, seq, ts, values) =
        (take("schema_version")?, take("cow_id")?, take("sensor")?, take("seq")?, take("ts_ms")?, take("values")?);
    match version.as_u64() {
        Some(v) if v == SCHEMA_VERSION as u64 => {}
        _ => return Err(Malformed::new(format!("unsupported schema_version {version}"))),
    }
    let cow_id = match cow {
        Value::String(s) if !s.is_empty() => s,
        _ => return Err(Malformed::new("bad cow_id")),
    };
    let kind: SensorKind = sensor
        .as_str()
        .ok_or_else(|| Malformed::new("bad sensor"))?
        .parse()
        .map_err(Malformed::new)?;
    let seq = seq.as_u64().ok_or_else(|| Malformed::new("bad seq"))?;
    let ts_ms = ts.as_i64().ok_or_else(|| Malformed::new("bad ts_ms"))?;
    Ok(SensorSample { cow_id, seq, ts_ms, values: parse_values(kind, values)? })
}
