//! Sensor payload ingestion: strict line decoding, deduplication, per cow-day
//! windows, daily feature extraction and status-change alerts.

mod codec;
mod extract;
mod monitor;
mod sample;
mod window;

pub use codec::{parse_line, to_json_line, Malformed};
pub use extract::{extract_features, Incomplete};
pub use monitor::{run_monitor, write_alert_log, AlertRecord, MonitorReport};
pub use sample::{
    AccelReading, AudioEvent, CortisolReading, GasReading, LoadReading, MilkEcReading, MilkPhReading, Posture, SalivaReading,
    SensorKind, SensorSample, SensorValues, TempReading, VitalsReading, SCHEMA_VERSION,
};
pub use window::{
    day_index, day_start_ms, ingest, local_day, CowDayWindow, IngestResult, IngestStats, Ingestor, WindowKey, WindowSpec,
    SEQ_PER_DAY,
};
