//! Synthetic herd: class-conditional cow-day feature vectors and the raw sensor
//! streams that aggregate back to them.

mod faults;
mod generate;
mod herd;
mod realize;
mod signature;
mod streams;

pub use faults::{inject_faults, FaultSpec, FaultedStream};
pub use generate::{generate_dataset, sample_target, SimConfig, SimError};
pub use herd::{herd_cow_id, herd_schedule, herd_streams, CowDay, HerdSpec};
pub use realize::{
    realize, ACCEL_TICKS, FEVER_THRESHOLD_C, HIGH_PH, LOAD_IMBALANCE_THRESHOLD_PCT, LOAD_INTERVAL_MIN, LOAD_TICKS, LOW_PH,
    TEMP_INTERVAL_MIN, TEMP_TICKS, VITALS_TICKS,
};
pub use signature::{BadSignatureTable, SignatureTable, TABLE_HEADER};
pub use streams::{generate_sensor_streams, posture_ticks, streams_for_target};
