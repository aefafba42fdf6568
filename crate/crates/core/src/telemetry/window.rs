use std::collections::{BTreeMap, HashMap, HashSet};

use chrono::{Days, NaiveDate};
use serde::{Deserialize, Serialize};

use super::codec::parse_line;
use super::sample::{SensorKind, SensorSample, SensorValues};

const DAY_MS: i64 = 86_400_000;
/// `seq` numbers are `day_index * SEQ_PER_DAY + k` for the `k`-th sample of a sensor that day.
pub const SEQ_PER_DAY: u64 = 1_000_000;

fn epoch() -> NaiveDate {
    NaiveDate::from_ymd_opt(1970, 1, 1).expect("valid date")
}

/// Days since 1970-01-01.
pub fn day_index(day: NaiveDate) -> i64 {
    (day - epoch()).num_days()
}

/// Epoch milliseconds at local midnight of `day`.
pub fn day_start_ms(day: NaiveDate, utc_offset_min: i32) -> i64 {
    day_index(day) * DAY_MS - utc_offset_min as i64 * 60_000
}

/// Local calendar day containing `ts_ms`.
pub fn local_day(ts_ms: i64, utc_offset_min: i32) -> NaiveDate {
    let days = (ts_ms + utc_offset_min as i64 * 60_000).div_euclid(DAY_MS);
    if days >= 0 {
        epoch().checked_add_days(Days::new(days as u64)).expect("date in range")
    } else {
        epoch().checked_sub_days(Days::new(days.unsigned_abs())).expect("date in range")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct WindowSpec {
    /// Fixed offset of the farm's local time from UTC, in minutes.
    pub utc_offset_min: i32,
}

/// All samples of one cow on one local day, keyed by `(ts_ms, seq)` so arrival order is irrelevant.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CowDayWindow {
    pub cow_id: String,
    pub day: Option<NaiveDate>,
    pub samples: BTreeMap<SensorKind, BTreeMap<(i64, u64), SensorValues>>,
    pub duplicates_dropped: usize,
    /// Samples that arrived with a timestamp earlier than one already seen for the same sensor.
    pub out_of_order_accepted: usize,
}

impl CowDayWindow {
    pub fn readings(&self, kind: SensorKind) -> impl Iterator<Item = &SensorValues> {
        self.samples.get(&kind).into_iter().flat_map(|m| m.values())
    }

    pub fn sample_count(&self) -> usize {
        self.samples.values().map(BTreeMap::len).sum()
    }

    /// Windows compare equal on content regardless of the counters.
    pub fn same_content(&self, other: &Self) -> bool {
        self.cow_id == other.cow_id && self.day == other.day && self.samples == other.samples
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct IngestStats {
    pub lines: usize,
    pub accepted: usize,
    pub malformed_lines: usize,
    pub duplicates_dropped: usize,
    pub out_of_order_accepted: usize,
}

pub type WindowKey = (String, NaiveDate);

/// Streaming consumer for an at-least-once, possibly reordered line stream.
#[derive(Debug, Default)]
pub struct Ingestor {
    spec: WindowSpec,
    seen: HashSet<(String, SensorKind, u64)>,
    latest: HashMap<(String, SensorKind), i64>,
    windows: BTreeMap<WindowKey, CowDayWindow>,
    stats: IngestStats,
    /// First few malformed reasons, with 1-based line numbers.
    pub malformed_examples: Vec<(usize, String)>,
}

const MALFORMED_EXAMPLES: usize = 20;

impl Ingestor {
    pub fn new(spec: WindowSpec) -> Self {
        Self { spec, ..Self::default() }
    }

    /// Blank lines are ignored and not counted.
    pub fn push_line(&mut self, line: &str) {
        if line.trim().is_empty() {
            return;
        }
        self.stats.lines += 1;
        match parse_line(line) {
            Ok(sample) => self.push(sample),
            Err(m) => {
                self.stats.malformed_lines += 1;
                if self.malformed_examples.len() < MALFORMED_EXAMPLES {
                    self.malformed_examples.push((self.stats.lines, m.reason));
                }
            }
        }
    }

    pub fn push(&mut self, sample: SensorSample) {
        let kind = sample.sensor();
        let day = local_day(sample.ts_ms, self.spec.utc_offset_min);
        let window = self.windows.entry((sample.cow_id.clone(), day)).or_insert_with(|| CowDayWindow {
            cow_id: sample.cow_id.clone(),
            day: Some(day),
            ..CowDayWindow::default()
        });
        if !self.seen.insert((sample.cow_id.clone(), kind, sample.seq)) {
            window.duplicates_dropped += 1;
            self.stats.duplicates_dropped += 1;
            return;
        }
        let latest = self.latest.entry((sample.cow_id.clone(), kind)).or_insert(i64::MIN);
        if sample.ts_ms < *latest {
            window.out_of_order_accepted += 1;
            self.stats.out_of_order_accepted += 1;
        } else {
            *latest = sample.ts_ms;
        }
        window.samples.entry(kind).or_default().insert((sample.ts_ms, sample.seq), sample.values);
        self.stats.accepted += 1;
    }

    pub fn stats(&self) -> IngestStats {
        self.stats
    }

    pub fn finish(self) -> IngestResult {
        IngestResult { windows: self.windows, stats: self.stats, malformed_examples: self.malformed_examples }
    }
}

#[derive(Debug, Clone, Default)]
pub struct IngestResult {
    pub windows: BTreeMap<WindowKey, CowDayWindow>,
    pub stats: IngestStats,
    pub malformed_examples: Vec<(usize, String)>,
}

pub fn ingest<I, S>(lines: I, spec: WindowSpec) -> IngestResult
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut ingestor = Ingestor::new(spec);
    for line in lines {
        ingestor.push_line(line.as_ref());
    }
    ingestor.finish()
}
