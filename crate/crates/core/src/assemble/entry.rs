//! Log entries: polled state samples and discrete event records, unified
//! under one envelope (`type`, `time`, `game_tick`).

use chrono::{DateTime, Utc};
use serde_json::{Map, Value};

/// Entry type string reserved for event records.
pub const EVENT_LOG_TYPE: &str = "EVENT_LOG";

/// One log entry. State samples carry their polled fields inline in
/// `payload`; event records carry the event name plus an `event_info`
/// payload. The queue sequence number used for ordering is attached
/// separately (see [`QueuedEntry`]) and never serialized.
#[derive(Debug, Clone, PartialEq)]
pub struct LogEntry {
    /// Poller label (e.g. `HIGH_FREQUENCY_LOG_20Hz`) or `EVENT_LOG`.
    pub entry_type: String,
    pub time: DateTime<Utc>,
    pub game_tick: u64,
    /// Event name, present exactly when `entry_type == EVENT_LOG`.
    pub event_name: Option<String>,
    /// Sample fields (inline) or the event's `event_info` object.
    pub payload: Map<String, Value>,
}

impl LogEntry {
    pub fn sample(
        label: impl Into<String>,
        time: DateTime<Utc>,
        game_tick: u64,
        payload: Map<String, Value>,
    ) -> LogEntry {
        LogEntry { entry_type: label.into(), time, game_tick, event_name: None, payload }
    }

    pub fn event(
        time: DateTime<Utc>,
        game_tick: u64,
        name: impl Into<String>,
        event_info: Map<String, Value>,
    ) -> LogEntry {
        LogEntry {
            entry_type: EVENT_LOG_TYPE.to_string(),
            time,
            game_tick,
            event_name: Some(name.into()),
            payload: event_info,
        }
    }

    pub fn is_event(&self) -> bool {
        self.entry_type == EVENT_LOG_TYPE
    }

    /// Events sort before state samples at equal instants, so an event's
    /// effect is visible in the sample that follows it.
    pub fn kind_rank(&self) -> u8 {
        if self.is_event() {
            0
        } else {
            1
        }
    }
}

/// A log entry as held in a capture queue: the entry plus its per-queue
/// sequence number.
#[derive(Debug, Clone, PartialEq)]
pub struct QueuedEntry {
    pub seq: u64,
    pub entry: LogEntry,
}

impl QueuedEntry {
    /// Total order: instant, then events before samples, then offer order.
    pub fn sort_key(&self) -> (u64, DateTime<Utc>, u8, u64) {
        (self.entry.game_tick, self.entry.time, self.entry.kind_rank(), self.seq)
    }
}
