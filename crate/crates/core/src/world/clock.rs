//! Simulated time. The world advances in fixed 50 ms ticks (20 per simulated
//! second); wall-clock pacing is irrelevant — the tick counter is the clock.

use chrono::{DateTime, SecondsFormat, TimeZone, Utc};

/// Ticks per simulated second.
pub const TICK_RATE: u64 = 20;
/// Milliseconds of simulated time per tick.
pub const TICK_MS: u64 = 50;

/// Monotone tick counter anchored to a UTC epoch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorldClock {
    epoch: DateTime<Utc>,
    tick: u64,
}

impl WorldClock {
    pub fn new(epoch: DateTime<Utc>) -> WorldClock {
        WorldClock { epoch, tick: 0 }
    }

    pub fn epoch(&self) -> DateTime<Utc> {
        self.epoch
    }

    pub fn tick(&self) -> u64 {
        self.tick
    }

    pub(crate) fn advance(&mut self) {
        self.tick += 1;
    }

    /// Simulated instant of the current tick.
    pub fn now(&self) -> DateTime<Utc> {
        self.time_at_tick(self.tick)
    }

    pub fn time_at_tick(&self, tick: u64) -> DateTime<Utc> {
        self.time_at_ms(tick * TICK_MS)
    }

    /// Simulated instant `ms` milliseconds after the epoch.
    pub fn time_at_ms(&self, ms: u64) -> DateTime<Utc> {
        self.epoch + chrono::Duration::milliseconds(ms as i64)
    }
}

/// Canonical timestamp form used everywhere in logs: ISO-8601 UTC with
/// millisecond precision and a trailing "Z", e.g. `2025-01-01T00:00:00.000Z`.
pub fn format_utc_ms(t: DateTime<Utc>) -> String {
    t.to_rfc3339_opts(SecondsFormat::Millis, true)
}

/// Parse a timestamp, insisting on the exact canonical form.
pub fn parse_utc_ms(s: &str) -> Result<DateTime<Utc>, TimeParseError> {
    let parsed = DateTime::parse_from_rfc3339(s)
        .map_err(|e| TimeParseError::Invalid(s.to_string(), e.to_string()))?
        .with_timezone(&Utc);
    if format_utc_ms(parsed) != s {
        return Err(TimeParseError::NotCanonical(s.to_string()));
    }
    Ok(parsed)
}

/// Default epoch when a scenario does not pin one. Fixed so that repeated
/// runs of the same scenario produce identical documents.
pub fn default_epoch() -> DateTime<Utc> {
    Utc.with_ymd_and_hms(2025, 1, 1, 0, 0, 0).unwrap()
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TimeParseError {
    #[error("invalid timestamp \"{0}\": {1}")]
    Invalid(String, String),
    #[error("timestamp \"{0}\" is not in canonical form (UTC milliseconds with trailing Z)")]
    NotCanonical(String),
}
