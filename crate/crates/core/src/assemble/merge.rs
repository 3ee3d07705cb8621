//! Chronological merge of polled and event streams.

use super::entry::{LogEntry, QueuedEntry};

/// Order a session's entries into their final chronological sequence.
///
/// Total order: `(game_tick, sample instant, kind, sequence number)`, where
/// events rank before state samples at equal instants. The output is a
/// permutation of the input.
pub fn merge_entries(entries: Vec<QueuedEntry>) -> Vec<LogEntry> {
    let mut entries = entries;
    entries.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    entries.into_iter().map(|q| q.entry).collect()
}

#[cfg(test)]
mod tests {
    use chrono::{TimeZone, Utc};
    use serde_json::Map;

    use super::*;

    fn at_ms(ms: u64) -> chrono::DateTime<Utc> {
        Utc.with_ymd_and_hms(2025, 1, 1, 0, 0, 0).unwrap() + chrono::Duration::milliseconds(ms as i64)
    }

    fn sample(tick: u64, ms: u64, seq: u64) -> QueuedEntry {
        QueuedEntry { seq, entry: LogEntry::sample("POLL", at_ms(ms), tick, Map::new()) }
    }

    fn event(tick: u64, ms: u64, seq: u64) -> QueuedEntry {
        QueuedEntry { seq, entry: LogEntry::event(at_ms(ms), tick, "BlockBreakEvent", Map::new()) }
    }

    #[test]
    fn empty_input_yields_empty_output() {
        assert!(merge_entries(Vec::new()).is_empty());
    }

    #[test]
    fn event_sorts_before_sample_at_equal_instant() {
        // the event's sequence number is irrelevant at equal instants
        let merged = merge_entries(vec![sample(5, 250, 8), event(5, 250, 9)]);
        assert!(merged[0].is_event());
        assert!(!merged[1].is_event());
    }

    #[test]
    fn sub_tick_samples_order_by_instant() {
        let merged = merge_entries(vec![sample(5, 275, 2), event(5, 250, 3), sample(5, 250, 1)]);
        assert!(merged[0].is_event());
        assert_eq!(merged[1].time, at_ms(250));
        assert_eq!(merged[2].time, at_ms(275));
    }
}
