//! Chronological merge checked against an independent stable sort oracle.

use chrono::{DateTime, Utc};
use pixellog_core::assemble::{merge_entries, LogEntry, QueuedEntry};
use pixellog_core::world::default_epoch;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde_json::Map;

fn at_ms(ms: u64) -> DateTime<Utc> {
    default_epoch() + chrono::Duration::milliseconds(ms as i64)
}

fn random_entries(rng: &mut ChaCha20Rng, n: usize) -> Vec<QueuedEntry> {
    // sequence numbers form a random permutation: offer order, shuffled
    let mut seqs: Vec<u64> = (0..n as u64).collect();
    seqs.shuffle(rng);
    let mut out = Vec::with_capacity(n);
    for seq in seqs {
        let tick = rng.gen_range(0..40u64);
        let entry = if rng.gen_bool(0.4) {
            LogEntry::event(at_ms(tick * 50), tick, "BlockBreakEvent", Map::new())
        } else {
            let sub = if rng.gen_bool(0.5) { 0 } else { 25 };
            LogEntry::sample("POLL", at_ms(tick * 50 + sub), tick, Map::new())
        };
        out.push(QueuedEntry { seq, entry });
    }
    out
}

/// Insertion sort by the documented key: (game_tick, time, events-first,
/// sequence). Deliberately naive and independent of the implementation.
fn oracle_sort(entries: &[QueuedEntry]) -> Vec<LogEntry> {
    type Key = (u64, DateTime<Utc>, u8, u64);
    fn key(q: &QueuedEntry) -> Key {
        let rank = if q.entry.is_event() { 0 } else { 1 };
        (q.entry.game_tick, q.entry.time, rank, q.seq)
    }
    let mut sorted: Vec<QueuedEntry> = Vec::with_capacity(entries.len());
    for e in entries {
        let pos = sorted.iter().position(|x| key(x) > key(e)).unwrap_or(sorted.len());
        sorted.insert(pos, e.clone());
    }
    sorted.into_iter().map(|q| q.entry).collect()
}

#[test]
fn merge_equals_stable_sort_oracle_on_1000_random_multisets() {
    let mut rng = ChaCha20Rng::seed_from_u64(0x5eed_0010);
    for trial in 0..1000 {
        let n = rng.gen_range(0..60);
        let entries = random_entries(&mut rng, n);
        let got = merge_entries(entries.clone());
        let want = oracle_sort(&entries);
        assert_eq!(got, want, "trial {trial}");
    }
}

#[test]
fn merge_output_is_a_permutation_of_its_input() {
    let mut rng = ChaCha20Rng::seed_from_u64(0x5eed_0011);
    for _ in 0..200 {
        let n = rng.gen_range(0..80);
        let entries = random_entries(&mut rng, n);
        let mut input: Vec<LogEntry> = entries.iter().map(|q| q.entry.clone()).collect();
        let mut output = merge_entries(entries);
        let sort_key = |e: &LogEntry| {
            (e.game_tick, e.time, e.kind_rank(), e.entry_type.clone(), format!("{:?}", e.payload))
        };
        input.sort_by_key(sort_key);
        output.sort_by_key(sort_key);
        assert_eq!(input, output);
    }
}

#[test]
fn merged_ticks_and_times_are_non_decreasing() {
    let mut rng = ChaCha20Rng::seed_from_u64(0x5eed_0012);
    for _ in 0..200 {
        let merged = merge_entries(random_entries(&mut rng, 100));
        assert!(merged.windows(2).all(|w| w[0].game_tick <= w[1].game_tick));
        assert!(merged.windows(2).all(|w| w[0].time <= w[1].time));
    }
}
