//! Load execution. A run plays a profile's simulated schedule slice by
//! slice: within each slice every producer thread offers its due entries
//! (racing its peers on whatever queue architecture is under test), then
//! the consumer drains its service-rate budget. Producers and the consumer
//! never overlap inside a slice, so drop accounting depends only on the
//! schedule arithmetic — reproducible on any machine — while enqueue
//! latency is measured on real contended queues in wall time.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Barrier};
use std::time::Instant;

use pixellog_core::capture::{capture_queue, QueueConsumer};

use crate::central::CentralQueue;
use crate::profile::{Architecture, LoadProfile, ProfileError};
use crate::report::{BenchReport, ComparisonReport, LatencyStats, ParticipantStats};

/// Synthetic entry. Content is deterministic: who produced it and their
/// running sequence number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchEntry {
    pub participant: u32,
    pub seq: u64,
}

struct ProducerResult {
    latencies_ns: Vec<u64>,
    offered: u64,
    accepted: u64,
    dropped: u64,
}

struct Schedule {
    duration_ms: u64,
    slice_ms: u64,
    slices: u64,
    poller_hz: Vec<u32>,
    event_rate_per_s: f64,
    consumer_rate_per_ms: f64,
}

impl Schedule {
    fn new(profile: &LoadProfile) -> Schedule {
        let duration_ms = (profile.duration_s * 1000.0).round() as u64;
        Schedule {
            duration_ms,
            slice_ms: profile.slice_ms,
            slices: duration_ms.div_ceil(profile.slice_ms),
            poller_hz: profile.poller_hz.clone(),
            event_rate_per_s: profile.event_rate_per_s,
            consumer_rate_per_ms: profile.consumer_rate_per_ms,
        }
    }

    fn elapsed_at(&self, slice: u64) -> u64 {
        ((slice + 1) * self.slice_ms).min(self.duration_ms)
    }

    /// Entries one participant owes by `elapsed_ms` of simulated time.
    fn due_by(&self, elapsed_ms: u64) -> u64 {
        let polled: u64 =
            self.poller_hz.iter().map(|hz| elapsed_ms * *hz as u64 / 1000).sum();
        let events = (elapsed_ms as f64 * self.event_rate_per_s / 1000.0).floor() as u64;
        polled + events
    }

    /// Service budget the consumer has accrued by `elapsed_ms`.
    fn quota_by(&self, elapsed_ms: u64) -> u64 {
        (elapsed_ms as f64 * self.consumer_rate_per_ms).floor() as u64
    }
}

/// Drive one profile and report exact accounting plus wall-time latency
/// percentiles. Entry content and drop counts are deterministic for a
/// given profile; timing metrics are environment-dependent.
pub fn run_load(profile: &LoadProfile) -> Result<BenchReport, ProfileError> {
    profile.validate()?;
    let schedule = Schedule::new(profile);
    let started = Instant::now();
    let (results, consumed, residual) = match profile.architecture {
        Architecture::PerParticipant => run_distributed(profile, &schedule),
        Architecture::Centralized => run_centralized(profile, &schedule),
    };
    let wall_seconds = started.elapsed().as_secs_f64();

    let mut latencies = Vec::new();
    let mut per_participant = Vec::with_capacity(results.len());
    let (mut offered, mut accepted, mut dropped) = (0u64, 0u64, 0u64);
    for (i, r) in results.into_iter().enumerate() {
        offered += r.offered;
        accepted += r.accepted;
        dropped += r.dropped;
        latencies.extend(r.latencies_ns);
        per_participant.push(ParticipantStats {
            participant: format!("p{i:02}"),
            offered: r.offered,
            accepted: r.accepted,
            dropped: r.dropped,
        });
    }
    debug_assert_eq!(offered, accepted + dropped);
    debug_assert_eq!(accepted, consumed + residual);
    Ok(BenchReport {
        architecture: profile.architecture,
        participants: profile.participants,
        offered,
        accepted,
        dropped,
        drop_rate: if offered == 0 { 0.0 } else { dropped as f64 / offered as f64 },
        consumed,
        residual,
        latency: LatencyStats::from_samples(latencies),
        throughput_eps: if wall_seconds > 0.0 { offered as f64 / wall_seconds } else { 0.0 },
        wall_seconds,
        per_participant,
    })
}

fn run_distributed(
    profile: &LoadProfile,
    schedule: &Schedule,
) -> (Vec<ProducerResult>, u64, u64) {
    let p = profile.participants;
    let per_queue = profile.per_queue_capacity();
    let mut producers = Vec::with_capacity(p);
    let mut consumers = Vec::with_capacity(p);
    for _ in 0..p {
        let (tx, rx) = capture_queue::<BenchEntry>(per_queue);
        producers.push(tx);
        consumers.push(rx);
    }
    let barrier = Barrier::new(p + 1);

    std::thread::scope(|scope| {
        let mut producer_handles = Vec::with_capacity(p);
        for (i, mut tx) in producers.into_iter().enumerate() {
            let barrier = &barrier;
            producer_handles.push(scope.spawn(move || {
                let mut result = ProducerResult {
                    latencies_ns: Vec::new(),
                    offered: 0,
                    accepted: 0,
                    dropped: 0,
                };
                let mut emitted = 0u64;
                for s in 0..schedule.slices {
                    let due = schedule.due_by(schedule.elapsed_at(s));
                    while emitted < due {
                        let entry = BenchEntry { participant: i as u32, seq: emitted };
                        let t0 = Instant::now();
                        let outcome = tx.offer(entry);
                        let dt = t0.elapsed().as_nanos() as u64;
                        result.latencies_ns.push(dt);
                        result.offered += 1;
                        if outcome.is_accepted() {
                            result.accepted += 1;
                        } else {
                            result.dropped += 1;
                        }
                        emitted += 1;
                    }
                    barrier.wait(); // produce phase done
                    barrier.wait(); // drain phase done
                }
                result
            }));
        }

        let barrier = &barrier;
        let consumer_handle = scope.spawn(move || {
            let mut consumers = consumers;
            let mut consumed = 0u64;
            let mut quota_spent = 0u64;
            let mut rr = 0usize;
            for s in 0..schedule.slices {
                barrier.wait();
                let quota = schedule.quota_by(schedule.elapsed_at(s));
                let mut budget = quota.saturating_sub(quota_spent);
                while budget > 0 {
                    let mut popped_any = false;
                    for k in 0..consumers.len() {
                        if budget == 0 {
                            break;
                        }
                        if consumers[(rr + k) % consumers.len()].pop().is_some() {
                            consumed += 1;
                            budget -= 1;
                            popped_any = true;
                        }
                    }
                    rr = (rr + 1) % consumers.len();
                    if !popped_any {
                        break;
                    }
                }
                // idle service capacity is lost, not banked
                quota_spent = quota;
                barrier.wait();
            }
            let residual: u64 = consumers.iter().map(|c| c.len() as u64).sum();
            (consumed, residual)
        });

        let results: Vec<ProducerResult> =
            producer_handles.into_iter().map(|h| h.join().unwrap()).collect();
        let (consumed, residual) = consumer_handle.join().unwrap();
        (results, consumed, residual)
    })
}

fn run_centralized(
    profile: &LoadProfile,
    schedule: &Schedule,
) -> (Vec<ProducerResult>, u64, u64) {
    let p = profile.participants;
    let queue = Arc::new(CentralQueue::<BenchEntry>::new(profile.queue_capacity_total));
    let barrier = Barrier::new(p + 1);
    // sanity counter so racy per-producer counts can be cross-checked
    let consumed_total = AtomicU64::new(0);

    std::thread::scope(|scope| {
        let mut producer_handles = Vec::with_capacity(p);
        for i in 0..p {
            let queue = Arc::clone(&queue);
            let barrier = &barrier;
            producer_handles.push(scope.spawn(move || {
                let mut result = ProducerResult {
                    latencies_ns: Vec::new(),
                    offered: 0,
                    accepted: 0,
                    dropped: 0,
                };
                let mut emitted = 0u64;
                for s in 0..schedule.slices {
                    let due = schedule.due_by(schedule.elapsed_at(s));
                    while emitted < due {
                        let entry = BenchEntry { participant: i as u32, seq: emitted };
                        let t0 = Instant::now();
                        let outcome = queue.offer(entry);
                        let dt = t0.elapsed().as_nanos() as u64;
                        result.latencies_ns.push(dt);
                        result.offered += 1;
                        if outcome.is_accepted() {
                            result.accepted += 1;
                        } else {
                            result.dropped += 1;
                        }
                        emitted += 1;
                    }
                    barrier.wait();
                    barrier.wait();
                }
                result
            }));
        }

        let consumer_handle = scope.spawn(|| {
            let mut consumed = 0u64;
            let mut quota_spent = 0u64;
            for s in 0..schedule.slices {
                barrier.wait();
                let quota = schedule.quota_by(schedule.elapsed_at(s));
                let mut budget = quota.saturating_sub(quota_spent);
                while budget > 0 {
                    match queue.pop() {
                        Some(_) => {
                            consumed += 1;
                            budget -= 1;
                        }
                        None => break,
                    }
                }
                quota_spent = quota;
                barrier.wait();
            }
            consumed_total.store(consumed, Ordering::Relaxed);
            let residual = queue.len() as u64;
            (consumed, residual)
        });

        let results: Vec<ProducerResult> =
            producer_handles.into_iter().map(|h| h.join().unwrap()).collect();
        let (consumed, residual) = consumer_handle.join().unwrap();
        (results, consumed, residual)
    })
}

/// Run both arms of a pair of profiles that differ only in architecture.
pub fn compare_architectures(
    a: &LoadProfile,
    b: &LoadProfile,
) -> Result<ComparisonReport, ProfileError> {
    if a.with_architecture(b.architecture) != *b {
        return Err(ProfileError::new("profiles must be identical except architecture"));
    }
    if a.architecture == b.architecture {
        return Err(ProfileError::new("profiles must differ in architecture"));
    }
    let (dist_profile, cent_profile) = match a.architecture {
        Architecture::PerParticipant => (a, b),
        Architecture::Centralized => (b, a),
    };
    let per_participant_arm = run_load(dist_profile)?;
    let centralized_arm = run_load(cent_profile)?;
    Ok(build_comparison(per_participant_arm, centralized_arm))
}

/// Convenience: derive both arms from one profile.
pub fn compare_profile(base: &LoadProfile) -> Result<ComparisonReport, ProfileError> {
    let dist = base.with_architecture(Architecture::PerParticipant);
    let cent = base.with_architecture(Architecture::Centralized);
    compare_architectures(&dist, &cent)
}

fn build_comparison(dist: BenchReport, cent: BenchReport) -> ComparisonReport {
    let drop_rate_delta = dist.drop_rate - cent.drop_rate;
    let p99_delta_ns = match (&dist.latency, &cent.latency) {
        (Some(d), Some(c)) => Some(d.p99_ns as i128 - c.p99_ns as i128),
        _ => None,
    };
    ComparisonReport {
        distributed_no_worse_on_drops: dist.dropped <= cent.dropped,
        distributed_no_worse_on_p99: p99_delta_ns.map(|d| d <= 0).unwrap_or(false),
        drop_rate_delta,
        p99_delta_ns,
        per_participant_arm: dist,
        centralized_arm: cent,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(architecture: Architecture) -> LoadProfile {
        LoadProfile {
            participants: 5,
            poller_hz: vec![20],
            event_rate_per_s: 0.0,
            duration_s: 10.0,
            architecture,
            queue_capacity_total: 1000,
            consumer_rate_per_ms: 1.0, // 1000/s service vs 100/s offered: fast
            slice_ms: 50,
        }
    }

    #[test]
    fn under_capacity_run_loses_nothing() {
        // 1 participant at 20 Hz for 60 s with a fast consumer
        let p = LoadProfile {
            participants: 1,
            poller_hz: vec![20],
            event_rate_per_s: 0.0,
            duration_s: 60.0,
            architecture: Architecture::PerParticipant,
            queue_capacity_total: 65_536,
            consumer_rate_per_ms: 1.0,
            slice_ms: 50,
        };
        let report = run_load(&p).unwrap();
        assert_eq!(report.offered, 1200);
        assert_eq!(report.dropped, 0);
        assert_eq!(report.accepted, 1200);
        assert_eq!(report.consumed + report.residual, 1200);
    }

    #[test]
    fn contended_centralized_queue_must_drop() {
        // offered 100/s vs service 50/s into capacity 256: overflow is
        // forced by the queueing argument
        let p = LoadProfile {
            participants: 5,
            poller_hz: vec![20],
            event_rate_per_s: 0.0,
            duration_s: 60.0,
            architecture: Architecture::Centralized,
            queue_capacity_total: 255 * 5, // divides evenly; 1275 total
            consumer_rate_per_ms: 0.05,    // 50/s
            slice_ms: 50,
        };
        let report = run_load(&p).unwrap();
        assert!(report.drop_rate > 0.0, "{report:?}");
        assert_eq!(report.offered, 6000);
        assert_eq!(report.offered, report.accepted + report.dropped);
    }

    #[test]
    fn accounting_conserves_in_both_architectures() {
        for arch in [Architecture::PerParticipant, Architecture::Centralized] {
            let mut p = profile(arch);
            p.consumer_rate_per_ms = 0.05; // starving consumer
            p.queue_capacity_total = 100;
            let report = run_load(&p).unwrap();
            assert_eq!(report.offered, report.accepted + report.dropped, "{arch}");
            assert_eq!(report.accepted, report.consumed + report.residual, "{arch}");
        }
    }

    #[test]
    fn drops_non_increasing_in_capacity() {
        let mut last = u64::MAX;
        for capacity in [50usize, 200, 500, 2000] {
            let mut p = profile(Architecture::PerParticipant);
            p.queue_capacity_total = capacity;
            p.consumer_rate_per_ms = 0.05;
            let report = run_load(&p).unwrap();
            assert!(report.dropped <= last, "capacity {capacity}: {} > {last}", report.dropped);
            last = report.dropped;
        }
    }

    #[test]
    fn accounting_is_deterministic_across_runs() {
        for arch in [Architecture::PerParticipant, Architecture::Centralized] {
            let mut p = profile(arch);
            p.consumer_rate_per_ms = 0.05;
            p.queue_capacity_total = 100;
            let a = run_load(&p).unwrap();
            let b = run_load(&p).unwrap();
            assert_eq!(a.offered, b.offered);
            assert_eq!(a.dropped, b.dropped);
            assert_eq!(a.consumed, b.consumed);
        }
    }

    #[test]
    fn single_participant_arms_are_indistinguishable_on_drops() {
        let mut p = profile(Architecture::PerParticipant);
        p.participants = 1;
        p.queue_capacity_total = 40;
        p.consumer_rate_per_ms = 0.05;
        let report = compare_profile(&p).unwrap();
        assert_eq!(
            report.per_participant_arm.dropped,
            report.centralized_arm.dropped
        );
    }

    #[test]
    fn comparison_rejects_mismatched_profiles() {
        let a = profile(Architecture::PerParticipant);
        let mut b = profile(Architecture::Centralized);
        b.duration_s = 11.0;
        assert!(compare_architectures(&a, &b).is_err());
        let same = profile(Architecture::PerParticipant);
        assert!(compare_architectures(&a, &same).is_err());
    }
}
