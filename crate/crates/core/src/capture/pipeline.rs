//! Per-participant capture pipeline: the session under construction, its
//! event filter, and its exclusively-owned bounded queue. Nothing another
//! participant produces can ever enter this pipeline's queue.

use crate::assemble::{LogEntry, QueuedEntry};
use crate::world::{GameEvent, WorldClock};

use super::queue::{QueueConsumer, QueueProducer};

/// Lifecycle of a participant's capture. `Idle` participants have no
/// pipeline at all; a pipeline is created on start and destroyed on
/// finalize.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SessionState {
    Idle,
    Logging,
    Finalizing,
}

pub(crate) struct ParticipantPipeline {
    pub(crate) participant: String,
    pub(crate) logfile_id: String,
    pub(crate) start_tick: u64,
    /// Set when a stop was requested; the pipeline still captures the stop
    /// tick itself (events, and the sample landing exactly on the stop
    /// instant) before finalization.
    pub(crate) stop_tick: Option<u64>,
    pub(crate) producer: QueueProducer<QueuedEntry>,
    pub(crate) consumer: QueueConsumer<QueuedEntry>,
    /// Samples skipped because the participant left the world between
    /// schedule and fire.
    pub(crate) skipped_samples: u64,
}

impl ParticipantPipeline {
    /// Turn a world event into this pipeline's event record, iff the actor
    /// is this pipeline's participant. Foreign events are silently ignored
    /// (filtered, not lost).
    pub(crate) fn filter_event(&self, event: &GameEvent, clock: &WorldClock) -> Option<LogEntry> {
        if event.actor != self.participant {
            return None;
        }
        Some(LogEntry::event(
            clock.time_at_tick(event.game_tick),
            event.game_tick,
            event.name(),
            event.payload(),
        ))
    }

    pub(crate) fn offer(&mut self, entry: LogEntry) {
        let seq = self.producer.next_seq();
        self.producer.offer(QueuedEntry { seq, entry });
    }
}
