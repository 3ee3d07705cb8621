//! Session lifecycle: the registry of per-participant pipelines, tick-by-
//! tick capture dispatch, and finalization into session documents.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::sync::Mutex;

use chrono::{DateTime, Utc};
use rand::{RngCore, SeedableRng};

use crate::assemble::{
    merge_entries, serialize_session, session_filename, write_unique, AssembleError,
    FilenameError, LogEntry, SessionDocument, SessionMetadata,
};
use crate::world::{GameEvent, World, WorldClock, TICK_MS};

use super::cadence::{cadence_for, Cadence, CadenceError};
use super::fields::{FieldSelector, SelectorParams};
use super::pipeline::{ParticipantPipeline, SessionState};
use super::poll::poll_state;
use super::queue::capture_queue;

/// Subdirectory of the output directory where session documents land.
pub const LOG_DIR_NAME: &str = "PixelLogs";

/// One stratified polling stream: its label (emitted as the entry `type`),
/// frequency, and field set.
#[derive(Debug, Clone, PartialEq)]
pub struct PollerSpec {
    pub label: String,
    pub frequency_hz: u32,
    pub fields: BTreeSet<FieldSelector>,
}

/// Capture-side configuration for a run.
#[derive(Debug, Clone)]
pub struct CaptureConfig {
    pub plugin_version: String,
    pub pollers: Vec<PollerSpec>,
    pub params: SelectorParams,
    pub queue_capacity: usize,
    pub capture_events: bool,
    /// When set, finalized documents are written under
    /// `<output_dir>/PixelLogs/`.
    pub output_dir: Option<PathBuf>,
    /// Seeds session-id generation for reproducible runs; defaults to
    /// process entropy.
    pub logfile_seed: Option<u64>,
}

impl Default for CaptureConfig {
    fn default() -> Self {
        CaptureConfig {
            plugin_version: env!("CARGO_PKG_VERSION").to_string(),
            pollers: Vec::new(),
            params: SelectorParams::default(),
            queue_capacity: 65_536,
            capture_events: true,
            output_dir: None,
            logfile_seed: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("queue capacity must be positive")]
    ZeroCapacity,
    #[error("poller label must be non-empty")]
    EmptyLabel,
    #[error("duplicate poller label \"{0}\"")]
    DuplicateLabel(String),
    #[error("poller \"{label}\": {source}")]
    Cadence { label: String, source: CadenceError },
    #[error("configuration enables no pollers and no event capture")]
    NothingEnabled,
}

#[derive(Debug, thiserror::Error)]
pub enum CaptureError {
    #[error("participant \"{0}\" is already logging")]
    AlreadyLogging(String),
    #[error("unknown participant \"{0}\"")]
    UnknownParticipant(String),
    #[error("participant \"{0}\" is not logging")]
    NotLogging(String),
    #[error(transparent)]
    Filename(#[from] FilenameError),
    #[error(transparent)]
    Assemble(#[from] AssembleError),
    #[error("failed to write session document: {0}")]
    Io(#[from] std::io::Error),
}

/// The outcome of finalizing one session: the document, its canonical
/// bytes, where it was written (if anywhere), and the queue accounting.
#[derive(Debug)]
pub struct FinalizedSession {
    pub document: SessionDocument,
    pub bytes: Vec<u8>,
    pub path: Option<PathBuf>,
    pub offered: u64,
    pub dropped: u64,
    pub skipped_samples: u64,
}

impl FinalizedSession {
    pub fn metadata(&self) -> &SessionMetadata {
        &self.document.metadata
    }
}

struct ActivePoller {
    label: String,
    cadence: Cadence,
    fields: BTreeSet<FieldSelector>,
}

enum IdGen {
    Seeded(rand_chacha::ChaCha20Rng),
    Entropy(rand::rngs::StdRng),
}

impl IdGen {
    fn new(seed: Option<u64>) -> IdGen {
        match seed {
            Some(s) => IdGen::Seeded(rand_chacha::ChaCha20Rng::seed_from_u64(s)),
            None => IdGen::Entropy(rand::rngs::StdRng::from_entropy()),
        }
    }

    /// Random 128-bit identifier in canonical hex-with-hyphens form.
    fn next_id(&mut self) -> String {
        let mut bytes = [0u8; 16];
        match self {
            IdGen::Seeded(rng) => rng.fill_bytes(&mut bytes),
            IdGen::Entropy(rng) => rng.fill_bytes(&mut bytes),
        }
        uuid::Uuid::from_bytes(bytes).to_string()
    }
}

/// Owns every participant pipeline and drives their capture. Start/stop
/// requests may arrive from any thread; capture itself runs on the
/// simulation's thread of control, once per committed tick.
pub struct SessionManager {
    plugin_version: String,
    pollers: Vec<ActivePoller>,
    params: SelectorParams,
    queue_capacity: usize,
    capture_events: bool,
    output_dir: Option<PathBuf>,
    clock: WorldClock,
    pipelines: Mutex<BTreeMap<String, ParticipantPipeline>>,
    ids: Mutex<IdGen>,
}

impl SessionManager {
    pub fn new(config: CaptureConfig, epoch: DateTime<Utc>) -> Result<SessionManager, ConfigError> {
        if config.queue_capacity == 0 {
            return Err(ConfigError::ZeroCapacity);
        }
        if config.pollers.is_empty() && !config.capture_events {
            return Err(ConfigError::NothingEnabled);
        }
        let mut seen = BTreeSet::new();
        let mut pollers = Vec::with_capacity(config.pollers.len());
        for spec in &config.pollers {
            if spec.label.is_empty() {
                return Err(ConfigError::EmptyLabel);
            }
            if !seen.insert(spec.label.clone()) {
                return Err(ConfigError::DuplicateLabel(spec.label.clone()));
            }
            let cadence = cadence_for(spec.frequency_hz)
                .map_err(|source| ConfigError::Cadence { label: spec.label.clone(), source })?;
            pollers.push(ActivePoller {
                label: spec.label.clone(),
                cadence,
                fields: spec.fields.clone(),
            });
        }
        Ok(SessionManager {
            plugin_version: config.plugin_version,
            pollers,
            params: config.params,
            queue_capacity: config.queue_capacity,
            capture_events: config.capture_events,
            output_dir: config.output_dir,
            clock: WorldClock::new(epoch),
            pipelines: Mutex::new(BTreeMap::new()),
            ids: Mutex::new(IdGen::new(config.logfile_seed)),
        })
    }

    pub fn plugin_version(&self) -> &str {
        &self.plugin_version
    }

    pub fn epoch(&self) -> DateTime<Utc> {
        self.clock.epoch()
    }

    pub fn state(&self, participant: &str) -> SessionState {
        let pipelines = self.pipelines.lock().unwrap();
        match pipelines.get(participant) {
            None => SessionState::Idle,
            Some(p) if p.stop_tick.is_some() => SessionState::Finalizing,
            Some(_) => SessionState::Logging,
        }
    }

    pub fn active_participants(&self) -> Vec<String> {
        self.pipelines.lock().unwrap().keys().cloned().collect()
    }

    /// Begin capturing for a participant. Capture covers the current world
    /// tick onward: its events and every sample instant from the tick's
    /// start.
    pub fn start_session(&self, world: &World, participant: &str) -> Result<(), CaptureError> {
        if world.avatar(participant).is_none() {
            return Err(CaptureError::UnknownParticipant(participant.to_string()));
        }
        let mut pipelines = self.pipelines.lock().unwrap();
        if pipelines.contains_key(participant) {
            return Err(CaptureError::AlreadyLogging(participant.to_string()));
        }
        let (producer, consumer) = capture_queue(self.queue_capacity);
        let logfile_id = self.ids.lock().unwrap().next_id();
        pipelines.insert(
            participant.to_string(),
            ParticipantPipeline {
                participant: participant.to_string(),
                logfile_id,
                start_tick: world.tick(),
                stop_tick: None,
                producer,
                consumer,
                skipped_samples: 0,
            },
        );
        Ok(())
    }

    /// Request a stop at `stop_tick`. The pipeline still captures that tick
    /// (its events, and any sample scheduled exactly on the stop instant);
    /// the next [`SessionManager::finalize_due`] call completes it.
    pub fn stop_session(&self, participant: &str, stop_tick: u64) -> Result<(), CaptureError> {
        let mut pipelines = self.pipelines.lock().unwrap();
        match pipelines.get_mut(participant) {
            Some(p) if p.stop_tick.is_none() => {
                p.stop_tick = Some(stop_tick.max(p.start_tick));
                Ok(())
            }
            _ => Err(CaptureError::NotLogging(participant.to_string())),
        }
    }

    /// Request a stop for every pipeline that does not already have one,
    /// e.g. at the end of a run. Capture of `stop_tick` itself still
    /// happens; samples past its stop instant do not.
    pub fn stop_all(&self, stop_tick: u64) {
        let mut pipelines = self.pipelines.lock().unwrap();
        for p in pipelines.values_mut() {
            if p.stop_tick.is_none() {
                p.stop_tick = Some(stop_tick.max(p.start_tick));
            }
        }
    }

    /// Dispatch one committed tick to every logging pipeline: the tick's
    /// events through each pipeline's filter, then every poller sample due
    /// in the tick's window. Pipelines stopping at this tick only take the
    /// sample landing exactly on the stop instant.
    pub fn capture_tick(&self, world: &World, events: &[GameEvent]) {
        let tick = world.tick();
        let mut pipelines = self.pipelines.lock().unwrap();
        for pipeline in pipelines.values_mut() {
            if tick < pipeline.start_tick {
                continue;
            }
            if let Some(stop) = pipeline.stop_tick {
                if tick > stop {
                    continue;
                }
            }
            if self.capture_events {
                for event in events {
                    if let Some(entry) = pipeline.filter_event(event, &self.clock) {
                        pipeline.offer(entry);
                    }
                }
            }
            let stop_ms = pipeline.stop_tick.map(|t| t * TICK_MS);
            for poller in &self.pollers {
                for instant in poller.cadence.instants_in_tick(tick) {
                    if stop_ms.is_some_and(|stop| instant > stop) {
                        continue;
                    }
                    match poll_state(world, &pipeline.participant, &poller.fields, &self.params) {
                        Some(payload) => {
                            let entry = LogEntry::sample(
                                poller.label.clone(),
                                self.clock.time_at_ms(instant),
                                instant / TICK_MS,
                                payload,
                            );
                            pipeline.offer(entry);
                        }
                        None => pipeline.skipped_samples += 1,
                    }
                }
            }
        }
    }

    /// Finalize every pipeline that has a pending stop, plus any whose
    /// participant has left the world (a disconnect takes the identical
    /// finalization path as an explicit stop).
    pub fn finalize_due(&self, world: &World) -> Result<Vec<FinalizedSession>, CaptureError> {
        let due: Vec<(String, u64)> = {
            let pipelines = self.pipelines.lock().unwrap();
            pipelines
                .values()
                .filter_map(|p| match p.stop_tick {
                    Some(stop) => Some((p.participant.clone(), stop)),
                    None if world.avatar(&p.participant).is_none() => {
                        Some((p.participant.clone(), world.tick()))
                    }
                    None => None,
                })
                .collect()
        };
        due.into_iter().map(|(name, end)| self.finalize(&name, end)).collect()
    }

    /// Finalize every open session as of `end_tick` (end of run).
    pub fn finalize_all(&self, end_tick: u64) -> Result<Vec<FinalizedSession>, CaptureError> {
        let names = self.active_participants();
        names.into_iter().map(|name| self.finalize(&name, end_tick)).collect()
    }

    /// Drain one pipeline fully, merge its streams chronologically, and
    /// build (and optionally write) the session document.
    fn finalize(&self, participant: &str, end_tick: u64) -> Result<FinalizedSession, CaptureError> {
        let mut pipeline = {
            let mut pipelines = self.pipelines.lock().unwrap();
            pipelines
                .remove(participant)
                .ok_or_else(|| CaptureError::NotLogging(participant.to_string()))?
        };
        let end_tick = end_tick.max(pipeline.start_tick);
        let game_start_time = self.clock.time_at_tick(pipeline.start_tick);
        let game_end_time = self.clock.time_at_tick(end_tick);
        let filename = session_filename(participant, game_start_time)?;
        let entries = pipeline.consumer.drain();
        let offered = pipeline.producer.offered();
        let dropped = pipeline.producer.dropped();
        let logs = merge_entries(entries);
        let document = SessionDocument {
            metadata: SessionMetadata {
                logfile_id: pipeline.logfile_id.clone(),
                filename,
                username: participant.to_string(),
                game_start_time,
                game_end_time,
                plugin_version: self.plugin_version.clone(),
            },
            dropped_entries: dropped,
            logs,
        };
        let bytes = serialize_session(&document)?;
        let path = match &self.output_dir {
            Some(dir) => Some(write_unique(
                &dir.join(LOG_DIR_NAME),
                &document.metadata.filename,
                &bytes,
            )?),
            None => None,
        };
        Ok(FinalizedSession {
            document,
            bytes,
            path,
            offered,
            dropped,
            skipped_samples: pipeline.skipped_samples,
        })
    }
}
