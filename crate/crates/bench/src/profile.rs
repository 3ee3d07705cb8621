//! Load profiles: everything that defines one benchmark arm.

use serde::{Deserialize, Serialize};

/// Queue topology under test. The experiment is exactly this difference:
/// one shared multi-producer queue versus one single-producer queue per
/// participant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Architecture {
    #[serde(rename = "centralized")]
    Centralized,
    #[serde(rename = "per-participant")]
    PerParticipant,
}

impl std::fmt::Display for Architecture {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Architecture::Centralized => write!(f, "centralized"),
            Architecture::PerParticipant => write!(f, "per-participant"),
        }
    }
}

/// One benchmark configuration. Rates are in simulated time; the run
/// executes as fast as the machine allows, slice by slice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoadProfile {
    pub participants: usize,
    /// Poller frequencies per participant (entries per simulated second each).
    pub poller_hz: Vec<u32>,
    /// Discrete-event rate per participant, events per simulated second.
    #[serde(default)]
    pub event_rate_per_s: f64,
    pub duration_s: f64,
    pub architecture: Architecture,
    /// Total queue capacity. The per-participant arm splits it evenly, so
    /// it must divide by `participants`.
    pub queue_capacity_total: usize,
    /// Consumer service rate, entries drained per simulated millisecond.
    /// This is the contention knob: half the aggregate offer rate models a
    /// consumer that cannot keep up.
    pub consumer_rate_per_ms: f64,
    /// Slice of simulated time processed per producer/consumer phase pair.
    #[serde(default = "default_slice_ms")]
    pub slice_ms: u64,
}

fn default_slice_ms() -> u64 {
    50
}

impl LoadProfile {
    /// Aggregate offer rate across all participants, entries per simulated
    /// second.
    pub fn aggregate_rate_per_s(&self) -> f64 {
        let per_participant: f64 =
            self.poller_hz.iter().map(|f| *f as f64).sum::<f64>() + self.event_rate_per_s;
        per_participant * self.participants as f64
    }

    pub fn per_queue_capacity(&self) -> usize {
        self.queue_capacity_total / self.participants
    }

    pub fn validate(&self) -> Result<(), ProfileError> {
        if self.participants == 0 {
            return Err(ProfileError::new("participants must be positive"));
        }
        if self.poller_hz.iter().any(|f| *f == 0) {
            return Err(ProfileError::new("poller frequencies must be positive"));
        }
        if self.poller_hz.is_empty() && self.event_rate_per_s <= 0.0 {
            return Err(ProfileError::new("profile generates no entries"));
        }
        if self.event_rate_per_s < 0.0 || !self.event_rate_per_s.is_finite() {
            return Err(ProfileError::new("event rate must be non-negative and finite"));
        }
        if !(self.duration_s > 0.0) || !self.duration_s.is_finite() {
            return Err(ProfileError::new("duration must be positive"));
        }
        if self.queue_capacity_total == 0 {
            return Err(ProfileError::new("queue capacity must be positive"));
        }
        if self.queue_capacity_total % self.participants != 0 {
            return Err(ProfileError::new(
                "queue_capacity_total must divide evenly across participants",
            ));
        }
        if self.consumer_rate_per_ms < 0.0 || !self.consumer_rate_per_ms.is_finite() {
            return Err(ProfileError::new("consumer rate must be non-negative and finite"));
        }
        if self.slice_ms == 0 {
            return Err(ProfileError::new("slice_ms must be positive"));
        }
        Ok(())
    }

    pub fn with_architecture(&self, architecture: Architecture) -> LoadProfile {
        LoadProfile { architecture, ..self.clone() }
    }

    pub fn from_toml(text: &str) -> Result<LoadProfile, ProfileError> {
        let profile: LoadProfile =
            toml::from_str(text).map_err(|e| ProfileError::new(format!("profile parse: {e}")))?;
        profile.validate()?;
        Ok(profile)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{0}")]
pub struct ProfileError(String);

impl ProfileError {
    pub fn new(msg: impl Into<String>) -> ProfileError {
        ProfileError(msg.into())
    }
}
