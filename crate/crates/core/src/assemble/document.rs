//! Finalized session documents: metadata plus the ordered log array.

use chrono::{DateTime, Utc};

use super::entry::LogEntry;

/// Session-level metadata, serialized at the document root.
#[derive(Debug, Clone, PartialEq)]
pub struct SessionMetadata {
    /// Unique session identifier (128-bit, canonical hex-with-hyphens).
    pub logfile_id: String,
    /// `<username>_<timestamp>` base name, without the `.json` extension.
    pub filename: String,
    pub username: String,
    pub game_start_time: DateTime<Utc>,
    pub game_end_time: DateTime<Utc>,
    pub plugin_version: String,
}

/// A complete session: metadata, overflow accounting, and chronologically
/// ordered log entries.
#[derive(Debug, Clone, PartialEq)]
pub struct SessionDocument {
    pub metadata: SessionMetadata,
    /// Entries discarded by the bounded capture queue. Zero in any run where
    /// the queue never overflowed.
    pub dropped_entries: u64,
    pub logs: Vec<LogEntry>,
}
