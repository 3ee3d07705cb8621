//! Harmonizes per-participant polled and event streams into chronologically
//! ordered, schema-exact JSON session documents, and parses them back.

mod document;
mod entry;
mod filename;
mod json;
mod merge;

pub use document::{SessionDocument, SessionMetadata};
pub use entry::{LogEntry, QueuedEntry, EVENT_LOG_TYPE};
pub use filename::{session_filename, write_unique, FilenameError};
pub use json::{
    expected_event_keys, parse_session, serialize_session, AssembleError, EVENT_INFO_KEYS,
};
pub use merge::merge_entries;
