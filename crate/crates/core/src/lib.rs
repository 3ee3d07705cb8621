//! High-performance behavioral telemetry for tick-based multi-agent voxel
//! worlds.
//!
//! The crate is organized as four layers:
//!
//! - [`world`]: a deterministic 20 Hz voxel simulation with scripted agents,
//!   producing every pollable state variable and interaction event.
//! - [`capture`]: session lifecycle and per-participant pipelines — isolated
//!   bounded queues fed by stratified state pollers and a per-participant
//!   event filter.
//! - [`assemble`]: chronological merging of polled and event streams into
//!   schema-exact JSON session documents, plus the validating parser.
//! - [`transport`]: length-prefixed TCP forwarding of finalized documents
//!   and the archival sink that stores them.

pub mod assemble;
pub mod capture;
pub mod transport;
pub mod world;

pub use assemble::{LogEntry, QueuedEntry, SessionDocument, SessionMetadata};
pub use capture::{CaptureConfig, FieldSelector, PollerSpec, SelectorParams, SessionManager};
pub use world::{Action, Avatar, GameEvent, GridPos, ScenarioScript, Vec3, ViewAngles, World};
