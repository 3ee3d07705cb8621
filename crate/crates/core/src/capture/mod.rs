//! Session lifecycle and capture machinery: per-participant pipelines with
//! isolated bounded queues, stratified state pollers, and event filtering.

mod cadence;
mod fields;
mod pipeline;
mod poll;
mod queue;
mod session;

pub use cadence::{cadence_for, Cadence, CadenceError};
pub use fields::{FieldSelector, SelectorParams};
pub use pipeline::SessionState;
pub use poll::poll_state;
pub use queue::{capture_queue, Offer, QueueConsumer, QueueProducer};
pub use session::{
    CaptureConfig, CaptureError, ConfigError, FinalizedSession, PollerSpec, SessionManager,
    LOG_DIR_NAME,
};
