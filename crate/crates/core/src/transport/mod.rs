//! TCP forwarding of finalized session documents, and the archival sink
//! that receives them.

mod client;
mod frame;
mod sink;

pub use client::{transmit_session, RetryPolicy, TransmitOutcome};
pub use frame::{frame_encode, FrameDecoder, FrameError, DEFAULT_MAX_FRAME_BYTES};
pub use sink::{received_files, sink_spawn, SinkConfig, SinkHandle};
