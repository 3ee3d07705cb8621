//! Forwarding client: send one finalized document to the archival sink.
//!
//! Local persistence is the source of truth; transmission happens after the
//! document is on disk and a delivery failure degrades to a reported
//! fallback, never to data loss.

use std::io::Write;
use std::net::{TcpStream, ToSocketAddrs};
use std::time::Duration;

use super::frame::{frame_encode, FrameError};

/// Reconnect schedule: `attempts` tries total, sleeping `base_backoff * 2^i`
/// between consecutive tries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RetryPolicy {
    pub attempts: u32,
    pub base_backoff: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy { attempts: 3, base_backoff: Duration::from_millis(100) }
    }
}

impl RetryPolicy {
    fn backoff(&self, attempt_index: u32) -> Duration {
        self.base_backoff * 2u32.saturating_pow(attempt_index)
    }
}

/// What happened to a transmission. A fallback is an outcome, not an error:
/// the local file remains the archival copy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransmitOutcome {
    Delivered,
    FallbackLocal { attempts: u32, last_error: String },
}

/// Send one document as a single frame over a fresh connection, retrying
/// per policy. Only an oversize document is an error; network trouble
/// resolves to [`TransmitOutcome::FallbackLocal`].
pub fn transmit_session(
    document: &[u8],
    endpoint: &str,
    policy: &RetryPolicy,
    max_frame_bytes: usize,
) -> Result<TransmitOutcome, FrameError> {
    let frame = frame_encode(document, max_frame_bytes)?;
    let attempts = policy.attempts.max(1);
    let mut last_error = String::new();
    for attempt in 0..attempts {
        match send_once(&frame, endpoint) {
            Ok(()) => return Ok(TransmitOutcome::Delivered),
            Err(e) => last_error = e.to_string(),
        }
        if attempt + 1 < attempts {
            std::thread::sleep(policy.backoff(attempt));
        }
    }
    Ok(TransmitOutcome::FallbackLocal { attempts, last_error })
}

fn send_once(frame: &[u8], endpoint: &str) -> std::io::Result<()> {
    let addr = endpoint
        .to_socket_addrs()?
        .next()
        .ok_or_else(|| std::io::Error::new(std::io::ErrorKind::NotFound, "endpoint resolved to no address"))?;
    let mut stream = TcpStream::connect(addr)?;
    stream.set_nodelay(true)?;
    stream.write_all(frame)?;
    stream.flush()?;
    stream.shutdown(std::net::Shutdown::Write)?;
    Ok(())
}
