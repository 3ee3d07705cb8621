//! Length-prefixed framing: a 32-bit big-endian byte count followed by the
//! payload, one session document per frame.

/// Default upper bound on a frame's payload (256 MiB).
pub const DEFAULT_MAX_FRAME_BYTES: usize = 256 * 1024 * 1024;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FrameError {
    #[error("payload of {len} bytes exceeds the {max}-byte frame limit")]
    Oversize { len: usize, max: usize },
    #[error("declared frame length {declared} exceeds the {max}-byte frame limit")]
    DeclaredOversize { declared: usize, max: usize },
    #[error("truncated frame: expected {expected} bytes, received {received}")]
    Truncated { expected: usize, received: usize },
}

/// Encode one payload as a wire frame.
pub fn frame_encode(payload: &[u8], max: usize) -> Result<Vec<u8>, FrameError> {
    let limit = max.min(u32::MAX as usize);
    if payload.len() > limit {
        return Err(FrameError::Oversize { len: payload.len(), max: limit });
    }
    let mut out = Vec::with_capacity(payload.len() + 4);
    out.extend_from_slice(&(payload.len() as u32).to_be_bytes());
    out.extend_from_slice(payload);
    Ok(out)
}

/// Incremental frame decoder, tolerant of payloads split across arbitrary
/// read boundaries. Feed it byte chunks as they arrive; it yields each
/// completed payload in order.
#[derive(Debug)]
pub struct FrameDecoder {
    max: usize,
    buf: Vec<u8>,
}

impl FrameDecoder {
    pub fn new(max: usize) -> FrameDecoder {
        FrameDecoder { max, buf: Vec::new() }
    }

    /// Consume a chunk, returning every frame it completes. A declared
    /// length above the limit is fatal for the stream: the caller must
    /// abort the connection.
    pub fn push(&mut self, bytes: &[u8]) -> Result<Vec<Vec<u8>>, FrameError> {
        self.buf.extend_from_slice(bytes);
        let mut frames = Vec::new();
        loop {
            if self.buf.len() < 4 {
                break;
            }
            let declared =
                u32::from_be_bytes([self.buf[0], self.buf[1], self.buf[2], self.buf[3]]) as usize;
            if declared > self.max {
                return Err(FrameError::DeclaredOversize { declared, max: self.max });
            }
            if self.buf.len() < 4 + declared {
                break;
            }
            frames.push(self.buf[4..4 + declared].to_vec());
            self.buf.drain(..4 + declared);
        }
        Ok(frames)
    }

    /// Call at end of stream: an empty buffer is a clean end, anything else
    /// is a truncated frame.
    pub fn finish(&self) -> Result<(), FrameError> {
        if self.buf.is_empty() {
            return Ok(());
        }
        if self.buf.len() < 4 {
            return Err(FrameError::Truncated { expected: 4, received: self.buf.len() });
        }
        let declared =
            u32::from_be_bytes([self.buf[0], self.buf[1], self.buf[2], self.buf[3]]) as usize;
        Err(FrameError::Truncated { expected: 4 + declared, received: self.buf.len() })
    }

    /// Payload bytes of the unfinished frame, if any arrived. Used to
    /// quarantine partial documents at the sink.
    pub fn partial_payload(&self) -> &[u8] {
        if self.buf.len() <= 4 {
            &[]
        } else {
            &self.buf[4..]
        }
    }
}
