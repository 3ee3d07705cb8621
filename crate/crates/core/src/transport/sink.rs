//! Archival sink: accepts framed session documents over TCP, validates
//! them, and stores them. Valid documents land under `received/`; anything
//! malformed is kept under `quarantine/` beside a reason file. A bad
//! connection never takes the server down.

use std::io::Read;
use std::net::{SocketAddr, TcpListener, TcpStream};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Arc;
use std::thread::JoinHandle;
use std::time::Duration;

use crate::assemble::{parse_session, write_unique};

use super::frame::{FrameDecoder, FrameError, DEFAULT_MAX_FRAME_BYTES};

#[derive(Debug, Clone)]
pub struct SinkConfig {
    /// Bind address, e.g. `127.0.0.1:7077`. Port 0 picks an ephemeral port.
    pub listen: String,
    pub storage_dir: PathBuf,
    pub max_frame_bytes: usize,
    /// Per-connection read timeout; a stalled sender quarantines whatever
    /// arrived and frees the handler.
    pub read_timeout: Duration,
}

impl Default for SinkConfig {
    fn default() -> Self {
        SinkConfig {
            listen: "127.0.0.1:7077".to_string(),
            storage_dir: PathBuf::from("pixellog-sink"),
            max_frame_bytes: DEFAULT_MAX_FRAME_BYTES,
            read_timeout: Duration::from_secs(30),
        }
    }
}

/// Running sink. Dropping the handle (or calling [`SinkHandle::shutdown`])
/// stops accepting, drains in-flight connections, and joins the server.
pub struct SinkHandle {
    addr: SocketAddr,
    stop: Arc<AtomicBool>,
    accept_thread: Option<JoinHandle<()>>,
}

impl SinkHandle {
    /// Actual bound address (useful with port 0).
    pub fn addr(&self) -> SocketAddr {
        self.addr
    }

    /// Stop accepting and wait for in-flight connections to finish.
    pub fn shutdown(mut self) {
        self.shutdown_inner();
    }

    /// Serve until the process dies (the CLI's foreground mode).
    pub fn run_forever(mut self) {
        if let Some(t) = self.accept_thread.take() {
            let _ = t.join();
        }
    }

    fn shutdown_inner(&mut self) {
        self.stop.store(true, Ordering::Release);
        if let Some(t) = self.accept_thread.take() {
            let _ = t.join();
        }
    }
}

impl Drop for SinkHandle {
    fn drop(&mut self) {
        self.shutdown_inner();
    }
}

/// Bind and start serving in the background.
pub fn sink_spawn(config: SinkConfig) -> std::io::Result<SinkHandle> {
    std::fs::create_dir_all(config.storage_dir.join("received"))?;
    std::fs::create_dir_all(config.storage_dir.join("quarantine"))?;
    let listener = TcpListener::bind(&config.listen)?;
    listener.set_nonblocking(true)?;
    let addr = listener.local_addr()?;
    let stop = Arc::new(AtomicBool::new(false));
    let stop_flag = Arc::clone(&stop);
    let accept_thread = std::thread::spawn(move || accept_loop(listener, config, stop_flag));
    Ok(SinkHandle { addr, stop, accept_thread: Some(accept_thread) })
}

fn accept_loop(listener: TcpListener, config: SinkConfig, stop: Arc<AtomicBool>) {
    let quarantine_seq = Arc::new(AtomicU64::new(0));
    let config = Arc::new(config);
    let mut handlers: Vec<JoinHandle<()>> = Vec::new();
    while !stop.load(Ordering::Acquire) {
        match listener.accept() {
            Ok((stream, _peer)) => {
                let config = Arc::clone(&config);
                let quarantine_seq = Arc::clone(&quarantine_seq);
                handlers.push(std::thread::spawn(move || {
                    handle_connection(stream, &config, &quarantine_seq);
                }));
            }
            Err(e) if e.kind() == std::io::ErrorKind::WouldBlock => {
                std::thread::sleep(Duration::from_millis(2));
            }
            // transient accept errors must not kill the server
            Err(_) => std::thread::sleep(Duration::from_millis(10)),
        }
        handlers.retain(|h| !h.is_finished());
    }
    // drain: serve connections already established, then wait for every
    // in-flight handler before returning
    loop {
        match listener.accept() {
            Ok((stream, _peer)) => {
                let config = Arc::clone(&config);
                let quarantine_seq = Arc::clone(&quarantine_seq);
                handlers.push(std::thread::spawn(move || {
                    handle_connection(stream, &config, &quarantine_seq);
                }));
            }
            Err(_) => break,
        }
    }
    for h in handlers {
        let _ = h.join();
    }
}

fn handle_connection(mut stream: TcpStream, config: &SinkConfig, quarantine_seq: &AtomicU64) {
    let _ = stream.set_read_timeout(Some(config.read_timeout));
    match read_one_frame(&mut stream, config.max_frame_bytes) {
        FrameRead::Frame(payload) => store_document(&payload, config, quarantine_seq),
        FrameRead::CleanEmpty => {}
        FrameRead::Aborted { partial, reason } => {
            quarantine(config, quarantine_seq, &partial, &reason);
        }
    }
}

enum FrameRead {
    Frame(Vec<u8>),
    /// Connection closed without sending anything.
    CleanEmpty,
    /// Oversize declaration, truncation, or read failure.
    Aborted { partial: Vec<u8>, reason: String },
}

fn read_one_frame(stream: &mut TcpStream, max: usize) -> FrameRead {
    let mut decoder = FrameDecoder::new(max);
    let mut chunk = [0u8; 64 * 1024];
    loop {
        match stream.read(&mut chunk) {
            Ok(0) => {
                return match decoder.finish() {
                    Ok(()) => FrameRead::CleanEmpty,
                    Err(e) => FrameRead::Aborted {
                        partial: decoder.partial_payload().to_vec(),
                        reason: e.to_string(),
                    },
                };
            }
            Ok(n) => match decoder.push(&chunk[..n]) {
                Ok(frames) => {
                    if let Some(frame) = frames.into_iter().next() {
                        return FrameRead::Frame(frame);
                    }
                }
                Err(e @ FrameError::DeclaredOversize { .. }) => {
                    // abort without reading the rest
                    return FrameRead::Aborted { partial: Vec::new(), reason: e.to_string() };
                }
                Err(e) => {
                    return FrameRead::Aborted {
                        partial: decoder.partial_payload().to_vec(),
                        reason: e.to_string(),
                    };
                }
            },
            Err(e) => {
                return FrameRead::Aborted {
                    partial: decoder.partial_payload().to_vec(),
                    reason: format!("read failed: {e}"),
                };
            }
        }
    }
}

fn store_document(payload: &[u8], config: &SinkConfig, quarantine_seq: &AtomicU64) {
    let document = match parse_session(payload) {
        Ok(d) => d,
        Err(e) => {
            quarantine(config, quarantine_seq, payload, &e.to_string());
            return;
        }
    };
    let filename = &document.metadata.filename;
    if filename.is_empty()
        || !filename.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
    {
        quarantine(
            config,
            quarantine_seq,
            payload,
            &format!("filename field \"{filename}\" is unsafe for storage"),
        );
        return;
    }
    if write_unique(&config.storage_dir.join("received"), filename, payload).is_err() {
        quarantine(config, quarantine_seq, payload, "failed to write received document");
    }
}

fn quarantine(config: &SinkConfig, seq: &AtomicU64, payload: &[u8], reason: &str) {
    let n = seq.fetch_add(1, Ordering::Relaxed);
    let dir = config.storage_dir.join("quarantine");
    let _ = std::fs::create_dir_all(&dir);
    let stem = format!("frame-{n:06}");
    let _ = std::fs::write(dir.join(format!("{stem}.payload")), payload);
    let _ = std::fs::write(dir.join(format!("{stem}.reason.txt")), reason);
}

/// Contents of the sink's received directory, sorted by name.
pub fn received_files(storage_dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    let dir = storage_dir.join("received");
    if dir.exists() {
        for entry in std::fs::read_dir(dir)? {
            out.push(entry?.path());
        }
    }
    out.sort();
    Ok(out)
}
