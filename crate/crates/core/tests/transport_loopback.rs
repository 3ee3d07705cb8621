//! End-to-end transport: concurrent clients through a real loopback sink,
//! delivery integrity by byte comparison, and fault injection.

use std::io::{Read, Write};
use std::net::TcpStream;
use std::time::Duration;

use pixellog_core::assemble::{serialize_session, LogEntry, SessionDocument, SessionMetadata};
use pixellog_core::transport::{
    frame_encode, received_files, sink_spawn, transmit_session, RetryPolicy, SinkConfig,
    TransmitOutcome, DEFAULT_MAX_FRAME_BYTES,
};
use pixellog_core::world::default_epoch;
use serde_json::{Map, Value};

fn document_for(user: &str, entries: usize) -> Vec<u8> {
    let start = default_epoch();
    let mut logs = Vec::new();
    for i in 0..entries {
        let mut payload = Map::new();
        payload.insert("health".into(), Value::from(20.0));
        logs.push(LogEntry::sample(
            "P20",
            start + chrono::Duration::milliseconds(i as i64 * 50),
            i as u64,
            payload,
        ));
    }
    let doc = SessionDocument {
        metadata: SessionMetadata {
            logfile_id: format!("00000000-0000-4000-8000-0000000000{:02x}", entries % 256),
            filename: format!("{user}_2025-01-01T00-00-00-000Z"),
            username: user.to_string(),
            game_start_time: start,
            game_end_time: start + chrono::Duration::milliseconds(entries as i64 * 50),
            plugin_version: "1.0.0".into(),
        },
        dropped_entries: 0,
        logs,
    };
    serialize_session(&doc).unwrap()
}

fn spawn_test_sink(dir: &std::path::Path) -> pixellog_core::transport::SinkHandle {
    sink_spawn(SinkConfig {
        listen: "127.0.0.1:0".into(),
        storage_dir: dir.to_path_buf(),
        max_frame_bytes: 64 * 1024 * 1024,
        read_timeout: Duration::from_secs(5),
    })
    .unwrap()
}

#[test]
fn ten_concurrent_clients_deliver_byte_identical_documents() {
    let dir = tempfile::tempdir().unwrap();
    let sink = spawn_test_sink(dir.path());
    let endpoint = sink.addr().to_string();

    let docs: Vec<(String, Vec<u8>)> = (0..10)
        .map(|i| {
            let user = format!("Client{i}");
            let bytes = document_for(&user, 50 + i * 7);
            (user, bytes)
        })
        .collect();

    let handles: Vec<_> = docs
        .iter()
        .map(|(_, bytes)| {
            let bytes = bytes.clone();
            let endpoint = endpoint.clone();
            std::thread::spawn(move || {
                transmit_session(&bytes, &endpoint, &RetryPolicy::default(), DEFAULT_MAX_FRAME_BYTES)
                    .unwrap()
            })
        })
        .collect();
    for h in handles {
        assert_eq!(h.join().unwrap(), TransmitOutcome::Delivered);
    }
    sink.shutdown();

    let stored = received_files(dir.path()).unwrap();
    assert_eq!(stored.len(), 10);
    for (user, bytes) in &docs {
        let path = dir.path().join("received").join(format!("{user}_2025-01-01T00-00-00-000Z.json"));
        let got = std::fs::read(&path).unwrap_or_else(|_| panic!("missing {path:?}"));
        assert_eq!(&got, bytes, "stored bytes differ for {user}");
    }
}

#[test]
fn duplicate_filenames_get_suffixed_not_clobbered() {
    let dir = tempfile::tempdir().unwrap();
    let sink = spawn_test_sink(dir.path());
    let endpoint = sink.addr().to_string();
    let a = document_for("Same", 3);
    let b = document_for("Same", 5);
    for bytes in [&a, &b] {
        assert_eq!(
            transmit_session(bytes, &endpoint, &RetryPolicy::default(), DEFAULT_MAX_FRAME_BYTES)
                .unwrap(),
            TransmitOutcome::Delivered
        );
    }
    sink.shutdown();
    let stored = received_files(dir.path()).unwrap();
    let names: Vec<String> =
        stored.iter().map(|p| p.file_name().unwrap().to_string_lossy().into_owned()).collect();
    assert_eq!(names.len(), 2);
    assert!(names.contains(&"Same_2025-01-01T00-00-00-000Z.json".to_string()));
    assert!(names.contains(&"Same_2025-01-01T00-00-00-000Z-1.json".to_string()));
    // both payload variants survived
    let mut contents: Vec<Vec<u8>> = stored.iter().map(|p| std::fs::read(p).unwrap()).collect();
    contents.sort_by_key(|c| c.len());
    assert_eq!(contents, {
        let mut v = vec![a, b];
        v.sort_by_key(|c| c.len());
        v
    });
}

#[test]
fn half_reading_sink_forces_fallback_and_quarantines_partial() {
    // a fake sink that reads a few bytes and hangs up mid-frame
    let listener = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    let fake = std::thread::spawn(move || {
        let (mut s, _) = listener.accept().unwrap();
        let mut buf = [0u8; 10];
        let _ = s.read_exact(&mut buf);
        drop(s);
        // swallow the retries
        for _ in 0..2 {
            if let Ok((s, _)) = listener.accept() {
                drop(s);
            }
        }
    });

    // large enough that the kernel cannot buffer the whole frame: the
    // client must observe the broken pipe
    let big = document_for("Big", 120_000);
    let policy = RetryPolicy { attempts: 3, base_backoff: Duration::from_millis(1) };
    let outcome = transmit_session(&big, &addr.to_string(), &policy, DEFAULT_MAX_FRAME_BYTES).unwrap();
    assert!(
        matches!(outcome, TransmitOutcome::FallbackLocal { attempts: 3, .. }),
        "expected fallback, got {outcome:?}"
    );
    fake.join().unwrap();

    // the real sink quarantines a partial frame rather than storing it
    let dir = tempfile::tempdir().unwrap();
    let sink = spawn_test_sink(dir.path());
    let mut s = TcpStream::connect(sink.addr()).unwrap();
    let frame = frame_encode(&big, DEFAULT_MAX_FRAME_BYTES).unwrap();
    s.write_all(&frame[..frame.len() / 2]).unwrap();
    drop(s);
    sink.shutdown();
    assert!(received_files(dir.path()).unwrap().is_empty());
    let reasons: Vec<_> = std::fs::read_dir(dir.path().join("quarantine"))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    assert!(reasons.iter().any(|n| n.ends_with(".reason.txt")), "{reasons:?}");
}

#[test]
fn local_file_untouched_by_failed_transmit() {
    let dir = tempfile::tempdir().unwrap();
    let bytes = document_for("Keeper", 10);
    let local = dir.path().join("Keeper.json");
    std::fs::write(&local, &bytes).unwrap();

    let port = {
        let l = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
        l.local_addr().unwrap().port()
    };
    let policy = RetryPolicy { attempts: 3, base_backoff: Duration::from_millis(1) };
    let outcome =
        transmit_session(&bytes, &format!("127.0.0.1:{port}"), &policy, DEFAULT_MAX_FRAME_BYTES)
            .unwrap();
    assert!(matches!(outcome, TransmitOutcome::FallbackLocal { .. }));
    assert_eq!(std::fs::read(&local).unwrap(), bytes);
}
