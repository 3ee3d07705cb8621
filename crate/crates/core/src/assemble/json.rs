//! Canonical JSON form of session documents, and the validating parser.
//!
//! Serialization is deterministic: fixed key order (root metadata first,
//! each entry as `type`, `time`, `game_tick`, then its payload), compact
//! encoding, UTF-8, timestamps in UTC milliseconds with a trailing `Z`.
//! `parse` followed by `serialize` reproduces artifact-produced bytes
//! exactly.

use serde_json::{Map, Value};

use crate::world::{format_utc_ms, parse_utc_ms};

use super::document::{SessionDocument, SessionMetadata};
use super::entry::{LogEntry, EVENT_LOG_TYPE};

/// Event names with their exact `event_info` key lists.
pub const EVENT_INFO_KEYS: &[(&str, &[&str])] = &[
    ("BlockBreakEvent", &["player", "event", "block_type", "block_location"]),
    ("BlockDamageEvent", &["player", "event", "block_type", "block_location", "item_in_hand"]),
    ("BlockPlaceEvent", &["player", "event", "block_type", "block_location"]),
    (
        "PlayerInteractEvent",
        &["player", "event", "action", "item_in_hand", "block_type", "block_location"],
    ),
    ("EntityInteractEvent", &["player", "event", "entity_type"]),
    ("EntityDamageDealtEvent", &["player", "event", "entity_type", "damage"]),
    ("EntityDamageReceivedEvent", &["player", "event", "entity_type", "damage"]),
    ("ItemConsumeEvent", &["player", "event", "item"]),
    ("ItemHeldEvent", &["player", "event", "new_item"]),
    ("ItemDropEvent", &["player", "event", "item_type", "amount"]),
    ("ItemPickupEvent", &["player", "event", "item_type", "amount"]),
    ("InventoryClickEvent", &["player", "event", "slot", "clicked_item"]),
    ("CraftEvent", &["player", "event", "crafted_item", "amount"]),
];

/// Expected `event_info` keys for a known event name.
pub fn expected_event_keys(event: &str) -> Option<&'static [&'static str]> {
    EVENT_INFO_KEYS.iter().find(|(name, _)| *name == event).map(|(_, keys)| *keys)
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AssembleError {
    #[error("malformed JSON at byte {offset} (line {line}, column {column}): {message}")]
    Json { offset: usize, line: usize, column: usize, message: String },
    #[error("schema violation at {path}: {rule}")]
    Schema { path: String, rule: String },
    #[error("entries not in chronological order at index {index}")]
    Unordered { index: usize },
}

fn schema(path: impl Into<String>, rule: impl Into<String>) -> AssembleError {
    AssembleError::Schema { path: path.into(), rule: rule.into() }
}

// ---- serialization -------------------------------------------------------

/// Serialize a finalized document to its canonical UTF-8 byte form.
///
/// The entries must already be in chronological order; handing this an
/// unordered list is a caller bug and is reported as such.
pub fn serialize_session(doc: &SessionDocument) -> Result<Vec<u8>, AssembleError> {
    for (i, pair) in doc.logs.windows(2).enumerate() {
        let a = (&pair[0].game_tick, pair[0].time, pair[0].kind_rank());
        let b = (&pair[1].game_tick, pair[1].time, pair[1].kind_rank());
        if a > b {
            return Err(AssembleError::Unordered { index: i + 1 });
        }
    }
    let mut root = Map::new();
    root.insert("logfile_id".into(), Value::String(doc.metadata.logfile_id.clone()));
    root.insert("filename".into(), Value::String(doc.metadata.filename.clone()));
    root.insert("username".into(), Value::String(doc.metadata.username.clone()));
    root.insert(
        "game_start_time".into(),
        Value::String(format_utc_ms(doc.metadata.game_start_time)),
    );
    root.insert(
        "game_end_time".into(),
        Value::String(format_utc_ms(doc.metadata.game_end_time)),
    );
    root.insert("plugin_version".into(), Value::String(doc.metadata.plugin_version.clone()));
    root.insert("dropped_entries".into(), Value::from(doc.dropped_entries));
    root.insert(
        "logs".into(),
        Value::Array(doc.logs.iter().map(entry_value).collect()),
    );
    Ok(serde_json::to_vec(&Value::Object(root)).expect("document values are always serializable"))
}

fn entry_value(entry: &LogEntry) -> Value {
    let mut m = Map::new();
    m.insert("type".into(), Value::String(entry.entry_type.clone()));
    m.insert("time".into(), Value::String(format_utc_ms(entry.time)));
    m.insert("game_tick".into(), Value::from(entry.game_tick));
    if let Some(name) = &entry.event_name {
        m.insert("event".into(), Value::String(name.clone()));
        m.insert("event_info".into(), Value::Object(entry.payload.clone()));
    } else {
        for (k, v) in &entry.payload {
            m.insert(k.clone(), v.clone());
        }
    }
    Value::Object(m)
}

// ---- parsing -------------------------------------------------------------

/// Parse and validate a session document.
///
/// Validates the metadata envelope, every entry envelope, and the exact
/// `event_info` key set of every known event name. Unknown poller labels
/// are accepted (labels are configuration, not schema).
pub fn parse_session(bytes: &[u8]) -> Result<SessionDocument, AssembleError> {
    let value: Value = serde_json::from_slice(bytes).map_err(|e| {
        let (line, column) = (e.line(), e.column());
        AssembleError::Json {
            offset: byte_offset(bytes, line, column),
            line,
            column,
            message: e.to_string(),
        }
    })?;
    let root = value.as_object().ok_or_else(|| schema("$", "document must be a JSON object"))?;

    let metadata = SessionMetadata {
        logfile_id: require_string(root, "logfile_id")?,
        filename: require_string(root, "filename")?,
        username: require_string(root, "username")?,
        game_start_time: require_time(root, "game_start_time")?,
        game_end_time: require_time(root, "game_end_time")?,
        plugin_version: require_string(root, "plugin_version")?,
    };
    if metadata.game_end_time < metadata.game_start_time {
        return Err(schema("$.game_end_time", "game_end_time must not precede game_start_time"));
    }

    let dropped_entries = match root.get("dropped_entries") {
        None => 0,
        Some(v) => v
            .as_u64()
            .ok_or_else(|| schema("$.dropped_entries", "must be a non-negative integer"))?,
    };

    let logs_value = root
        .get("logs")
        .ok_or_else(|| schema("$.logs", "required field is missing"))?
        .as_array()
        .ok_or_else(|| schema("$.logs", "must be an array"))?;

    let mut logs = Vec::with_capacity(logs_value.len());
    for (i, entry) in logs_value.iter().enumerate() {
        logs.push(parse_entry(entry, i)?);
    }

    Ok(SessionDocument { metadata, dropped_entries, logs })
}

fn parse_entry(value: &Value, index: usize) -> Result<LogEntry, AssembleError> {
    let path = format!("$.logs[{index}]");
    let obj = value.as_object().ok_or_else(|| schema(&path, "entry must be an object"))?;

    let entry_type = obj
        .get("type")
        .and_then(Value::as_str)
        .ok_or_else(|| schema(format!("{path}.type"), "required string is missing"))?
        .to_string();
    if entry_type.is_empty() {
        return Err(schema(format!("{path}.type"), "type must be non-empty"));
    }
    let time_str = obj
        .get("time")
        .and_then(Value::as_str)
        .ok_or_else(|| schema(format!("{path}.time"), "required string is missing"))?;
    let time = parse_utc_ms(time_str)
        .map_err(|e| schema(format!("{path}.time"), e.to_string()))?;
    let game_tick = obj
        .get("game_tick")
        .and_then(Value::as_u64)
        .ok_or_else(|| schema(format!("{path}.game_tick"), "required non-negative integer is missing"))?;

    if entry_type == EVENT_LOG_TYPE {
        let event_name = obj
            .get("event")
            .and_then(Value::as_str)
            .ok_or_else(|| schema(format!("{path}.event"), "required string is missing"))?
            .to_string();
        let info = obj
            .get("event_info")
            .and_then(Value::as_object)
            .ok_or_else(|| schema(format!("{path}.event_info"), "required object is missing"))?;
        for key in obj.keys() {
            if !matches!(key.as_str(), "type" | "time" | "game_tick" | "event" | "event_info") {
                return Err(schema(
                    format!("{path}.{key}"),
                    "event records carry only type, time, game_tick, event, event_info",
                ));
            }
        }
        if let Some(expected) = expected_event_keys(&event_name) {
            let got: Vec<&str> = info.keys().map(|k| k.as_str()).collect();
            let mut got_sorted = got.clone();
            got_sorted.sort_unstable();
            let mut want_sorted: Vec<&str> = expected.to_vec();
            want_sorted.sort_unstable();
            if got_sorted != want_sorted {
                return Err(schema(
                    format!("{path}.event_info"),
                    format!(
                        "{event_name} requires exactly the keys {expected:?}, found {got:?}"
                    ),
                ));
            }
        }
        Ok(LogEntry::event(time, game_tick, event_name, info.clone()))
    } else {
        let mut payload = Map::new();
        for (key, val) in obj {
            match key.as_str() {
                "type" | "time" | "game_tick" => continue,
                "event" | "event_info" => {
                    return Err(schema(
                        format!("{path}.{key}"),
                        "event fields are only valid on EVENT_LOG entries",
                    ));
                }
                _ => {
                    check_state_field(&format!("{path}.{key}"), key, val)?;
                    payload.insert(key.clone(), val.clone());
                }
            }
        }
        Ok(LogEntry::sample(entry_type, time, game_tick, payload))
    }
}

/// Shape checks for the known state-sample payload fields. Unknown keys are
/// accepted untouched.
fn check_state_field(path: &str, key: &str, value: &Value) -> Result<(), AssembleError> {
    match key {
        "health" | "hunger" => {
            if !value.is_number() {
                return Err(schema(path, "must be a number"));
            }
        }
        "biome" => {
            if !value.is_string() {
                return Err(schema(path, "must be a string"));
            }
        }
        "location" => check_xyz(path, value)?,
        "view" => {
            let obj = value
                .as_object()
                .ok_or_else(|| schema(path, "must be an object with pitch and yaw"))?;
            for field in ["pitch", "yaw"] {
                if !obj.get(field).map(Value::is_number).unwrap_or(false) {
                    return Err(schema(
                        format!("{path}.{field}"),
                        "required number is missing",
                    ));
                }
            }
            if obj.len() != 2 {
                return Err(schema(path, "must contain exactly pitch and yaw"));
            }
        }
        "ray_tracing_block" | "target_block" => {
            if value.is_null() {
                return Ok(());
            }
            let obj = value.as_object().ok_or_else(|| {
                schema(path, "must be null or an object with hit_location and block_type")
            })?;
            check_xyz(
                &format!("{path}.hit_location"),
                obj.get("hit_location").unwrap_or(&Value::Null),
            )?;
            if !obj.get("block_type").map(Value::is_string).unwrap_or(false) {
                return Err(schema(
                    format!("{path}.block_type"),
                    "required string is missing",
                ));
            }
            if obj.len() != 2 {
                return Err(schema(path, "must contain exactly hit_location and block_type"));
            }
        }
        "nearby_blocks" | "nearby_entities" | "ray_tracing_entities" | "hotbar" | "inventory" => {
            if !value.is_array() {
                return Err(schema(path, "must be an array"));
            }
        }
        "equipment" => {
            if !value.is_object() {
                return Err(schema(path, "must be an object"));
            }
        }
        _ => {}
    }
    Ok(())
}

fn check_xyz(path: &str, value: &Value) -> Result<(), AssembleError> {
    let obj = value
        .as_object()
        .ok_or_else(|| schema(path, "must be an object with x, y, z"))?;
    for field in ["x", "y", "z"] {
        if !obj.get(field).map(Value::is_number).unwrap_or(false) {
            return Err(schema(format!("{path}.{field}"), "required number is missing"));
        }
    }
    if obj.len() != 3 {
        return Err(schema(path, "must contain exactly x, y, z"));
    }
    Ok(())
}

fn require_string(root: &Map<String, Value>, key: &str) -> Result<String, AssembleError> {
    root.get(key)
        .and_then(Value::as_str)
        .map(str::to_string)
        .ok_or_else(|| schema(format!("$.{key}"), "required string is missing"))
}

fn require_time(
    root: &Map<String, Value>,
    key: &str,
) -> Result<chrono::DateTime<chrono::Utc>, AssembleError> {
    let s = require_string(root, key)?;
    parse_utc_ms(&s).map_err(|e| schema(format!("$.{key}"), e.to_string()))
}

/// Byte offset of a 1-based (line, column) position reported by the JSON
/// parser.
fn byte_offset(bytes: &[u8], line: usize, column: usize) -> usize {
    if line == 0 {
        return 0;
    }
    let mut remaining_newlines = line - 1;
    let mut offset = 0;
    for (i, b) in bytes.iter().enumerate() {
        if remaining_newlines == 0 {
            break;
        }
        if *b == b'\n' {
            remaining_newlines -= 1;
            offset = i + 1;
        }
    }
    (offset + column.saturating_sub(1)).min(bytes.len())
}

#[cfg(test)]
mod tests {
    use chrono::TimeZone;

    use super::*;

    fn minimal_doc() -> SessionDocument {
        let start = chrono::Utc.with_ymd_and_hms(2025, 1, 1, 0, 0, 0).unwrap();
        SessionDocument {
            metadata: SessionMetadata {
                logfile_id: "00000000-0000-0000-0000-000000000000".into(),
                filename: "Alice_2025-01-01T00-00-00-000Z".into(),
                username: "Alice".into(),
                game_start_time: start,
                game_end_time: start + chrono::Duration::milliseconds(5000),
                plugin_version: "1.0.0".into(),
            },
            dropped_entries: 0,
            logs: Vec::new(),
        }
    }

    #[test]
    fn zero_entry_session_serializes_with_empty_logs() {
        let bytes = serialize_session(&minimal_doc()).unwrap();
        let text = String::from_utf8(bytes).unwrap();
        assert!(text.ends_with("\"logs\":[]}"));
        assert!(text.starts_with("{\"logfile_id\":"));
    }

    #[test]
    fn single_sample_matches_documented_shape() {
        let mut doc = minimal_doc();
        let mut payload = Map::new();
        let mut loc = Map::new();
        loc.insert("x".into(), Value::from(0.0));
        loc.insert("y".into(), Value::from(0.0));
        loc.insert("z".into(), Value::from(0.0));
        payload.insert("location".into(), Value::Object(loc));
        doc.logs.push(LogEntry::sample(
            "HIGH_FREQUENCY_LOG_20Hz",
            doc.metadata.game_start_time,
            0,
            payload,
        ));
        let text = String::from_utf8(serialize_session(&doc).unwrap()).unwrap();
        assert!(text.contains(
            "{\"type\":\"HIGH_FREQUENCY_LOG_20Hz\",\"time\":\"2025-01-01T00:00:00.000Z\",\"game_tick\":0,\"location\":{\"x\":0.0,\"y\":0.0,\"z\":0.0}}"
        ));
    }

    #[test]
    fn round_trip_is_byte_identical() {
        let mut doc = minimal_doc();
        let mut info = Map::new();
        info.insert("player".into(), Value::String("Alice".into()));
        info.insert("event".into(), Value::String("ItemConsumeEvent".into()));
        info.insert("item".into(), Value::String("BREAD".into()));
        doc.logs.push(LogEntry::event(
            doc.metadata.game_start_time,
            0,
            "ItemConsumeEvent",
            info,
        ));
        let bytes = serialize_session(&doc).unwrap();
        let parsed = parse_session(&bytes).unwrap();
        assert_eq!(parsed, doc);
        assert_eq!(serialize_session(&parsed).unwrap(), bytes);
    }

    #[test]
    fn missing_username_reports_path() {
        let bytes = serialize_session(&minimal_doc()).unwrap();
        let mut v: Value = serde_json::from_slice(&bytes).unwrap();
        v.as_object_mut().unwrap().remove("username");
        let err = parse_session(&serde_json::to_vec(&v).unwrap()).unwrap_err();
        assert_eq!(
            err,
            AssembleError::Schema {
                path: "$.username".into(),
                rule: "required string is missing".into()
            }
        );
    }

    #[test]
    fn event_info_key_set_is_enforced() {
        let mut doc = minimal_doc();
        let mut info = Map::new();
        info.insert("player".into(), Value::String("Alice".into()));
        info.insert("event".into(), Value::String("BlockBreakEvent".into()));
        info.insert("block_type".into(), Value::String("STONE".into()));
        // block_location deliberately missing
        doc.logs.push(LogEntry::event(
            doc.metadata.game_start_time,
            0,
            "BlockBreakEvent",
            info,
        ));
        let bytes = serialize_session(&doc).unwrap();
        let err = parse_session(&bytes).unwrap_err();
        match err {
            AssembleError::Schema { path, rule } => {
                assert_eq!(path, "$.logs[0].event_info");
                assert!(rule.contains("block_location"), "{rule}");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn malformed_json_reports_byte_offset() {
        let err = parse_session(b"{\"logfile_id\": }").unwrap_err();
        match err {
            AssembleError::Json { offset, .. } => assert_eq!(offset, 15),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn unordered_entries_rejected_on_serialize() {
        let mut doc = minimal_doc();
        let t = doc.metadata.game_start_time;
        doc.logs.push(LogEntry::sample("P", t + chrono::Duration::milliseconds(50), 1, Map::new()));
        doc.logs.push(LogEntry::sample("P", t, 0, Map::new()));
        assert_eq!(serialize_session(&doc).unwrap_err(), AssembleError::Unordered { index: 1 });
    }

    #[test]
    fn unknown_poller_labels_accepted() {
        let mut doc = minimal_doc();
        doc.logs.push(LogEntry::sample(
            "SOME_CUSTOM_LABEL",
            doc.metadata.game_start_time,
            0,
            Map::new(),
        ));
        let bytes = serialize_session(&doc).unwrap();
        assert!(parse_session(&bytes).is_ok());
    }
}
