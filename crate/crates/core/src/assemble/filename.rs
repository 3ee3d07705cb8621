//! Session file naming and collision-safe writes.

use std::io;
use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};

use crate::world::format_utc_ms;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FilenameError {
    #[error("username must be non-empty")]
    Empty,
    #[error("username \"{0}\" contains characters unsafe for filenames")]
    UnsafeChars(String),
}

/// Build the `<username>_<timestamp>` base name recorded in the document's
/// `filename` field. The timestamp's colons and dots become hyphens so the
/// name is valid on all mainstream filesystems; `.json` is appended only for
/// the on-disk file.
pub fn session_filename(username: &str, start_time: DateTime<Utc>) -> Result<String, FilenameError> {
    if username.is_empty() {
        return Err(FilenameError::Empty);
    }
    if !username
        .chars()
        .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
    {
        return Err(FilenameError::UnsafeChars(username.to_string()));
    }
    let stamp: String = format_utc_ms(start_time)
        .chars()
        .map(|c| if c == ':' || c == '.' { '-' } else { c })
        .collect();
    Ok(format!("{username}_{stamp}"))
}

/// Write `bytes` to `<dir>/<base>.json`, appending `-1`, `-2`, ... to the
/// base name if the file already exists. Returns the path written.
pub fn write_unique(dir: &Path, base: &str, bytes: &[u8]) -> io::Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    for attempt in 0u32.. {
        let name = if attempt == 0 {
            format!("{base}.json")
        } else {
            format!("{base}-{attempt}.json")
        };
        let path = dir.join(name);
        match std::fs::OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(mut f) => {
                use std::io::Write;
                f.write_all(bytes)?;
                return Ok(path);
            }
            Err(e) if e.kind() == io::ErrorKind::AlreadyExists => continue,
            Err(e) => return Err(e),
        }
    }
    unreachable!("collision loop always returns")
}

#[cfg(test)]
mod tests {
    use chrono::TimeZone;

    use super::*;

    #[test]
    fn filename_sanitizes_timestamp() {
        let t = Utc.with_ymd_and_hms(2025, 1, 1, 0, 0, 0).unwrap();
        assert_eq!(
            session_filename("Alice", t).unwrap(),
            "Alice_2025-01-01T00-00-00-000Z"
        );
    }

    #[test]
    fn path_separators_rejected() {
        let t = Utc.with_ymd_and_hms(2025, 1, 1, 0, 0, 0).unwrap();
        assert!(matches!(
            session_filename("Al/ice", t),
            Err(FilenameError::UnsafeChars(_))
        ));
        assert!(matches!(
            session_filename("Al\\ice", t),
            Err(FilenameError::UnsafeChars(_))
        ));
        assert!(matches!(session_filename("", t), Err(FilenameError::Empty)));
    }

    #[test]
    fn distinct_start_ticks_give_distinct_names() {
        let t0 = Utc.with_ymd_and_hms(2025, 1, 1, 0, 0, 0).unwrap();
        let mut seen = std::collections::HashSet::new();
        for tick in 0..50u64 {
            let t = t0 + chrono::Duration::milliseconds((tick * 50) as i64);
            assert!(seen.insert(session_filename("Alice", t).unwrap()));
        }
    }

    #[test]
    fn collisions_get_numeric_suffixes() {
        let dir = tempfile::tempdir().unwrap();
        let a = write_unique(dir.path(), "Alice_x", b"one").unwrap();
        let b = write_unique(dir.path(), "Alice_x", b"two").unwrap();
        let c = write_unique(dir.path(), "Alice_x", b"three").unwrap();
        assert_eq!(a.file_name().unwrap(), "Alice_x.json");
        assert_eq!(b.file_name().unwrap(), "Alice_x-1.json");
        assert_eq!(c.file_name().unwrap(), "Alice_x-2.json");
        assert_eq!(std::fs::read(&b).unwrap(), b"two");
    }
}
