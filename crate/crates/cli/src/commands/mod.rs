//! One module per subcommand plus shared file plumbing.

pub mod audit;
pub mod classify;
pub mod evaluate;
pub mod ingest;
pub mod report;
pub mod stats;
pub mod train;

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write as _};
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::de::DeserializeOwned;
use serde::Serialize;

pub(crate) fn open_reader(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .with_context(|| format!("cannot open {}", path.display()))
}

pub(crate) fn create_writer(path: &Path) -> Result<BufWriter<File>> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)
                .with_context(|| format!("cannot create directory {}", parent.display()))?;
        }
    }
    File::create(path)
        .map(BufWriter::new)
        .with_context(|| format!("cannot create {}", path.display()))
}

/// Pretty JSON with a trailing newline, matching the model file format.
pub(crate) fn write_json_pretty<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut writer = create_writer(path)?;
    serde_json::to_writer_pretty(&mut writer, value)
        .with_context(|| format!("cannot serialize {}", path.display()))?;
    writer.write_all(b"\n")?;
    writer.flush()?;
    Ok(())
}

pub(crate) fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let reader = open_reader(path)?;
    serde_json::from_reader(reader).with_context(|| format!("malformed JSON in {}", path.display()))
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut writer = create_writer(path)?;
    writer.write_all(text.as_bytes())?;
    writer.flush()?;
    Ok(())
}

/// Filesystem-safe stand-in for a policy id. Collisions between distinct
/// ids must be checked by the caller.
pub(crate) fn sanitize_policy_id(id: &str) -> String {
    let cleaned: String = id
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || matches!(c, '.' | '_' | '-') {
                c
            } else {
                '_'
            }
        })
        .collect();
    if cleaned.is_empty() || cleaned.chars().all(|c| c == '.') {
        "_".repeat(cleaned.len().max(1))
    } else {
        cleaned
    }
}

/// Maps sanitized file names back to policy ids, failing on collisions.
pub(crate) fn sanitized_names<'a, I: Iterator<Item = &'a str>>(
    ids: I,
) -> Result<Vec<(String, &'a str)>> {
    let mut seen: std::collections::BTreeMap<String, &str> = std::collections::BTreeMap::new();
    let mut out = Vec::new();
    for id in ids {
        let name = sanitize_policy_id(id);
        if let Some(previous) = seen.insert(name.clone(), id) {
            bail!("policy ids {previous:?} and {id:?} collide after filename sanitization ({name:?})");
        }
        out.push((name, id));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sanitize_replaces_unsafe_characters() {
        assert_eq!(sanitize_policy_id("acme-5g_v2.0"), "acme-5g_v2.0");
        assert_eq!(sanitize_policy_id("a/b c"), "a_b_c");
        assert_eq!(sanitize_policy_id(""), "_");
        assert_eq!(sanitize_policy_id("."), "_");
        assert_eq!(sanitize_policy_id(".."), "__");
    }

    #[test]
    fn collisions_are_detected() {
        assert!(sanitized_names(["a/b", "a_b"].into_iter()).is_err());
        let unique = sanitized_names(["a", "b"].into_iter()).unwrap();
        assert_eq!(unique.len(), 2);
    }
}
