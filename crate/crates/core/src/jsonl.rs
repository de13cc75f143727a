//! Line-delimited JSON helpers shared by the corpus, sentence, annotation,
//! and prediction formats. One record per line, blank lines ignored.

use std::io::{self, BufRead, Write};

use serde::de::DeserializeOwned;
use serde::Serialize;
use thiserror::Error;

/// Failure while reading a line-delimited JSON stream.
#[derive(Debug, Error)]
pub enum JsonlError {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("malformed record on line {line}: {message}")]
    Malformed { line: usize, message: String },
}

/// Reads every non-blank line as one `T`.
pub fn read_lines<T: DeserializeOwned, R: BufRead>(reader: R) -> Result<Vec<T>, JsonlError> {
    let mut records = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(&line).map_err(|e| JsonlError::Malformed {
            line: i + 1,
            message: e.to_string(),
        })?;
        records.push(record);
    }
    Ok(records)
}

/// Writes each item as one compact JSON line.
pub fn write_lines<'a, T, W, I>(mut writer: W, items: I) -> io::Result<()>
where
    T: Serialize + 'a,
    W: Write,
    I: IntoIterator<Item = &'a T>,
{
    for item in items {
        let line = serde_json::to_string(item).map_err(io::Error::other)?;
        writer.write_all(line.as_bytes())?;
        writer.write_all(b"\n")?;
    }
    writer.flush()
}
