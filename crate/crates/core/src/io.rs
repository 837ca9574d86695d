//! Sample files and atomic output.
//!
//! A sample file holds real numbers separated by newlines, commas or
//! whitespace. Blank lines and lines starting with `#` are skipped.

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

/// Parses sample values from text; `origin` names the source in errors.
pub fn parse_samples(text: &str, origin: &str) -> Result<Vec<f64>> {
    let mut values = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        for token in line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
        {
            let value: f64 = token.parse().map_err(|_| Error::Parse {
                path: origin.to_string(),
                line: idx + 1,
                message: format!("'{token}' is not a number"),
            })?;
            if !value.is_finite() {
                return Err(Error::Parse {
                    path: origin.to_string(),
                    line: idx + 1,
                    message: format!("'{token}' is not finite"),
                });
            }
            values.push(value);
        }
    }
    Ok(values)
}

pub fn read_samples(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_samples(&text, &path.display().to_string())
}

/// Writes `bytes` to `path` through a temporary file in the same directory,
/// so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}
