//! Dataset ingestion and the built-in industrial lifetime data.

use std::path::Path;

use crate::error::{Error, Result};
use crate::posterior::Lifetimes;

/// Lifetimes of 30 units from an industrial life test (Meeker & Escobar).
/// Eight units sit at 300, which looks like right-censoring; they are used
/// here as exact failure times.
pub const MEEKER: [f64; 30] = [
    275.0, 13.0, 147.0, 23.0, 181.0, 30.0, 65.0, 10.0, 300.0, 173.0, 106.0, 300.0, 300.0, 212.0, 300.0, 300.0, 300.0,
    2.0, 261.0, 293.0, 88.0, 274.0, 28.0, 143.0, 300.0, 23.0, 300.0, 80.0, 245.0, 266.0,
];

pub const BUILTIN_IDS: [&str; 1] = ["meeker"];

/// Resolves a builtin id or reads a file.
pub fn load_dataset(source: &str) -> Result<Lifetimes<f64>> {
    if source == "meeker" {
        return Lifetimes::new(MEEKER.to_vec());
    }
    let path = Path::new(source);
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    parse_lifetimes(&text)
}

/// One positive real per line. Blank lines are skipped and a leading `t`
/// header (single-column CSV) is allowed. Line numbers in errors are 1-based.
pub fn parse_lifetimes(text: &str) -> Result<Lifetimes<f64>> {
    let mut values = Vec::new();
    let mut seen_content = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let field = raw.trim().trim_end_matches(',').trim();
        if field.is_empty() {
            continue;
        }
        let first = !seen_content;
        seen_content = true;
        if first && field.trim_matches('"').eq_ignore_ascii_case("t") {
            continue;
        }
        let v: f64 = field.parse().map_err(|_| Error::Parse {
            line,
            content: raw.to_string(),
        })?;
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::NonPositive { line, value: v });
        }
        values.push(v);
    }
    if values.is_empty() {
        return Err(Error::Empty);
    }
    Lifetimes::new(values)
}
