//! Deterministic output rendering: CSV with 12-significant-digit floats,
//! JSON with a full config echo.

use std::io::Write;
use std::path::Path;

use crate::CliError;

/// Floats print with 12 significant digits, locale-independent.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.11e}")
}

/// Assemble a CSV document (header + rows, `\n` line ends, no quoting; all
/// fields are numeric or plain identifiers).
pub fn csv_document(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Serialize `value` as pretty JSON with a trailing newline.
pub fn json_document<T: serde::Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Usage(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Write to the file given by `--out`, or stdout.
pub fn emit(document: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, document).map_err(CliError::Io),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(document.as_bytes()).map_err(CliError::Io)
        }
    }
}
