//! CSV export and import. Values are written with 17 significant digits
//! ({:.16e}), which round-trips every finite f64 bit-exactly; separators are
//! commas, decimals use `.`, and line endings are LF.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::cli::CliError;
use crate::simkit::SimTrace;

pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

/// Render a trace as CSV text: one `#` comment documenting the frozen column
/// order, one header row, then data rows.
pub fn trace_to_csv(trace: &SimTrace) -> String {
    let columns = trace.columns();
    let names: Vec<&str> = columns.iter().map(|(n, _)| n.as_str()).collect();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# obslab trace; frozen column order: {}",
        names.join(",")
    );
    let _ = writeln!(out, "{}", names.join(","));
    for row in 0..trace.len() {
        let mut line = String::new();
        for (i, (_, col)) in columns.iter().enumerate() {
            if i > 0 {
                line.push(',');
            }
            line.push_str(&format_value(col[row]));
        }
        let _ = writeln!(out, "{line}");
    }
    out
}

pub fn write_trace_csv(path: &Path, trace: &SimTrace) -> Result<(), CliError> {
    fs::write(path, trace_to_csv(trace))
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))
}

/// Parse a CSV produced by this crate back into named columns.
pub fn read_csv_columns(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>), CliError> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| CliError::Config("CSV has no header row".into()))?;
    let names: Vec<String> = header.split(',').map(|s| s.trim().to_string()).collect();
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); names.len()];
    for (lineno, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != names.len() {
            return Err(CliError::Config(format!(
                "CSV row {} has {} fields, expected {}",
                lineno + 2,
                fields.len(),
                names.len()
            )));
        }
        for (col, field) in columns.iter_mut().zip(fields) {
            let v: f64 = field.trim().parse().map_err(|e| {
                CliError::Config(format!("bad number `{field}` on row {}: {e}", lineno + 2))
            })?;
            col.push(v);
        }
    }
    Ok((names, columns))
}

/// A generic small table written with the same numeric format; `text_col`
/// values go out verbatim in the last column.
pub fn write_table_csv(
    path: &Path,
    comment: &str,
    header: &[&str],
    rows: &[Vec<String>],
) -> Result<(), CliError> {
    let mut out = String::new();
    let _ = writeln!(out, "# {comment}");
    let _ = writeln!(out, "{}", header.join(","));
    for row in rows {
        let _ = writeln!(out, "{}", row.join(","));
    }
    fs::write(path, out)
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip_bitwise() {
        let values = [
            0.1,
            -0.30000000000000004,
            1.0 / 3.0,
            std::f64::consts::PI,
            1e-300,
            -1e300,
            0.0,
            f64::MIN_POSITIVE,
        ];
        for v in values {
            let parsed: f64 = format_value(v).parse().unwrap();
            assert_eq!(parsed.to_bits(), v.to_bits(), "value {v}");
        }
    }
}
