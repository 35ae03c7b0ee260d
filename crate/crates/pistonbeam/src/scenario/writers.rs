//! Deterministic CSV output.
//!
//! Numbers are written in Rust's shortest round-trip decimal form, so
//! identical inputs reproduce identical bytes.

use std::io::{BufWriter, Write};
use std::path::Path;

/// Shortest decimal representation that round-trips to the same f64.
pub fn format_float(x: f64) -> String {
    format!("{x}")
}

/// Write one CSV file with the given header and numeric rows.
pub fn write_csv(
    path: &Path,
    header: &[&str],
    rows: impl Iterator<Item = Vec<f64>>,
) -> std::io::Result<()> {
    let mut out = BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        let mut first = true;
        let mut line = String::new();
        for x in row {
            if !first {
                line.push(',');
            }
            line.push_str(&format_float(x));
            first = false;
        }
        writeln!(out, "{line}")?;
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, 135.9, 1.2e-4, f64::MIN_POSITIVE] {
            let s = format_float(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn csv_bytes_are_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        let write = |name: &str| {
            let p = dir.path().join(name);
            write_csv(
                &p,
                &["a", "b"],
                (0..50).map(|i| vec![i as f64 * 0.1, (i as f64).sin()]),
            )
            .unwrap();
            std::fs::read(&p).unwrap()
        };
        assert_eq!(write("x.csv"), write("y.csv"));
    }
}
