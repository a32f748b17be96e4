//! File formats: CSV series, schema-versioned JSON and flat binary snapshots.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

use crate::spectral::{Grid1D, PhysicalField};

pub const SCHEMA_VERSION: u32 = 1;
pub const SNAPSHOT_MAGIC: [u8; 8] = *b"DBOSNAP\0";
pub const SNAPSHOT_VERSION: u64 = 1;

/// Seventeen significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// CSV table with a fixed header; cells are kept as strings so the caller
/// decides the float format once, through [`fmt_f64`].
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        CsvTable {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_floats(&mut self, row: &[f64]) {
        self.push(row.iter().map(|v| fmt_f64(*v)).collect());
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.header.len(), "row width must match header");
        self.rows.push(row);
    }

    pub fn write(&self, path: &Path) -> io::Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_path(path)?;
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()
    }

    pub fn read(path: &Path) -> io::Result<Self> {
        let mut r = csv::Reader::from_path(path)?;
        let header = r.headers()?.iter().map(str::to_string).collect();
        let rows = r
            .records()
            .map(|rec| rec.map(|r| r.iter().map(str::to_string).collect()))
            .collect::<Result<_, _>>()?;
        Ok(CsvTable { header, rows })
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }
}

#[derive(Serialize)]
struct Versioned<'a, T: Serialize> {
    schema_version: u32,
    kind: &'a str,
    data: &'a T,
}

/// Pretty JSON `{schema_version, kind, data}`.
pub fn write_json<T: Serialize>(path: &Path, kind: &str, body: &T) -> io::Result<()> {
    let doc = Versioned {
        schema_version: SCHEMA_VERSION,
        kind,
        data: body,
    };
    let mut text = serde_json::to_string_pretty(&doc).map_err(io::Error::other)?;
    text.push('\n');
    fs::write(path, text)
}

pub fn write_snapshot(path: &Path, u: &PhysicalField) -> io::Result<()> {
    let grid = u.grid();
    let mut buf = Vec::with_capacity(32 + 8 * grid.n_points());
    buf.extend_from_slice(&SNAPSHOT_MAGIC);
    buf.extend_from_slice(&SNAPSHOT_VERSION.to_le_bytes());
    buf.extend_from_slice(&(grid.n_points() as u64).to_le_bytes());
    buf.extend_from_slice(&grid.half_length().to_le_bytes());
    for v in u.samples() {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    let mut f = fs::File::create(path)?;
    f.write_all(&buf)
}

pub fn read_snapshot(path: &Path) -> io::Result<PhysicalField> {
    let bytes = fs::read(path)?;
    let bad = |msg: &str| io::Error::new(io::ErrorKind::InvalidData, msg.to_string());
    if bytes.len() < 32 || bytes[..8] != SNAPSHOT_MAGIC {
        return Err(bad("not a snapshot file"));
    }
    let word = |i: usize| <[u8; 8]>::try_from(&bytes[8 * i..8 * i + 8]).expect("eight bytes");
    if u64::from_le_bytes(word(1)) != SNAPSHOT_VERSION {
        return Err(bad("unsupported snapshot version"));
    }
    let n = u64::from_le_bytes(word(2)) as usize;
    let half_length = f64::from_le_bytes(word(3));
    if bytes.len() != 32 + 8 * n {
        return Err(bad("truncated snapshot"));
    }
    let samples = (0..n).map(|j| f64::from_le_bytes(word(4 + j))).collect();
    let grid = Grid1D::new(n, half_length).map_err(|e| bad(&e.to_string()))?;
    PhysicalField::new(&grid, samples).map_err(|e| bad(&e.to_string()))
}

/// Samples from a snapshot, or from a `.json` file holding a bare array.
pub fn read_samples(path: &Path) -> io::Result<Vec<f64>> {
    if path.extension().is_some_and(|e| e == "json") {
        let text = fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))
    } else {
        Ok(read_snapshot(path)?.into_samples())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_through_text() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 6.02e23, std::f64::consts::PI] {
            assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(fmt_f64(1.0), "1.0000000000000000e0");
    }
}
