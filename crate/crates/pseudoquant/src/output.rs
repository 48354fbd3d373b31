//! Tables, CSV text and the binary snapshot layout.

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;
use pseudoquant_core::dynamics::WaveState;

/// A CSV table with `# key=value` header lines recording the parameters that
/// produced it.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub meta: Vec<(String, String)>,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table { meta: Vec::new(), headers: headers.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn meta(mut self, key: &str, value: impl ToString) -> Self {
        self.meta.push((key.to_string(), value.to_string()));
        self
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String, csv::Error> {
        let mut out = String::new();
        for (k, v) in &self.meta {
            out.push_str(&format!("# {k}={v}\n"));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
        out.push_str(&String::from_utf8(bytes).expect("CSV of UTF-8 fields"));
        Ok(out)
    }
}

/// Writes each state as one row of little-endian f64 values, real and
/// imaginary parts interleaved, with no header.
pub fn write_snapshots(path: &Path, states: &[WaveState]) -> io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for s in states {
        for z in &s.samples {
            w.write_all(&z.re.to_le_bytes())?;
            w.write_all(&z.im.to_le_bytes())?;
        }
    }
    w.flush()
}

/// Reads a snapshot file written by [`write_snapshots`] for `points` nodes.
pub fn read_snapshots(path: &Path, points: usize) -> io::Result<Vec<Vec<Complex64>>> {
    let mut bytes = Vec::new();
    File::open(path)?.read_to_end(&mut bytes)?;
    let row = 16 * points;
    if points == 0 || bytes.len() % row != 0 {
        return Err(io::Error::new(io::ErrorKind::InvalidData, "file length is not a whole number of rows"));
    }
    let value = |chunk: &[u8]| f64::from_le_bytes(chunk.try_into().expect("8 bytes"));
    Ok(bytes
        .chunks(row)
        .map(|r| r.chunks(16).map(|c| Complex64::new(value(&c[..8]), value(&c[8..]))).collect())
        .collect())
}
