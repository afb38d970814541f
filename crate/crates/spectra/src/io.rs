//! Matrix output: CSV (row-major, full precision) and a little-endian binary
//! dump of packed lower triangles.

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::Path;

use spectra_core::fem::SymMatrix;

/// Kind byte in a binary dump header.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum MatrixKind {
    Stiffness = 0,
    Mass = 1,
    Boundary = 2,
    Gram = 3,
}

impl MatrixKind {
    pub fn from_byte(b: u8) -> Option<Self> {
        match b {
            0 => Some(Self::Stiffness),
            1 => Some(Self::Mass),
            2 => Some(Self::Boundary),
            3 => Some(Self::Gram),
            _ => None,
        }
    }
}

/// Writes a row-major `rows x cols` matrix, one row per line. Values use the
/// shortest representation that round-trips.
pub fn write_csv<W: Write>(mut w: W, data: &[f64], cols: usize) -> io::Result<()> {
    for row in data.chunks(cols) {
        let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    w.flush()
}

pub fn write_csv_file(path: &Path, data: &[f64], cols: usize) -> io::Result<()> {
    write_csv(BufWriter::new(File::create(path)?), data, cols)
}

/// Parses CSV written by [`write_csv`] into `(data, cols)`.
pub fn read_csv(text: &str) -> io::Result<(Vec<f64>, usize)> {
    let mut data = Vec::new();
    let mut cols = 0;
    for (n, line) in text.lines().filter(|l| !l.trim().is_empty()).enumerate() {
        let row = line
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, format!("line {}: {e}", n + 1)))?;
        if n == 0 {
            cols = row.len();
        } else if row.len() != cols {
            return Err(io::Error::new(
                io::ErrorKind::InvalidData,
                format!("line {} has {} columns, expected {cols}", n + 1, row.len()),
            ));
        }
        data.extend(row);
    }
    Ok((data, cols))
}

/// Header `{order: u32, kind: u8}` followed by the packed lower triangle,
/// all little-endian.
pub fn write_dump<W: Write>(mut w: W, kind: MatrixKind, m: &SymMatrix) -> io::Result<()> {
    let order = u32::try_from(m.order).map_err(|_| io::Error::new(io::ErrorKind::InvalidInput, "order exceeds u32"))?;
    w.write_all(&order.to_le_bytes())?;
    w.write_all(&[kind as u8])?;
    for v in &m.entries {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()
}

/// Reads one matrix written by [`write_dump`].
pub fn read_dump<R: Read>(mut r: R) -> io::Result<(MatrixKind, SymMatrix)> {
    let mut head = [0u8; 5];
    r.read_exact(&mut head)?;
    let order = u32::from_le_bytes([head[0], head[1], head[2], head[3]]) as usize;
    let kind = MatrixKind::from_byte(head[4])
        .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidData, format!("unknown matrix kind {}", head[4])))?;
    let mut entries = Vec::with_capacity(order * (order + 1) / 2);
    let mut buf = [0u8; 8];
    for _ in 0..order * (order + 1) / 2 {
        r.read_exact(&mut buf)?;
        entries.push(f64::from_le_bytes(buf));
    }
    let m = SymMatrix::from_lower(order, entries).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e.to_string()))?;
    Ok((kind, m))
}
