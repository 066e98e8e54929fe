//! Signal file I/O.
//!
//! Two on-disk formats carry sampled signals:
//!
//! * **binary** — magic `WFS1`, then little-endian `u32` dimension, `u32`
//!   points-per-axis, one `f64` origin per axis, `f64` grid step, then
//!   n^dim complex samples as interleaved `f64` (re, im) pairs in row-major
//!   grid order (last axis fastest). Write/read round-trips are bit-exact.
//! * **CSV** — header `t,re,im` (1-d) or `t1,t2,re,im` (2-d), one sample per
//!   row in the same row-major order. Values are printed with shortest
//!   round-trip formatting, so a write/read cycle reproduces samples and
//!   grid exactly; the reader re-infers the grid from the coordinate
//!   columns and rejects rows that do not sit on a uniform power-of-two
//!   grid.
//!
//! `read_signal` sniffs the magic bytes, so either format can be ingested
//! regardless of file extension; `write_signal` picks CSV for `.csv` paths
//! and binary otherwise.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use wfscope::{Grid, SampledSignal};

use crate::error::{CliError, Result};

pub const MAGIC: &[u8; 4] = b"WFS1";

/// Relative slack (in units of dx) when checking that CSV coordinates sit on
/// the inferred uniform grid.
const GRID_TOL: f64 = 1e-9;

// ---------------------------------------------------------------------------
// binary format

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
    path: &'a str,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8]> {
        if self.pos + n > self.bytes.len() {
            return Err(CliError::MalformedBinary {
                path: self.path.to_string(),
                offset: self.pos,
                detail: format!(
                    "truncated while reading {what}: need {n} bytes, {} remain",
                    self.bytes.len() - self.pos
                ),
            });
        }
        let out = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(out)
    }

    fn u32(&mut self, what: &str) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4, what)?.try_into().unwrap()))
    }

    fn f64(&mut self, what: &str) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8, what)?.try_into().unwrap()))
    }

    fn fail(&self, detail: String) -> CliError {
        CliError::MalformedBinary { path: self.path.to_string(), offset: self.pos, detail }
    }
}

fn parse_binary(bytes: &[u8], path: &str, label: &str) -> Result<SampledSignal> {
    let mut c = Cursor { bytes, pos: 0, path };
    let magic = c.take(4, "magic")?;
    if magic != MAGIC {
        c.pos = 0;
        return Err(c.fail(format!("bad magic {magic:?}, expected {MAGIC:?}")));
    }
    let dim = c.u32("dimension")? as usize;
    if !(1..=2).contains(&dim) {
        return Err(c.fail(format!("unsupported dimension {dim} (must be 1 or 2)")));
    }
    let n = c.u32("points per axis")? as usize;
    let mut origin = Vec::with_capacity(dim);
    for a in 0..dim {
        origin.push(c.f64(&format!("origin[{a}]"))?);
    }
    let dx = c.f64("grid step")?;
    let grid = Grid::new(dim, n, dx, origin)?;
    let count = grid.len();
    let mut samples = Vec::with_capacity(count);
    for i in 0..count {
        let re = c.f64(&format!("sample {i} re"))?;
        let im = c.f64(&format!("sample {i} im"))?;
        samples.push(Complex64::new(re, im));
    }
    if c.pos != bytes.len() {
        return Err(c.fail(format!("{} trailing bytes after the last sample", bytes.len() - c.pos)));
    }
    Ok(SampledSignal::new(grid, samples, label, None)?)
}

/// Serialize a signal in the binary container.
pub fn to_binary(f: &SampledSignal) -> Vec<u8> {
    let g = &f.grid;
    let mut out = Vec::with_capacity(4 + 8 + 8 * g.dim() + 8 + 16 * f.samples.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(g.dim() as u32).to_le_bytes());
    out.extend_from_slice(&(g.n() as u32).to_le_bytes());
    for a in 0..g.dim() {
        out.extend_from_slice(&g.origin()[a].to_le_bytes());
    }
    out.extend_from_slice(&g.dx().to_le_bytes());
    for z in &f.samples {
        out.extend_from_slice(&z.re.to_le_bytes());
        out.extend_from_slice(&z.im.to_le_bytes());
    }
    out
}

// ---------------------------------------------------------------------------
// CSV format

/// Serialize a signal as CSV with coordinate columns.
pub fn to_csv(f: &SampledSignal) -> String {
    let g = &f.grid;
    let mut out = String::new();
    out.push_str(if g.dim() == 1 { "t,re,im\n" } else { "t1,t2,re,im\n" });
    for (ix, z) in f.samples.iter().enumerate() {
        let p = g.point(ix);
        for c in &p {
            let _ = write!(out, "{c},");
        }
        let _ = writeln!(out, "{},{}", z.re, z.im);
    }
    out
}

fn csv_err(path: &str, line: u64, detail: impl Into<String>) -> CliError {
    CliError::MalformedCsv { path: path.to_string(), line, detail: detail.into() }
}

fn parse_field(path: &str, line: u64, name: &str, raw: &str) -> Result<f64> {
    raw.trim()
        .parse::<f64>()
        .map_err(|_| csv_err(path, line, format!("column {name}: {raw:?} is not a number")))
}

fn parse_csv(text: &str, path: &str, label: &str) -> Result<SampledSignal> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).flexible(true).from_reader(text.as_bytes());
    let headers = rdr
        .headers()
        .map_err(|e| csv_err(path, 1, format!("unreadable header: {e}")))?
        .clone();
    let cols: Vec<&str> = headers.iter().map(str::trim).collect();
    let dim = match cols.as_slice() {
        ["t", "re", "im"] => 1,
        ["t1", "t2", "re", "im"] => 2,
        other => {
            return Err(csv_err(
                path,
                1,
                format!("header {other:?} is neither t,re,im nor t1,t2,re,im"),
            ))
        }
    };
    let mut coords: Vec<Vec<f64>> = Vec::new();
    let mut samples: Vec<Complex64> = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            csv_err(path, line, format!("unreadable record: {e}"))
        })?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        if rec.len() != dim + 2 {
            return Err(csv_err(
                path,
                line,
                format!("expected {} fields, found {}", dim + 2, rec.len()),
            ));
        }
        let mut x = Vec::with_capacity(dim);
        for a in 0..dim {
            x.push(parse_field(path, line, cols[a], &rec[a])?);
        }
        let re = parse_field(path, line, "re", &rec[dim])?;
        let im = parse_field(path, line, "im", &rec[dim + 1])?;
        coords.push(x);
        samples.push(Complex64::new(re, im));
    }
    if coords.len() < 2 {
        return Err(csv_err(path, 1, format!("only {} data rows; a grid needs at least 16 per axis", coords.len())));
    }
    let grid = infer_grid(&coords, dim, path)?;
    Ok(SampledSignal::new(grid, samples, label, None)?)
}

/// Reconstruct the uniform grid from CSV coordinate columns and verify every
/// row sits on it (rows must appear in row-major order).
fn infer_grid(coords: &[Vec<f64>], dim: usize, path: &str) -> Result<Grid> {
    // Header is line 1, so data row i lives on line i + 2.
    let line = |i: usize| (i + 2) as u64;
    let n = match dim {
        1 => coords.len(),
        _ => {
            let n = (coords.len() as f64).sqrt().round() as usize;
            if n * n != coords.len() {
                return Err(csv_err(
                    path,
                    line(coords.len().saturating_sub(1)),
                    format!("{} rows do not form an n x n grid", coords.len()),
                ));
            }
            n
        }
    };
    // In row-major order the last axis advances fastest, so rows 0 and 1
    // differ by one step along the last axis.
    let dx = coords[1][dim - 1] - coords[0][dim - 1];
    if !(dx > 0.0) || !dx.is_finite() {
        return Err(csv_err(path, 3, format!("rows are not in increasing grid order (step {dx})")));
    }
    let origin = coords[0].clone();
    let grid = Grid::new(dim, n, dx, origin)?;
    let tol = GRID_TOL * dx;
    for (i, x) in coords.iter().enumerate() {
        let expect = grid.point(i);
        for a in 0..dim {
            if (x[a] - expect[a]).abs() > tol {
                return Err(csv_err(
                    path,
                    line(i),
                    format!(
                        "coordinate {} off the inferred grid (expected {}, step {dx})",
                        x[a], expect[a]
                    ),
                ));
            }
        }
    }
    Ok(grid)
}

// ---------------------------------------------------------------------------
// entry points

fn label_of(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "signal".into())
}

/// Ingest a signal file in either format (sniffed by magic bytes).
pub fn read_signal(path: &Path) -> Result<SampledSignal> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    let name = path.display().to_string();
    let label = label_of(path);
    if bytes.starts_with(MAGIC) {
        return parse_binary(&bytes, &name, &label);
    }
    let text = std::str::from_utf8(&bytes).map_err(|e| CliError::MalformedBinary {
        path: name.clone(),
        offset: e.valid_up_to(),
        detail: "no WFS1 magic and not UTF-8 text".into(),
    })?;
    parse_csv(text, &name, &label)
}

/// Write a signal, choosing CSV for `.csv` paths and binary otherwise.
pub fn write_signal(path: &Path, f: &SampledSignal) -> Result<()> {
    let is_csv = path.extension().map(|e| e.eq_ignore_ascii_case("csv")).unwrap_or(false);
    let bytes = if is_csv { to_csv(f).into_bytes() } else { to_binary(f) };
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}
