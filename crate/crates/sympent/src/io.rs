//! Plain-text complex matrix files.
//!
//! ```text
//! complex-matrix <rows> <cols>
//! <re> <im>
//! ...
//! ```
//! Entries are row-major, one `re im` pair per line, printed with 17
//! significant digits so that every `f64` survives a round trip.

use std::fmt::Write as _;
use std::path::Path;

use sympent_core::{c64, ComplexMatrix};

#[derive(Debug)]
pub enum MatrixFileError {
    Io(std::io::Error),
    Format(String),
}

impl std::fmt::Display for MatrixFileError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MatrixFileError::Io(e) => write!(f, "{e}"),
            MatrixFileError::Format(s) => write!(f, "bad matrix file: {s}"),
        }
    }
}

impl std::error::Error for MatrixFileError {}

impl From<std::io::Error> for MatrixFileError {
    fn from(e: std::io::Error) -> Self {
        MatrixFileError::Io(e)
    }
}

pub fn format_matrix(m: &ComplexMatrix) -> String {
    let mut s = format!("complex-matrix {} {}\n", m.rows(), m.cols());
    for z in m.data() {
        let _ = writeln!(s, "{:.16e} {:.16e}", z.re, z.im);
    }
    s
}

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix, MatrixFileError> {
    let bad = |s: &str| MatrixFileError::Format(s.to_string());
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| bad("empty input"))?;
    let mut h = header.split_whitespace();
    if h.next() != Some("complex-matrix") {
        return Err(bad("missing complex-matrix header"));
    }
    let mut dim = || -> Result<usize, MatrixFileError> {
        h.next().and_then(|t| t.parse().ok()).ok_or_else(|| bad("bad dimensions in header"))
    };
    let (rows, cols) = (dim()?, dim()?);
    let nums: Vec<f64> = lines
        .flat_map(str::split_whitespace)
        .map(|t| t.parse::<f64>().map_err(|_| bad(&format!("not a number: {t}"))))
        .collect::<Result<_, _>>()?;
    if nums.len() != 2 * rows * cols {
        return Err(bad(&format!("expected {} numbers, found {}", 2 * rows * cols, nums.len())));
    }
    let data = nums.chunks_exact(2).map(|p| c64(p[0], p[1])).collect();
    ComplexMatrix::from_vec(rows, cols, data).map_err(|e| bad(&e.to_string()))
}

pub fn write_matrix(path: &Path, m: &ComplexMatrix) -> Result<(), MatrixFileError> {
    std::fs::write(path, format_matrix(m))?;
    Ok(())
}

pub fn read_matrix(path: &Path) -> Result<ComplexMatrix, MatrixFileError> {
    parse_matrix(&std::fs::read_to_string(path)?)
}
