//! Coefficient files and CSV output.
//!
//! Plain coefficient file:
//! `{ "beta": real, "terms": [ { "j": int, "re": real, "im": real } ] }`,
//! terms sorted by `j` on write; readers accept any order and reject `j = 0`.
//!
//! Oscillatory coefficient file adds the exact rational frequency:
//! `{ "beta": real, "terms": [ { "alpha": [num, den], "j": int, "re": real, "im": real } ] }`.

use crate::error::{CoreError, Result};
use crate::freq::Frequency;
use crate::matrix::MatrixOscSeries;
use crate::osc::OscSeries;
use crate::series::RationalSeries;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path;

#[derive(Serialize, Deserialize)]
struct PlainTerm {
    j: i64,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct PlainFile {
    beta: f64,
    terms: Vec<PlainTerm>,
}

#[derive(Serialize, Deserialize)]
struct OscTerm {
    alpha: [i64; 2],
    j: i64,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct OscFile {
    beta: f64,
    terms: Vec<OscTerm>,
}

/// Write a plain coefficient file, terms sorted by index.
pub fn write_series(path: &Path, s: &RationalSeries) -> Result<()> {
    let file = PlainFile {
        beta: s.beta(),
        terms: s
            .terms()
            .map(|(j, c)| PlainTerm {
                j,
                re: c.re,
                im: c.im,
            })
            .collect(),
    };
    let mut out = std::fs::File::create(path)?;
    serde_json::to_writer_pretty(&mut out, &file)?;
    out.write_all(b"\n")?;
    Ok(())
}

/// Read a plain coefficient file; rejects `j = 0` entries.
pub fn read_series(path: &Path) -> Result<RationalSeries> {
    let data = std::fs::read_to_string(path)?;
    let file: PlainFile = serde_json::from_str(&data)?;
    let mut s = RationalSeries::new(file.beta)?;
    for t in file.terms {
        if t.j == 0 {
            return Err(CoreError::CoefficientFile(format!(
                "{}: index 0 is not a basis element",
                path.display()
            )));
        }
        s.add_term(t.j, Complex64::new(t.re, t.im));
    }
    Ok(s)
}

fn freq_to_pair(alpha: Frequency) -> Result<[i64; 2]> {
    let num = i64::try_from(alpha.numerator());
    let den = i64::try_from(alpha.denominator());
    match (num, den) {
        (Ok(n), Ok(d)) => Ok([n, d]),
        _ => Err(CoreError::InvalidParameter(format!(
            "frequency {alpha} too large for the file format"
        ))),
    }
}

/// Write an oscillatory coefficient file, terms sorted by `(alpha, j)`.
pub fn write_osc_series(path: &Path, s: &OscSeries) -> Result<()> {
    let mut terms = Vec::new();
    for (alpha, g) in s.groups() {
        let pair = freq_to_pair(alpha)?;
        for (j, c) in g.terms() {
            terms.push(OscTerm {
                alpha: pair,
                j,
                re: c.re,
                im: c.im,
            });
        }
    }
    let file = OscFile {
        beta: s.beta(),
        terms,
    };
    let mut out = std::fs::File::create(path)?;
    serde_json::to_writer_pretty(&mut out, &file)?;
    out.write_all(b"\n")?;
    Ok(())
}

/// Read an oscillatory coefficient file; rejects `j = 0` and non-positive
/// denominators.
pub fn read_osc_series(path: &Path) -> Result<OscSeries> {
    let data = std::fs::read_to_string(path)?;
    let file: OscFile = serde_json::from_str(&data)?;
    let mut s = OscSeries::new(file.beta)?;
    for t in file.terms {
        if t.j == 0 {
            return Err(CoreError::CoefficientFile(format!(
                "{}: index 0 is not a basis element",
                path.display()
            )));
        }
        let alpha = Frequency::new(t.alpha[0], t.alpha[1]).map_err(|_| {
            CoreError::CoefficientFile(format!(
                "{}: invalid frequency {}/{}",
                path.display(),
                t.alpha[0],
                t.alpha[1]
            ))
        })?;
        s.add_term(alpha, t.j, Complex64::new(t.re, t.im));
    }
    Ok(s)
}

/// Entry-file suffix for a matrix solution, 1-based: `e{row}{col}`.
fn entry_path(prefix: &Path, row: usize, col: usize) -> std::path::PathBuf {
    let stem = prefix.to_string_lossy();
    std::path::PathBuf::from(format!("{}.e{}{}.json", stem, row + 1, col + 1))
}

/// Write each entry of a matrix as its own oscillatory coefficient file
/// under `prefix.e{row}{col}.json`.
pub fn write_matrix(prefix: &Path, m: &MatrixOscSeries) -> Result<Vec<std::path::PathBuf>> {
    let mut written = Vec::new();
    for r in 0..m.dim() {
        for c in 0..m.dim() {
            let p = entry_path(prefix, r, c);
            write_osc_series(&p, m.entry(r, c))?;
            written.push(p);
        }
    }
    Ok(written)
}

/// Read a matrix written by [`write_matrix`].
pub fn read_matrix(prefix: &Path, dim: usize) -> Result<MatrixOscSeries> {
    let mut entries = Vec::with_capacity(dim * dim);
    for r in 0..dim {
        for c in 0..dim {
            entries.push(read_osc_series(&entry_path(prefix, r, c))?);
        }
    }
    MatrixOscSeries::from_entries(dim, entries)
}

/// Write a CSV file; every numeric cell uses the shortest representation
/// that round-trips.
pub fn write_csv(path: &Path, header: &str, rows: &[Vec<f64>]) -> Result<()> {
    let mut out = String::new();
    out.push_str(header);
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Write a GMRES convergence log: `iter,residual`, one line per iteration.
pub fn write_convergence_log(path: &Path, residuals: &[f64]) -> Result<()> {
    let rows: Vec<Vec<f64>> = residuals
        .iter()
        .enumerate()
        .map(|(i, &r)| vec![(i + 1) as f64, r])
        .collect();
    write_csv(path, "iter,residual", &rows)
}
