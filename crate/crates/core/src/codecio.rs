//! Matrix files, cut logs and simulation tables.
//!
//! Two matrix formats are read and written: the alist incidence format and a
//! dense text format (`m n` on the first line, then `m` rows of `0`/`1`).

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use crate::bscsim::SimPoint;
use crate::cutplane::CutRecord;
use crate::gf2::{BitMatrix, BitVector, Gf2Error};
use crate::rational::display_exact;

#[derive(Debug, Error)]
pub enum CodecError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unexpected end of input while reading {section}")]
    Truncated { section: &'static str },
    #[error("column lists and row lists disagree at row {row}, column {col}")]
    Inconsistent { row: usize, col: usize },
    #[error("cannot infer the matrix format of {0}; use .alist or .txt")]
    UnknownFormat(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Write(#[from] io::Error),
}

fn parse_err(line: usize, message: impl Into<String>) -> CodecError {
    CodecError::Parse {
        line,
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFormat {
    Alist,
    Dense,
}

impl MatrixFormat {
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "alist" => Some(MatrixFormat::Alist),
            "txt" => Some(MatrixFormat::Dense),
            _ => None,
        }
    }
}

/// Whitespace-separated unsigned integers tagged with their 1-based line.
struct Tokens<'a> {
    items: Vec<(&'a str, usize)>,
    pos: usize,
}

impl<'a> Tokens<'a> {
    fn new(text: &'a str) -> Self {
        let items = text
            .lines()
            .enumerate()
            .flat_map(|(i, l)| l.split_whitespace().map(move |t| (t, i + 1)))
            .collect();
        Self { items, pos: 0 }
    }

    fn next(&mut self, section: &'static str) -> Result<(usize, usize), CodecError> {
        let (tok, line) = *self.items.get(self.pos).ok_or(CodecError::Truncated { section })?;
        self.pos += 1;
        let v = tok
            .parse::<usize>()
            .map_err(|_| parse_err(line, format!("expected a nonnegative integer in {section}, found {tok:?}")))?;
        Ok((v, line))
    }

    /// Next nonzero entry; zeros are padding.
    fn next_entry(&mut self, section: &'static str) -> Result<(usize, usize), CodecError> {
        loop {
            let (v, line) = self.next(section)?;
            if v != 0 {
                return Ok((v, line));
            }
        }
    }

    fn skip_padding(&mut self) {
        while self.items.get(self.pos).is_some_and(|(t, _)| t.parse::<usize>() == Ok(0)) {
            self.pos += 1;
        }
    }
}

fn read_lists(
    tok: &mut Tokens,
    degrees: &[usize],
    bound: usize,
    section: &'static str,
) -> Result<Vec<Vec<usize>>, CodecError> {
    let mut lists = Vec::with_capacity(degrees.len());
    for &d in degrees {
        let mut list = Vec::with_capacity(d);
        for _ in 0..d {
            let (v, line) = tok.next_entry(section)?;
            if v > bound {
                return Err(parse_err(line, format!("index {v} in {section} exceeds {bound}")));
            }
            if list.contains(&(v - 1)) {
                return Err(parse_err(line, format!("index {v} repeated in {section}")));
            }
            list.push(v - 1);
        }
        tok.skip_padding();
        lists.push(list);
    }
    Ok(lists)
}

/// Parses an alist document into an `m x n` matrix.
pub fn parse_alist(text: &str) -> Result<BitMatrix, CodecError> {
    let mut tok = Tokens::new(text);
    let (n, line) = tok.next("header")?;
    let (m, _) = tok.next("header")?;
    if n == 0 || m == 0 {
        return Err(parse_err(line, "matrix dimensions must be positive"));
    }
    let (max_col, _) = tok.next("maximum degrees")?;
    let (max_row, _) = tok.next("maximum degrees")?;
    let mut read_degrees = |count: usize, max: usize, section: &'static str| -> Result<Vec<usize>, CodecError> {
        (0..count)
            .map(|_| {
                let (d, line) = tok.next(section)?;
                if d > max {
                    return Err(parse_err(line, format!("degree {d} in {section} exceeds the maximum {max}")));
                }
                Ok(d)
            })
            .collect()
    };
    let col_degs = read_degrees(n, max_col, "column degrees")?;
    let row_degs = read_degrees(m, max_row, "row degrees")?;
    let col_lists = read_lists(&mut tok, &col_degs, m, "column lists")?;
    let row_lists = read_lists(&mut tok, &row_degs, n, "row lists")?;
    if let Some((_, line)) = tok.items.get(tok.pos) {
        return Err(parse_err(*line, "trailing data after the row lists"));
    }

    let rows: Vec<BitVector> = row_lists.iter().map(|l| BitVector::from_support(n, l)).collect();
    for (col, list) in col_lists.iter().enumerate() {
        for &row in list {
            if !rows[row].get(col) {
                return Err(CodecError::Inconsistent { row, col });
            }
        }
    }
    let col_total: usize = col_degs.iter().sum();
    let row_total: usize = row_degs.iter().sum();
    if col_total != row_total {
        // some row entry has no matching column entry
        for (row, r) in rows.iter().enumerate() {
            if let Some(col) = r.iter_ones().find(|&c| !col_lists[c].contains(&row)) {
                return Err(CodecError::Inconsistent { row, col });
            }
        }
    }
    Ok(BitMatrix::new(rows)?)
}

/// Canonical alist: ascending indices, no padding.
pub fn write_alist(h: &BitMatrix) -> String {
    let col_degs = h.col_weights();
    let row_degs = h.row_weights();
    let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", h.n(), h.m());
    let _ = writeln!(
        out,
        "{} {}",
        col_degs.iter().max().copied().unwrap_or(0),
        row_degs.iter().max().copied().unwrap_or(0)
    );
    let _ = writeln!(out, "{}", join(&col_degs));
    let _ = writeln!(out, "{}", join(&row_degs));
    for j in 0..h.n() {
        let rows: Vec<usize> = (0..h.m()).filter(|&i| h.get(i, j)).map(|i| i + 1).collect();
        let _ = writeln!(out, "{}", join(&rows));
    }
    for r in h.rows() {
        let cols: Vec<usize> = r.iter_ones().map(|j| j + 1).collect();
        let _ = writeln!(out, "{}", join(&cols));
    }
    out
}

/// Parses the dense format: `m n`, then `m` rows of `0`/`1` characters
/// (spaces inside a row are ignored). Blank lines and `#` comments are skipped.
pub fn parse_dense(text: &str) -> Result<BitMatrix, CodecError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or(CodecError::Truncated { section: "header" })?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| parse_err(hline, format!("expected `m n`, found {header:?}")))?;
    let [m, n] = dims[..] else {
        return Err(parse_err(hline, format!("expected `m n`, found {header:?}")));
    };
    if m == 0 || n == 0 {
        return Err(parse_err(hline, "matrix dimensions must be positive"));
    }
    let mut rows = Vec::with_capacity(m);
    for _ in 0..m {
        let (line, text) = lines.next().ok_or(CodecError::Truncated { section: "matrix rows" })?;
        let row: BitVector = text.parse().map_err(|e: Gf2Error| parse_err(line, e.to_string()))?;
        if row.len() != n {
            return Err(parse_err(line, format!("row has {} entries, expected {n}", row.len())));
        }
        rows.push(row);
    }
    if let Some((line, _)) = lines.next() {
        return Err(parse_err(line, format!("more than {m} rows")));
    }
    Ok(BitMatrix::new(rows)?)
}

pub fn write_dense(h: &BitMatrix) -> String {
    let mut out = format!("{} {}\n", h.m(), h.n());
    for r in h.rows() {
        let _ = writeln!(out, "{r}");
    }
    out
}

pub fn parse_matrix(text: &str, format: MatrixFormat) -> Result<BitMatrix, CodecError> {
    match format {
        MatrixFormat::Alist => parse_alist(text),
        MatrixFormat::Dense => parse_dense(text),
    }
}

pub fn write_matrix(h: &BitMatrix, format: MatrixFormat) -> String {
    match format {
        MatrixFormat::Alist => write_alist(h),
        MatrixFormat::Dense => write_dense(h),
    }
}

fn resolve(path: &Path, format: Option<MatrixFormat>) -> Result<MatrixFormat, CodecError> {
    format
        .or_else(|| MatrixFormat::from_path(path))
        .ok_or_else(|| CodecError::UnknownFormat(path.display().to_string()))
}

/// Reads a matrix; the format defaults to the one implied by the extension.
pub fn read_matrix_file(path: &Path, format: Option<MatrixFormat>) -> Result<BitMatrix, CodecError> {
    let format = resolve(path, format)?;
    let text = std::fs::read_to_string(path).map_err(|source| CodecError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_matrix(&text, format)
}

pub fn write_matrix_file(path: &Path, h: &BitMatrix, format: Option<MatrixFormat>) -> Result<(), CodecError> {
    let format = resolve(path, format)?;
    std::fs::write(path, write_matrix(h, format)).map_err(|source| CodecError::Io {
        path: path.display().to_string(),
        source,
    })
}

#[derive(Serialize)]
struct CutLine {
    iteration: usize,
    d_frac_before: String,
    d_frac_after: String,
    redundant_row: String,
    target_vertex: Vec<String>,
    gamma_size_before: usize,
}

/// One JSON object per record and line.
pub fn write_cut_log<W: Write>(log: &[CutRecord], mut out: W) -> Result<(), CodecError> {
    for r in log {
        let line = CutLine {
            iteration: r.iteration,
            d_frac_before: display_exact(&r.d_frac_before),
            d_frac_after: display_exact(&r.d_frac_after),
            redundant_row: r.redundant_row.to_string(),
            target_vertex: r.target_vertex.iter().map(|x| x.to_string()).collect(),
            gamma_size_before: r.gamma_size_before,
        };
        serde_json::to_writer(&mut out, &line)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Decimal rendering with six significant digits.
pub fn six_significant(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    let decimals = (5 - exp).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // rounding can carry into a new leading digit
    if s.trim_start_matches(['-', '0', '.']).replace('.', "").len() > 6 && decimals > 0 {
        return format!("{x:.prec$}", prec = decimals - 1);
    }
    s
}

pub const SIM_CSV_HEADER: [&str; 5] = ["crossover", "trials", "block_errors", "bler", "seed"];

pub fn write_sim_csv<W: Write>(points: &[SimPoint], out: W) -> Result<(), CodecError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SIM_CSV_HEADER)?;
    for p in points {
        w.write_record([
            p.crossover.to_string(),
            p.trials.to_string(),
            p.block_errors.to_string(),
            six_significant(p.bler),
            p.seed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
