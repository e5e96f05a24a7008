//! Reading and writing workload matrices.
//!
//! The on-disk format is plain CSV: M+1 comma-separated rows of N decimal
//! values, row i = 0 first. A comment line `# tandem-workload M=<m> N=<n>`
//! may precede the data; when present its declared shape must match the
//! matrix. Other `#` lines and blank lines are ignored.

use std::fs;
use std::io;
use std::path::Path;

use thiserror::Error;

use crate::time::TimeValue;
use crate::workload::{Workload, WorkloadError};

const HEADER_TAG: &str = "tandem-workload";

#[derive(Debug, Error)]
pub enum WorkloadFileError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}, field {field}: cannot parse {text:?} as a time value")]
    BadValue {
        line: usize,
        field: usize,
        text: String,
    },
    #[error("line {line}: malformed header {text:?} (expected # tandem-workload M=<m> N=<n>)")]
    BadHeader { line: usize, text: String },
    #[error("header declares M={header_m} N={header_n} but the matrix is M={got_m} N={got_n}")]
    HeaderShapeMismatch {
        header_m: usize,
        header_n: usize,
        got_m: usize,
        got_n: usize,
    },
    #[error(transparent)]
    Invalid(#[from] WorkloadError),
}

fn parse_header(line_no: usize, line: &str) -> Result<(usize, usize), WorkloadFileError> {
    let bad = || WorkloadFileError::BadHeader {
        line: line_no,
        text: line.to_string(),
    };
    let rest = line
        .trim_start_matches('#')
        .trim()
        .strip_prefix(HEADER_TAG)
        .ok_or_else(bad)?;
    let mut m = None;
    let mut n = None;
    for token in rest.split_whitespace() {
        if let Some(v) = token.strip_prefix("M=") {
            m = Some(v.parse().map_err(|_| bad())?);
        } else if let Some(v) = token.strip_prefix("N=") {
            n = Some(v.parse().map_err(|_| bad())?);
        } else {
            return Err(bad());
        }
    }
    match (m, n) {
        (Some(m), Some(n)) => Ok((m, n)),
        _ => Err(bad()),
    }
}

/// Parses a workload from CSV text. Validation errors name the offending
/// row and 1-based column.
pub fn parse_workload<T: TimeValue>(text: &str) -> Result<Workload<T>, WorkloadFileError> {
    let mut header: Option<(usize, usize)> = None;
    let mut rows: Vec<Vec<T>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('#') {
            if line.trim_start_matches('#').trim().starts_with(HEADER_TAG) {
                header = Some(parse_header(line_no, line)?);
            }
            continue;
        }
        let row = line
            .split(',')
            .enumerate()
            .map(|(f, field)| {
                field.trim().parse::<T>().map_err(|_| {
                    WorkloadFileError::BadValue {
                        line: line_no,
                        field: f + 1,
                        text: field.trim().to_string(),
                    }
                })
            })
            .collect::<Result<_, _>>()?;
        rows.push(row);
    }
    let w = Workload::from_rows(rows)?;
    if let Some((hm, hn)) = header {
        if hm != w.num_servers() || hn != w.num_customers() {
            return Err(WorkloadFileError::HeaderShapeMismatch {
                header_m: hm,
                header_n: hn,
                got_m: w.num_servers(),
                got_n: w.num_customers(),
            });
        }
    }
    Ok(w)
}

/// Renders a workload in the file format, header line included.
pub fn format_workload<T: TimeValue>(w: &Workload<T>) -> String {
    let mut out = format!(
        "# {HEADER_TAG} M={} N={}\n",
        w.num_servers(),
        w.num_customers()
    );
    for row in w.rows() {
        let mut first = true;
        for v in row {
            if !first {
                out.push(',');
            }
            out.push_str(&v.to_string());
            first = false;
        }
        out.push('\n');
    }
    out
}

pub fn read_workload<T: TimeValue>(path: &Path) -> Result<Workload<T>, WorkloadFileError> {
    parse_workload(&fs::read_to_string(path)?)
}

pub fn write_workload<T: TimeValue>(
    w: &Workload<T>,
    path: &Path,
) -> Result<(), WorkloadFileError> {
    Ok(fs::write(path, format_workload(w))?)
}
