//! Matrix-set JSON files and CSV tables.
//!
//! A matrix set is stored as `{"dim": d, "matrices": [[[row], …], …]}` with
//! row-major `d×d` arrays of numbers.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::Error;
use crate::linalg::{Matrix, MatrixSet};
use crate::lipschitz::{Example1Table, Verdict, VerificationReport};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },

    #[error("invalid matrix set: {0}")]
    Invalid(String),

    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Serialize, Deserialize)]
struct MatrixSetFile {
    dim: usize,
    matrices: Vec<Vec<Vec<f64>>>,
}

pub fn parse_matrix_set(text: &str) -> Result<MatrixSet, FormatError> {
    let file: MatrixSetFile = serde_json::from_str(text).map_err(|e| FormatError::Json {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if file.dim == 0 {
        return Err(FormatError::Invalid("dim must be positive".into()));
    }
    let mut members = Vec::with_capacity(file.matrices.len());
    for (k, rows) in file.matrices.iter().enumerate() {
        if rows.len() != file.dim || rows.iter().any(|r| r.len() != file.dim) {
            return Err(FormatError::Invalid(format!("matrix {k} is not {d}×{d}", d = file.dim)));
        }
        members.push(Matrix::from_rows(rows).map_err(|e| FormatError::Invalid(format!("matrix {k}: {e}")))?);
    }
    MatrixSet::new(members).map_err(|e: Error| FormatError::Invalid(e.to_string()))
}

pub fn matrix_set_to_json(s: &MatrixSet) -> String {
    let file = MatrixSetFile { dim: s.dim(), matrices: s.iter().map(Matrix::rows).collect() };
    serde_json::to_string(&file).expect("finite floats serialize")
}

pub fn read_matrix_set(path: &Path) -> Result<MatrixSet, FormatError> {
    let text =
        fs::read_to_string(path).map_err(|source| FormatError::Io { path: path.display().to_string(), source })?;
    parse_matrix_set(&text)
}

pub fn write_matrix_set(path: &Path, s: &MatrixSet) -> Result<(), FormatError> {
    fs::write(path, matrix_set_to_json(s))
        .map_err(|source| FormatError::Io { path: path.display().to_string(), source })
}

fn finish(writer: csv::Writer<Vec<u8>>) -> Result<String, FormatError> {
    let bytes = writer.into_inner().map_err(|e| FormatError::Csv(e.into_error().into()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// One row per trial: `seed,H,bracket_A,bracket_B,nu,lhs_lower,rhs,verdict`.
pub fn trials_csv(report: &VerificationReport) -> Result<String, FormatError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["seed", "H", "bracket_A", "bracket_B", "nu", "lhs_lower", "rhs", "verdict"])?;
    for t in &report.trials {
        w.write_record([
            t.seed.to_string(),
            t.h.to_string(),
            format!("[{}, {}]", t.bracket_a.lo, t.bracket_a.hi),
            format!("[{}, {}]", t.bracket_b.lo, t.bracket_b.hi),
            t.nu.to_string(),
            t.lhs_lower.to_string(),
            t.rhs.to_string(),
            match t.verdict {
                Verdict::Pass => "pass".to_string(),
                Verdict::Fail => "fail".to_string(),
            },
        ])?;
    }
    finish(w)
}

/// `epsilon,rho_exact,rho_computed,H,ratio`.
pub fn example1_csv(table: &Example1Table) -> Result<String, FormatError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["epsilon", "rho_exact", "rho_computed", "H", "ratio"])?;
    for r in &table.rows {
        w.write_record([
            r.epsilon.to_string(),
            r.rho_exact.to_string(),
            r.rho_computed.to_string(),
            r.h.to_string(),
            r.ratio.to_string(),
        ])?;
    }
    finish(w)
}

/// Generic header-plus-rows table.
pub fn table_csv<S: AsRef<str>>(header: &[&str], rows: &[Vec<S>]) -> Result<String, FormatError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(|c| c.as_ref()))?;
    }
    finish(w)
}
