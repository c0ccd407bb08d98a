//! Result rows and their CSV/JSON serialization.
//!
//! The CSV header is fixed:
//! `problem,n,method,q,rho,omega,IT,converged,final_res_norm_sq,cpu_mean_seconds,breakdown`.
//! Runs that hit the iteration cap render IT as `">K"` in CSV; JSON keeps IT
//! numeric (the capped state is recoverable from `converged == false` and
//! `IT == K`).

use crate::plan::OutputFormat;
use crate::HarnessError;
use kaczmarz::SolveReport;
use serde::Serialize;
use std::io::Write;
use std::path::Path;

pub const CSV_HEADER: &str =
    "problem,n,method,q,rho,omega,IT,converged,final_res_norm_sq,cpu_mean_seconds,breakdown";

/// One row of a results table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub problem: String,
    pub n: usize,
    pub method: String,
    pub q: u32,
    pub rho: f64,
    pub omega: f64,
    #[serde(rename = "IT")]
    pub it: usize,
    pub converged: bool,
    pub final_res_norm_sq: f64,
    pub cpu_mean_seconds: f64,
    pub breakdown: bool,
    /// IT hit the cap; rendered as ">IT" in CSV. Not a column of its own.
    #[serde(skip)]
    pub capped: bool,
}

/// Deterministic table order: (problem, n, method, q, rho, omega).
pub fn row_order(a: &ResultRow, b: &ResultRow) -> std::cmp::Ordering {
    (&a.problem, a.n, &a.method, a.q)
        .cmp(&(&b.problem, b.n, &b.method, b.q))
        .then(a.rho.total_cmp(&b.rho))
        .then(a.omega.total_cmp(&b.omega))
}

pub fn sort_rows(rows: &mut [ResultRow]) {
    rows.sort_by(row_order);
}

impl ResultRow {
    fn it_rendered(&self) -> String {
        if self.capped {
            format!(">{}", self.it)
        } else {
            self.it.to_string()
        }
    }

    fn to_csv_record(&self) -> Vec<String> {
        vec![
            self.problem.clone(),
            self.n.to_string(),
            self.method.clone(),
            self.q.to_string(),
            self.rho.to_string(),
            self.omega.to_string(),
            self.it_rendered(),
            self.converged.to_string(),
            self.final_res_norm_sq.to_string(),
            self.cpu_mean_seconds.to_string(),
            self.breakdown.to_string(),
        ]
    }

    /// Parse one CSV record (inverse of `to_csv_record`).
    pub fn from_csv_record(fields: &[String]) -> Result<ResultRow, HarnessError> {
        let bad = |what: &str| HarnessError::Config(format!("bad results row: {what}"));
        if fields.len() != 11 {
            return Err(bad("expected 11 fields"));
        }
        let (it, capped) = match fields[6].strip_prefix('>') {
            Some(rest) => (rest.parse().map_err(|_| bad("bad IT"))?, true),
            None => (fields[6].parse().map_err(|_| bad("bad IT"))?, false),
        };
        Ok(ResultRow {
            problem: fields[0].clone(),
            n: fields[1].parse().map_err(|_| bad("bad n"))?,
            method: fields[2].clone(),
            q: fields[3].parse().map_err(|_| bad("bad q"))?,
            rho: fields[4].parse().map_err(|_| bad("bad rho"))?,
            omega: fields[5].parse().map_err(|_| bad("bad omega"))?,
            it,
            converged: fields[7].parse().map_err(|_| bad("bad converged"))?,
            final_res_norm_sq: fields[8].parse().map_err(|_| bad("bad residual"))?,
            cpu_mean_seconds: fields[9].parse().map_err(|_| bad("bad cpu"))?,
            breakdown: fields[10].parse().map_err(|_| bad("bad breakdown"))?,
            capped,
        })
    }
}

/// Write rows in the requested format.
pub fn write_results<W: Write>(
    rows: &[ResultRow],
    format: OutputFormat,
    w: &mut W,
) -> Result<(), HarnessError> {
    match format {
        OutputFormat::Csv => {
            let mut writer = csv::Writer::from_writer(w);
            writer
                .write_record(CSV_HEADER.split(','))
                .map_err(csv_io)?;
            for row in rows {
                writer.write_record(row.to_csv_record()).map_err(csv_io)?;
            }
            writer.flush()?;
        }
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut *w, rows)
                .map_err(|e| HarnessError::Io(e.into()))?;
            writeln!(w)?;
        }
    }
    Ok(())
}

/// Write rows to a file (creates/truncates).
pub fn emit_results(
    rows: &[ResultRow],
    format: OutputFormat,
    path: &Path,
) -> Result<(), HarnessError> {
    let mut file = std::fs::File::create(path)?;
    write_results(rows, format, &mut file)
}

/// Read rows back from a results CSV.
pub fn read_results_csv(path: &Path) -> Result<Vec<ResultRow>, HarnessError> {
    let mut reader = csv::Reader::from_path(path).map_err(csv_io)?;
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_io)?;
        let fields: Vec<String> = record.iter().map(str::to_string).collect();
        rows.push(ResultRow::from_csv_record(&fields)?);
    }
    Ok(rows)
}

/// Write a residual-history CSV (`iter,res_norm_sq`, one row per iteration)
/// for plotting residual-versus-IT curves.
pub fn write_history<W: Write>(report: &SolveReport, w: &mut W) -> Result<(), HarnessError> {
    writeln!(w, "iter,res_norm_sq")?;
    for (k, rn2) in &report.history {
        writeln!(w, "{k},{rn2}")?;
    }
    Ok(())
}

pub fn emit_history(report: &SolveReport, path: &Path) -> Result<(), HarnessError> {
    let mut file = std::fs::File::create(path)?;
    write_history(report, &mut file)
}

fn csv_io(e: csv::Error) -> HarnessError {
    HarnessError::Io(std::io::Error::other(e))
}
