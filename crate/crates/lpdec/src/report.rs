//! CSV output for experiment statistics.
//!
//! Columns, in order: `sweep_var, sweep_value, trials, avg_iter, max_iter,
//! avg_final_pc_constraints, max_final_pc_constraints, wer, wer_ci95,
//! ml_lower_bound, avg_decode_ms, variant`. Floats carry 6 significant
//! digits; `avg_decode_ms` is empty when timing was off.

use std::io;

use thiserror::Error;

use crate::harness::{ExperimentStats, StatsRow};

pub const COLUMNS: [&str; 12] = [
    "sweep_var",
    "sweep_value",
    "trials",
    "avg_iter",
    "max_iter",
    "avg_final_pc_constraints",
    "max_final_pc_constraints",
    "wer",
    "wer_ci95",
    "ml_lower_bound",
    "avg_decode_ms",
    "variant",
];

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("nothing to write: the statistics table is empty")]
    Empty,
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("row {row}: {message}")]
    Parse { row: usize, message: String },
}

/// `v` rounded to 6 significant digits, printed in the shortest form that
/// reads back to the rounded value.
pub fn format_sig6(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    let rounded: f64 = format!("{v:.5e}").parse().expect("formatted float parses");
    let rounded = if rounded == 0.0 { 0.0 } else { rounded };
    rounded.to_string()
}

fn record(row: &StatsRow) -> [String; 12] {
    [
        row.sweep_var.name().to_string(),
        format_sig6(row.sweep_value),
        row.trials.to_string(),
        format_sig6(row.avg_iter),
        row.max_iter.to_string(),
        format_sig6(row.avg_final_pc_constraints),
        row.max_final_pc_constraints.to_string(),
        format_sig6(row.wer),
        format_sig6(row.wer_ci95),
        format_sig6(row.ml_lower_bound),
        row.avg_decode_ms.map(format_sig6).unwrap_or_default(),
        row.variant.to_string(),
    ]
}

pub fn write_csv<W: io::Write>(stats: &ExperimentStats, out: W) -> Result<(), ReportError> {
    if stats.rows.is_empty() {
        return Err(ReportError::Empty);
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS)?;
    for row in &stats.rows {
        w.write_record(record(row))?;
    }
    w.flush()?;
    Ok(())
}

pub fn csv_string(stats: &ExperimentStats) -> Result<String, ReportError> {
    let mut buf = Vec::new();
    write_csv(stats, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

/// One parsed data row.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub sweep_var: String,
    pub sweep_value: f64,
    pub trials: usize,
    pub avg_iter: f64,
    pub max_iter: usize,
    pub avg_final_pc_constraints: f64,
    pub max_final_pc_constraints: usize,
    pub wer: f64,
    pub wer_ci95: f64,
    pub ml_lower_bound: f64,
    pub avg_decode_ms: Option<f64>,
    pub variant: String,
}

pub fn read_csv<R: io::Read>(input: R) -> Result<Vec<CsvRow>, ReportError> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != COLUMNS {
        return Err(ReportError::Parse {
            row: 0,
            message: format!("unexpected header {header:?}"),
        });
    }
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let row = i + 1;
        let err = |col: usize, e: &dyn std::fmt::Display| ReportError::Parse {
            row,
            message: format!("{}: {e}", COLUMNS[col]),
        };
        let f = |col: usize| rec[col].parse::<f64>().map_err(|e| err(col, &e));
        let u = |col: usize| rec[col].parse::<usize>().map_err(|e| err(col, &e));
        rows.push(CsvRow {
            sweep_var: rec[0].to_string(),
            sweep_value: f(1)?,
            trials: u(2)?,
            avg_iter: f(3)?,
            max_iter: u(4)?,
            avg_final_pc_constraints: f(5)?,
            max_final_pc_constraints: u(6)?,
            wer: f(7)?,
            wer_ci95: f(8)?,
            ml_lower_bound: f(9)?,
            avg_decode_ms: if rec[10].is_empty() { None } else { Some(f(10)?) },
            variant: rec[11].to_string(),
        });
    }
    Ok(rows)
}
