//! CSV and JSON-lines emission of sweep rows.
//!
//! CSV has one header row and a fixed column order; numbers carry 17
//! significant digits so a parse round-trips bit-exactly.

use crate::sweep::SweepRow;
use anyhow::{Context, Result};
use std::path::Path;
use std::str::FromStr;

pub const CSV_COLUMNS: [&str; 14] = [
    "quantity",
    "kind",
    "n1",
    "n2",
    "r",
    "T1",
    "T2",
    "d",
    "epsilon",
    "value",
    "success_probability",
    "imag_residue",
    "path",
    "error",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Jsonl,
}

impl FromStr for Format {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "jsonl" => Ok(Format::Jsonl),
            other => anyhow::bail!("unknown format '{other}' (expected csv or jsonl)"),
        }
    }
}

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

pub fn write_rows(path: &Path, rows: &[SweepRow], format: Format) -> Result<()> {
    match format {
        Format::Csv => write_csv(path, rows),
        Format::Jsonl => write_jsonl(path, rows),
    }
}

pub fn write_csv(path: &Path, rows: &[SweepRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)
        .with_context(|| format!("creating {}", path.display()))?;
    w.write_record(CSV_COLUMNS)?;
    for row in rows {
        w.write_record([
            row.quantity.clone(),
            row.kind.clone(),
            row.n1.to_string(),
            row.n2.to_string(),
            fmt_f64(row.r),
            fmt_f64(row.t1),
            fmt_f64(row.t2),
            fmt_f64(row.d),
            fmt_f64(row.epsilon),
            fmt_opt(row.value),
            fmt_opt(row.success_probability),
            fmt_opt(row.imag_residue),
            row.path.clone().unwrap_or_default(),
            row.error.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_jsonl(path: &Path, rows: &[SweepRow]) -> Result<()> {
    let mut out = String::new();
    for row in rows {
        out.push_str(&serde_json::to_string(row)?);
        out.push('\n');
    }
    std::fs::write(path, out).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// Parses a file produced by [`write_csv`] back into rows.
pub fn read_csv(path: &Path) -> Result<Vec<SweepRow>> {
    let mut r = csv::Reader::from_path(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let mut rows = Vec::new();
    for record in r.records() {
        let rec = record?;
        let opt_f64 = |i: usize| -> Result<Option<f64>> {
            let s = rec.get(i).unwrap_or("");
            if s.is_empty() {
                Ok(None)
            } else {
                Ok(Some(s.parse::<f64>().context("float column")?))
            }
        };
        let opt_str = |i: usize| -> Option<String> {
            let s = rec.get(i).unwrap_or("");
            if s.is_empty() {
                None
            } else {
                Some(s.to_string())
            }
        };
        rows.push(SweepRow {
            quantity: rec.get(0).unwrap_or("").to_string(),
            kind: rec.get(1).unwrap_or("").to_string(),
            n1: rec.get(2).unwrap_or("0").parse()?,
            n2: rec.get(3).unwrap_or("0").parse()?,
            r: rec.get(4).unwrap_or("0").parse()?,
            t1: rec.get(5).unwrap_or("0").parse()?,
            t2: rec.get(6).unwrap_or("0").parse()?,
            d: rec.get(7).unwrap_or("0").parse()?,
            epsilon: rec.get(8).unwrap_or("0").parse()?,
            value: opt_f64(9)?,
            success_probability: opt_f64(10)?,
            imag_residue: opt_f64(11)?,
            path: opt_str(12),
            error: opt_str(13),
        });
    }
    Ok(rows)
}
