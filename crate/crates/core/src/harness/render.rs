//! Text renderings of result tables: an aligned plain table, CSV and JSON.
//!
//! Plain tables print proportions with 3 decimals and p-values with 4. CSV
//! output is all numeric at full precision, so it parses back with
//! [`crate::dataset::parse_matrix`].

use std::fmt::Write as _;
use std::str::FromStr;

use serde_json::json;

use crate::error::{Error, Result};
use crate::pipeline::{MethodOutcome, Verdict};

use super::experiment::RejectionTable;
use super::runtime::RuntimeTable;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum OutputFormat {
    #[default]
    Plain,
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" | "plain-table" => Ok(Self::Plain),
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(Error::InvalidArgument(format!("unknown output format '{other}'; expected plain, csv or json"))),
        }
    }
}

pub fn format_proportion(p: f64) -> String {
    format!("{p:.3}")
}

pub fn format_p_value(p: f64) -> String {
    format!("{p:.4}")
}

fn pretty(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json value serializes");
    s.push('\n');
    s
}

pub fn render_rejection(table: &RejectionTable, format: OutputFormat) -> String {
    let mut out = String::new();
    match format {
        OutputFormat::Plain => {
            let _ = write!(out, "{:>4}", "Row");
            for m in &table.methods {
                let _ = write!(out, " {:>12}", m.name());
            }
            out.push('\n');
            for (row, cells) in table.rows.iter().zip(&table.cells) {
                let _ = write!(out, "{row:>4}");
                for c in cells {
                    let _ = write!(out, " {:>12}", format_proportion(c.proportion()));
                }
                out.push('\n');
            }
            let failures: Vec<String> = table
                .rows
                .iter()
                .zip(&table.cells)
                .flat_map(|(row, cells)| {
                    table.methods.iter().zip(cells).filter(|(_, c)| c.failures > 0).map(move |(m, c)| {
                        format!("row {row} {m}: {} degenerate", c.failures)
                    })
                })
                .collect();
            let _ = writeln!(
                out,
                "replicates={} alpha={} seed={}",
                table.metadata.replicates, table.metadata.alpha, table.metadata.seed
            );
            if !failures.is_empty() {
                let _ = writeln!(out, "failures: {}", failures.join("; "));
            }
        }
        OutputFormat::Csv => {
            out.push_str("row");
            for m in &table.methods {
                let _ = write!(out, ",{m}");
            }
            out.push('\n');
            for (row, cells) in table.rows.iter().zip(&table.cells) {
                let _ = write!(out, "{row}");
                for c in cells {
                    let _ = write!(out, ",{}", c.proportion());
                }
                out.push('\n');
            }
        }
        OutputFormat::Json => {
            let rows: Vec<_> = table
                .rows
                .iter()
                .zip(&table.cells)
                .map(|(row, cells)| {
                    let cells: serde_json::Map<_, _> = table
                        .methods
                        .iter()
                        .zip(cells)
                        .map(|(m, c)| {
                            (
                                m.name().to_string(),
                                json!({
                                    "proportion": c.proportion(),
                                    "clusterable": c.clusterable,
                                    "failures": c.failures,
                                    "replicates": c.replicates,
                                }),
                            )
                        })
                        .collect();
                    json!({ "row": row, "cells": cells })
                })
                .collect();
            out = pretty(&json!({ "metadata": table.metadata, "methods": table.methods, "rows": rows }));
        }
    }
    out
}

pub fn render_runtime(table: &RuntimeTable, format: OutputFormat) -> String {
    let mut out = String::new();
    match format {
        OutputFormat::Plain => {
            let _ = write!(out, "{:>4}", "Row");
            for m in &table.methods {
                let _ = write!(out, " {:>12}", m.name());
            }
            out.push('\n');
            for (row, secs) in table.rows.iter().zip(&table.seconds) {
                let _ = write!(out, "{row:>4}");
                for s in secs {
                    let _ = write!(out, " {s:>12.6}");
                }
                out.push('\n');
            }
            let _ = writeln!(out, "mean seconds over {} runs; {}", table.repeats, table.hardware_note);
        }
        OutputFormat::Csv => {
            out.push_str("row");
            for m in &table.methods {
                let _ = write!(out, ",{m}");
            }
            out.push('\n');
            for (row, secs) in table.rows.iter().zip(&table.seconds) {
                let _ = write!(out, "{row}");
                for s in secs {
                    let _ = write!(out, ",{s}");
                }
                out.push('\n');
            }
        }
        OutputFormat::Json => out = pretty(&serde_json::to_value(table).expect("table serializes")),
    }
    out
}

/// Renders per-method results; failed methods appear as error records.
pub fn render_outcomes(outcomes: &[MethodOutcome], format: OutputFormat) -> String {
    let mut out = String::new();
    match format {
        OutputFormat::Plain => {
            let _ = writeln!(out, "{:<13} {:>12} {:>8} {:>11}", "method", "statistic", "p-value", "clusterable");
            for o in outcomes {
                match o {
                    MethodOutcome::Ok(v) => {
                        let _ = write!(
                            out,
                            "{:<13} {:>12.6} {:>8} {:>11}",
                            v.method.name(),
                            v.statistic,
                            format_p_value(v.p_value),
                            if v.clusterable { "yes" } else { "no" }
                        );
                        if let Some(f) = v.clusterable_fraction {
                            let _ = write!(out, "  (clusterable in {} of runs)", format_proportion(f));
                        }
                        out.push('\n');
                    }
                    MethodOutcome::Failed { method, error } => {
                        let _ = writeln!(out, "{:<13} error: {}", method.name(), error.root());
                    }
                }
            }
        }
        OutputFormat::Csv => {
            out.push_str("method,statistic,p_value,alpha,clusterable,n,d,seed,runtime_seconds,clusterable_fraction\n");
            for o in outcomes {
                if let MethodOutcome::Ok(v) = o {
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{},{},{},{},{},{}",
                        v.method,
                        v.statistic,
                        v.p_value,
                        v.alpha,
                        v.clusterable,
                        v.n,
                        v.d,
                        v.seed,
                        v.runtime_seconds,
                        v.clusterable_fraction.map(|f| f.to_string()).unwrap_or_default()
                    );
                }
            }
        }
        OutputFormat::Json => {
            let records: Vec<_> = outcomes
                .iter()
                .map(|o| match o {
                    MethodOutcome::Ok(v) => serde_json::to_value(v).expect("verdict serializes"),
                    MethodOutcome::Failed { method, error } => json!({
                        "method": method,
                        "error": error.root().to_string(),
                    }),
                })
                .collect();
            out = pretty(&serde_json::Value::Array(records));
        }
    }
    out
}

pub fn render_verdicts(verdicts: &[Verdict], format: OutputFormat) -> String {
    let outcomes: Vec<MethodOutcome> = verdicts.iter().cloned().map(MethodOutcome::Ok).collect();
    render_outcomes(&outcomes, format)
}
