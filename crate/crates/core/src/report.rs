//! JSON and CSV serialization of verification reports.
//!
//! Floats are written with 17 significant digits; non-finite values become
//! `null` in JSON and empty cells in CSV.

use std::collections::BTreeMap;
use std::io::Write;

use serde::ser::Error as _;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::error::{Error, Result};
use crate::verifier::{GridSpec, ReportItem, Summary, VerificationReport};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// `v` with 17 significant digits, in exponent form.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// `v` rounded to 12 significant digits, printed in shortest form.
pub fn format_text(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    let rounded: f64 = format!("{v:.11e}").parse().unwrap_or(v);
    rounded.to_string()
}

#[derive(Clone, Copy)]
struct F17(f64);

impl Serialize for F17 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        RawValue::from_string(format_f64(self.0))
            .map_err(S::Error::custom)?
            .serialize(s)
    }
}

#[derive(Serialize)]
struct ParamsOut {
    k: u32,
    alpha: F17,
    beta: F17,
}

#[derive(Serialize)]
struct ItemOut<'a> {
    params: ParamsOut,
    check: &'a str,
    lhs: F17,
    rhs: F17,
    margin: F17,
    pass: bool,
    skipped: bool,
    witness_x: Option<F17>,
    note: Option<&'a str>,
    extras: BTreeMap<&'a str, F17>,
}

#[derive(Serialize)]
struct SummaryOut {
    total: usize,
    passed: usize,
    failed: usize,
    skipped: usize,
    filtered: usize,
    min_margin: Option<F17>,
    empty: bool,
}

#[derive(Serialize)]
struct GridOut<'a> {
    k_values: &'a [u32],
    alpha_values: Vec<F17>,
    beta_values: Vec<F17>,
    checks: Vec<&'static str>,
    samples: usize,
    seed: u64,
}

#[derive(Serialize)]
struct ReportOut<'a> {
    tool_version: &'static str,
    seed: u64,
    grid: GridOut<'a>,
    items: Vec<ItemOut<'a>>,
    summary: SummaryOut,
}

fn item_out(i: &ReportItem) -> ItemOut<'_> {
    ItemOut {
        params: ParamsOut {
            k: i.params.k,
            alpha: F17(i.params.alpha),
            beta: F17(i.params.beta),
        },
        check: &i.check,
        lhs: F17(i.lhs),
        rhs: F17(i.rhs),
        margin: F17(i.margin),
        pass: i.pass,
        skipped: i.skipped,
        witness_x: i.witness_x.map(F17),
        note: i.note.as_deref(),
        extras: i.extras.iter().map(|(k, v)| (k.as_str(), F17(*v))).collect(),
    }
}

fn summary_out(s: &Summary) -> SummaryOut {
    SummaryOut {
        total: s.total,
        passed: s.passed,
        failed: s.failed,
        skipped: s.skipped,
        filtered: s.filtered,
        min_margin: s.min_margin.map(F17),
        empty: s.empty,
    }
}

pub fn to_json(grid: &GridSpec, report: &VerificationReport) -> Result<String> {
    let out = ReportOut {
        tool_version: TOOL_VERSION,
        seed: grid.seed,
        grid: GridOut {
            k_values: &grid.k_values,
            alpha_values: grid.alpha_values.iter().copied().map(F17).collect(),
            beta_values: grid.beta_values.iter().copied().map(F17).collect(),
            checks: grid.checks.iter().map(|c| c.name()).collect(),
            samples: grid.samples,
            seed: grid.seed,
        },
        items: report.items.iter().map(item_out).collect(),
        summary: summary_out(&report.summary),
    };
    let mut s = serde_json::to_string_pretty(&out).map_err(|e| Error::Invalid(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub const CSV_HEADER: [&str; 11] = [
    "k", "alpha", "beta", "check", "lhs", "rhs", "margin", "pass", "skipped", "witness_x", "note",
];

fn cell(v: f64) -> String {
    if v.is_finite() {
        format_f64(v)
    } else {
        String::new()
    }
}

pub fn write_csv<W: Write>(w: W, report: &VerificationReport) -> Result<()> {
    let io = |e: csv::Error| Error::Invalid(format!("csv: {e}"));
    let mut out = csv::Writer::from_writer(w);
    out.write_record(CSV_HEADER).map_err(io)?;
    for i in &report.items {
        out.write_record([
            i.params.k.to_string(),
            cell(i.params.alpha),
            cell(i.params.beta),
            i.check.clone(),
            cell(i.lhs),
            cell(i.rhs),
            cell(i.margin),
            i.pass.to_string(),
            i.skipped.to_string(),
            i.witness_x.map(cell).unwrap_or_default(),
            i.note.clone().unwrap_or_default(),
        ])
        .map_err(io)?;
    }
    out.flush().map_err(|e| Error::Invalid(format!("csv: {e}")))?;
    Ok(())
}
