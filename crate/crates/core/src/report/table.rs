use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::verification::{Check, Status};

pub const CSV_HEADER: [&str; 7] = ["suite", "check", "params", "lhs", "rhs", "margin", "status"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub suite: String,
    pub check: String,
    pub params: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub status: Status,
}

impl CsvRow {
    pub fn from_check(suite: &str, check: Check) -> Self {
        Self {
            suite: suite.to_string(),
            check: check.name,
            params: check.params,
            lhs: check.lhs,
            rhs: check.rhs,
            margin: check.margin,
            status: check.status,
        }
    }

    /// Value of `key` in the `k=v;k=v` parameter list.
    pub fn param(&self, key: &str) -> Option<&str> {
        parse_params(&self.params).into_iter().find(|(k, _)| *k == key).map(|(_, v)| v)
    }
}

/// Splits `k=v;k=v` at the first `=` of each pair, so values may contain `=`.
pub fn parse_params(s: &str) -> Vec<(&str, &str)> {
    s.split(';').filter(|kv| !kv.is_empty()).filter_map(|kv| kv.split_once('=')).collect()
}

/// Writes the header and rows with LF terminators and minimal RFC-4180 quoting.
pub fn write_csv<W: Write>(rows: &[CsvRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .quote_style(csv::QuoteStyle::Necessary)
        .has_headers(false)
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.write_record([
            row.suite.as_str(),
            row.check.as_str(),
            row.params.as_str(),
            &fmt_real(row.lhs),
            &fmt_real(row.rhs),
            &fmt_real(row.margin),
            row.status.as_str(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<CsvRow>> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let header = r.headers()?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::Validation(format!("unexpected report header {:?}", header.iter().collect::<Vec<_>>())));
    }
    let mut rows = Vec::new();
    for record in r.records() {
        let record = record?;
        let real = |i: usize| -> Result<f64> {
            record[i].parse().map_err(|_| Error::Validation(format!("bad number {:?} in column {}", &record[i], CSV_HEADER[i])))
        };
        rows.push(CsvRow {
            suite: record[0].to_string(),
            check: record[1].to_string(),
            params: record[2].to_string(),
            lhs: real(3)?,
            rhs: real(4)?,
            margin: real(5)?,
            status: Status::parse(&record[6]).ok_or_else(|| Error::Validation(format!("bad status {:?}", &record[6])))?,
        });
    }
    Ok(rows)
}

/// Shortest round-trip text; `inf`, `-inf` and `NaN` for non-finite values.
pub fn fmt_real(x: f64) -> String {
    if x.is_finite() && x != 0.0 && (x.abs() < 1e-5 || x.abs() >= 1e16) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}
