//! Suite runner, CSV report and SVG plots behind the command-line front end.

mod compute;
mod config;
mod plot;
mod suites;
mod table;

use std::fs;
use std::path::{Path, PathBuf};

pub use compute::{compute, ComputeOutput, Quantity};
pub use config::{GridSpec, MapKind, MapSpec, QSpec, Spacing, Suite, SuiteConfig, ToleranceOverrides};
pub use plot::emit_plots;
pub use suites::{
    run_one, CONSTRAINT_TOLERANCE, CRITERION_REL_TOLERANCE, DUALITY_REL_TOLERANCE, INFIMUM_REL_TOLERANCE,
    JENSEN_REL_TOLERANCE, MODULUS_ANNULI,
};
pub use table::{fmt_real, parse_params, read_csv, write_csv, CsvRow, CSV_HEADER};

use crate::error::Result;
use crate::verification::Status;

pub const REPORT_FILE: &str = "report.csv";

/// Rows of a finished run together with its exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOutcome {
    pub rows: Vec<CsvRow>,
    pub exit_code: i32,
    pub files: Vec<PathBuf>,
}

impl SuiteOutcome {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.status == Status::Fail).count()
    }
}

/// Evaluates the configured suites without touching the file system.
pub fn run_checks(config: &SuiteConfig) -> Result<Vec<CsvRow>> {
    config.validate()?;
    let mut rows = Vec::new();
    for suite in config.suite.expand() {
        if config.p_for(suite).is_empty() {
            continue;
        }
        rows.extend(run_one(suite, config)?);
    }
    Ok(rows)
}

/// `0` when no row failed, `1` otherwise.
pub fn exit_code_for(rows: &[CsvRow]) -> i32 {
    if rows.iter().any(|r| r.status == Status::Fail) {
        1
    } else {
        0
    }
}

/// Runs the suites, then writes `report.csv` and the plots into `config.output_dir`.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteOutcome> {
    let rows = run_checks(config)?;
    let files = write_outputs(&rows, &config.output_dir)?;
    let exit_code = exit_code_for(&rows);
    Ok(SuiteOutcome { rows, exit_code, files })
}

/// Writes `report.csv` and every applicable plot; returns the paths written.
pub fn write_outputs(rows: &[CsvRow], dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let path = dir.join(REPORT_FILE);
    write_csv(rows, fs::File::create(&path)?)?;
    let mut files = vec![path];
    files.extend(emit_plots(rows, dir)?);
    Ok(files)
}
