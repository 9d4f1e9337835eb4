//! Experiment runner: configuration, suites of acceptance checks, and CSV/JSON
//! reporting.

pub mod config;
pub mod report;
pub mod suites;

pub use config::{ConfigInvalid, ExperimentConfig};
pub use report::{CheckRow, Report};
pub use suites::{run_experiment, Suite, SuiteOutput};

use std::path::Path;

/// Process exit status: all checks passed.
pub const EXIT_PASS: i32 = 0;
/// At least one check failed.
pub const EXIT_CHECK_FAILED: i32 = 1;
/// Bad configuration, arguments or output location.
pub const EXIT_CONFIG: i32 = 2;

/// Write the data CSVs, `summary.csv` and `summary.json` into `dir`.
pub fn write_outputs(out: &SuiteOutput, dir: &Path) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    for (name, body) in &out.files {
        std::fs::write(dir.join(name), body)?;
    }
    std::fs::write(dir.join("summary.csv"), out.report.to_csv())?;
    std::fs::write(dir.join("summary.json"), out.report.to_json())
}

/// Exit status for a finished run.
pub fn exit_code(report: &Report) -> i32 {
    if report.all_pass() {
        EXIT_PASS
    } else {
        EXIT_CHECK_FAILED
    }
}
