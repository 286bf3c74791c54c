//! Named verification suites, configuration and JSON reports.
//!
//! Cases are computed concurrently but the report is sorted by case name, so a
//! fixed configuration always serializes to the same bytes. Wall time is only
//! recorded on request.

mod cases;
mod config;
mod report;
mod tools;

use std::time::Instant;

pub use config::{ConfigError, ConfigOverrides, ModelKind, SuiteConfig, SuiteKind, ValidatedConfig};
pub use report::{Case, Report, Status, Summary};
pub use tools::{act, factor_report, parse_matrix, parse_word, ActResult};

/// Sample budget for batteries whose per-sample cost is high.
pub const HEAVY_SAMPLE_CAP: usize = 100;

/// Exit code for configuration errors.
pub const CONFIG_ERROR_EXIT: i32 = 2;

pub fn run_suite(config: &ValidatedConfig, timing: bool) -> Report {
    let start = Instant::now();
    let members = config.suite.members();
    let cases = crate::par::map_slice(&members, |kind| cases::run(*kind, config))
        .into_iter()
        .flatten()
        .collect();
    let mut report = Report::new(config.suite.name(), config.raw.clone(), cases);
    if timing {
        report.wall_time_ms = Some(start.elapsed().as_millis() as u64);
    }
    report
}
