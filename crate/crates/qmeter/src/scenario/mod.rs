//! Config-driven batch execution: scenario files in, reports out.

pub mod config;
pub mod report;
pub mod run;

pub use config::{parse_config, ScenarioConfig, ScenarioKind};
pub use report::{emit_report, Report, ReportFormat, TableRow};
pub use run::run_scenario;
