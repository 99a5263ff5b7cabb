//! Benchmark campaigns for the `ccmsp` solvers: grids of generated instances,
//! repeated seeded runs, CSV results and aggregate tables.

mod campaign;
mod config;
mod error;
mod summary;
mod table;

pub use campaign::{resolve_stop, run_campaign, write_campaign, CampaignOutput, TrajectoryRow};
pub use config::{CampaignConfig, DEFAULT_CAP, DEFAULT_REPETITIONS};
pub use error::{BenchError, Result};
pub use summary::{summarize, CompanionRow, PlotPoint, Summary, SummaryRow};
pub use table::{read_results, read_results_from, write_csv, CsvTable, ResultRow, CSV_DIGITS};
