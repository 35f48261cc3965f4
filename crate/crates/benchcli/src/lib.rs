//! Benchmark harness for the planning crate: YAML-configured campaigns
//! of randomized problems, CSV result tables, and SVG summary figures.

pub mod config;
pub mod plots;
pub mod problem;
pub mod records;
pub mod runner;

pub use config::{parse_config, BenchmarkConfig, ConfigError, PlannerKind, SpaceSelection};
pub use plots::{box_stats, emit_plots, BoxStats, PlotError};
pub use problem::{generate_problem, BenchProblem, GenerateError, ScreenBudgets};
pub use records::{
    emit_csv, normalize_length, parse_csv, summarize, BenchRecord, PlannerSummary, RecordError,
};
pub use runner::{run_benchmark, run_campaign, BudgetMode, Campaign, CampaignError};
