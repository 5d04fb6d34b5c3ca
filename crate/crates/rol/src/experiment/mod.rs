//! Replicated experiments: configuration, execution and reports.

mod config;
mod report;
mod runner;

pub use config::{
    ExperimentConfig, GraphSource, InitChoice, Latents, SearcherConfig, TesterConfig,
};
pub use report::{
    Aggregate, HcStepRow, Metadata, MetricsRow, Outcome, ReplicationRow, RowResult, RunReport,
    Trace, SCHEMA_VERSION,
};
pub use runner::{generate, run, Generated};
