use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use crate::stats::{Summary, CONFIDENCE};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub shd: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl From<rol_core::data::Metrics> for MetricsRow {
    fn from(m: rol_core::data::Metrics) -> Self {
        MetricsRow {
            tp: m.tp,
            fp: m.fp,
            fn_: m.fn_,
            shd: m.shd,
            precision: m.precision,
            recall: m.recall,
            f1: m.f1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HcStepRow {
    pub iteration: usize,
    pub cost: usize,
    pub swap: Option<(usize, usize)>,
}

/// What the searcher did, in its own terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Trace {
    Hc {
        initial_cost: usize,
        steps: Vec<HcStepRow>,
    },
    Vi {
        total_cost: usize,
    },
    Pg {
        best_cost: usize,
        /// Total reward of every episode.
        rewards: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub metrics: MetricsRow,
    pub cost: usize,
    pub true_edges: usize,
    /// Learned order, by vertex name.
    pub order: Vec<String>,
    pub trace: Trace,
    /// Oriented edges, e.g. `a o-> b`. `None` when orientation failed.
    pub pag: Option<Vec<String>>,
    /// Orientation failure, if any; the skeleton metrics stand regardless.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation_error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicationRow {
    pub index: usize,
    pub observed: usize,
    pub latent: Vec<String>,
    pub ci_tests: u64,
    pub wall_clock_ms: f64,
    #[serde(flatten)]
    pub result: RowResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RowResult {
    Ok(Box<Outcome>),
    Error { error: String },
}

impl ReplicationRow {
    pub fn outcome(&self) -> Option<&Outcome> {
        match &self.result {
            RowResult::Ok(o) => Some(o),
            RowResult::Error { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub completed: usize,
    pub failed: usize,
    pub f1: Option<Summary>,
    pub shd: Option<Summary>,
    pub precision: Option<Summary>,
    pub recall: Option<Summary>,
    pub cost: Option<Summary>,
    pub ci_tests: Option<Summary>,
    pub wall_clock_ms: Option<Summary>,
}

impl Aggregate {
    /// Summaries over completed replications.
    pub fn of(rows: &[ReplicationRow]) -> Self {
        let done: Vec<(&ReplicationRow, &Outcome)> = rows
            .iter()
            .filter_map(|r| r.outcome().map(|o| (r, o)))
            .collect();
        let col = |f: &dyn Fn(&ReplicationRow, &Outcome) -> f64| {
            Summary::of(&done.iter().map(|(r, o)| f(r, o)).collect::<Vec<_>>())
        };
        Aggregate {
            completed: done.len(),
            failed: rows.len() - done.len(),
            f1: col(&|_, o| o.metrics.f1),
            shd: col(&|_, o| o.metrics.shd as f64),
            precision: col(&|_, o| o.metrics.precision),
            recall: col(&|_, o| o.metrics.recall),
            cost: col(&|_, o| o.cost as f64),
            ci_tests: col(&|r, _| r.ci_tests as f64),
            wall_clock_ms: col(&|r, _| r.wall_clock_ms),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub tool: String,
    pub confidence: f64,
    pub interval: String,
}

impl Default for Metadata {
    fn default() -> Self {
        Metadata {
            tool: format!("rol {}", env!("CARGO_PKG_VERSION")),
            confidence: CONFIDENCE,
            interval: "mean ± t_{0.90, k-1} · s / sqrt(k) over completed replications".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub metadata: Metadata,
    pub config: ExperimentConfig,
    pub replications: Vec<ReplicationRow>,
    pub aggregate: Aggregate,
}

impl RunReport {
    pub fn new(config: ExperimentConfig, replications: Vec<ReplicationRow>) -> Self {
        RunReport {
            schema_version: SCHEMA_VERSION,
            metadata: Metadata::default(),
            aggregate: Aggregate::of(&replications),
            config,
            replications,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The report with timing fields zeroed, for reproducibility checks.
    pub fn without_timing(&self) -> RunReport {
        let mut r = self.clone();
        for row in &mut r.replications {
            row.wall_clock_ms = 0.0;
        }
        r.aggregate.wall_clock_ms = None;
        r
    }

    pub fn summary_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:>4}  {:>6}  {:>6}  {:>6}  {:>6}  {:>6}  {:>9}  {:>10}  status",
            "rep", "f1", "shd", "prec", "recall", "cost", "ci_tests", "ms"
        );
        for row in &self.replications {
            match &row.result {
                RowResult::Ok(o) => {
                    let _ = writeln!(
                        out,
                        "{:>4}  {:>6.3}  {:>6}  {:>6.3}  {:>6.3}  {:>6}  {:>9}  {:>10.1}  ok{}",
                        row.index,
                        o.metrics.f1,
                        o.metrics.shd,
                        o.metrics.precision,
                        o.metrics.recall,
                        o.cost,
                        row.ci_tests,
                        row.wall_clock_ms,
                        if o.orientation_error.is_some() {
                            " (orientation failed)"
                        } else {
                            ""
                        }
                    );
                }
                RowResult::Error { error } => {
                    let _ = writeln!(out, "{:>4}  error: {error}", row.index);
                }
            }
        }
        let a = &self.aggregate;
        let _ = writeln!(
            out,
            "completed {} of {}",
            a.completed,
            a.completed + a.failed
        );
        for (name, s) in [
            ("f1", a.f1),
            ("shd", a.shd),
            ("precision", a.precision),
            ("recall", a.recall),
            ("ci_tests", a.ci_tests),
        ] {
            if let Some(s) = s {
                let _ = writeln!(
                    out,
                    "{name:>9}: {:.4} ± {:.4} ({:.0}% CI)",
                    s.mean,
                    s.half_width,
                    CONFIDENCE * 100.0
                );
            }
        }
        out
    }
}
