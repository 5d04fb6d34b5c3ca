use alloc::format;

use crate::graph::Skeleton;
use crate::{Error, Result};

/// Skeleton-level comparison of a learned graph against the truth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub shd: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Scores `learned` against `truth`. Ratios with a zero denominator are 0.
pub fn score(learned: &Skeleton, truth: &Skeleton) -> Result<Metrics> {
    if learned.num_vertices() != truth.num_vertices() {
        return Err(Error::invalid(format!(
            "vertex count mismatch: learned {} vs truth {}",
            learned.num_vertices(),
            truth.num_vertices()
        )));
    }
    let tp = learned
        .edges()
        .filter(|&(a, b)| truth.contains(a, b))
        .count();
    let fp = learned.num_edges() - tp;
    let fn_ = truth.num_edges() - tp;
    let precision = ratio(tp, tp + fp);
    let recall = ratio(tp, tp + fn_);
    let f1 = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };
    Ok(Metrics {
        tp,
        fp,
        fn_,
        shd: fp + fn_,
        precision,
        recall,
        f1,
    })
}
