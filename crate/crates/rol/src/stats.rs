use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

/// Two-sided confidence level of reported intervals.
pub const CONFIDENCE: f64 = 0.80;

/// Mean with a Student-t interval `mean ± t_{(1+level)/2, k-1} · s / √k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    /// Sample standard deviation (`k - 1` denominator); 0 for `k < 2`.
    pub std_dev: f64,
    pub half_width: f64,
    pub count: usize,
}

impl Summary {
    pub fn of(values: &[f64]) -> Option<Self> {
        let k = values.len();
        if k == 0 {
            return None;
        }
        let mean = values.iter().sum::<f64>() / k as f64;
        if k < 2 {
            return Some(Summary {
                mean,
                std_dev: 0.0,
                half_width: 0.0,
                count: k,
            });
        }
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (k - 1) as f64;
        let std_dev = var.sqrt();
        let t = StudentsT::new(0.0, 1.0, (k - 1) as f64)
            .expect("positive degrees of freedom")
            .inverse_cdf(0.5 + CONFIDENCE / 2.0);
        Some(Summary {
            mean,
            std_dev,
            half_width: t * std_dev / (k as f64).sqrt(),
            count: k,
        })
    }

    pub fn lower(&self) -> f64 {
        self.mean - self.half_width
    }

    pub fn upper(&self) -> f64 {
        self.mean + self.half_width
    }
}
