use alloc::format;
use alloc::vec::Vec;

use super::init::{initialize_order, InitMode};
use crate::ci::CiTester;
use crate::discovery::{NeighborSearch, SkeletonResult};
use crate::orders::Order;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HcConfig {
    pub max_iter: usize,
    /// Largest position distance `b - a` of a swap; clamped to `n - 1`.
    pub max_swap: usize,
    pub init: InitMode,
    pub seed: u64,
}

impl Default for HcConfig {
    fn default() -> Self {
        HcConfig {
            max_iter: 20,
            max_swap: 10,
            init: InitMode::MbRecursive,
            seed: 0,
        }
    }
}

/// One scan over swap candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HcStep {
    pub iteration: usize,
    /// Total cost after the scan.
    pub cost: usize,
    /// Accepted swap `(a, b)`, 0-based positions.
    pub swap: Option<(usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct HcOutcome {
    pub initial: Order,
    pub initial_cost: usize,
    pub order: Order,
    pub result: SkeletonResult,
    pub trace: Vec<HcStep>,
}

impl HcOutcome {
    pub fn cost(&self) -> usize {
        self.result.cost()
    }
}

/// Hill climbing over transpositions.
///
/// Each iteration scans `(a, b)` with `1 <= b - a <= max_swap`, `a` then `b`
/// ascending, and accepts the first swap that lowers the cost of positions
/// `a..=b`. Positions outside that range keep their cost under the swap, so
/// the comparison is exact. Stops after `max_iter` iterations or a scan
/// without improvement.
pub fn rol_hc<T: CiTester>(search: &mut NeighborSearch<T>, cfg: &HcConfig) -> Result<HcOutcome> {
    check_config(cfg)?;
    let initial = initialize_order(search, cfg.init, cfg.seed)?;
    rol_hc_from(search, initial, cfg)
}

fn check_config(cfg: &HcConfig) -> Result<()> {
    if cfg.max_iter == 0 || cfg.max_swap == 0 {
        return Err(Error::invalid(format!(
            "max_iter and max_swap must be positive, got {} and {}",
            cfg.max_iter, cfg.max_swap
        )));
    }
    Ok(())
}

/// [`rol_hc`] from an explicit starting order; `cfg.init` is ignored.
pub fn rol_hc_from<T: CiTester>(
    search: &mut NeighborSearch<T>,
    initial: Order,
    cfg: &HcConfig,
) -> Result<HcOutcome> {
    check_config(cfg)?;
    let n = search.num_vars();
    if initial.len() != n {
        return Err(Error::invalid(format!(
            "starting order has {} vertices, tester has {n}",
            initial.len()
        )));
    }
    let max_swap = cfg.max_swap.min(n.saturating_sub(1));
    let mut pi = initial.clone();
    let mut costs: Vec<usize> = match n {
        0 => Vec::new(),
        _ => search.cost_range(&pi, 0, n - 1)?.as_slice().to_vec(),
    };
    let initial_cost = costs.iter().sum();
    let mut trace = Vec::new();

    for iteration in 0..cfg.max_iter {
        let mut accepted = None;
        'scan: for a in 0..n {
            for b in a + 1..=(a + max_swap).min(n - 1) {
                let cand = pi.swapped(a, b);
                let c = search.cost_range(&cand, a, b)?;
                let old: usize = costs[a..=b].iter().sum();
                if c.range_sum(a, b) < old {
                    costs[a..=b].copy_from_slice(&c.as_slice()[a..=b]);
                    pi = cand;
                    accepted = Some((a, b));
                    break 'scan;
                }
            }
        }
        trace.push(HcStep {
            iteration,
            cost: costs.iter().sum(),
            swap: accepted,
        });
        if accepted.is_none() {
            break;
        }
    }

    let result = search.learn_g_pi(&pi)?;
    debug_assert_eq!(result.cost(), costs.iter().sum::<usize>());
    Ok(HcOutcome {
        initial,
        initial_cost,
        order: pi,
        result,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ci::OracleTester;
    use crate::graph::fixtures::*;

    #[test]
    fn chain_from_bad_start() {
        // (X2, X1, X3) costs 3; swapping positions 0 and 1 gives cost 2
        let t = OracleTester::new(chain3()).unwrap();
        let mut s = NeighborSearch::new(&t);
        let start = Order::new(alloc::vec![1, 0, 2]).unwrap();
        assert_eq!(s.cost(&start).unwrap(), 3);
        let cfg = HcConfig {
            max_swap: 2,
            ..HcConfig::default()
        };
        let out = rol_hc_from(&mut s, start, &cfg).unwrap();
        assert_eq!(out.initial_cost, 3);
        assert_eq!(out.trace[0].swap, Some((0, 1)));
        assert_eq!(out.trace[0].cost, 2);
        assert_eq!(out.order.as_slice(), [0, 1, 2]);
        assert_eq!(out.cost(), 2);

        // every init mode reaches the optimum on the chain
        for init in [
            InitMode::Random,
            InitMode::MbSizeSort,
            InitMode::MbRecursive,
        ] {
            for seed in 0..6 {
                let cfg = HcConfig {
                    max_swap: 2,
                    init,
                    seed,
                    ..HcConfig::default()
                };
                let out = rol_hc(&mut s, &cfg).unwrap();
                assert_eq!(out.cost(), 2);
                assert!(out.trace.len() <= 2);
            }
        }
    }

    #[test]
    fn g1_random_starts_are_optimal() {
        let t = OracleTester::new(g1()).unwrap();
        let mut s = NeighborSearch::new(&t);
        for seed in 0..10 {
            let cfg = HcConfig {
                init: InitMode::Random,
                seed,
                ..HcConfig::default()
            };
            let out = rol_hc(&mut s, &cfg).unwrap();
            assert_eq!(out.cost(), 5);
            assert_eq!(out.trace.len(), 1);
            assert_eq!(out.trace[0].swap, None);
            assert_eq!(out.order, out.initial);
        }
    }

    #[test]
    fn rejects_zero_limits() {
        let t = OracleTester::new(g1()).unwrap();
        let mut s = NeighborSearch::new(&t);
        for cfg in [
            HcConfig {
                max_iter: 0,
                ..HcConfig::default()
            },
            HcConfig {
                max_swap: 0,
                ..HcConfig::default()
            },
        ] {
            assert!(rol_hc(&mut s, &cfg).is_err());
        }
    }
}
